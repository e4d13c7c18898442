// Copyright 2026 The ladder360 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LADDER360_FIXTURES_CARDS_HPP
#define LADDER360_FIXTURES_CARDS_HPP

#include <optional>
#include <string>

#include "ladder360/media_io.hpp"

namespace ladder360::fixtures {

enum class CardKind { kConstant, kHGradient, kSinusoid, kZonePlate };

// Synthetic test card. Chroma is always 128.
//   Constant   Y = value
//   HGradient  Y = floor(i * 256 / W)
//   Sinusoid   Y = round(127.5 + 127.5 sin(2 pi (fx (i + t + 0.5) / W + fy (j + 0.5) / H)))
//   ZonePlate  Y = round(127.5 + 127.5 cos(pi (dx^2 + dy^2) / max(W, H))),
//              dx = i + t + 0.5 - W/2, dy = j + 0.5 - H/2
// t is the frame index: sinusoids and zone plates drift one pixel per frame.
struct CardSpec {
  CardKind kind = CardKind::kConstant;
  int value = 128;
  double fx = 4.0;  // cycles per frame width
  double fy = 0.0;  // cycles per frame height
};

const char* card_kind_name(CardKind kind);

// "constant[:v]", "hgradient", "sinusoid[:fx,fy]", "zoneplate".
CardSpec parse_card(const std::string& text);

VideoSequence generate_card(const CardSpec& spec, int width, int height,
                            int frames, Rational fps = {30, 1},
                            Projection projection = Projection::kErp,
                            std::optional<FaceId> face = std::nullopt);

}  // namespace ladder360::fixtures

#endif  // LADDER360_FIXTURES_CARDS_HPP
