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

#include "ladder360_fixtures/cards.hpp"

#include <cmath>
#include <numbers>

#include "ladder360/error.hpp"

namespace ladder360::fixtures {

namespace {

uint8_t clamp_round(double v) {
  const long r = std::lround(v);
  return static_cast<uint8_t>(r < 0 ? 0 : (r > 255 ? 255 : r));
}

uint8_t luma(const CardSpec& s, int i, int j, int t, int w, int h) {
  constexpr double kPi = std::numbers::pi;
  switch (s.kind) {
    case CardKind::kConstant:
      return static_cast<uint8_t>(s.value);
    case CardKind::kHGradient:
      return static_cast<uint8_t>(static_cast<long long>(i) * 256 / w);
    case CardKind::kSinusoid:
      return clamp_round(127.5 + 127.5 * std::sin(2.0 * kPi *
                                                   (s.fx * (i + t + 0.5) / w +
                                                    s.fy * (j + 0.5) / h)));
    case CardKind::kZonePlate: {
      const double dx = i + t + 0.5 - w / 2.0;
      const double dy = j + 0.5 - h / 2.0;
      return clamp_round(127.5 + 127.5 * std::cos(kPi * (dx * dx + dy * dy) /
                                                   std::max(w, h)));
    }
  }
  return 0;
}

}  // namespace

const char* card_kind_name(CardKind kind) {
  switch (kind) {
    case CardKind::kConstant: return "constant";
    case CardKind::kHGradient: return "hgradient";
    case CardKind::kSinusoid: return "sinusoid";
    case CardKind::kZonePlate: return "zoneplate";
  }
  return "?";
}

CardSpec parse_card(const std::string& text) {
  const size_t colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  CardSpec s;
  try {
    if (kind == "constant") {
      s.kind = CardKind::kConstant;
      if (!args.empty()) s.value = std::stoi(args);
      if (s.value < 0 || s.value > 255) throw_validation("constant value out of range");
    } else if (kind == "hgradient") {
      s.kind = CardKind::kHGradient;
    } else if (kind == "sinusoid") {
      s.kind = CardKind::kSinusoid;
      if (!args.empty()) {
        const size_t comma = args.find(',');
        s.fx = std::stod(args.substr(0, comma));
        s.fy = comma == std::string::npos ? 0.0 : std::stod(args.substr(comma + 1));
      }
    } else if (kind == "zoneplate") {
      s.kind = CardKind::kZonePlate;
    } else {
      throw_validation("unknown card kind '" + kind +
                       "' (constant|hgradient|sinusoid|zoneplate)");
    }
  } catch (const std::logic_error&) {
    throw_validation("bad card arguments '" + text + "'");
  }
  return s;
}

VideoSequence generate_card(const CardSpec& spec, int width, int height,
                            int frames, Rational fps, Projection projection,
                            std::optional<FaceId> face) {
  if (width <= 0 || height <= 0 || width % 2 || height % 2) {
    throw_validation("card geometry must be positive and even");
  }
  if (frames < 0) throw_validation("frame count must be non-negative");
  std::vector<FrameBuffer> out;
  out.reserve(frames);
  for (int t = 0; t < frames; ++t) {
    std::vector<uint8_t> samples(FrameBuffer::frame_bytes(width, height), 128);
    for (int j = 0; j < height; ++j) {
      for (int i = 0; i < width; ++i) {
        samples[static_cast<size_t>(j) * width + i] = luma(spec, i, j, t, width, height);
      }
    }
    out.emplace_back(width, height, std::move(samples));
  }
  return VideoSequence(width, height, fps, projection, std::move(out), face);
}

}  // namespace ladder360::fixtures
