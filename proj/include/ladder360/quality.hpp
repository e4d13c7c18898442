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

#ifndef LADDER360_QUALITY_HPP
#define LADDER360_QUALITY_HPP

#include <span>
#include <vector>

#include "ladder360/media_io.hpp"

namespace ladder360 {

// Score reported for identical frames so CSV output stays numeric.
inline constexpr double kPsnrCap = 999.99;

struct FrameScore {
  double psnr = 0.0;
  double wspsnr = 0.0;
};

struct QualityScore {
  double psnr_y = 0.0;    // or the chosen plane, see ScoreOptions
  double wspsnr_y = 0.0;
  std::vector<FrameScore> per_frame;
};

// Sequence pooling: mean of per-frame dB values (default) or one PSNR from
// the MSE pooled over all frames.
enum class Pooling { kPerFrameDb, kPooledMse };

struct ScoreOptions {
  Plane plane = Plane::kY;
  Pooling pooling = Pooling::kPerFrameDb;
};

// Per-pixel spherical area weights for one plane geometry.
class WeightMap {
 public:
  WeightMap(int width, int height, std::vector<double> weights);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const double> weights() const { return weights_; }
  double at(int x, int y) const {
    return weights_[static_cast<size_t>(y) * width_ + x];
  }

  WeightMap scaled(double factor) const;

 private:
  int width_;
  int height_;
  std::vector<double> weights_;
};

// w(i, j) = cos((j + 0.5 - H/2) * pi / H).
WeightMap erp_weight_map(int width, int height);

// w = (1 + u^2 + v^2)^(-3/2) at pixel-center face coordinates.
WeightMap cmp_weight_map(int n);

// Weight map for a sequence's projection at the geometry of `plane`.
WeightMap weight_map_for(const VideoSequence& seq, Plane plane = Plane::kY);

// Sets only psnr fields.
QualityScore psnr(const VideoSequence& ref, const VideoSequence& dist,
                  const ScoreOptions& opts = {});

// Sets only wspsnr fields.
QualityScore wspsnr(const VideoSequence& ref, const VideoSequence& dist,
                    const WeightMap& weights, const ScoreOptions& opts = {});

// PSNR and WS-PSNR with the projection-appropriate weights.
QualityScore evaluate(const VideoSequence& ref, const VideoSequence& dist,
                      const ScoreOptions& opts = {});

// Six-face cubemap score: squared errors (plain and weighted) are aggregated
// over all faces of a frame before taking the log.
QualityScore evaluate_cubemap(std::span<const VideoSequence> ref,
                              std::span<const VideoSequence> dist,
                              const ScoreOptions& opts = {});

// 10*log10(255^2 / mse), capped for mse == 0.
double mse_to_db(double mse);

}  // namespace ladder360

#endif  // LADDER360_QUALITY_HPP
