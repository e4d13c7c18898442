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

#include "ladder360/quality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ladder360/error.hpp"

namespace ladder360 {

namespace {

constexpr double kPeak = 255.0;

// Accumulated squared error of one plane of one frame.
struct ErrorSums {
  double se = 0.0;        // sum e^2
  double count = 0.0;     // number of samples
  double wse = 0.0;       // sum w e^2
  double weight = 0.0;    // sum w
};

void check_pair(const VideoSequence& ref, const VideoSequence& dist) {
  if (ref.width() != dist.width() || ref.height() != dist.height()) {
    throw_validation("reference and distorted geometry differ");
  }
  if (ref.frame_count() != dist.frame_count()) {
    throw_validation("reference has " + std::to_string(ref.frame_count()) +
                     " frames, distorted has " +
                     std::to_string(dist.frame_count()));
  }
  if (ref.projection() != dist.projection()) {
    throw_validation("reference and distorted projection differ");
  }
}

ErrorSums frame_errors(const FrameBuffer& a, const FrameBuffer& b, Plane p,
                       const WeightMap* weights) {
  const auto pa = a.plane(p);
  const auto pb = b.plane(p);
  ErrorSums s;
  s.count = static_cast<double>(pa.size());
  if (weights) {
    const auto w = weights->weights();
    for (size_t i = 0; i < pa.size(); ++i) {
      const double e = static_cast<double>(pa[i]) - pb[i];
      s.se += e * e;
      s.wse += w[i] * e * e;
      s.weight += w[i];
    }
  } else {
    for (size_t i = 0; i < pa.size(); ++i) {
      const double e = static_cast<double>(pa[i]) - pb[i];
      s.se += e * e;
    }
  }
  return s;
}

void pool(QualityScore& score, const std::vector<ErrorSums>& frames,
          Pooling pooling, bool weighted) {
  score.per_frame.resize(frames.size());
  double db_psnr = 0.0, db_ws = 0.0;
  ErrorSums total;
  for (size_t t = 0; t < frames.size(); ++t) {
    const ErrorSums& s = frames[t];
    score.per_frame[t].psnr = mse_to_db(s.se / s.count);
    if (weighted) score.per_frame[t].wspsnr = mse_to_db(s.wse / s.weight);
    db_psnr += score.per_frame[t].psnr;
    db_ws += score.per_frame[t].wspsnr;
    total.se += s.se;
    total.count += s.count;
    total.wse += s.wse;
    total.weight += s.weight;
  }
  if (frames.empty()) return;
  if (pooling == Pooling::kPerFrameDb) {
    // Clamped to the per-frame range so equal frames average exactly.
    auto mean = [&](double sum, double FrameScore::*field) {
      const auto [lo, hi] = std::minmax_element(
          score.per_frame.begin(), score.per_frame.end(),
          [&](const FrameScore& a, const FrameScore& b) { return a.*field < b.*field; });
      return std::clamp(sum / frames.size(), (*lo).*field, (*hi).*field);
    };
    score.psnr_y = mean(db_psnr, &FrameScore::psnr);
    if (weighted) score.wspsnr_y = mean(db_ws, &FrameScore::wspsnr);
  } else {
    score.psnr_y = mse_to_db(total.se / total.count);
    if (weighted) score.wspsnr_y = mse_to_db(total.wse / total.weight);
  }
}

}  // namespace

double mse_to_db(double mse) {
  if (mse <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(kPeak * kPeak / mse));
}

WeightMap::WeightMap(int width, int height, std::vector<double> weights)
    : width_(width), height_(height), weights_(std::move(weights)) {
  if (width <= 0 || height <= 0) throw_validation("weight map geometry must be positive");
  if (weights_.size() != static_cast<size_t>(width) * height) {
    throw_validation("weight map size does not match its geometry");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw_validation("weights must be positive and finite");
    }
  }
}

WeightMap WeightMap::scaled(double factor) const {
  std::vector<double> w(weights_);
  for (double& x : w) x *= factor;
  return WeightMap(width_, height_, std::move(w));
}

WeightMap erp_weight_map(int width, int height) {
  if (width <= 0 || height <= 0) throw_validation("weight map geometry must be positive");
  std::vector<double> w(static_cast<size_t>(width) * height);
  for (int j = 0; j < height; ++j) {
    const double row =
        std::cos((j + 0.5 - height / 2.0) * std::numbers::pi / height);
    std::fill_n(w.begin() + static_cast<size_t>(j) * width, width, row);
  }
  return WeightMap(width, height, std::move(w));
}

WeightMap cmp_weight_map(int n) {
  if (n <= 0) throw_validation("face size must be positive");
  std::vector<double> w(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    // Integer numerators keep the map exactly mirror-symmetric.
    const double v = static_cast<double>(2 * j + 1 - n) / n;
    for (int i = 0; i < n; ++i) {
      const double u = static_cast<double>(2 * i + 1 - n) / n;
      w[static_cast<size_t>(j) * n + i] = std::pow(1.0 + (u * u + v * v), -1.5);
    }
  }
  return WeightMap(n, n, std::move(w));
}

WeightMap weight_map_for(const VideoSequence& seq, Plane plane) {
  const int w = plane == Plane::kY ? seq.width() : seq.width() / 2;
  const int h = plane == Plane::kY ? seq.height() : seq.height() / 2;
  if (seq.projection() == Projection::kErp) return erp_weight_map(w, h);
  if (w != h) throw_validation("cubemap faces must be square");
  return cmp_weight_map(w);
}

QualityScore psnr(const VideoSequence& ref, const VideoSequence& dist,
                  const ScoreOptions& opts) {
  check_pair(ref, dist);
  std::vector<ErrorSums> sums;
  sums.reserve(ref.frame_count());
  for (size_t t = 0; t < ref.frame_count(); ++t) {
    sums.push_back(
        frame_errors(ref.frames()[t], dist.frames()[t], opts.plane, nullptr));
  }
  QualityScore s;
  pool(s, sums, opts.pooling, false);
  return s;
}

QualityScore wspsnr(const VideoSequence& ref, const VideoSequence& dist,
                    const WeightMap& weights, const ScoreOptions& opts) {
  check_pair(ref, dist);
  const int pw = opts.plane == Plane::kY ? ref.width() : ref.width() / 2;
  const int ph = opts.plane == Plane::kY ? ref.height() : ref.height() / 2;
  if (weights.width() != pw || weights.height() != ph) {
    throw_validation("weight map geometry does not match the scored plane");
  }
  std::vector<ErrorSums> sums;
  sums.reserve(ref.frame_count());
  for (size_t t = 0; t < ref.frame_count(); ++t) {
    sums.push_back(
        frame_errors(ref.frames()[t], dist.frames()[t], opts.plane, &weights));
  }
  QualityScore s;
  pool(s, sums, opts.pooling, true);
  for (FrameScore& f : s.per_frame) f.psnr = 0.0;
  s.psnr_y = 0.0;
  return s;
}

QualityScore evaluate(const VideoSequence& ref, const VideoSequence& dist,
                      const ScoreOptions& opts) {
  check_pair(ref, dist);
  const WeightMap weights = weight_map_for(ref, opts.plane);
  std::vector<ErrorSums> sums;
  sums.reserve(ref.frame_count());
  for (size_t t = 0; t < ref.frame_count(); ++t) {
    sums.push_back(
        frame_errors(ref.frames()[t], dist.frames()[t], opts.plane, &weights));
  }
  QualityScore s;
  pool(s, sums, opts.pooling, true);
  return s;
}

QualityScore evaluate_cubemap(std::span<const VideoSequence> ref,
                              std::span<const VideoSequence> dist,
                              const ScoreOptions& opts) {
  if (ref.size() != kNumFaces || dist.size() != kNumFaces) {
    throw_validation("cubemap scoring needs six reference and six distorted faces");
  }
  for (int k = 0; k < kNumFaces; ++k) {
    check_pair(ref[k], dist[k]);
    if (ref[k].face() != dist[k].face()) {
      throw_validation("cubemap faces are not paired by label");
    }
    if (ref[k].width() != ref[0].width() ||
        ref[k].frame_count() != ref[0].frame_count()) {
      throw_validation("cubemap faces must share geometry and frame count");
    }
  }
  const WeightMap weights = weight_map_for(ref[0], opts.plane);
  std::vector<ErrorSums> sums(ref[0].frame_count());
  for (int k = 0; k < kNumFaces; ++k) {
    for (size_t t = 0; t < sums.size(); ++t) {
      const ErrorSums f = frame_errors(ref[k].frames()[t], dist[k].frames()[t],
                                       opts.plane, &weights);
      sums[t].se += f.se;
      sums[t].count += f.count;
      sums[t].wse += f.wse;
      sums[t].weight += f.weight;
    }
  }
  QualityScore s;
  pool(s, sums, opts.pooling, true);
  return s;
}

}  // namespace ladder360
