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

#ifndef LADDER360_BD_HPP
#define LADDER360_BD_HPP

#include <optional>
#include <span>
#include <vector>

namespace ladder360 {

struct RDPoint {
  double rate = 0.0;     // kbps
  double quality = 0.0;  // dB
  std::optional<double> time;  // seconds
};

// At least four points, strictly increasing rate, quality non-decreasing.
// Points are never reordered: non-monotone input is rejected.
class RDCurve {
 public:
  static constexpr size_t kMinPoints = 4;

  explicit RDCurve(std::vector<RDPoint> points);

  const std::vector<RDPoint>& points() const { return points_; }
  bool has_times() const;

 private:
  std::vector<RDPoint> points_;
};

enum class BdInterpolation {
  kPchip,            // monotone piecewise cubic (Fritsch-Carlson)
  kCubicPolynomial,  // classic least-squares cubic in log-rate
};

// Mean quality difference test - ref over the common log10(rate) interval.
double bd_quality(const RDCurve& ref, const RDCurve& test,
                  BdInterpolation mode = BdInterpolation::kPchip);

// Rate change at equal quality in percent: (10^mean(dlog10 rate) - 1) * 100.
double bd_rate(const RDCurve& ref, const RDCurve& test,
               BdInterpolation mode = BdInterpolation::kPchip);

// Encoding-time change at equal quality in percent; negative means faster.
double bdet(const RDCurve& ref, const RDCurve& test,
            BdInterpolation mode = BdInterpolation::kPchip);

// Width in dB of the quality interval shared by both curves (0 if disjoint).
double quality_overlap(const RDCurve& ref, const RDCurve& test);

// Reports flag comparisons whose common quality interval is narrower than this.
inline constexpr double kNarrowOverlapDb = 1.0;

// (sum(method) - sum(ref)) / sum(ref) in percent.
double delta_t_serial(std::span<const double> ref_times,
                      std::span<const double> method_times);

// (max(method) - max(ref)) / max(ref) in percent.
double delta_t_parallel(std::span<const double> ref_times,
                        std::span<const double> method_times);

namespace bd_detail {

// Hermite slopes of the monotone piecewise-cubic interpolant through (x, y).
std::vector<double> pchip_slopes(std::span<const double> x,
                                 std::span<const double> y);

// Exact integral of the interpolant through (x, y) over [a, b], with
// x[0] <= a <= b <= x.back().
double integrate(std::span<const double> x, std::span<const double> y,
                 double a, double b, BdInterpolation mode);

// Mean of (test - ref) over the intersection of both x ranges.
double mean_difference(std::span<const double> x_ref,
                       std::span<const double> y_ref,
                       std::span<const double> x_test,
                       std::span<const double> y_test, BdInterpolation mode);

}  // namespace bd_detail

}  // namespace ladder360

#endif  // LADDER360_BD_HPP
