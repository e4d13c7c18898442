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

#include "ladder360/bd.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "ladder360/error.hpp"

namespace ladder360 {

namespace {

std::vector<double> log_rates(const RDCurve& c) {
  std::vector<double> v;
  for (const RDPoint& p : c.points()) v.push_back(std::log10(p.rate));
  return v;
}

std::vector<double> log_times(const RDCurve& c) {
  std::vector<double> v;
  for (const RDPoint& p : c.points()) {
    if (!p.time) throw_validation("BDET needs an encoding time on every point");
    v.push_back(std::log10(*p.time));
  }
  return v;
}

// Quality is the abscissa for rate and time deltas, so it must be strictly
// increasing there.
std::vector<double> quality_axis(const RDCurve& c) {
  std::vector<double> v;
  for (const RDPoint& p : c.points()) {
    if (!v.empty() && p.quality <= v.back()) {
      throw_validation(
          "quality must strictly increase with rate for equal-quality deltas");
    }
    v.push_back(p.quality);
  }
  return v;
}

std::vector<double> qualities(const RDCurve& c) {
  std::vector<double> v;
  for (const RDPoint& p : c.points()) v.push_back(p.quality);
  return v;
}

// Least-squares cubic through (x, y), coefficients in powers of (x - shift).
std::array<double, 4> fit_cubic(std::span<const double> x,
                                std::span<const double> y, double shift) {
  double a[4][5] = {};
  for (size_t k = 0; k < x.size(); ++k) {
    double pw[7];
    pw[0] = 1.0;
    for (int i = 1; i < 7; ++i) pw[i] = pw[i - 1] * (x[k] - shift);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) a[r][c] += pw[r + c];
      a[r][4] += pw[r] * y[k];
    }
  }
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    if (a[col][col] == 0.0) throw_validation("degenerate curve for cubic fit");
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 5; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return {a[0][4] / a[0][0], a[1][4] / a[1][1], a[2][4] / a[2][2],
          a[3][4] / a[3][3]};
}

// Antiderivatives of the cubic Hermite basis on t in [0, 1].
double h00_int(double t) { return t * t * t * t / 2 - t * t * t + t; }
double h10_int(double t) { return t * t * t * t / 4 - 2 * t * t * t / 3 + t * t / 2; }
double h01_int(double t) { return -t * t * t * t / 2 + t * t * t; }
double h11_int(double t) { return t * t * t * t / 4 - t * t * t / 3; }

}  // namespace

RDCurve::RDCurve(std::vector<RDPoint> points) : points_(std::move(points)) {
  if (points_.size() < kMinPoints) {
    throw_validation("an RD curve needs at least 4 points, got " +
                     std::to_string(points_.size()));
  }
  for (size_t i = 0; i < points_.size(); ++i) {
    const RDPoint& p = points_[i];
    if (!(p.rate > 0.0) || !std::isfinite(p.rate)) {
      throw_validation("RD point rates must be positive and finite");
    }
    if (!std::isfinite(p.quality)) throw_validation("RD point quality must be finite");
    if (p.time && !(*p.time > 0.0)) throw_validation("encoding times must be positive");
    if (i > 0) {
      if (!(p.rate > points_[i - 1].rate)) {
        throw_validation("RD curve rates must be strictly increasing");
      }
      if (p.quality < points_[i - 1].quality) {
        throw_validation("RD curve is non-monotone: quality drops as rate grows");
      }
    }
  }
}

bool RDCurve::has_times() const {
  return std::all_of(points_.begin(), points_.end(),
                     [](const RDPoint& p) { return p.time.has_value(); });
}

namespace bd_detail {

std::vector<double> pchip_slopes(std::span<const double> x,
                                 std::span<const double> y) {
  const size_t n = x.size();
  std::vector<double> h(n - 1), delta(n - 1), m(n, 0.0);
  for (size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  if (n == 2) {
    m[0] = m[1] = delta[0];
    return m;
  }
  for (size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2 * h[k] + h[k - 1];
    const double w2 = h[k] + 2 * h[k - 1];
    m[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  // One-sided three-point end slopes, limited to keep shape.
  auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
  auto end_slope = [&](double h0, double h1, double d0, double d1) {
    double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sign(s) != sign(d0)) return 0.0;
    if (sign(d0) != sign(d1) && std::abs(s) > 3 * std::abs(d0)) s = 3 * d0;
    return s;
  };
  m[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  m[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return m;
}

double integrate(std::span<const double> x, std::span<const double> y,
                 double a, double b, BdInterpolation mode) {
  if (mode == BdInterpolation::kCubicPolynomial) {
    const double shift = x[0];
    const auto c = fit_cubic(x, y, shift);
    auto prim = [&](double t) {
      t -= shift;
      return c[0] * t + c[1] * t * t / 2 + c[2] * t * t * t / 3 +
             c[3] * t * t * t * t / 4;
    };
    return prim(b) - prim(a);
  }
  const std::vector<double> m = pchip_slopes(x, y);
  double total = 0.0;
  for (size_t k = 0; k + 1 < x.size(); ++k) {
    const double lo = std::max(a, x[k]);
    const double hi = std::min(b, x[k + 1]);
    if (!(hi > lo)) continue;
    const double h = x[k + 1] - x[k];
    const double t0 = (lo - x[k]) / h;
    const double t1 = (hi - x[k]) / h;
    total += h * (y[k] * (h00_int(t1) - h00_int(t0)) +
                  h * m[k] * (h10_int(t1) - h10_int(t0)) +
                  y[k + 1] * (h01_int(t1) - h01_int(t0)) +
                  h * m[k + 1] * (h11_int(t1) - h11_int(t0)));
  }
  return total;
}

double mean_difference(std::span<const double> x_ref,
                       std::span<const double> y_ref,
                       std::span<const double> x_test,
                       std::span<const double> y_test, BdInterpolation mode) {
  const double lo = std::max(x_ref.front(), x_test.front());
  const double hi = std::min(x_ref.back(), x_test.back());
  if (!(hi > lo)) {
    throw_validation("RD curves do not overlap on the integration axis");
  }
  const double area_ref = integrate(x_ref, y_ref, lo, hi, mode);
  const double area_test = integrate(x_test, y_test, lo, hi, mode);
  return (area_test - area_ref) / (hi - lo);
}

}  // namespace bd_detail

double bd_quality(const RDCurve& ref, const RDCurve& test,
                  BdInterpolation mode) {
  return bd_detail::mean_difference(log_rates(ref), qualities(ref),
                                    log_rates(test), qualities(test), mode);
}

double bd_rate(const RDCurve& ref, const RDCurve& test, BdInterpolation mode) {
  const double mean = bd_detail::mean_difference(
      quality_axis(ref), log_rates(ref), quality_axis(test), log_rates(test),
      mode);
  return (std::pow(10.0, mean) - 1.0) * 100.0;
}

double bdet(const RDCurve& ref, const RDCurve& test, BdInterpolation mode) {
  const std::vector<double> t_ref = log_times(ref);
  const std::vector<double> t_test = log_times(test);
  const double mean = bd_detail::mean_difference(
      quality_axis(ref), t_ref, quality_axis(test), t_test, mode);
  return (std::pow(10.0, mean) - 1.0) * 100.0;
}

double quality_overlap(const RDCurve& ref, const RDCurve& test) {
  const double lo =
      std::max(ref.points().front().quality, test.points().front().quality);
  const double hi =
      std::min(ref.points().back().quality, test.points().back().quality);
  return std::max(0.0, hi - lo);
}

namespace {

void check_times(std::span<const double> ref, std::span<const double> method) {
  if (ref.empty() || method.empty()) {
    throw_validation("encoding-time lists must not be empty");
  }
  auto positive = [](double t) { return t > 0.0 && std::isfinite(t); };
  if (!std::all_of(ref.begin(), ref.end(), positive) ||
      !std::all_of(method.begin(), method.end(), positive)) {
    throw_validation("encoding times must be positive");
  }
}

}  // namespace

double delta_t_serial(std::span<const double> ref_times,
                      std::span<const double> method_times) {
  check_times(ref_times, method_times);
  const double ref = std::accumulate(ref_times.begin(), ref_times.end(), 0.0);
  const double method =
      std::accumulate(method_times.begin(), method_times.end(), 0.0);
  return (method - ref) / ref * 100.0;
}

double delta_t_parallel(std::span<const double> ref_times,
                        std::span<const double> method_times) {
  check_times(ref_times, method_times);
  const double ref = *std::max_element(ref_times.begin(), ref_times.end());
  const double method =
      *std::max_element(method_times.begin(), method_times.end());
  return (method - ref) / ref * 100.0;
}

}  // namespace ladder360
