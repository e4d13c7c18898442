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

#include "ladder360_fixtures/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ladder360::fixtures {

namespace {

constexpr double kPi = std::numbers::pi;

int sgn(double v) { return (v > 0) - (v < 0); }

// Slope at knot k, written from the Fritsch-Carlson recipe.
double knot_slope(const std::vector<double>& x, const std::vector<double>& y,
                  size_t k) {
  const size_t n = x.size();
  auto delta = [&](size_t i) { return (y[i + 1] - y[i]) / (x[i + 1] - x[i]); };
  auto h = [&](size_t i) { return x[i + 1] - x[i]; };
  if (n == 2) return delta(0);
  if (k == 0 || k == n - 1) {
    const size_t i0 = k == 0 ? 0 : n - 2;
    const size_t i1 = k == 0 ? 1 : n - 3;
    const double h0 = h(i0), h1 = h(i1);
    const double d0 = delta(i0), d1 = delta(i1);
    double m = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sgn(m) != sgn(d0)) {
      m = 0;
    } else if (sgn(d0) != sgn(d1) && std::abs(m) > 3 * std::abs(d0)) {
      m = 3 * d0;
    }
    return m;
  }
  const double dl = delta(k - 1), dr = delta(k);
  if (sgn(dl) * sgn(dr) <= 0) return 0.0;
  const double w1 = 2 * h(k) + h(k - 1);
  const double w2 = h(k) + 2 * h(k - 1);
  return (w1 + w2) / (w1 / dl + w2 / dr);
}

std::vector<double> log10_all(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v) out.push_back(std::log10(x));
  return out;
}

double kernel(double d, bool lanczos) {
  if (!lanczos) return std::max(0.0, 1.0 - std::fabs(d));
  if (std::fabs(d) >= 3.0) return 0.0;
  if (d == 0.0) return 1.0;
  return 3.0 * std::sin(kPi * d) * std::sin(kPi * d / 3.0) / (kPi * kPi * d * d);
}

}  // namespace

double oracle_pchip(const std::vector<double>& x, const std::vector<double>& y,
                    double t) {
  size_t k = 0;
  while (k + 2 < x.size() && t > x[k + 1]) ++k;
  const double h = x[k + 1] - x[k];
  const double s = (t - x[k]) / h;
  const double h00 = 2 * s * s * s - 3 * s * s + 1;
  const double h10 = s * s * s - 2 * s * s + s;
  const double h01 = -2 * s * s * s + 3 * s * s;
  const double h11 = s * s * s - s * s;
  return h00 * y[k] + h10 * h * knot_slope(x, y, k) + h01 * y[k + 1] +
         h11 * h * knot_slope(x, y, k + 1);
}

double oracle_mean_gap(const std::vector<double>& xr, const std::vector<double>& yr,
                       const std::vector<double>& xt, const std::vector<double>& yt,
                       int samples) {
  const double lo = std::max(xr.front(), xt.front());
  const double hi = std::min(xr.back(), xt.back());
  if (!(hi > lo)) throw std::invalid_argument("curves do not overlap");
  const double step = (hi - lo) / samples;
  double acc = 0.0;
  for (int s = 0; s <= samples; ++s) {
    const double t = s == samples ? hi : lo + s * step;
    const double g = oracle_pchip(xt, yt, t) - oracle_pchip(xr, yr, t);
    acc += (s == 0 || s == samples) ? 0.5 * g : g;
  }
  return acc * step / (hi - lo);
}

double numeric_bd_oracle(const RDCurve& ref, const RDCurve& test, BdQuantity what,
                         int samples) {
  auto column = [](const RDCurve& c, int which) {
    std::vector<double> v;
    for (const RDPoint& p : c.points()) {
      v.push_back(which == 0 ? p.rate : which == 1 ? p.quality : p.time.value());
    }
    return v;
  };
  if (what == BdQuantity::kQuality) {
    return oracle_mean_gap(log10_all(column(ref, 0)), column(ref, 1),
                           log10_all(column(test, 0)), column(test, 1), samples);
  }
  const int col = what == BdQuantity::kRate ? 0 : 2;
  const double m = oracle_mean_gap(column(ref, 1), log10_all(column(ref, col)),
                                   column(test, 1), log10_all(column(test, col)),
                                   samples);
  return (std::pow(10.0, m) - 1.0) * 100.0;
}

// -----------------------------------------------------------------------------

namespace {

struct Basis {
  Vec3 center, right, down;
};

constexpr Basis kBasis[kNumFaces] = {
    {{0, 0, 1}, {1, 0, 0}, {0, -1, 0}},    // front
    {{0, 0, -1}, {-1, 0, 0}, {0, -1, 0}},  // back
    {{-1, 0, 0}, {0, 0, 1}, {0, -1, 0}},   // left
    {{1, 0, 0}, {0, 0, -1}, {0, -1, 0}},   // right
    {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}},     // top
    {{0, -1, 0}, {1, 0, 0}, {0, 0, -1}},   // bottom
};

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

Vec3 oracle_face_direction(FaceId face, double u, double v) {
  const Basis& b = kBasis[static_cast<int>(face)];
  Vec3 d;
  for (int k = 0; k < 3; ++k) d[k] = b.center[k] + u * b.right[k] + v * b.down[k];
  const double n = std::sqrt(dot(d, d));
  for (double& c : d) c /= n;
  return d;
}

OracleFacePoint oracle_face_point(const Vec3& d) {
  // Candidates in priority order; the first with a maximal |component| wins.
  const double m = std::max({std::fabs(d[0]), std::fabs(d[1]), std::fabs(d[2])});
  FaceId face;
  if (std::fabs(d[2]) == m) {
    face = d[2] > 0 ? FaceId::kFront : FaceId::kBack;
  } else if (std::fabs(d[0]) == m) {
    face = d[0] < 0 ? FaceId::kLeft : FaceId::kRight;
  } else {
    face = d[1] > 0 ? FaceId::kTop : FaceId::kBottom;
  }
  const Basis& b = kBasis[static_cast<int>(face)];
  const double c = dot(d, b.center);
  return {face, dot(d, b.right) / c, dot(d, b.down) / c};
}

std::array<double, 2> oracle_erp_position(const Vec3& d, int width, int height) {
  const double lon = std::atan2(d[0], d[2]);
  const double lat = std::asin(std::clamp(d[1], -1.0, 1.0));
  return {(lon + kPi) / (2 * kPi) * width - 0.5, (kPi / 2 - lat) / kPi * height - 0.5};
}

double oracle_face_sample(const FrameBuffer& erp, FaceId face, int n, int i, int j) {
  const double u = 2.0 * (i + 0.5) / n - 1.0;
  const double v = 2.0 * (j + 0.5) / n - 1.0;
  const auto p = oracle_erp_position(oracle_face_direction(face, u, v), erp.width(),
                                     erp.height());
  const int w = erp.width(), h = erp.height();
  const int x0 = static_cast<int>(std::floor(p[0]));
  const int y0 = static_cast<int>(std::floor(p[1]));
  const double fx = p[0] - x0, fy = p[1] - y0;
  auto px = [&](int x, int y) -> double {
    x = ((x % w) + w) % w;
    y = std::clamp(y, 0, h - 1);
    return erp.at(Plane::kY, x, y);
  };
  return (1 - fx) * (1 - fy) * px(x0, y0) + fx * (1 - fy) * px(x0 + 1, y0) +
         (1 - fx) * fy * px(x0, y0 + 1) + fx * fy * px(x0 + 1, y0 + 1);
}

double oracle_resize_sample(const FrameBuffer& src, int dst_width, int dst_height,
                            int x, int y, bool lanczos) {
  const int sw = src.width(), sh = src.height();
  const double scale_x = static_cast<double>(sw) / dst_width;
  const double scale_y = static_cast<double>(sh) / dst_height;
  const double sx = std::max(1.0, scale_x), sy = std::max(1.0, scale_y);
  const double cx = (x + 0.5) * scale_x - 0.5;
  const double cy = (y + 0.5) * scale_y - 0.5;
  const double reach = lanczos ? 3.0 : 1.0;
  const int x_lo = static_cast<int>(std::floor(cx - reach * sx)) + 1;
  const int x_hi = static_cast<int>(std::floor(cx + reach * sx));
  const int y_lo = static_cast<int>(std::floor(cy - reach * sy)) + 1;
  const int y_hi = static_cast<int>(std::floor(cy + reach * sy));
  double acc = 0.0, norm = 0.0;
  for (int j = y_lo; j <= y_hi; ++j) {
    for (int i = x_lo; i <= x_hi; ++i) {
      const double w = kernel((i - cx) / sx, lanczos) * kernel((j - cy) / sy, lanczos);
      acc += w * src.at(Plane::kY, std::clamp(i, 0, sw - 1), std::clamp(j, 0, sh - 1));
      norm += w;
    }
  }
  return acc / norm;
}

// -----------------------------------------------------------------------------

double oracle_time(const CostParams& p, int width, int height, int frames, int q,
                   bool load) {
  const double full = p.kappa * width * height / 1e6 * frames * (1.0 + (51.0 - q) / 51.0);
  return load ? p.rho * full : full;
}

double oracle_rate(const CostParams& p, int width, int height, int q) {
  return p.r0 * width * height / 1e6 * std::exp2(-q / 6.0);
}

double oracle_quality(const CostParams& p, int q, int depth) {
  return p.a - p.b * q - p.epsilon * depth;
}

}  // namespace ladder360::fixtures
