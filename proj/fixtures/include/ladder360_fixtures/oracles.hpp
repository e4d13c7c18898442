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

#ifndef LADDER360_FIXTURES_ORACLES_HPP
#define LADDER360_FIXTURES_ORACLES_HPP

#include <array>
#include <vector>

#include "ladder360/bd.hpp"
#include "ladder360/media_io.hpp"

// Brute-force reference implementations for tests. Only domain types are
// shared with the library; every computation is written out again.
namespace ladder360::fixtures {

// ---- BD metrics: same interpolant, dense trapezoidal integration ----------

// Value of the monotone cubic through (x, y) at t, x[0] <= t <= x.back().
double oracle_pchip(const std::vector<double>& x, const std::vector<double>& y,
                    double t);

// Mean of test(t) - ref(t) over the shared x interval, `samples` intervals.
double oracle_mean_gap(const std::vector<double>& xr, const std::vector<double>& yr,
                       const std::vector<double>& xt, const std::vector<double>& yt,
                       int samples);

enum class BdQuantity { kQuality, kRate, kTime };

// dB for kQuality, percent otherwise.
double numeric_bd_oracle(const RDCurve& ref, const RDCurve& test, BdQuantity what,
                         int samples = 100000);

// ---- Projection: per-pixel mapping from the face basis table --------------

using Vec3 = std::array<double, 3>;

// Unit direction through face coordinate (u, v): center + u*right + v*down.
Vec3 oracle_face_direction(FaceId face, double u, double v);

// Face, u, v of a direction, with Front/Back > Left/Right > Top/Bottom on ties.
struct OracleFacePoint {
  FaceId face;
  double u;
  double v;
};
OracleFacePoint oracle_face_point(const Vec3& d);

// Continuous ERP pixel position of a unit direction, via asin/atan2.
std::array<double, 2> oracle_erp_position(const Vec3& d, int width, int height);

// Unrounded bilinear luma of face pixel (i, j) sampled from an ERP frame.
double oracle_face_sample(const FrameBuffer& erp, FaceId face, int n, int i, int j);

// ---- Resize: direct 2-D weighted sum ---------------------------------------

// Unrounded resized luma at output pixel (x, y), bilinear or Lanczos3 with the
// kernel stretched by the downscale factor and edge samples repeated.
double oracle_resize_sample(const FrameBuffer& src, int dst_width, int dst_height,
                            int x, int y, bool lanczos);

// ---- Simulated cost model closed forms -------------------------------------

struct CostParams {
  double kappa = 1.0;
  double rho = 0.5;
  double r0 = 40000.0;
  double a = 50.0;
  double b = 0.5;
  double epsilon = 0.1;
};

double oracle_time(const CostParams& p, int width, int height, int frames, int q,
                   bool load);
double oracle_rate(const CostParams& p, int width, int height, int q);
double oracle_quality(const CostParams& p, int q, int depth);

}  // namespace ladder360::fixtures

#endif  // LADDER360_FIXTURES_ORACLES_HPP
