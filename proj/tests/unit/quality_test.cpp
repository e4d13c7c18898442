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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ladder360/error.hpp"
#include "ladder360/quality.hpp"
#include "ladder360/sphere.hpp"
#include "test_util.hpp"

using namespace ladder360;
using ladder360::testing::luma_sequence;
using ladder360::testing::random_sequence;

namespace {

// Frame with every luma sample offset by `delta` from `base`.
VideoSequence offset(const VideoSequence& base, int delta) {
  std::vector<FrameBuffer> frames;
  for (const FrameBuffer& f : base.frames()) {
    std::vector<uint8_t> s(f.samples().begin(), f.samples().end());
    const size_t luma = static_cast<size_t>(f.width()) * f.height();
    for (size_t i = 0; i < luma; ++i) s[i] = static_cast<uint8_t>(s[i] + delta);
    frames.emplace_back(f.width(), f.height(), std::move(s));
  }
  return VideoSequence(base.width(), base.height(), base.fps(), base.projection(),
                       std::move(frames), base.face());
}

}  // namespace

TEST_SUITE("quality") {

TEST_CASE("identical sequences hit the cap") {
  const VideoSequence a = random_sequence(64, 32, 3, 1);
  const QualityScore s = evaluate(a, a);
  CHECK(s.psnr_y == kPsnrCap);
  CHECK(s.wspsnr_y == kPsnrCap);
  CHECK(s.per_frame.size() == 3);
  CHECK(mse_to_db(0.0) == 999.99);
}

TEST_CASE("unit error everywhere") {
  const VideoSequence a = ladder360::testing::constant_sequence(64, 32, 2, 100);
  const VideoSequence b = offset(a, 1);
  const QualityScore s = evaluate(a, b);
  CHECK(std::abs(s.psnr_y - 48.1308036086791) < 1e-4);
  CHECK(std::abs(s.psnr_y - 20.0 * std::log10(255.0)) < 1e-12);
  CHECK(std::abs(s.wspsnr_y - s.psnr_y) < 1e-9);

  const VideoSequence fa =
      ladder360::testing::constant_sequence(32, 32, 2, 100, Projection::kCmpFace, FaceId::kLeft);
  const QualityScore f = evaluate(fa, offset(fa, -3));
  CHECK(std::abs(f.wspsnr_y - f.psnr_y) < 1e-9);
  CHECK(std::abs(f.psnr_y - 10.0 * std::log10(255.0 * 255.0 / 9.0)) < 1e-12);
}

TEST_CASE("checkerboard against its inverse is 0 dB") {
  auto board = [](bool inv) {
    return luma_sequence(16, 8, [inv](int i, int j) {
      return static_cast<uint8_t>(((i + j) % 2 == 0) != inv ? 255 : 0);
    });
  };
  CHECK(psnr(board(false), board(true)).psnr_y == doctest::Approx(0.0));
}

TEST_CASE("psnr and wspsnr fill only their own fields") {
  const VideoSequence a = random_sequence(32, 16, 1, 3);
  const VideoSequence b = random_sequence(32, 16, 1, 4);
  const QualityScore p = psnr(a, b);
  CHECK(p.wspsnr_y == 0.0);
  CHECK(p.psnr_y > 0.0);
  const QualityScore w = wspsnr(a, b, erp_weight_map(32, 16));
  CHECK(w.psnr_y == 0.0);
  CHECK(w.wspsnr_y > 0.0);
}

TEST_CASE("psnr is symmetric") {
  const VideoSequence a = random_sequence(32, 16, 2, 5);
  const VideoSequence b = random_sequence(32, 16, 2, 6);
  CHECK(evaluate(a, b).psnr_y == evaluate(b, a).psnr_y);
  CHECK(evaluate(a, b).wspsnr_y == evaluate(b, a).wspsnr_y);
}

TEST_CASE("erp weights") {
  const int w = 16, h = 64;
  const WeightMap m = erp_weight_map(w, h);
  const double pi = std::numbers::pi;
  CHECK(m.at(3, h / 2 - 1) == doctest::Approx(std::cos(pi / (2 * h))));
  CHECK(m.at(3, h / 2) == m.at(3, h / 2 - 1));
  CHECK(m.at(0, 0) == doctest::Approx(std::sin(pi / (2 * h))));
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      CHECK(m.at(i, j) == m.at(i, h - 1 - j));
      CHECK(m.at(i, j) == m.at(0, j));
    }
  }
  for (int j = 0; j + 1 < h / 2; ++j) CHECK(m.at(0, j) < m.at(0, j + 1));
}

TEST_CASE("cmp weights") {
  const int n = 32;
  const WeightMap m = cmp_weight_map(n);
  double max_w = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      CHECK(m.at(i, j) == m.at(n - 1 - i, j));
      CHECK(m.at(i, j) == m.at(i, n - 1 - j));
      CHECK(m.at(i, j) == m.at(j, i));
      max_w = std::max(max_w, m.at(i, j));
    }
  }
  CHECK(max_w == m.at(n / 2, n / 2));
  CHECK(cmp_weight_map(2).at(0, 0) == doctest::Approx(std::pow(1.5, -1.5)));
  // Face centre weight tends to 1 and the corner to 3^(-3/2).
  const WeightMap big = cmp_weight_map(4096);
  CHECK(big.at(2048, 2048) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(big.at(0, 0) == doctest::Approx(std::pow(3.0, -1.5)).epsilon(1e-3));
}

TEST_CASE("weight map scaling leaves wspsnr unchanged") {
  const VideoSequence a = random_sequence(32, 16, 2, 7);
  const VideoSequence b = random_sequence(32, 16, 2, 8);
  const WeightMap m = erp_weight_map(32, 16);
  const double base = wspsnr(a, b, m).wspsnr_y;
  for (double k : {0.001, 0.5, 3.0, 1e6}) {
    CHECK(wspsnr(a, b, m.scaled(k)).wspsnr_y == doctest::Approx(base).epsilon(1e-12));
  }
  CHECK_THROWS_AS(m.scaled(0.0), Error);
  CHECK_THROWS_AS(WeightMap(2, 2, {1, 1, 0, 1}), Error);
}

TEST_CASE("polar error weighs less than equatorial error") {
  const int w = 64, h = 32;
  const VideoSequence ref = ladder360::testing::constant_sequence(w, h, 1, 100);
  auto with_row_error = [&](int row) {
    return luma_sequence(w, h, [row](int, int j) { return static_cast<uint8_t>(j == row ? 110 : 100); });
  };
  const QualityScore top = evaluate(ref, with_row_error(0));
  const QualityScore eq = evaluate(ref, with_row_error(h / 2));
  CHECK(top.psnr_y == doctest::Approx(eq.psnr_y));
  CHECK(top.wspsnr_y > eq.wspsnr_y);
  // Direct weighted-sum evaluation.
  const double pi = std::numbers::pi;
  double wsum = 0.0;
  for (int j = 0; j < h; ++j) wsum += w * std::cos((j + 0.5 - h / 2.0) * pi / h);
  const double wmse = w * std::cos((0.5 - h / 2.0) * pi / h) * 100.0 / wsum;
  CHECK(top.wspsnr_y == doctest::Approx(10 * std::log10(255.0 * 255.0 / wmse)).epsilon(1e-12));
}

TEST_CASE("pooling modes") {
  const VideoSequence a = ladder360::testing::constant_sequence(16, 8, 2, 100);
  std::vector<FrameBuffer> frames{FrameBuffer::filled(16, 8, 101), FrameBuffer::filled(16, 8, 104)};
  const VideoSequence b(16, 8, {30, 1}, Projection::kErp, frames);
  const QualityScore mean = evaluate(a, b);
  const double db1 = 10 * std::log10(255.0 * 255.0 / 1.0);
  const double db16 = 10 * std::log10(255.0 * 255.0 / 16.0);
  CHECK(mean.psnr_y == doctest::Approx((db1 + db16) / 2));
  const QualityScore pooled = evaluate(a, b, {Plane::kY, Pooling::kPooledMse});
  CHECK(pooled.psnr_y == doctest::Approx(10 * std::log10(255.0 * 255.0 / 8.5)));
  CHECK(mean.per_frame[1].psnr == doctest::Approx(db16));
}

TEST_CASE("chroma plane scoring") {
  const VideoSequence a = ladder360::testing::constant_sequence(16, 8, 1, 100);
  std::vector<FrameBuffer> frames{FrameBuffer::filled(16, 8, 100, 130, 128)};
  const VideoSequence b(16, 8, {30, 1}, Projection::kErp, frames);
  CHECK(evaluate(a, b).psnr_y == kPsnrCap);
  CHECK(evaluate(a, b, {Plane::kCb, Pooling::kPerFrameDb}).psnr_y ==
        doctest::Approx(10 * std::log10(255.0 * 255.0 / 4.0)));
  CHECK(evaluate(a, b, {Plane::kCr, Pooling::kPerFrameDb}).psnr_y == kPsnrCap);
}

TEST_CASE("mismatches are rejected") {
  const VideoSequence a = random_sequence(32, 16, 2, 1);
  CHECK_THROWS_AS(evaluate(a, random_sequence(16, 8, 2, 1)), Error);
  CHECK_THROWS_AS(evaluate(a, random_sequence(32, 16, 1, 1)), Error);
  CHECK_THROWS_AS(wspsnr(a, a, erp_weight_map(16, 16)), Error);
  CHECK_THROWS_AS(evaluate(a, a.retagged(Projection::kCmpFace, FaceId::kFront)), Error);
}

TEST_CASE("cubemap aggregation pools errors over faces before the log") {
  const int n = 16;
  std::vector<VideoSequence> ref, dist;
  for (FaceId f : kAllFaces) {
    ref.push_back(ladder360::testing::constant_sequence(n, n, 1, 100, Projection::kCmpFace, f));
    const uint8_t v = f == FaceId::kFront ? 106 : 100;
    dist.push_back(ladder360::testing::constant_sequence(n, n, 1, v, Projection::kCmpFace, f));
  }
  const QualityScore s = evaluate_cubemap(ref, dist);
  CHECK(s.psnr_y == doctest::Approx(10 * std::log10(255.0 * 255.0 / 6.0)));
  CHECK(s.wspsnr_y == doctest::Approx(s.psnr_y));
  CHECK_THROWS_AS(evaluate_cubemap(std::span(ref).first(5), std::span(dist).first(5)), Error);
}

}  // TEST_SUITE
