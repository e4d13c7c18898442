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

#include "ladder360/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "internal/parallel.hpp"
#include "ladder360/error.hpp"

namespace ladder360 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kLanczosRadius = 3;

struct PlaneView {
  std::span<const uint8_t> data;
  int width;
  int height;
  bool wrap_x;  // ERP longitude wraps; faces clamp.

  uint8_t at(int x, int y) const {
    if (wrap_x) {
      x %= width;
      if (x < 0) x += width;
    } else {
      x = std::clamp(x, 0, width - 1);
    }
    y = std::clamp(y, 0, height - 1);
    return data[static_cast<size_t>(y) * width + x];
  }
};

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

double lanczos3(double d) {
  if (std::abs(d) >= kLanczosRadius) return 0.0;
  return sinc(d) * sinc(d / kLanczosRadius);
}

uint8_t to_sample(double v) {
  return static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

// Interpolates at continuous pixel position (x, y), pixel centers on integers.
double sample(const PlaneView& p, double x, double y, ResampleFilter filter) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double ax = x - fx;
  const double ay = y - fy;
  if (filter == ResampleFilter::kBilinear) {
    const double top = (1.0 - ax) * p.at(x0, y0) + ax * p.at(x0 + 1, y0);
    const double bot =
        (1.0 - ax) * p.at(x0, y0 + 1) + ax * p.at(x0 + 1, y0 + 1);
    return (1.0 - ay) * top + ay * bot;
  }
  double wx[2 * kLanczosRadius];
  double wy[2 * kLanczosRadius];
  double sx = 0.0, sy = 0.0;
  for (int k = 0; k < 2 * kLanczosRadius; ++k) {
    const int off = k - kLanczosRadius + 1;
    wx[k] = lanczos3(ax - off);
    wy[k] = lanczos3(ay - off);
    sx += wx[k];
    sy += wy[k];
  }
  double acc = 0.0;
  for (int j = 0; j < 2 * kLanczosRadius; ++j) {
    double row = 0.0;
    for (int i = 0; i < 2 * kLanczosRadius; ++i) {
      row += wx[i] * p.at(x0 + i - kLanczosRadius + 1, y0 + j - kLanczosRadius + 1);
    }
    acc += wy[j] * row;
  }
  return acc / (sx * sy);
}

void check_unit_input(const Direction& d) {
  if (!(d.norm() > 0.0)) throw_validation("zero direction vector");
}

}  // namespace

double Direction::norm() const { return std::sqrt(x * x + y * y + z * z); }

Direction Direction::normalized(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw_validation("cannot normalize a zero or non-finite vector");
  }
  return {x / n, y / n, z / n};
}

double angle_between(const Direction& a, const Direction& b) {
  const double cx = a.y * b.z - a.z * b.y;
  const double cy = a.z * b.x - a.x * b.z;
  const double cz = a.x * b.y - a.y * b.x;
  const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
  const double dot = a.x * b.x + a.y * b.y + a.z * b.z;
  return std::atan2(cross, dot);
}

const char* filter_name(ResampleFilter f) {
  return f == ResampleFilter::kBilinear ? "bilinear" : "lanczos3";
}

ResampleFilter filter_from_name(const std::string& name) {
  if (name == "bilinear") return ResampleFilter::kBilinear;
  if (name == "lanczos3") return ResampleFilter::kLanczos3;
  throw_validation("unknown filter '" + name + "' (bilinear|lanczos3)");
}

// -----------------------------------------------------------------------------

Direction erp_to_direction(double u, double v, int width, int height) {
  if (width <= 0 || height <= 0) throw_validation("ERP geometry must be positive");
  const double lon = (u + 0.5) / width * 2.0 * kPi - kPi;
  double lat = kPi / 2.0 - (v + 0.5) / height * kPi;
  lat = std::clamp(lat, -kPi / 2.0, kPi / 2.0);
  const double c = std::cos(lat);
  return {c * std::sin(lon), std::sin(lat), c * std::cos(lon)};
}

ErpPoint direction_to_erp(const Direction& d, int width, int height) {
  if (width <= 0 || height <= 0) throw_validation("ERP geometry must be positive");
  check_unit_input(d);
  const double horiz = std::hypot(d.x, d.z);
  const double lat = std::atan2(d.y, horiz);
  double lon = horiz == 0.0 ? 0.0 : std::atan2(d.x, d.z);
  if (lon >= kPi) lon -= 2.0 * kPi;
  ErpPoint p;
  p.u = (lon + kPi) / (2.0 * kPi) * width - 0.5;
  p.v = (kPi / 2.0 - lat) / kPi * height - 0.5;
  return p;
}

FaceCoord direction_to_face(const Direction& d) {
  check_unit_input(d);
  const double ax = std::abs(d.x);
  const double ay = std::abs(d.y);
  const double az = std::abs(d.z);
  const double m = std::max({ax, ay, az});
  if (az == m) {
    if (d.z > 0) return {FaceId::kFront, d.x / az, -d.y / az};
    return {FaceId::kBack, -d.x / az, -d.y / az};
  }
  if (ax == m) {
    if (d.x < 0) return {FaceId::kLeft, d.z / ax, -d.y / ax};
    return {FaceId::kRight, -d.z / ax, -d.y / ax};
  }
  if (d.y > 0) return {FaceId::kTop, d.x / ay, d.z / ay};
  return {FaceId::kBottom, d.x / ay, -d.z / ay};
}

Direction face_to_direction(const FaceCoord& fc) {
  if (!(std::abs(fc.u) <= 1.0) || !(std::abs(fc.v) <= 1.0)) {
    throw_validation("face coordinates must lie in [-1, 1]");
  }
  const double u = fc.u;
  const double v = fc.v;
  switch (fc.face) {
    case FaceId::kFront: return Direction::normalized(u, -v, 1.0);
    case FaceId::kBack: return Direction::normalized(-u, -v, -1.0);
    case FaceId::kLeft: return Direction::normalized(-1.0, -v, u);
    case FaceId::kRight: return Direction::normalized(1.0, -v, -u);
    case FaceId::kTop: return Direction::normalized(u, 1.0, v);
    case FaceId::kBottom: return Direction::normalized(u, -1.0, -v);
  }
  return {};
}

// -----------------------------------------------------------------------------

std::vector<VideoSequence> erp_to_cmp(const VideoSequence& erp, int face_size,
                                      ResampleFilter filter) {
  if (erp.projection() != Projection::kErp) {
    throw_validation("erp_to_cmp needs an ERP input sequence");
  }
  if (face_size <= 0 || face_size % 2 != 0) {
    throw_validation("face size must be positive and even");
  }
  std::vector<VideoSequence> faces;
  faces.reserve(kNumFaces);
  const size_t face_bytes = FrameBuffer::frame_bytes(face_size, face_size);
  for (FaceId face : kAllFaces) {
    std::vector<FrameBuffer> frames;
    frames.reserve(erp.frame_count());
    for (const FrameBuffer& src : erp.frames()) {
      std::vector<uint8_t> out(face_bytes);
      size_t plane_offset = 0;
      for (Plane p : {Plane::kY, Plane::kCb, Plane::kCr}) {
        const PlaneView view{src.plane(p), src.plane_width(p),
                             src.plane_height(p), true};
        const int n = p == Plane::kY ? face_size : face_size / 2;
        uint8_t* dst = out.data() + plane_offset;
        internal::parallel_for(n, [&](int begin, int end) {
          for (int j = begin; j < end; ++j) {
            const double fv = face_pixel_to_coord(j, n);
            for (int i = 0; i < n; ++i) {
              const Direction d =
                  face_to_direction({face, face_pixel_to_coord(i, n), fv});
              const ErpPoint e = direction_to_erp(d, view.width, view.height);
              dst[static_cast<size_t>(j) * n + i] =
                  to_sample(sample(view, e.u, e.v, filter));
            }
          }
        });
        plane_offset += static_cast<size_t>(n) * n;
      }
      frames.emplace_back(face_size, face_size, std::move(out));
    }
    faces.emplace_back(face_size, face_size, erp.fps(), Projection::kCmpFace,
                       std::move(frames), face);
  }
  return faces;
}

VideoSequence cmp_to_erp(std::span<const VideoSequence> faces, int width,
                         int height, ResampleFilter filter) {
  if (faces.size() != kNumFaces) {
    throw_validation("cmp_to_erp needs exactly six faces, got " +
                     std::to_string(faces.size()));
  }
  const int n = faces[0].width();
  const size_t count = faces[0].frame_count();
  // Faces may arrive in any order; index them by their label.
  std::array<const VideoSequence*, kNumFaces> by_face{};
  for (const VideoSequence& f : faces) {
    if (f.projection() != Projection::kCmpFace || !f.face()) {
      throw_validation("cmp_to_erp input is not a cubemap face");
    }
    if (f.width() != n || f.height() != n || f.frame_count() != count) {
      throw_validation("cubemap faces must share geometry and frame count");
    }
    by_face[static_cast<int>(*f.face())] = &f;
  }
  for (const VideoSequence* f : by_face) {
    if (!f) throw_validation("cubemap face set has a duplicate face");
  }
  if (width <= 0 || height <= 0 || width % 2 || height % 2) {
    throw_validation("ERP geometry must be positive and even");
  }
  std::vector<FrameBuffer> frames;
  frames.reserve(count);
  for (size_t t = 0; t < count; ++t) {
    std::vector<uint8_t> out(FrameBuffer::frame_bytes(width, height));
    size_t plane_offset = 0;
    for (Plane p : {Plane::kY, Plane::kCb, Plane::kCr}) {
      std::array<PlaneView, kNumFaces> views;
      for (int k = 0; k < kNumFaces; ++k) {
        const FrameBuffer& fb = by_face[k]->frames()[t];
        views[k] = {fb.plane(p), fb.plane_width(p), fb.plane_height(p), false};
      }
      const int pw = p == Plane::kY ? width : width / 2;
      const int ph = p == Plane::kY ? height : height / 2;
      const int fn = views[0].width;
      uint8_t* dst = out.data() + plane_offset;
      internal::parallel_for(ph, [&](int begin, int end) {
        for (int j = begin; j < end; ++j) {
          for (int i = 0; i < pw; ++i) {
            const FaceCoord fc =
                direction_to_face(erp_to_direction(i, j, pw, ph));
            const PlaneView& view = views[static_cast<int>(fc.face)];
            dst[static_cast<size_t>(j) * pw + i] = to_sample(
                sample(view, face_coord_to_pixel(fc.u, fn),
                       face_coord_to_pixel(fc.v, fn), filter));
          }
        }
      });
      plane_offset += static_cast<size_t>(pw) * ph;
    }
    frames.emplace_back(width, height, std::move(out));
  }
  return VideoSequence(width, height, faces[0].fps(), Projection::kErp,
                       std::move(frames));
}

// -----------------------------------------------------------------------------
// Pixel-space resize

namespace {

struct Taps {
  int first = 0;
  std::vector<double> weights;
};

// Per-output-sample normalized taps for a 1-D resampling from src to dst.
// Downscaling stretches the kernel by the scale factor.
std::vector<Taps> resize_taps(int src, int dst, ResampleFilter filter) {
  const double scale = static_cast<double>(src) / dst;
  const double stretch = std::max(scale, 1.0);
  const double radius =
      (filter == ResampleFilter::kBilinear ? 1.0 : kLanczosRadius) * stretch;
  std::vector<Taps> taps(dst);
  for (int i = 0; i < dst; ++i) {
    const double center = (i + 0.5) * scale - 0.5;
    const int lo = static_cast<int>(std::floor(center - radius)) + 1;
    const int hi = static_cast<int>(std::floor(center + radius));
    Taps& t = taps[i];
    t.first = lo;
    double sum = 0.0;
    for (int k = lo; k <= hi; ++k) {
      const double d = (k - center) / stretch;
      const double w = filter == ResampleFilter::kBilinear
                           ? std::max(0.0, 1.0 - std::abs(d))
                           : lanczos3(d);
      t.weights.push_back(w);
      sum += w;
    }
    for (double& w : t.weights) w /= sum;
  }
  return taps;
}

void resize_plane(std::span<const uint8_t> src, int sw, int sh, uint8_t* dst,
                  int dw, int dh, ResampleFilter filter) {
  const std::vector<Taps> hx = resize_taps(sw, dw, filter);
  const std::vector<Taps> vy = resize_taps(sh, dh, filter);
  std::vector<double> tmp(static_cast<size_t>(sh) * dw);
  internal::parallel_for(sh, [&](int begin, int end) {
    for (int y = begin; y < end; ++y) {
      const uint8_t* row = src.data() + static_cast<size_t>(y) * sw;
      for (int x = 0; x < dw; ++x) {
        const Taps& t = hx[x];
        double acc = 0.0;
        for (size_t k = 0; k < t.weights.size(); ++k) {
          const int sx = std::clamp(t.first + static_cast<int>(k), 0, sw - 1);
          acc += t.weights[k] * row[sx];
        }
        tmp[static_cast<size_t>(y) * dw + x] = acc;
      }
    }
  });
  internal::parallel_for(dh, [&](int begin, int end) {
    for (int y = begin; y < end; ++y) {
      const Taps& t = vy[y];
      for (int x = 0; x < dw; ++x) {
        double acc = 0.0;
        for (size_t k = 0; k < t.weights.size(); ++k) {
          const int sy = std::clamp(t.first + static_cast<int>(k), 0, sh - 1);
          acc += t.weights[k] * tmp[static_cast<size_t>(sy) * dw + x];
        }
        dst[static_cast<size_t>(y) * dw + x] = to_sample(acc);
      }
    }
  });
}

}  // namespace

VideoSequence resize(const VideoSequence& seq, int target_width,
                     int target_height, ResampleFilter filter) {
  if (target_width <= 0 || target_height <= 0 || target_width % 2 ||
      target_height % 2) {
    throw_validation("resize target must be positive and even, got " +
                     std::to_string(target_width) + "x" +
                     std::to_string(target_height));
  }
  if (target_width == seq.width() && target_height == seq.height()) {
    return seq;
  }
  std::vector<FrameBuffer> frames;
  frames.reserve(seq.frame_count());
  for (const FrameBuffer& src : seq.frames()) {
    std::vector<uint8_t> out(
        FrameBuffer::frame_bytes(target_width, target_height));
    size_t offset = 0;
    for (Plane p : {Plane::kY, Plane::kCb, Plane::kCr}) {
      const int dw = p == Plane::kY ? target_width : target_width / 2;
      const int dh = p == Plane::kY ? target_height : target_height / 2;
      resize_plane(src.plane(p), src.plane_width(p), src.plane_height(p),
                   out.data() + offset, dw, dh, filter);
      offset += static_cast<size_t>(dw) * dh;
    }
    frames.emplace_back(target_width, target_height, std::move(out));
  }
  return VideoSequence(target_width, target_height, seq.fps(),
                       seq.projection(), std::move(frames), seq.face());
}

}  // namespace ladder360
