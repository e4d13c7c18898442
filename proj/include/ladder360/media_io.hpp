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

#ifndef LADDER360_MEDIA_IO_HPP
#define LADDER360_MEDIA_IO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ladder360 {

// Cubemap faces in their stable order. The order fixes face indices in plans,
// file names and the 3x2 packing grid.
enum class FaceId { kFront = 0, kBack, kLeft, kRight, kTop, kBottom };

inline constexpr int kNumFaces = 6;
inline constexpr FaceId kAllFaces[kNumFaces] = {
    FaceId::kFront, FaceId::kBack, FaceId::kLeft,
    FaceId::kRight, FaceId::kTop,  FaceId::kBottom};

const char* face_name(FaceId face);  // "front", "back", ...
FaceId face_from_name(const std::string& name);

enum class Projection { kErp, kCmpFace };

const char* projection_name(Projection p);  // "erp" / "cmp"

enum class Plane { kY = 0, kCb = 1, kCr = 2 };

struct Rational {
  int64_t num = 30;
  int64_t den = 1;

  double value() const { return static_cast<double>(num) / den; }
  bool operator==(const Rational&) const = default;
};

Rational parse_rational(const std::string& text);  // "30", "30000:1001", "30/1"

// One planar 8-bit 4:2:0 picture. Immutable after construction.
class FrameBuffer {
 public:
  static constexpr int kBitDepth = 8;

  // Samples are Y (w*h), then Cb and Cr (w/2*h/2 each), contiguous.
  FrameBuffer(int width, int height, std::vector<uint8_t> samples);

  // Frame with every plane set to a constant.
  static FrameBuffer filled(int width, int height, uint8_t y, uint8_t cb = 128,
                            uint8_t cr = 128);

  int width() const { return width_; }
  int height() const { return height_; }
  int plane_width(Plane p) const { return p == Plane::kY ? width_ : width_ / 2; }
  int plane_height(Plane p) const {
    return p == Plane::kY ? height_ : height_ / 2;
  }

  std::span<const uint8_t> plane(Plane p) const;
  std::span<const uint8_t> samples() const { return samples_; }

  uint8_t at(Plane p, int x, int y) const {
    return plane(p)[static_cast<size_t>(y) * plane_width(p) + x];
  }

  static size_t frame_bytes(int width, int height) {
    return static_cast<size_t>(width) * height * 3 / 2;
  }

  bool operator==(const FrameBuffer& o) const {
    return width_ == o.width_ && height_ == o.height_ && samples_ == o.samples_;
  }

 private:
  int width_;
  int height_;
  std::vector<uint8_t> samples_;
};

// Ordered frames sharing one geometry, plus timing and projection metadata.
class VideoSequence {
 public:
  VideoSequence(int width, int height, Rational fps, Projection projection,
                std::vector<FrameBuffer> frames,
                std::optional<FaceId> face = std::nullopt);

  int width() const { return width_; }
  int height() const { return height_; }
  Rational fps() const { return fps_; }
  Projection projection() const { return projection_; }
  std::optional<FaceId> face() const { return face_; }
  const std::vector<FrameBuffer>& frames() const { return frames_; }
  size_t frame_count() const { return frames_.size(); }
  bool empty() const { return frames_.empty(); }

  // Same frames, different projection tag.
  VideoSequence retagged(Projection projection,
                         std::optional<FaceId> face) const;

  bool operator==(const VideoSequence& o) const = default;

 private:
  int width_;
  int height_;
  Rational fps_;
  Projection projection_;
  std::optional<FaceId> face_;
  std::vector<FrameBuffer> frames_;
};

struct Y4mHeader {
  int width = 0;
  int height = 0;
  Rational fps;
};

// Streaming Y4M reader; keeps at most one frame in memory.
class Y4mReader {
 public:
  explicit Y4mReader(const std::filesystem::path& path);

  const Y4mHeader& header() const { return header_; }

  // nullopt at clean end of file.
  std::optional<FrameBuffer> next_frame();

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  Y4mHeader header_;
};

VideoSequence read_y4m(const std::filesystem::path& path,
                       Projection projection = Projection::kErp,
                       std::optional<FaceId> face = std::nullopt);

VideoSequence read_raw_yuv(const std::filesystem::path& path, int width,
                           int height, Rational fps,
                           Projection projection = Projection::kErp,
                           std::optional<FaceId> face = std::nullopt);

// Returns bytes written.
size_t write_y4m(const VideoSequence& seq, const std::filesystem::path& path);
size_t write_raw_yuv(const VideoSequence& seq,
                     const std::filesystem::path& path);

// Picks the reader from the extension: .y4m, otherwise raw I420 (geometry
// required).
VideoSequence read_video(const std::filesystem::path& path,
                         std::optional<int> width, std::optional<int> height,
                         Rational fps);

}  // namespace ladder360

#endif  // LADDER360_MEDIA_IO_HPP
