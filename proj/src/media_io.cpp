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

#include "ladder360/media_io.hpp"

#include <algorithm>
#include <sstream>

#include "ladder360/error.hpp"

namespace ladder360 {

namespace {

constexpr const char kY4mMagic[] = "YUV4MPEG2";
constexpr const char kFrameTag[] = "FRAME";

bool is_420_tag(const std::string& tag) {
  return tag == "420" || tag == "420jpeg" || tag == "420paldv" ||
         tag == "420mpeg2";
}

void check_geometry(int width, int height) {
  if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0) {
    throw_validation("frame geometry must be positive and even, got " +
                     std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

const char* face_name(FaceId face) {
  switch (face) {
    case FaceId::kFront: return "front";
    case FaceId::kBack: return "back";
    case FaceId::kLeft: return "left";
    case FaceId::kRight: return "right";
    case FaceId::kTop: return "top";
    case FaceId::kBottom: return "bottom";
  }
  return "?";
}

FaceId face_from_name(const std::string& name) {
  for (FaceId f : kAllFaces) {
    if (name == face_name(f)) return f;
  }
  throw_validation("unknown face '" + name + "'");
}

const char* projection_name(Projection p) {
  return p == Projection::kErp ? "erp" : "cmp";
}

Rational parse_rational(const std::string& text) {
  Rational r;
  const size_t sep = text.find_first_of(":/");
  try {
    size_t used = 0;
    if (sep == std::string::npos) {
      r.num = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      r.den = 1;
    } else {
      r.num = std::stoll(text.substr(0, sep), &used);
      if (used != sep) throw std::invalid_argument(text);
      const std::string den = text.substr(sep + 1);
      r.den = std::stoll(den, &used);
      if (used != den.size()) throw std::invalid_argument(text);
    }
  } catch (const std::logic_error&) {
    throw_validation("malformed frame rate '" + text + "'");
  }
  if (r.num <= 0 || r.den <= 0) {
    throw_validation("frame rate must be positive, got '" + text + "'");
  }
  return r;
}

// -----------------------------------------------------------------------------

FrameBuffer::FrameBuffer(int width, int height, std::vector<uint8_t> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  check_geometry(width, height);
  if (samples_.size() != frame_bytes(width, height)) {
    throw_validation("frame payload is " + std::to_string(samples_.size()) +
                     " bytes, expected " +
                     std::to_string(frame_bytes(width, height)));
  }
}

FrameBuffer FrameBuffer::filled(int width, int height, uint8_t y, uint8_t cb,
                                uint8_t cr) {
  check_geometry(width, height);
  const size_t luma = static_cast<size_t>(width) * height;
  const size_t chroma = luma / 4;
  std::vector<uint8_t> s(luma + 2 * chroma);
  std::fill_n(s.begin(), luma, y);
  std::fill_n(s.begin() + luma, chroma, cb);
  std::fill_n(s.begin() + luma + chroma, chroma, cr);
  return FrameBuffer(width, height, std::move(s));
}

std::span<const uint8_t> FrameBuffer::plane(Plane p) const {
  const size_t luma = static_cast<size_t>(width_) * height_;
  const size_t chroma = luma / 4;
  switch (p) {
    case Plane::kY: return {samples_.data(), luma};
    case Plane::kCb: return {samples_.data() + luma, chroma};
    case Plane::kCr: return {samples_.data() + luma + chroma, chroma};
  }
  return {};
}

VideoSequence::VideoSequence(int width, int height, Rational fps,
                             Projection projection,
                             std::vector<FrameBuffer> frames,
                             std::optional<FaceId> face)
    : width_(width),
      height_(height),
      fps_(fps),
      projection_(projection),
      face_(face),
      frames_(std::move(frames)) {
  check_geometry(width, height);
  if (fps.num <= 0 || fps.den <= 0) {
    throw_validation("frame rate numerator and denominator must be positive");
  }
  if ((projection == Projection::kCmpFace) != face.has_value()) {
    throw_validation("a face label is required exactly for cubemap faces");
  }
  for (const FrameBuffer& f : frames_) {
    if (f.width() != width || f.height() != height) {
      throw_validation("all frames of a sequence must share one geometry");
    }
  }
}

VideoSequence VideoSequence::retagged(Projection projection,
                                      std::optional<FaceId> face) const {
  return VideoSequence(width_, height_, fps_, projection, frames_, face);
}

// -----------------------------------------------------------------------------
// Y4M

Y4mReader::Y4mReader(const std::filesystem::path& path)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw_runtime("cannot open " + path.string());
  std::string line;
  if (!std::getline(in_, line)) {
    throw_validation(path.string() + ": empty file, missing Y4M header");
  }
  std::istringstream tokens(line);
  std::string tok;
  tokens >> tok;
  if (tok != kY4mMagic) {
    throw_validation(path.string() + ": header does not start with " +
                     kY4mMagic);
  }
  std::string colorspace = "420";
  bool have_w = false, have_h = false, have_f = false;
  while (tokens >> tok) {
    const char key = tok[0];
    const std::string value = tok.substr(1);
    try {
      switch (key) {
        case 'W': header_.width = std::stoi(value); have_w = true; break;
        case 'H': header_.height = std::stoi(value); have_h = true; break;
        case 'F': header_.fps = parse_rational(value); have_f = true; break;
        case 'C': colorspace = value; break;
        default: break;  // I, A, X: irrelevant for 4:2:0 progressive input
      }
    } catch (const std::logic_error&) {
      throw_validation(path.string() + ": malformed header token '" + tok +
                       "'");
    }
  }
  if (!have_w || !have_h || !have_f) {
    throw_validation(path.string() + ": header lacks W, H or F");
  }
  if (!is_420_tag(colorspace)) {
    throw_validation(path.string() + ": unsupported colorspace C" +
                     colorspace + " (only 8-bit 4:2:0)");
  }
  check_geometry(header_.width, header_.height);
}

std::optional<FrameBuffer> Y4mReader::next_frame() {
  std::string line;
  if (!std::getline(in_, line)) {
    if (in_.eof() && line.empty()) return std::nullopt;
    throw_validation(path_.string() + ": unreadable frame marker");
  }
  if (line.compare(0, sizeof(kFrameTag) - 1, kFrameTag) != 0) {
    throw_validation(path_.string() + ": expected FRAME marker");
  }
  const size_t bytes = FrameBuffer::frame_bytes(header_.width, header_.height);
  std::vector<uint8_t> payload(bytes);
  in_.read(reinterpret_cast<char*>(payload.data()),
           static_cast<std::streamsize>(bytes));
  if (static_cast<size_t>(in_.gcount()) != bytes) {
    throw_validation(path_.string() + ": truncated frame payload (" +
                     std::to_string(in_.gcount()) + " of " +
                     std::to_string(bytes) + " bytes)");
  }
  return FrameBuffer(header_.width, header_.height, std::move(payload));
}

VideoSequence read_y4m(const std::filesystem::path& path,
                       Projection projection, std::optional<FaceId> face) {
  Y4mReader reader(path);
  std::vector<FrameBuffer> frames;
  while (auto f = reader.next_frame()) frames.push_back(std::move(*f));
  const Y4mHeader& h = reader.header();
  return VideoSequence(h.width, h.height, h.fps, projection, std::move(frames),
                       face);
}

VideoSequence read_raw_yuv(const std::filesystem::path& path, int width,
                           int height, Rational fps, Projection projection,
                           std::optional<FaceId> face) {
  check_geometry(width, height);
  std::error_code ec;
  const uintmax_t size = std::filesystem::file_size(path, ec);
  if (ec) throw_runtime("cannot stat " + path.string() + ": " + ec.message());
  const size_t bytes = FrameBuffer::frame_bytes(width, height);
  if (size % bytes != 0) {
    throw_validation(path.string() + ": size " + std::to_string(size) +
                     " is not a multiple of the " + std::to_string(bytes) +
                     "-byte frame size for " + std::to_string(width) + "x" +
                     std::to_string(height));
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_runtime("cannot open " + path.string());
  std::vector<FrameBuffer> frames;
  const uintmax_t count = size / bytes;
  frames.reserve(count);
  for (uintmax_t i = 0; i < count; ++i) {
    std::vector<uint8_t> payload(bytes);
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(bytes));
    if (static_cast<size_t>(in.gcount()) != bytes) {
      throw_runtime(path.string() + ": short read");
    }
    frames.emplace_back(width, height, std::move(payload));
  }
  return VideoSequence(width, height, fps, projection, std::move(frames), face);
}

size_t write_y4m(const VideoSequence& seq, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_runtime("cannot create " + path.string());
  const std::string header = std::string(kY4mMagic) + " W" +
                             std::to_string(seq.width()) + " H" +
                             std::to_string(seq.height()) + " F" +
                             std::to_string(seq.fps().num) + ":" +
                             std::to_string(seq.fps().den) +
                             " Ip A1:1 C420\n";
  out << header;
  size_t written = header.size();
  for (const FrameBuffer& f : seq.frames()) {
    out << kFrameTag << '\n';
    out.write(reinterpret_cast<const char*>(f.samples().data()),
              static_cast<std::streamsize>(f.samples().size()));
    written += sizeof(kFrameTag) + f.samples().size();
  }
  out.flush();
  if (!out) throw_runtime("write failed for " + path.string());
  return written;
}

size_t write_raw_yuv(const VideoSequence& seq,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_runtime("cannot create " + path.string());
  size_t written = 0;
  for (const FrameBuffer& f : seq.frames()) {
    out.write(reinterpret_cast<const char*>(f.samples().data()),
              static_cast<std::streamsize>(f.samples().size()));
    written += f.samples().size();
  }
  out.flush();
  if (!out) throw_runtime("write failed for " + path.string());
  return written;
}

VideoSequence read_video(const std::filesystem::path& path,
                         std::optional<int> width, std::optional<int> height,
                         Rational fps) {
  if (path.extension() == ".y4m") return read_y4m(path);
  if (!width || !height) {
    throw_validation(path.string() +
                     ": headerless YUV needs explicit --width and --height");
  }
  return read_raw_yuv(path, *width, *height, fps);
}

}  // namespace ladder360
