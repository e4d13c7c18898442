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

#include "doctest.h"
#include "ladder360/error.hpp"
#include "ladder360/media_io.hpp"
#include "test_util.hpp"

using namespace ladder360;
using ladder360::testing::TempDir;

TEST_SUITE("media_io") {

TEST_CASE("y4m header fields") {
  TempDir dir("y4m_header");
  const auto p = dir / "a.y4m";
  {
    std::ofstream out(p, std::ios::binary);
    out << "YUV4MPEG2 W64 H32 F30:1 Ip A1:1 C420\n";
  }
  const VideoSequence s = read_y4m(p);
  CHECK(s.width() == 64);
  CHECK(s.height() == 32);
  CHECK(s.fps() == Rational{30, 1});
  CHECK(s.empty());
}

TEST_CASE("y4m accepts 420 variants and rejects other colorspaces") {
  TempDir dir("y4m_cs");
  for (const char* tag : {"C420jpeg", "C420paldv", "C420mpeg2", ""}) {
    std::ofstream(dir / "a.y4m", std::ios::binary)
        << "YUV4MPEG2 W8 H4 F25:1 " << tag << "\n";
    CHECK(read_y4m(dir / "a.y4m").fps() == Rational{25, 1});
  }
  std::ofstream(dir / "b.y4m", std::ios::binary) << "YUV4MPEG2 W8 H4 F25:1 C444\n";
  CHECK_THROWS_AS(read_y4m(dir / "b.y4m"), Error);
  std::ofstream(dir / "c.y4m", std::ios::binary) << "YUV4MPEG W8 H4 F25:1\n";
  CHECK_THROWS_AS(read_y4m(dir / "c.y4m"), Error);
  std::ofstream(dir / "d.y4m", std::ios::binary) << "YUV4MPEG2 W8 F25:1\n";
  CHECK_THROWS_AS(read_y4m(dir / "d.y4m"), Error);
}

TEST_CASE("y4m truncated payload") {
  TempDir dir("y4m_trunc");
  const auto p = dir / "t.y4m";
  {
    std::ofstream out(p, std::ios::binary);
    out << "YUV4MPEG2 W64 H32 F30:1 C420\nFRAME\n" << std::string(1000, 'x');
  }
  try {
    read_y4m(p);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kValidation);
    CHECK(std::string(e.what()).find("truncated") != std::string::npos);
  }
}

TEST_CASE("raw yuv frame count") {
  TempDir dir("raw");
  ladder360::testing::write_bytes(dir / "a.yuv", 9216);
  CHECK(read_raw_yuv(dir / "a.yuv", 64, 32, {30, 1}).frame_count() == 3);
  ladder360::testing::write_bytes(dir / "b.yuv", 9217);
  CHECK_THROWS_AS(read_raw_yuv(dir / "b.yuv", 64, 32, {30, 1}), Error);
  ladder360::testing::write_bytes(dir / "c.yuv", 0);
  const VideoSequence empty = read_raw_yuv(dir / "c.yuv", 64, 32, {30, 1});
  CHECK(empty.empty());
  CHECK(empty.width() == 64);
  for (int n = 1; n <= 5; ++n) {
    ladder360::testing::write_bytes(dir / "d.yuv", 48 * static_cast<size_t>(n));
    CHECK(read_raw_yuv(dir / "d.yuv", 8, 4, {30, 1}).frame_count() == static_cast<size_t>(n));
  }
}

TEST_CASE("raw yuv 8k frame size") {
  // 8192 x 4096 x 1.5 bytes, one frame.
  CHECK(FrameBuffer::frame_bytes(8192, 4096) == 50331648u);
}

TEST_CASE("write_y4m byte count and layout") {
  TempDir dir("y4m_write");
  const VideoSequence s = ladder360::testing::random_sequence(64, 32, 1, 7);
  const size_t n = write_y4m(s, dir / "a.y4m");
  const std::string header = "YUV4MPEG2 W64 H32 F30:1 Ip A1:1 C420\n";
  CHECK(n == header.size() + 6 + 3072);
  const std::string bytes = ladder360::testing::slurp(dir / "a.y4m");
  CHECK(bytes.size() == n);
  CHECK(bytes.substr(0, header.size()) == header);
  CHECK(bytes.substr(header.size(), 6) == "FRAME\n");

  const VideoSequence empty(64, 32, {30, 1}, Projection::kErp, {});
  CHECK(write_y4m(empty, dir / "e.y4m") == header.size());
  CHECK(read_y4m(dir / "e.y4m").empty());
}

TEST_CASE("y4m and raw roundtrips are bit-exact") {
  TempDir dir("roundtrip");
  for (uint32_t seed = 1; seed <= 4; ++seed) {
    const VideoSequence s = ladder360::testing::random_sequence(16 * seed, 8 * seed, 3, seed);
    write_y4m(s, dir / "a.y4m");
    CHECK(read_y4m(dir / "a.y4m") == s);
    write_raw_yuv(s, dir / "a.yuv");
    CHECK(read_raw_yuv(dir / "a.yuv", s.width(), s.height(), s.fps()) == s);
    CHECK(read_video(dir / "a.yuv", s.width(), s.height(), s.fps()) == s);
  }
  // write∘read is an identity on files too.
  const VideoSequence s = ladder360::testing::random_sequence(32, 16, 2, 9);
  write_y4m(s, dir / "b.y4m");
  write_y4m(read_y4m(dir / "b.y4m"), dir / "c.y4m");
  CHECK(ladder360::testing::slurp(dir / "b.y4m") == ladder360::testing::slurp(dir / "c.y4m"));
}

TEST_CASE("streaming reader yields frames one at a time") {
  TempDir dir("stream");
  const VideoSequence s = ladder360::testing::random_sequence(8, 4, 4, 3);
  write_y4m(s, dir / "a.y4m");
  Y4mReader reader(dir / "a.y4m");
  size_t n = 0;
  while (auto f = reader.next_frame()) {
    CHECK(*f == s.frames()[n]);
    ++n;
  }
  CHECK(n == 4);
}

TEST_CASE("frame and sequence invariants") {
  CHECK_THROWS_AS(FrameBuffer(63, 32, std::vector<uint8_t>(63 * 48)), Error);
  CHECK_THROWS_AS(FrameBuffer(0, 32, {}), Error);
  CHECK_THROWS_AS(FrameBuffer(64, 32, std::vector<uint8_t>(100)), Error);
  const FrameBuffer f = FrameBuffer::filled(8, 4, 10, 20, 30);
  CHECK(f.plane(Plane::kY).size() == 32);
  CHECK(f.plane(Plane::kCb).size() == 8);
  CHECK(f.at(Plane::kCr, 3, 1) == 30);

  std::vector<FrameBuffer> mixed{FrameBuffer::filled(8, 4, 0), FrameBuffer::filled(16, 8, 0)};
  CHECK_THROWS_AS(VideoSequence(8, 4, {30, 1}, Projection::kErp, mixed), Error);
  CHECK_THROWS_AS(VideoSequence(8, 4, {30, 1}, Projection::kCmpFace, {}), Error);
  CHECK_THROWS_AS(VideoSequence(8, 4, {30, 1}, Projection::kErp, {}, FaceId::kTop), Error);
  CHECK_THROWS_AS(VideoSequence(8, 4, {0, 1}, Projection::kErp, {}), Error);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("30") == Rational{30, 1});
  CHECK(parse_rational("30000:1001") == Rational{30000, 1001});
  CHECK(parse_rational("60/1") == Rational{60, 1});
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK_THROWS_AS(parse_rational("0"), Error);
  CHECK_THROWS_AS(parse_rational("30:0"), Error);
}

TEST_CASE("face names") {
  for (FaceId f : kAllFaces) CHECK(face_from_name(face_name(f)) == f);
  CHECK_THROWS_AS(face_from_name("side"), Error);
}

}  // TEST_SUITE
