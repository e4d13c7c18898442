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

#ifndef LADDER360_SPHERE_HPP
#define LADDER360_SPHERE_HPP

#include <span>

#include "ladder360/media_io.hpp"

namespace ladder360 {

// Unit viewing direction. Axes: x right, y up, z forward.
struct Direction {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  double norm() const;
  // Throws on the zero vector.
  static Direction normalized(double x, double y, double z);
};

// Angle between two directions in radians, stable for tiny angles.
double angle_between(const Direction& a, const Direction& b);

// Face-local coordinates in [-1, 1]^2, u to the right, v downward.
struct FaceCoord {
  FaceId face = FaceId::kFront;
  double u = 0.0;
  double v = 0.0;
};

enum class ResampleFilter { kBilinear, kLanczos3 };

const char* filter_name(ResampleFilter f);
ResampleFilter filter_from_name(const std::string& name);

struct ErpPoint {
  double u = 0.0;  // continuous pixel column, pixel centers at integers
  double v = 0.0;
};

// Longitude wraps, latitude clamps: u and v may lie outside the image.
Direction erp_to_direction(double u, double v, int width, int height);

// u in [-0.5, W-0.5), v in [-0.5, H-0.5]. At the poles u = W/2 - 0.5.
ErpPoint direction_to_erp(const Direction& d, int width, int height);

// Dominant axis selects the face; exact ties resolve in the order
// Front, Back, Left, Right, Top, Bottom.
FaceCoord direction_to_face(const Direction& d);
Direction face_to_direction(const FaceCoord& fc);

// Continuous face coordinate of pixel center i on an n-pixel face edge.
inline double face_pixel_to_coord(double i, int n) {
  return 2.0 * (i + 0.5) / n - 1.0;
}
inline double face_coord_to_pixel(double c, int n) {
  return (c + 1.0) * n / 2.0 - 0.5;
}

// Six face sequences in kAllFaces order.
std::vector<VideoSequence> erp_to_cmp(const VideoSequence& erp, int face_size,
                     ResampleFilter filter = ResampleFilter::kBilinear);

VideoSequence cmp_to_erp(std::span<const VideoSequence> faces, int width,
                         int height,
                         ResampleFilter filter = ResampleFilter::kBilinear);

// Separable resampling in pixel space; chroma at half resolution.
VideoSequence resize(const VideoSequence& seq, int target_width,
                     int target_height,
                     ResampleFilter filter = ResampleFilter::kLanczos3);

}  // namespace ladder360

#endif  // LADDER360_SPHERE_HPP
