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

#ifndef LADDER360_OMAF_HPP
#define LADDER360_OMAF_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ladder360/executor.hpp"
#include "ladder360/planner.hpp"

namespace ladder360 {

inline constexpr char kOmafProjectionScheme[] = "urn:mpeg:mpegI:omaf:2017:pf";
inline constexpr char kSrdScheme[] = "urn:mpeg:dash:srd:2014";

// Spatial relationship of a face on the 3x2 cubemap grid, in face units.
struct RegionDescriptor {
  int object_x = 0;
  int object_y = 0;
  int object_width = 1;
  int object_height = 1;
  int total_width = 3;
  int total_height = 2;
};

RegionDescriptor face_region(FaceId face);

struct RepresentationEntry {
  std::string id;
  int64_t bandwidth_bps = 0;
  int width = 0;
  int height = 0;
  std::string codecs;
  std::string base_url;
};

struct AdaptationSetEntry {
  int id = 0;
  std::string tile;
  Projection projection = Projection::kErp;
  std::optional<RegionDescriptor> region;
  std::vector<RepresentationEntry> representations;
};

struct PresentationManifest {
  double duration_s = 0.0;
  Rational fps;
  std::vector<AdaptationSetEntry> adaptation_sets;

  // One set for ERP, six for CMP, positive bandwidths, unique ids.
  void validate() const;
};

struct ManifestOptions {
  double duration_s = 0.0;
  Rational fps;
  std::string base_url_prefix = "bitstreams/";
};

PresentationManifest build_manifest(const std::map<size_t, EncodeResult>& results,
                                    const EncodePlan& plan,
                                    const ManifestOptions& options);

// Static on-demand MPD. Attribute order is fixed so output is byte-stable.
std::string serialize_mpd(const PresentationManifest& manifest);

}  // namespace ladder360

#endif  // LADDER360_OMAF_HPP
