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

#include "ladder360/omaf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "ladder360/error.hpp"

namespace ladder360 {

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// ISO 8601 duration with millisecond precision, e.g. PT2.000S.
std::string iso_duration(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "PT%.3fS", seconds);
  return buf;
}

class XmlWriter {
 public:
  void open(const std::string& name,
            const std::vector<std::pair<std::string, std::string>>& attrs,
            bool self_close = false) {
    indent();
    out_ << '<' << name;
    for (const auto& [k, v] : attrs) out_ << ' ' << k << "=\"" << xml_escape(v) << '"';
    if (self_close) {
      out_ << "/>\n";
      return;
    }
    out_ << ">\n";
    stack_.push_back(name);
  }
  void text_element(const std::string& name, const std::string& text) {
    indent();
    out_ << '<' << name << '>' << xml_escape(text) << "</" << name << ">\n";
  }
  void close() {
    const std::string name = stack_.back();
    stack_.pop_back();
    indent();
    out_ << "</" << name << ">\n";
  }
  std::string str() const { return out_.str(); }
  std::ostringstream& raw() { return out_; }

 private:
  void indent() { out_ << std::string(2 * stack_.size(), ' '); }
  std::ostringstream out_;
  std::vector<std::string> stack_;
};

std::string srd_value(const RegionDescriptor& r) {
  std::ostringstream s;
  s << 0 << ',' << r.object_x << ',' << r.object_y << ',' << r.object_width << ','
    << r.object_height << ',' << r.total_width << ',' << r.total_height;
  return s.str();
}

}  // namespace

RegionDescriptor face_region(FaceId face) {
  const int k = static_cast<int>(face);
  RegionDescriptor r;
  r.object_x = k % 3;
  r.object_y = k / 3;
  return r;
}

void PresentationManifest::validate() const {
  if (adaptation_sets.empty()) throw_validation("manifest has no adaptation sets");
  const Projection p = adaptation_sets.front().projection;
  const size_t expected = p == Projection::kErp ? 1 : kNumFaces;
  if (adaptation_sets.size() != expected) {
    throw_validation("manifest has " + std::to_string(adaptation_sets.size()) +
                     " adaptation sets, projection needs " +
                     std::to_string(expected));
  }
  std::set<std::string> ids;
  for (const AdaptationSetEntry& set : adaptation_sets) {
    if (set.projection != p) throw_validation("manifest mixes projections");
    if (set.representations.empty()) {
      throw_validation("adaptation set " + set.tile + " has no representations");
    }
    for (const RepresentationEntry& r : set.representations) {
      if (r.bandwidth_bps <= 0) {
        throw_validation("representation " + r.id + " has non-positive bandwidth");
      }
      if (!ids.insert(r.id).second) {
        throw_validation("duplicate representation id " + r.id);
      }
    }
  }
}

PresentationManifest build_manifest(const std::map<size_t, EncodeResult>& results,
                                    const EncodePlan& plan,
                                    const ManifestOptions& options) {
  if (results.empty()) throw_validation("no encode results to package");
  PresentationManifest m;
  m.duration_s = options.duration_s;
  m.fps = options.fps;
  const Projection projection =
      plan.tiles == 1 ? Projection::kErp : Projection::kCmpFace;
  for (int t = 0; t < plan.tiles; ++t) {
    AdaptationSetEntry set;
    set.id = t;
    set.tile = plan.tile_name(t);
    set.projection = projection;
    if (projection == Projection::kCmpFace) set.region = face_region(kAllFaces[t]);
    m.adaptation_sets.push_back(std::move(set));
  }
  // Representations in tier then quality order within each tile.
  std::vector<size_t> order(plan.nodes.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return plan.nodes[a].key < plan.nodes[b].key;
  });
  for (size_t i : order) {
    const auto it = results.find(i);
    if (it == results.end()) {
      throw_validation("missing encode result for " + plan.node_id(i));
    }
    const EncodeResult& r = it->second;
    const Resolution& res = plan.resolution_of(i);
    RepresentationEntry e;
    e.id = plan.node_id(i);
    e.bandwidth_bps = std::llround(r.bitrate_kbps * 1000.0);
    e.width = res.width;
    e.height = res.height;
    e.codecs = r.codec_tag.value_or(kDefaultCodecTag);
    e.base_url = options.base_url_prefix + plan.bitstream_file_name(i);
    m.adaptation_sets[plan.nodes[i].key.tile].representations.push_back(std::move(e));
  }
  m.validate();
  return m;
}

std::string serialize_mpd(const PresentationManifest& manifest) {
  manifest.validate();
  XmlWriter w;
  w.raw() << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  w.open("MPD", {{"xmlns", "urn:mpeg:dash:schema:mpd:2011"},
                 {"xmlns:omaf", "urn:mpeg:mpegI:omaf:2017"},
                 {"type", "static"},
                 {"profiles", "urn:mpeg:dash:profile:isoff-on-demand:2011"},
                 {"minBufferTime", "PT2S"},
                 {"mediaPresentationDuration", iso_duration(manifest.duration_s)}});
  w.open("Period", {{"id", "0"}, {"start", "PT0S"}});
  const std::string frame_rate =
      std::to_string(manifest.fps.num) + "/" + std::to_string(manifest.fps.den);
  for (const AdaptationSetEntry& set : manifest.adaptation_sets) {
    w.open("AdaptationSet", {{"id", std::to_string(set.id)},
                             {"contentType", "video"},
                             {"mimeType", "video/mp4"},
                             {"frameRate", frame_rate},
                             {"subsegmentAlignment", "true"}});
    w.open("EssentialProperty",
           {{"schemeIdUri", kOmafProjectionScheme},
            {"value", set.projection == Projection::kErp ? "0" : "1"}},
           true);
    if (set.region) {
      w.open("SupplementalProperty",
             {{"schemeIdUri", kSrdScheme}, {"value", srd_value(*set.region)}}, true);
    }
    w.open("Role", {{"schemeIdUri", "urn:mpeg:dash:role:2011"}, {"value", "main"}},
           true);
    for (const RepresentationEntry& r : set.representations) {
      w.open("Representation", {{"id", r.id},
                                {"bandwidth", std::to_string(r.bandwidth_bps)},
                                {"width", std::to_string(r.width)},
                                {"height", std::to_string(r.height)},
                                {"codecs", r.codecs}});
      w.text_element("BaseURL", r.base_url);
      w.close();
    }
    w.close();
  }
  w.close();
  w.close();
  return w.str();
}

}  // namespace ladder360
