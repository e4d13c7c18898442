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

#include "ladder360/planner.hpp"

#include <algorithm>
#include <map>

#include "ladder360/error.hpp"
#include "ladder360/media_io.hpp"

namespace ladder360 {

namespace {

std::string tier_label(int index, int tiers) {
  static const char* kNames[] = {"HD", "4K", "8K"};
  if (tiers == 3) return kNames[index];
  return "T" + std::to_string(index);
}

bool is_half_of(const Resolution& lo, const Resolution& hi) {
  return lo.width * 2 == hi.width && lo.height * 2 == hi.height;
}

}  // namespace

void Ladder::validate() const {
  if (resolutions.empty()) throw_validation("ladder has no resolution tiers");
  if (qualities.empty()) throw_validation("ladder has no quality levels");
  for (size_t i = 0; i < resolutions.size(); ++i) {
    const Resolution& r = resolutions[i];
    if (r.width <= 0 || r.height <= 0 || r.width % 2 || r.height % 2) {
      throw_validation("ladder tier " + r.label +
                       " must have positive even geometry");
    }
    if (i > 0) {
      const Resolution& p = resolutions[i - 1];
      if (static_cast<long long>(r.width) * r.height <=
          static_cast<long long>(p.width) * p.height) {
        throw_validation("ladder tiers must be in strictly ascending area");
      }
    }
  }
  for (size_t i = 1; i < qualities.size(); ++i) {
    if (qualities[i] <= qualities[i - 1]) {
      throw_validation("ladder qualities must be strictly increasing");
    }
  }
  for (int q : qualities) {
    if (q < 0 || q > 51) throw_validation("quality levels must lie in [0, 51]");
  }
}

Ladder Ladder::reference_erp() {
  return Ladder{{{2048, 1024, "HD"}, {4096, 2048, "4K"}, {8192, 4096, "8K"}},
                kReferenceQualities,
                LadderMode::kFixedQp};
}

Ladder Ladder::reference_cmp() { return reference_erp().faces(); }

Ladder Ladder::halving(int width, int height, int tiers,
                       std::vector<int> qualities) {
  if (tiers < 1) throw_validation("a ladder needs at least one tier");
  Ladder l;
  l.qualities = std::move(qualities);
  for (int i = 0; i < tiers; ++i) {
    const int shift = tiers - 1 - i;
    const int w = width >> shift;
    const int h = height >> shift;
    if ((w << shift) != width || (h << shift) != height) {
      throw_validation("input geometry " + std::to_string(width) + "x" +
                       std::to_string(height) + " cannot be halved " +
                       std::to_string(tiers - 1) + " times");
    }
    l.resolutions.push_back({w, h, tier_label(i, tiers)});
  }
  l.validate();
  return l;
}

Ladder Ladder::faces() const {
  Ladder l = *this;
  for (Resolution& r : l.resolutions) {
    r.width = r.height / 2;
    r.height = r.height / 2;
  }
  return l;
}

const char* anchor_name(AnchorPolicy a) {
  switch (a) {
    case AnchorPolicy::kLq: return "lq";
    case AnchorPolicy::kMq: return "mq";
    case AnchorPolicy::kHq: return "hq";
  }
  return "?";
}

AnchorPolicy anchor_from_name(const std::string& name) {
  for (AnchorPolicy a : {AnchorPolicy::kLq, AnchorPolicy::kMq, AnchorPolicy::kHq}) {
    if (name == anchor_name(a)) return a;
  }
  throw_validation("unknown anchor policy '" + name + "' (lq|mq|hq)");
}

int anchor_quality(const Ladder& ladder, AnchorPolicy policy) {
  ladder.validate();
  const std::vector<int>& q = ladder.qualities;
  switch (policy) {
    case AnchorPolicy::kHq: return q.front();
    case AnchorPolicy::kLq: return q.back();
    case AnchorPolicy::kMq: return q[(q.size() - 1) / 2];
  }
  return q.front();
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kErpDefault: return "erp-default";
    case Variant::kErpCrc: return "erp-crc";
    case Variant::kErpPra: return "erp-pra";
    case Variant::kCmpCrc: return "cmp-crc";
    case Variant::kCmpPra: return "cmp-pra";
  }
  return "?";
}

Variant variant_from_name(const std::string& name) {
  for (Variant v : {Variant::kErpDefault, Variant::kErpCrc, Variant::kErpPra,
                    Variant::kCmpCrc, Variant::kCmpPra}) {
    if (name == variant_name(v)) return v;
  }
  throw_validation("unknown variant '" + name +
                   "' (erp-default|erp-crc|erp-pra|cmp-crc|cmp-pra)");
}

bool is_cubemap(Variant v) {
  return v == Variant::kCmpCrc || v == Variant::kCmpPra;
}

int tile_count(Variant v) { return is_cubemap(v) ? kNumFaces : 1; }

// -----------------------------------------------------------------------------

std::string EncodePlan::tile_name(int tile) const {
  if (tiles == 1) return "erp";
  return face_name(kAllFaces[tile]);
}

std::string EncodePlan::node_id(size_t index) const {
  const EncodeNode& n = nodes[index];
  const Resolution& r = resolution_of(index);
  return tile_name(n.key.tile) + "_" + std::to_string(r.width) + "x" +
         std::to_string(r.height) + "_" + std::to_string(n.key.quality);
}

std::string EncodePlan::analysis_file_name(size_t index) const {
  return node_id(index) + ".analysis";
}

std::string EncodePlan::bitstream_file_name(size_t index) const {
  return node_id(index) + ".hevc";
}

std::optional<size_t> EncodePlan::find(const NodeKey& key) const {
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].key == key) return i;
  }
  return std::nullopt;
}

int EncodePlan::reuse_depth(size_t index) const {
  int depth = 0;
  std::optional<size_t> cur = nodes.at(index).source;
  while (cur) {
    if (++depth > static_cast<int>(nodes.size())) {
      throw_validation("analysis chain has a cycle");
    }
    cur = nodes.at(*cur).source;
  }
  return depth;
}

EncodePlan build_plan(Variant variant, const Ladder& ladder,
                      AnchorPolicy anchor, const PlanOptions& options) {
  ladder.validate();
  const bool crc = variant == Variant::kErpCrc || variant == Variant::kCmpCrc;
  const bool pra = variant == Variant::kErpPra || variant == Variant::kCmpPra;
  const size_t tiers = ladder.resolutions.size();
  if (crc && tiers < 2) {
    throw_validation("a cascaded plan needs at least two resolution tiers");
  }
  if (crc || (pra && options.pra_cross_resolution)) {
    for (size_t r = 1; r < tiers; ++r) {
      if (!is_half_of(ladder.resolutions[r - 1], ladder.resolutions[r])) {
        throw_validation("cross-resolution reuse needs each tier to be exactly "
                         "twice the previous one (" +
                         ladder.resolutions[r - 1].label + " -> " +
                         ladder.resolutions[r].label + ")");
      }
    }
  }

  EncodePlan plan;
  plan.variant = variant;
  plan.anchor = anchor;
  plan.ladder = ladder;
  plan.tiles = tile_count(variant);
  plan.options = options;

  const int anchor_q = anchor_quality(ladder, anchor);
  std::vector<int> order{anchor_q};
  for (int q : ladder.qualities) {
    if (q != anchor_q) order.push_back(q);
  }
  if (variant == Variant::kErpDefault) order = ladder.qualities;

  auto add = [&](NodeKey key, NodeMode mode, std::optional<size_t> source,
                 int scale, bool save) {
    plan.nodes.push_back({key, mode, source, scale, save});
    if (source) plan.edges.push_back({*source, plan.nodes.size() - 1});
    return plan.nodes.size() - 1;
  };

  for (int t = 0; t < plan.tiles; ++t) {
    std::optional<size_t> prev_anchor;
    for (size_t r = 0; r < tiers; ++r) {
      const int ri = static_cast<int>(r);
      if (variant == Variant::kErpDefault) {
        for (int q : order) add({t, ri, q}, NodeMode::kFullRdo, {}, 1, false);
        continue;
      }
      const bool top = r + 1 == tiers;
      if (crc && r > 0 && top) {
        // Top tier: every representation loads the tier below; nothing saves.
        for (int q : order) {
          add({t, ri, q}, NodeMode::kAnalysisLoad, prev_anchor, 2, false);
        }
        continue;
      }
      size_t a;
      const bool cascade = r > 0 && (crc || options.pra_cross_resolution);
      if (cascade) {
        a = add({t, ri, anchor_q}, NodeMode::kAnalysisLoad, prev_anchor, 2, true);
      } else {
        a = add({t, ri, anchor_q}, NodeMode::kFullRdo, {}, 1, true);
      }
      for (size_t k = 1; k < order.size(); ++k) {
        add({t, ri, order[k]}, NodeMode::kAnalysisLoad, a, 1, false);
      }
      prev_anchor = a;
    }
  }
  return plan;
}

// -----------------------------------------------------------------------------

std::vector<Violation> validate_plan(const EncodePlan& plan) {
  std::vector<Violation> out;
  auto report = [&](ViolationKind k, std::string msg) {
    out.push_back({k, std::move(msg)});
  };
  const size_t n = plan.nodes.size();
  if (plan.tiles != tile_count(plan.variant)) {
    report(ViolationKind::kStructure,
           std::string(variant_name(plan.variant)) + " plans need " +
               std::to_string(tile_count(plan.variant)) + " tiles");
  }

  std::map<NodeKey, size_t> seen;
  for (size_t i = 0; i < n; ++i) {
    const EncodeNode& node = plan.nodes[i];
    const NodeKey& k = node.key;
    if (k.tile < 0 || k.tile >= plan.tiles || k.resolution < 0 ||
        k.resolution >= static_cast<int>(plan.ladder.resolutions.size())) {
      report(ViolationKind::kStructure,
             "node " + std::to_string(i) + " is outside the plan's tiles/tiers");
      return out;
    }
    if (!seen.emplace(k, i).second) {
      report(ViolationKind::kStructure, "duplicate node " + plan.node_id(i));
    }
  }

  // Edge list must mirror the per-node sources exactly.
  std::vector<int> incoming(n, 0);
  for (const EncodeEdge& e : plan.edges) {
    if (e.source >= n || e.dependent >= n) {
      report(ViolationKind::kStructure, "edge refers to a missing node");
      continue;
    }
    ++incoming[e.dependent];
    if (plan.nodes[e.dependent].source != e.source) {
      report(ViolationKind::kSingleSource,
             "edge " + plan.node_id(e.source) + " -> " +
                 plan.node_id(e.dependent) +
                 " disagrees with the dependent's source");
    }
  }

  for (size_t i = 0; i < n; ++i) {
    const EncodeNode& node = plan.nodes[i];
    const std::string id = plan.node_id(i);
    if (node.mode == NodeMode::kFullRdo) {
      if (node.source || incoming[i] != 0) {
        report(ViolationKind::kSingleSource, id + " is a full search but has a source");
      }
      continue;
    }
    if (!node.source || *node.source >= n) {
      report(ViolationKind::kSingleSource, id + " loads analysis but has no source");
      continue;
    }
    if (incoming[i] != 1) {
      report(ViolationKind::kSingleSource,
             id + " has " + std::to_string(incoming[i]) + " analysis edges");
    }
    const EncodeNode& src = plan.nodes[*node.source];
    if (!src.save_analysis) {
      report(ViolationKind::kSingleSource,
             id + " loads from " + plan.node_id(*node.source) +
                 ", which does not save analysis");
    }
    if (src.key.tile != node.key.tile) {
      report(ViolationKind::kTileIsolation,
             "edge " + plan.node_id(*node.source) + " -> " + id +
                 " crosses tiles");
    }
    const Resolution& rs = plan.resolution_of(*node.source);
    const Resolution& rd = plan.resolution_of(i);
    int expected = 0;
    if (rs.width == rd.width && rs.height == rd.height) {
      expected = 1;
    } else if (is_half_of(rs, rd)) {
      expected = 2;
    }
    if (expected == 0) {
      report(ViolationKind::kScaleFactor,
             "edge " + plan.node_id(*node.source) + " -> " + id +
                 " spans an unsupported resolution ratio");
    } else if (node.scale_factor != expected) {
      report(ViolationKind::kScaleFactor,
             id + " uses scale factor " + std::to_string(node.scale_factor) +
                 ", geometry requires " + std::to_string(expected));
    }
  }

  // Each node has at most one source, so a cycle shows up as a chain longer
  // than the node count.
  for (size_t i = 0; i < n; ++i) {
    std::optional<size_t> cur = plan.nodes[i].source;
    size_t hops = 0;
    while (cur && *cur < n && hops <= n) {
      cur = plan.nodes[*cur].source;
      ++hops;
    }
    if (hops > n) {
      report(ViolationKind::kCycle, plan.node_id(i) + " lies on an analysis cycle");
    }
  }
  return out;
}

std::vector<int> plan_storage_count(const EncodePlan& plan) {
  std::vector<int> counts(plan.tiles, 0);
  for (const EncodeNode& node : plan.nodes) {
    if (node.save_analysis) ++counts.at(node.key.tile);
  }
  return counts;
}

// -----------------------------------------------------------------------------

nlohmann::json ladder_to_json(const Ladder& ladder) {
  nlohmann::json tiers = nlohmann::json::array();
  for (const Resolution& r : ladder.resolutions) {
    tiers.push_back({{"label", r.label}, {"width", r.width}, {"height", r.height}});
  }
  return {{"resolutions", tiers},
          {"qualities", ladder.qualities},
          {"mode", ladder.mode == LadderMode::kFixedQp ? "qp" : "crf"}};
}

Ladder ladder_from_json(const nlohmann::json& j) {
  try {
    Ladder l;
    for (const auto& t : j.at("resolutions")) {
      l.resolutions.push_back({t.at("width").get<int>(), t.at("height").get<int>(),
                               t.at("label").get<std::string>()});
    }
    l.qualities = j.at("qualities").get<std::vector<int>>();
    const std::string mode = j.value("mode", "qp");
    if (mode != "qp" && mode != "crf") throw_validation("ladder mode must be qp or crf");
    l.mode = mode == "qp" ? LadderMode::kFixedQp : LadderMode::kCrf;
    l.validate();
    return l;
  } catch (const nlohmann::json::exception& e) {
    throw_validation(std::string("malformed ladder: ") + e.what());
  }
}

nlohmann::json plan_to_json(const EncodePlan& plan) {
  nlohmann::json nodes = nlohmann::json::array();
  for (size_t i = 0; i < plan.nodes.size(); ++i) {
    const EncodeNode& n = plan.nodes[i];
    const Resolution& r = plan.resolution_of(i);
    nlohmann::json node = {
        {"id", plan.node_id(i)},
        {"tile", plan.tile_name(n.key.tile)},
        {"tier", r.label},
        {"width", r.width},
        {"height", r.height},
        {"quality", n.key.quality},
        {"mode", n.mode == NodeMode::kFullRdo ? "full-rdo" : "analysis-load"},
        {"save_analysis", n.save_analysis},
        {"bitstream", plan.bitstream_file_name(i)},
    };
    if (n.source) {
      node["source"] = plan.node_id(*n.source);
      node["scale_factor"] = n.scale_factor;
      node["analysis_in"] = plan.analysis_file_name(*n.source);
    }
    if (n.save_analysis) node["analysis_out"] = plan.analysis_file_name(i);
    nodes.push_back(std::move(node));
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const EncodeEdge& e : plan.edges) {
    edges.push_back({plan.node_id(e.source), plan.node_id(e.dependent)});
  }
  return {{"variant", variant_name(plan.variant)},
          {"anchor", anchor_name(plan.anchor)},
          {"tiles", plan.tiles},
          {"pra_cross_resolution", plan.options.pra_cross_resolution},
          {"ladder", ladder_to_json(plan.ladder)},
          {"nodes", nodes},
          {"edges", edges}};
}

EncodePlan plan_from_json(const nlohmann::json& j) {
  try {
    EncodePlan plan;
    plan.variant = variant_from_name(j.at("variant").get<std::string>());
    plan.anchor = anchor_from_name(j.at("anchor").get<std::string>());
    plan.tiles = j.at("tiles").get<int>();
    plan.options.pra_cross_resolution = j.value("pra_cross_resolution", false);
    plan.ladder = ladder_from_json(j.at("ladder"));
    if (plan.tiles != 1 && plan.tiles != kNumFaces) {
      throw_validation("plan tiles must be 1 or 6");
    }
    std::map<std::string, size_t> index;
    const auto& nodes = j.at("nodes");
    // Sources are resolved in a second pass since ids may appear in any order.
    std::vector<std::optional<std::string>> sources;
    for (const auto& jn : nodes) {
      EncodeNode n;
      const std::string tile = jn.at("tile").get<std::string>();
      n.key.tile = plan.tiles == 1 ? 0 : static_cast<int>(face_from_name(tile));
      const std::string tier = jn.at("tier").get<std::string>();
      const auto& res = plan.ladder.resolutions;
      auto it = std::find_if(res.begin(), res.end(),
                             [&](const Resolution& r) { return r.label == tier; });
      if (it == res.end()) throw_validation("plan node names unknown tier " + tier);
      n.key.resolution = static_cast<int>(it - res.begin());
      n.key.quality = jn.at("quality").get<int>();
      const std::string mode = jn.at("mode").get<std::string>();
      if (mode != "full-rdo" && mode != "analysis-load") {
        throw_validation("unknown node mode " + mode);
      }
      n.mode = mode == "full-rdo" ? NodeMode::kFullRdo : NodeMode::kAnalysisLoad;
      n.save_analysis = jn.at("save_analysis").get<bool>();
      n.scale_factor = jn.value("scale_factor", 1);
      sources.push_back(jn.contains("source")
                            ? std::optional(jn.at("source").get<std::string>())
                            : std::nullopt);
      plan.nodes.push_back(n);
      index[plan.node_id(plan.nodes.size() - 1)] = plan.nodes.size() - 1;
    }
    for (size_t i = 0; i < plan.nodes.size(); ++i) {
      if (!sources[i]) continue;
      auto it = index.find(*sources[i]);
      if (it == index.end()) throw_validation("unknown analysis source " + *sources[i]);
      plan.nodes[i].source = it->second;
    }
    for (const auto& je : j.at("edges")) {
      auto s = index.find(je.at(0).get<std::string>());
      auto d = index.find(je.at(1).get<std::string>());
      if (s == index.end() || d == index.end()) {
        throw_validation("plan edge names an unknown node");
      }
      plan.edges.push_back({s->second, d->second});
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw_validation(std::string("malformed plan: ") + e.what());
  }
}

}  // namespace ladder360
