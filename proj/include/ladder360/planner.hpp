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

#ifndef LADDER360_PLANNER_HPP
#define LADDER360_PLANNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ladder360 {

enum class LadderMode { kFixedQp, kCrf };

struct Resolution {
  int width = 0;
  int height = 0;
  std::string label;

  bool operator==(const Resolution&) const = default;
};

// Resolution tiers in ascending area and quality levels in ascending QP/CRF.
// The first quality level is the highest-quality one.
struct Ladder {
  std::vector<Resolution> resolutions;
  std::vector<int> qualities;
  LadderMode mode = LadderMode::kFixedQp;

  // Throws a validation error on empty, unordered or odd-sized ladders.
  void validate() const;

  bool operator==(const Ladder&) const = default;

  // HD/4K/8K ERP tiers with QPs {22, 27, 32, 37, 42}.
  static Ladder reference_erp();
  // 512/1024/2048 square faces with the same QPs.
  static Ladder reference_cmp();
  // `tiers` ERP tiers ending at width x height, each half the next.
  static Ladder halving(int width, int height, int tiers,
                        std::vector<int> qualities);
  // Face ladder for ERP tiers: one square face of side height/2 per tier.
  Ladder faces() const;
};

inline const std::vector<int> kReferenceQualities = {22, 27, 32, 37, 42};

enum class AnchorPolicy { kLq, kMq, kHq };

const char* anchor_name(AnchorPolicy a);  // "lq" / "mq" / "hq"
AnchorPolicy anchor_from_name(const std::string& name);

// HQ -> lowest QP, LQ -> highest, MQ -> lower median.
int anchor_quality(const Ladder& ladder, AnchorPolicy policy);

enum class Variant { kErpDefault, kErpCrc, kErpPra, kCmpCrc, kCmpPra };

const char* variant_name(Variant v);  // "erp-default", ...
Variant variant_from_name(const std::string& name);
bool is_cubemap(Variant v);
int tile_count(Variant v);

enum class NodeMode { kFullRdo, kAnalysisLoad };

struct NodeKey {
  int tile = 0;
  int resolution = 0;  // index into Ladder::resolutions
  int quality = 0;     // QP or CRF value

  auto operator<=>(const NodeKey&) const = default;
};

struct EncodeNode {
  NodeKey key;
  NodeMode mode = NodeMode::kFullRdo;
  std::optional<size_t> source;  // index of the analysis source node
  int scale_factor = 1;          // 2 when the source is half the resolution
  bool save_analysis = false;

  bool operator==(const EncodeNode&) const = default;
};

struct EncodeEdge {
  size_t source = 0;
  size_t dependent = 0;

  bool operator==(const EncodeEdge&) const = default;
};

struct PlanOptions {
  // PRA only: each anchor above the lowest tier loads the previous tier's
  // anchor at scale 2 instead of running a full search.
  bool pra_cross_resolution = false;
};

// Anchor/dependent DAG. Nodes are stored in a topological order: by tile,
// then tier, with each tier's anchor first.
struct EncodePlan {
  Variant variant = Variant::kErpDefault;
  AnchorPolicy anchor = AnchorPolicy::kHq;
  Ladder ladder;
  int tiles = 1;
  PlanOptions options;
  std::vector<EncodeNode> nodes;
  std::vector<EncodeEdge> edges;

  std::string tile_name(int tile) const;
  std::string node_id(size_t index) const;  // "<tile>_<W>x<H>_<q>"
  std::string analysis_file_name(size_t index) const;
  std::string bitstream_file_name(size_t index) const;
  std::optional<size_t> find(const NodeKey& key) const;
  const Resolution& resolution_of(size_t index) const {
    return ladder.resolutions[nodes[index].key.resolution];
  }
  // Hops from the node to its FullRdo root.
  int reuse_depth(size_t index) const;
};

EncodePlan build_plan(Variant variant, const Ladder& ladder,
                      AnchorPolicy anchor, const PlanOptions& options = {});

enum class ViolationKind {
  kCycle,
  kSingleSource,
  kScaleFactor,
  kTileIsolation,
  kStructure,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

std::vector<Violation> validate_plan(const EncodePlan& plan);

// Number of nodes with save_analysis, per tile.
std::vector<int> plan_storage_count(const EncodePlan& plan);

nlohmann::json plan_to_json(const EncodePlan& plan);
EncodePlan plan_from_json(const nlohmann::json& j);

nlohmann::json ladder_to_json(const Ladder& ladder);
Ladder ladder_from_json(const nlohmann::json& j);

}  // namespace ladder360

#endif  // LADDER360_PLANNER_HPP
