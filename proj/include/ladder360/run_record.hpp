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

#ifndef LADDER360_RUN_RECORD_HPP
#define LADDER360_RUN_RECORD_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ladder360/executor.hpp"
#include "ladder360/planner.hpp"

namespace ladder360 {

inline constexpr char kRunRecordSchema[] = "ladder360.run/1";

struct NodeRecord {
  std::string id;
  double bitrate_kbps = 0.0;
  double time_s = 0.0;
  std::string bitstream;  // relative to the run directory
  uint64_t bitstream_bytes = 0;
  std::string checksum;   // sha256 of the bitstream
  std::optional<std::string> codec_tag;
  std::optional<double> model_quality;
  // Per-face scores for cubemap tiles; logged only.
  std::optional<double> face_psnr_y;
  std::optional<double> face_wspsnr_y;
};

// One ladder rung in the ERP domain: all tiles of one (tier, quality).
struct RepresentationRecord {
  int tier = 0;
  int quality = 0;
  double rate_kbps = 0.0;  // sum over tiles
  double time_s = 0.0;     // sum over tiles
  double psnr_y = 0.0;
  double wspsnr_y = 0.0;
};

// Everything needed to recompute plots and comparison tables for one run.
struct RunRecord {
  std::string schema = kRunRecordSchema;
  std::string sequence;
  size_t frames = 0;
  Rational fps;
  Ladder erp_ladder;   // quality is always measured on these tiers
  EncodePlan plan;     // tile-domain ladder lives in plan.ladder
  std::map<std::string, NodeRecord> nodes;  // by node id
  std::vector<RepresentationRecord> representations;
  TimingLedger ledger;
  std::vector<std::string> failures;
  nlohmann::json environment;

  bool complete() const { return failures.empty(); }
  // Per-node times of one tier, all tiles, in plan order.
  std::vector<double> tier_times(int tier) const;
  // Rebuilds executor results from the node records (paths under run_dir).
  std::map<size_t, EncodeResult> results(const std::filesystem::path& run_dir) const;
};

nlohmann::json run_record_to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);

RunRecord load_run_record(const std::filesystem::path& path);
void save_run_record(const RunRecord& record, const std::filesystem::path& path);

// Lower-case hex sha256 of a file's contents.
std::string file_sha256(const std::filesystem::path& path);

}  // namespace ladder360

#endif  // LADDER360_RUN_RECORD_HPP
