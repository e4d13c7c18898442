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

#ifndef LADDER360_PIPELINE_HPP
#define LADDER360_PIPELINE_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ladder360/error.hpp"
#include "ladder360/executor.hpp"
#include "ladder360/planner.hpp"
#include "ladder360/run_record.hpp"
#include "ladder360/sphere.hpp"

namespace ladder360 {

enum class BackendKind { kSimulated, kX265 };

struct PipelineConfig {
  std::filesystem::path input;
  std::optional<int> width;   // headerless input only
  std::optional<int> height;
  Rational fps;
  std::string sequence;       // defaults to the input file stem

  Variant variant = Variant::kErpDefault;
  AnchorPolicy anchor = AnchorPolicy::kHq;
  bool pra_cross_resolution = false;

  // ERP tiers; when unset, `tiers` tiers halving down from the input size.
  std::optional<Ladder> ladder;
  int tiers = 3;
  std::vector<int> qualities = kReferenceQualities;
  LadderMode mode = LadderMode::kFixedQp;

  BackendKind backend = BackendKind::kSimulated;
  CostModel cost_model;
  std::optional<std::string> encoder_path;
  X265Settings x265;

  std::filesystem::path output_dir;
  int worker_limit = 0;  // 0: default_worker_limit()
  bool keep_analysis = false;

  ResampleFilter ladder_filter = ResampleFilter::kLanczos3;
  ResampleFilter sphere_filter = ResampleFilter::kBilinear;
};

// key = value lines; '#' starts a comment; values are bare words, quoted
// strings or [a, b, ...] lists. Unknown keys are rejected.
PipelineConfig parse_config(const std::string& text,
                            const std::filesystem::path& base_dir = {});
PipelineConfig load_config_file(const std::filesystem::path& path);

// Applies a single key/value pair with the config-file key names.
void apply_config_value(PipelineConfig& config, const std::string& key,
                        const std::string& value,
                        const std::filesystem::path& base_dir = {});

// Error raised by a pipeline stage; what() is prefixed with "[stage]".
class StageError : public Error {
 public:
  StageError(const std::string& stage, const Error& cause)
      : Error(cause.kind(), "[" + stage + "] " + cause.what()), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// convert (cubemap variants) -> resize tiers -> plan -> encode -> evaluate ->
// package -> persist. Writes plan.json, manifest.mpd and run.json into the
// output directory and returns the run record. Completed nodes from an
// earlier run in the same directory are reused when their bitstreams verify.
RunRecord cmd_pipeline(const PipelineConfig& config);

// File name of the ERP reference / tile input for a tier, e.g.
// "erp_2048x1024.y4m".
std::string tile_input_name(const std::string& tile, const Resolution& r);

}  // namespace ladder360

#endif  // LADDER360_PIPELINE_HPP
