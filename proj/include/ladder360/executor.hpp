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

#ifndef LADDER360_EXECUTOR_HPP
#define LADDER360_EXECUTOR_HPP

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ladder360/media_io.hpp"
#include "ladder360/planner.hpp"

namespace ladder360 {

// Everything a backend needs to encode one plan node.
struct EncodeJob {
  size_t node_index = 0;
  std::string node_id;
  EncodeNode node;
  Resolution resolution;
  LadderMode mode = LadderMode::kFixedQp;
  int reuse_depth = 0;
  std::shared_ptr<const VideoSequence> input;
  std::filesystem::path input_path;  // on-disk copy of `input` (Y4M)
  std::filesystem::path bitstream_path;
  std::filesystem::path recon_path;
  std::optional<std::filesystem::path> analysis_in;
  std::optional<std::filesystem::path> analysis_out;
};

struct EncodeResult {
  std::filesystem::path bitstream_path;
  double bitrate_kbps = 0.0;
  double time_s = 0.0;
  std::optional<std::filesystem::path> analysis_out_path;
  // Reconstructed pictures, when the backend can provide them.
  std::shared_ptr<const VideoSequence> decoded_preview;
  // Quality reported by a modelled backend instead of being measured.
  std::optional<double> model_quality;
  std::optional<std::string> codec_tag;
};

// Must be safely callable from several worker threads at once.
class EncoderBackend {
 public:
  virtual ~EncoderBackend() = default;
  virtual std::string name() const = 0;
  virtual EncodeResult encode(const EncodeJob& job) = 0;
  // Environment notes for run records; must be deterministic.
  virtual nlohmann::json describe() const = 0;
};

// Deterministic stand-in for a real encoder.
//   time    = kappa * megapixels * frames * (1 + (51 - q) / 51), times rho
//             for analysis-load nodes
//   rate    = r0 * megapixels * 2^(-q / 6)                     [kbps]
//   quality = a - b * q - epsilon * reuse_depth                [dB]
struct CostModel {
  double kappa = 1.0;      // seconds per megapixel-frame
  double rho = 0.5;        // load-mode time ratio, in (0, 1)
  double r0 = 40000.0;     // kbps per megapixel at q = 0
  double quality_a = 50.0;
  double quality_b = 0.5;
  double epsilon = 0.1;    // dB lost per reuse hop

  void validate() const;
  double full_time(const Resolution& r, size_t frames, int q) const;
  double rate(const Resolution& r, int q) const;
  double quality(int q, int reuse_depth) const;
};

EncodeResult simulated_encode(const EncodeJob& job, const CostModel& model);

class SimulatedBackend : public EncoderBackend {
 public:
  explicit SimulatedBackend(CostModel model = {});
  std::string name() const override { return "simulated"; }
  EncodeResult encode(const EncodeJob& job) override;
  nlohmann::json describe() const override;
  const CostModel& model() const { return model_; }

 private:
  CostModel model_;
};

struct X265Settings {
  std::string preset = "medium";
  int threads = 4;
  bool write_recon = true;
};

// Arguments after the program name. Thread flags map "4 encoder threads" to a
// single 4-thread pool without frame parallelism.
std::vector<std::string> x265_adapter_command(const EncodeJob& job,
                                              const X265Settings& settings);

// x265 prints "level 5.1"; the MPD codecs string encodes it as L153.
std::optional<std::string> codec_tag_from_log(const std::string& log);

inline constexpr char kDefaultCodecTag[] = "hvc1.1.6.L153.90";
inline constexpr char kEncoderEnvVar[] = "LADDER360_X265";

// --encoder-path, then $LADDER360_X265, then x265 on PATH.
std::optional<std::filesystem::path> locate_encoder(
    const std::optional<std::string>& flag);

class X265Backend : public EncoderBackend {
 public:
  X265Backend(std::filesystem::path binary, X265Settings settings = {});
  std::string name() const override { return "x265"; }
  EncodeResult encode(const EncodeJob& job) override;
  nlohmann::json describe() const override;

 private:
  std::filesystem::path binary_;
  X265Settings settings_;
};

// Inputs per (tile, tier index).
struct TileInput {
  std::shared_ptr<const VideoSequence> sequence;
  std::filesystem::path path;
};
using InputMap = std::map<std::pair<int, int>, TileInput>;

struct RunOptions {
  int worker_limit = 1;
  std::filesystem::path work_dir;
  bool keep_analysis = false;
  // Results carried over from an earlier run; these nodes are not re-encoded.
  std::map<size_t, EncodeResult> completed;
};

// hardware threads / 4 encoder threads, at least 1.
int default_worker_limit();

struct TierTiming {
  std::string label;
  double serial_s = 0.0;
  double max_s = 0.0;
};

struct ScheduleSlot {
  double start_s = 0.0;
  double finish_s = 0.0;
};

// Per-node encode times with a list schedule replayed over them: the lowest
// ready node index starts whenever one of worker_limit workers is idle.
struct TimingLedger {
  std::vector<double> node_times;       // by node index, 0 for failed nodes
  std::vector<ScheduleSlot> schedule;   // by node index
  double serial_sum = 0.0;
  double makespan = 0.0;
  std::vector<TierTiming> per_tier;
  int worker_limit = 1;
};

struct NodeFailure {
  size_t node = 0;
  std::string diagnostic;
  bool upstream = false;  // skipped because its analysis source failed
};

struct RunOutcome {
  std::map<size_t, EncodeResult> results;
  std::vector<NodeFailure> failures;
  TimingLedger ledger;
  double wall_clock_s = 0.0;

  bool complete() const { return failures.empty(); }
};

RunOutcome run_plan(const EncodePlan& plan, EncoderBackend& backend,
                    const InputMap& inputs, const RunOptions& options);

// Replays the list schedule for given per-node times.
TimingLedger build_ledger(const EncodePlan& plan,
                          const std::vector<double>& node_times,
                          const std::vector<bool>& executed, int worker_limit);

nlohmann::json ledger_to_json(const TimingLedger& ledger);

}  // namespace ladder360

#endif  // LADDER360_EXECUTOR_HPP
