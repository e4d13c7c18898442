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

#include <sys/stat.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

#include "doctest.h"
#include "ladder360/error.hpp"
#include "ladder360/executor.hpp"
#include "ladder360_fixtures/oracles.hpp"
#include "test_util.hpp"

using namespace ladder360;
namespace fx = ladder360::fixtures;
using ladder360::testing::TempDir;

namespace {

Ladder tiny_ladder() { return Ladder::halving(64, 32, 3, kReferenceQualities); }

InputMap tiny_inputs(const EncodePlan& plan, int frames = 2) {
  InputMap in;
  for (int t = 0; t < plan.tiles; ++t) {
    for (size_t r = 0; r < plan.ladder.resolutions.size(); ++r) {
      const Resolution& res = plan.ladder.resolutions[r];
      const bool cmp = is_cubemap(plan.variant);
      in[{t, static_cast<int>(r)}] = {
          std::make_shared<const VideoSequence>(ladder360::testing::constant_sequence(
              res.width, res.height, frames, 100,
              cmp ? Projection::kCmpFace : Projection::kErp,
              cmp ? std::optional<FaceId>(kAllFaces[t]) : std::nullopt)),
          {}};
    }
  }
  return in;
}

EncodeJob job_for(const EncodePlan& plan, size_t i, const InputMap& inputs) {
  EncodeJob j;
  j.node_index = i;
  j.node_id = plan.node_id(i);
  j.node = plan.nodes[i];
  j.resolution = plan.resolution_of(i);
  j.reuse_depth = plan.reuse_depth(i);
  j.input = inputs.at({j.node.key.tile, j.node.key.resolution}).sequence;
  j.input_path = "in.y4m";
  j.bitstream_path = "out.hevc";
  j.recon_path = "recon.y4m";
  if (j.node.source) j.analysis_in = "src.analysis";
  if (j.node.save_analysis) j.analysis_out = "dst.analysis";
  return j;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string after(const std::vector<std::string>& v, const std::string& flag) {
  const auto it = std::find(v.begin(), v.end(), flag);
  return it == v.end() || it + 1 == v.end() ? "" : *(it + 1);
}

// Wraps the simulated backend, recording concurrency and artifact presence.
class ProbeBackend : public EncoderBackend {
 public:
  explicit ProbeBackend(std::set<std::string> fail = {}) : fail_(std::move(fail)) {}
  std::string name() const override { return "probe"; }
  nlohmann::json describe() const override { return {{"backend", "probe"}}; }
  EncodeResult encode(const EncodeJob& job) override {
    const int now = ++active_;
    int seen = peak_.load();
    while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
    }
    if (job.analysis_in && !std::filesystem::exists(*job.analysis_in)) missing_ = true;
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
    --active_;
    if (fail_.count(job.node_id)) throw_runtime("forced failure");
    return inner_.encode(job);
  }
  int peak() const { return peak_; }
  bool saw_missing_artifact() const { return missing_; }

 private:
  SimulatedBackend inner_;
  std::set<std::string> fail_;
  std::atomic<int> active_{0};
  std::atomic<int> peak_{0};
  std::atomic<bool> missing_{false};
};

}  // namespace

TEST_SUITE("executor") {

TEST_CASE("cost model closed forms") {
  const CostModel m;
  const fx::CostParams p;
  const Resolution hd{2048, 1024, "HD"};
  for (int q : kReferenceQualities) {
    CHECK(m.full_time(hd, 3, q) == doctest::Approx(fx::oracle_time(p, 2048, 1024, 3, q, false)).epsilon(1e-15));
    CHECK(m.rate(hd, q) == doctest::Approx(fx::oracle_rate(p, 2048, 1024, q)).epsilon(1e-15));
    CHECK(m.quality(q, 2) == doctest::Approx(fx::oracle_quality(p, q, 2)).epsilon(1e-15));
  }
  CostModel bad;
  bad.rho = 1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = {};
  bad.kappa = -1;
  CHECK_THROWS_AS(SimulatedBackend{bad}, Error);
}

TEST_CASE("simulated encode") {
  const EncodePlan plan = build_plan(Variant::kErpCrc, tiny_ladder(), AnchorPolicy::kHq);
  const InputMap inputs = tiny_inputs(plan, 3);
  const CostModel m;
  const size_t anchor = *plan.find({0, 1, 22});
  const size_t top = *plan.find({0, 2, 37});
  const EncodeResult a = simulated_encode(job_for(plan, anchor, inputs), m);
  const EncodeResult b = simulated_encode(job_for(plan, anchor, inputs), m);
  CHECK(a.time_s == b.time_s);
  CHECK(a.bitrate_kbps == b.bitrate_kbps);
  CHECK(a.model_quality == b.model_quality);
  // Load-mode time is rho times the full-search time.
  const Resolution r4k = plan.resolution_of(anchor);
  CHECK(a.time_s == m.rho * m.full_time(r4k, 3, 22));
  // 8K dependent of the cascade sits two hops from the full search.
  const EncodeResult t = simulated_encode(job_for(plan, top, inputs), m);
  CHECK(*t.model_quality == m.quality(37, 0) - 2 * m.epsilon);
  CHECK(t.bitrate_kbps == m.rate(plan.resolution_of(top), 37));
}

TEST_CASE("x265 argument vectors") {
  const EncodePlan plan = build_plan(Variant::kErpCrc, Ladder::reference_erp(), AnchorPolicy::kHq);
  const InputMap inputs = tiny_inputs(build_plan(Variant::kErpCrc, tiny_ladder(), AnchorPolicy::kHq));
  auto job = [&](NodeKey k) { return job_for(plan, *plan.find(k), inputs); };

  const auto save = x265_adapter_command(job({0, 0, 22}), {});
  CHECK(after(save, "--preset") == "medium");
  CHECK(after(save, "--keyint") == "30");
  CHECK(after(save, "--qp") == "22");
  CHECK(after(save, "--analysis-save") == "dst.analysis");
  CHECK(after(save, "--analysis-save-reuse-level") == "10");
  CHECK_FALSE(contains(save, "--analysis-load"));
  CHECK_FALSE(contains(save, "--refine-intra"));
  CHECK_FALSE(contains(save, "--scale-factor"));
  CHECK(after(save, "--pools") == "4");
  CHECK(after(save, "--frame-threads") == "1");

  const auto load = x265_adapter_command(job({0, 0, 37}), {});
  CHECK(after(load, "--analysis-load") == "src.analysis");
  CHECK(after(load, "--analysis-load-reuse-level") == "10");
  CHECK(after(load, "--refine-intra") == "4");
  CHECK(after(load, "--refine-inter") == "2");
  CHECK(after(load, "--refine-mv") == "1");
  CHECK_FALSE(contains(load, "--scale-factor"));
  CHECK_FALSE(contains(load, "--analysis-save"));

  const auto cross = x265_adapter_command(job({0, 1, 22}), {});
  CHECK(after(cross, "--scale-factor") == "2");
  CHECK(contains(cross, "--analysis-save"));

  EncodeJob crf = job({0, 0, 27});
  crf.mode = LadderMode::kCrf;
  CHECK(after(x265_adapter_command(crf, {}), "--crf") == "27");
  CHECK_FALSE(contains(x265_adapter_command(crf, {}), "--qp"));

  EncodeJob broken = job({0, 0, 27});
  broken.analysis_in.reset();
  CHECK_THROWS_AS(x265_adapter_command(broken, {}), Error);
  // Deterministic.
  CHECK(x265_adapter_command(job({0, 2, 42}), {}) == x265_adapter_command(job({0, 2, 42}), {}));
}

TEST_CASE("keyint follows the frame rate") {
  const EncodePlan plan = build_plan(Variant::kErpDefault, tiny_ladder(), AnchorPolicy::kHq);
  InputMap inputs = tiny_inputs(plan);
  EncodeJob j = job_for(plan, 0, inputs);
  j.input = std::make_shared<const VideoSequence>(
      VideoSequence(16, 8, {30000, 1001}, Projection::kErp, {FrameBuffer::filled(16, 8, 1)}));
  CHECK(after(x265_adapter_command(j, {}), "--keyint") == "30");
}

TEST_CASE("codec tags") {
  CHECK(codec_tag_from_log("x265 [info]: HEVC encoder ... Main profile, Level-5.1") == std::nullopt);
  CHECK(codec_tag_from_log("x265 [info]: profile Main, level 5.1 (Main tier)") == "hvc1.1.6.L153.90");
  CHECK(codec_tag_from_log("profile Main, level 4 (Main tier)") == "hvc1.1.6.L120.90");
  CHECK(codec_tag_from_log("level 6.2") == "hvc1.1.6.L186.90");
}

TEST_CASE("serial run: makespan equals the sum of node times") {
  TempDir dir("exec_serial");
  for (Variant v : {Variant::kErpDefault, Variant::kErpCrc, Variant::kErpPra, Variant::kCmpPra}) {
    const Ladder l = is_cubemap(v) ? tiny_ladder().faces() : tiny_ladder();
    const EncodePlan plan = build_plan(v, l, AnchorPolicy::kMq);
    SimulatedBackend backend;
    RunOptions o;
    o.work_dir = dir.path() / variant_name(v);
    const RunOutcome out = run_plan(plan, backend, tiny_inputs(plan), o);
    CHECK(out.complete());
    CHECK(out.results.size() == plan.nodes.size());
    CHECK(out.ledger.makespan == out.ledger.serial_sum);
    double sum = 0.0;
    for (double t : out.ledger.node_times) sum += t;
    CHECK(out.ledger.serial_sum == sum);
    CHECK_FALSE(std::filesystem::exists(o.work_dir / "analysis"));
    CHECK(std::filesystem::exists(o.work_dir / "bitstreams" / plan.bitstream_file_name(0)));
  }
}

TEST_CASE("wide run of an edge-free plan: makespan is the slowest node") {
  TempDir dir("exec_wide");
  const EncodePlan plan = build_plan(Variant::kErpDefault, tiny_ladder(), AnchorPolicy::kHq);
  SimulatedBackend backend;
  RunOptions o;
  o.work_dir = dir.path();
  o.worker_limit = 15;
  const RunOutcome out = run_plan(plan, backend, tiny_inputs(plan), o);
  CHECK(out.ledger.makespan == *std::max_element(out.ledger.node_times.begin(),
                                                 out.ledger.node_times.end()));
  CHECK(out.ledger.makespan <= out.ledger.serial_sum);
}

TEST_CASE("ledger invariants and per-tier groups") {
  TempDir dir("exec_ledger");
  const EncodePlan plan = build_plan(Variant::kErpCrc, tiny_ladder(), AnchorPolicy::kHq);
  SimulatedBackend backend;
  for (int w : {1, 2, 3, 8}) {
    RunOptions o;
    o.work_dir = dir.path() / std::to_string(w);
    o.worker_limit = w;
    const RunOutcome out = run_plan(plan, backend, tiny_inputs(plan), o);
    const TimingLedger& l = out.ledger;
    CHECK(l.makespan <= l.serial_sum);
    CHECK(l.makespan >= *std::max_element(l.node_times.begin(), l.node_times.end()));
    REQUIRE(l.per_tier.size() == 3);
    double tiers = 0.0;
    for (const TierTiming& t : l.per_tier) tiers += t.serial_s;
    CHECK(tiers == doctest::Approx(l.serial_sum).epsilon(1e-15));
    // Dependents never start before their source finishes.
    for (size_t i = 0; i < plan.nodes.size(); ++i) {
      if (plan.nodes[i].source) {
        CHECK(l.schedule[i].start_s >= l.schedule[*plan.nodes[i].source].finish_s);
      }
    }
    // Identical runs give identical ledgers.
    RunOptions o2 = o;
    o2.work_dir = dir.path() / (std::to_string(w) + "b");
    CHECK(ledger_to_json(run_plan(plan, backend, tiny_inputs(plan), o2).ledger).dump() ==
          ledger_to_json(l).dump());
  }
}

TEST_CASE("bounded parallelism and artifact ordering") {
  TempDir dir("exec_probe");
  const EncodePlan plan = build_plan(Variant::kCmpPra, tiny_ladder().faces(), AnchorPolicy::kHq);
  for (int w : {1, 3, 6}) {
    ProbeBackend backend;
    RunOptions o;
    o.work_dir = dir.path() / std::to_string(w);
    o.worker_limit = w;
    const RunOutcome out = run_plan(plan, backend, tiny_inputs(plan), o);
    CHECK(out.complete());
    CHECK(backend.peak() <= w);
    CHECK_FALSE(backend.saw_missing_artifact());
  }
}

TEST_CASE("a failing node only takes down its dependents") {
  TempDir dir("exec_fail");
  const EncodePlan plan = build_plan(Variant::kErpPra, tiny_ladder(), AnchorPolicy::kHq);
  ProbeBackend backend({plan.node_id(*plan.find({0, 1, 22}))});
  RunOptions o;
  o.work_dir = dir.path();
  o.worker_limit = 2;
  const RunOutcome out = run_plan(plan, backend, tiny_inputs(plan), o);
  CHECK_FALSE(out.complete());
  CHECK(out.failures.size() == 5);
  CHECK(out.results.size() == 10);
  CHECK_FALSE(out.failures[0].upstream);
  CHECK(out.failures[0].diagnostic.find("erp_32x16_22") != std::string::npos);
  CHECK(out.failures[0].diagnostic.find("forced failure") != std::string::npos);
  for (size_t k = 1; k < out.failures.size(); ++k) CHECK(out.failures[k].upstream);
  CHECK(out.ledger.node_times[*plan.find({0, 1, 27})] == 0.0);
}

TEST_CASE("completed nodes are not re-run") {
  TempDir dir("exec_resume");
  const EncodePlan plan = build_plan(Variant::kErpCrc, tiny_ladder(), AnchorPolicy::kHq);
  SimulatedBackend backend;
  RunOptions o;
  o.work_dir = dir.path();
  o.keep_analysis = true;
  const RunOutcome first = run_plan(plan, backend, tiny_inputs(plan), o);
  CHECK(std::filesystem::exists(dir.path() / "analysis" / plan.analysis_file_name(0)));
  ProbeBackend probe({plan.node_id(0)});  // would fail if the anchor re-ran
  o.completed = {{0, first.results.at(0)}};
  const RunOutcome second = run_plan(plan, probe, tiny_inputs(plan), o);
  CHECK(second.complete());
  CHECK(ledger_to_json(second.ledger).dump() == ledger_to_json(first.ledger).dump());
}

TEST_CASE("run_plan preconditions") {
  TempDir dir("exec_pre");
  const EncodePlan plan = build_plan(Variant::kErpPra, tiny_ladder(), AnchorPolicy::kHq);
  SimulatedBackend backend;
  RunOptions o;
  o.work_dir = dir.path();
  o.worker_limit = 0;
  CHECK_THROWS_AS(run_plan(plan, backend, tiny_inputs(plan), o), Error);
  o.worker_limit = 1;
  InputMap partial = tiny_inputs(plan);
  partial.erase({0, 2});
  CHECK_THROWS_AS(run_plan(plan, backend, partial, o), Error);
  EncodePlan broken = plan;
  broken.nodes[1].source.reset();
  CHECK_THROWS_AS(run_plan(broken, backend, tiny_inputs(plan), o), Error);
}

TEST_CASE("missing analysis artifact is a runtime error") {
  const EncodePlan plan = build_plan(Variant::kErpPra, tiny_ladder(), AnchorPolicy::kHq);
  const InputMap inputs = tiny_inputs(plan);
  TempDir dir("exec_missing");
  EncodeJob j = job_for(plan, 1, inputs);
  j.analysis_in = dir / "nope.analysis";
  j.bitstream_path = dir / "x.hevc";
  SimulatedBackend backend;
  try {
    backend.encode(j);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kRuntime);
  }
}

TEST_CASE("encoder lookup") {
  TempDir dir("exec_locate");
  const auto bin = dir / "x265";
  std::ofstream(bin) << "#!/bin/sh\nexit 0\n";
  ::chmod(bin.c_str(), 0755);
  CHECK(locate_encoder(bin.string()) == bin);
  CHECK(locate_encoder((dir / "missing").string()) == std::nullopt);
  ::setenv(kEncoderEnvVar, bin.c_str(), 1);
  CHECK(locate_encoder(std::nullopt) == bin);
  ::setenv(kEncoderEnvVar, (dir / "missing").c_str(), 1);
  CHECK(locate_encoder(std::nullopt) == std::nullopt);
  ::unsetenv(kEncoderEnvVar);
  CHECK(default_worker_limit() >= 1);
}

TEST_CASE("x265 backend drives a subprocess") {
  // Stand-in encoder honouring the adapter's output flags.
  TempDir dir("exec_fake");
  const auto bin = dir / "fake-x265";
  std::ofstream(bin) << R"SH(#!/bin/sh
out=""; recon=""; save=""; input=""
while [ $# -gt 0 ]; do
  case "$1" in
    --output) out="$2"; shift ;;
    --recon) recon="$2"; shift ;;
    --analysis-save) save="$2"; shift ;;
    --input) input="$2"; shift ;;
  esac
  shift
done
echo "x265 [info]: profile Main, level 4.1 (Main tier)" >&2
printf 'bitstream-bytes-0123456789' > "$out"
[ -n "$save" ] && printf 'analysis' > "$save"
[ -n "$recon" ] && cp "$input" "$recon"
exit 0
)SH";
  ::chmod(bin.c_str(), 0755);
  const EncodePlan plan = build_plan(Variant::kErpPra, tiny_ladder(), AnchorPolicy::kHq);
  InputMap inputs = tiny_inputs(plan);
  for (auto& [key, in] : inputs) {
    in.path = dir / ("in_" + std::to_string(key.second) + ".y4m");
    write_y4m(*in.sequence, in.path);
  }
  X265Backend backend(bin);
  RunOptions o;
  o.work_dir = dir / "run";
  o.worker_limit = 2;
  const RunOutcome out = run_plan(plan, backend, inputs, o);
  REQUIRE(out.complete());
  const EncodeResult& r = out.results.at(0);
  CHECK(r.codec_tag == "hvc1.1.6.L123.90");
  // 26 bytes, 2 frames at 30 fps.
  CHECK(r.bitrate_kbps == doctest::Approx(26 * 8 * 30.0 / 2 / 1000));
  REQUIRE(r.decoded_preview);
  CHECK(*r.decoded_preview == *inputs.at({0, 0}).sequence);

  // Non-zero exit status surfaces as a node failure with the log tail.
  const auto bad = dir / "bad-x265";
  std::ofstream(bad) << "#!/bin/sh\necho 'x265 [error]: boom' >&2\nexit 3\n";
  ::chmod(bad.c_str(), 0755);
  X265Backend failing(bad);
  o.work_dir = dir / "run2";
  const RunOutcome f = run_plan(plan, failing, inputs, o);
  CHECK(f.failures.size() == plan.nodes.size());
  CHECK(f.failures[0].diagnostic.find("boom") != std::string::npos);
}

}  // TEST_SUITE
