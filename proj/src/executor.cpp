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

#include "ladder360/executor.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <unistd.h>
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <mutex>
#include <numeric>
#include <queue>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "ladder360/error.hpp"

extern char** environ;

namespace ladder360 {

namespace {

double megapixels(const Resolution& r) {
  return static_cast<double>(r.width) * r.height / 1e6;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_runtime("cannot create " + path.string());
  out << text;
  if (!out) throw_runtime("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string quality_flag(LadderMode mode) {
  return mode == LadderMode::kFixedQp ? "--qp" : "--crf";
}

struct ProcessResult {
  int exit_code = -1;
  double seconds = 0.0;
};

// Runs binary with args, stdout and stderr appended to log_path.
ProcessResult run_process(const std::filesystem::path& binary,
                          const std::vector<std::string>& args,
                          const std::filesystem::path& log_path) {
  std::vector<std::string> argv_store;
  argv_store.push_back(binary.string());
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 1, log_path.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, 1, 2);

  const auto start = std::chrono::steady_clock::now();
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, binary.c_str(), &actions, nullptr,
                             argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw_runtime("cannot start " + binary.string() + ": " +
                  std::strerror(rc));
  }
  int status = 0;
  if (waitpid(pid, &status, 0) < 0) {
    throw_runtime("waitpid failed for " + binary.string());
  }
  ProcessResult r;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count();
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return r;
}

}  // namespace

// -----------------------------------------------------------------------------
// Simulated backend

void CostModel::validate() const {
  if (!(kappa > 0) || !(r0 > 0) || !(quality_a > 0) || !(quality_b > 0) ||
      !(epsilon >= 0)) {
    throw_validation("cost model parameters must be positive");
  }
  if (!(rho > 0.0 && rho < 1.0)) {
    throw_validation("cost model load ratio must lie in (0, 1)");
  }
}

double CostModel::full_time(const Resolution& r, size_t frames, int q) const {
  return kappa * megapixels(r) * static_cast<double>(frames) *
         (1.0 + (51.0 - q) / 51.0);
}

double CostModel::rate(const Resolution& r, int q) const {
  return r0 * megapixels(r) * std::pow(2.0, -q / 6.0);
}

double CostModel::quality(int q, int reuse_depth) const {
  return quality_a - quality_b * q - epsilon * reuse_depth;
}

EncodeResult simulated_encode(const EncodeJob& job, const CostModel& model) {
  model.validate();
  if (!job.input || job.input->empty()) {
    throw_validation(job.node_id + ": simulated encode needs at least one frame");
  }
  const int q = job.node.key.quality;
  double tau = model.full_time(job.resolution, job.input->frame_count(), q);
  if (job.node.mode == NodeMode::kAnalysisLoad) tau *= model.rho;
  EncodeResult r;
  r.bitstream_path = job.bitstream_path;
  r.time_s = tau;
  r.bitrate_kbps = model.rate(job.resolution, q);
  r.model_quality = model.quality(q, job.reuse_depth);
  r.decoded_preview = job.input;
  r.analysis_out_path = job.analysis_out;
  return r;
}

SimulatedBackend::SimulatedBackend(CostModel model) : model_(model) {
  model_.validate();
}

EncodeResult SimulatedBackend::encode(const EncodeJob& job) {
  if (job.analysis_in && !std::filesystem::exists(*job.analysis_in)) {
    throw_runtime("missing analysis artifact " + job.analysis_in->string());
  }
  EncodeResult r = simulated_encode(job, model_);
  // Placeholder files keep artifact counting and resume checks meaningful.
  std::ostringstream bs;
  bs.precision(17);
  bs << "simulated " << job.node_id << " rate_kbps=" << r.bitrate_kbps
     << " frames=" << job.input->frame_count() << "\n";
  write_text(job.bitstream_path, bs.str());
  if (job.analysis_out) {
    write_text(*job.analysis_out, "simulated analysis " + job.node_id + "\n");
  }
  return r;
}

nlohmann::json SimulatedBackend::describe() const {
  return {{"backend", "simulated"},
          {"cost_model",
           {{"kappa", model_.kappa},
            {"rho", model_.rho},
            {"r0", model_.r0},
            {"quality_a", model_.quality_a},
            {"quality_b", model_.quality_b},
            {"epsilon", model_.epsilon}}}};
}

// -----------------------------------------------------------------------------
// x265

std::vector<std::string> x265_adapter_command(const EncodeJob& job,
                                              const X265Settings& settings) {
  if (!job.input) throw_validation(job.node_id + ": no input sequence");
  const Rational fps = job.input->fps();
  const long keyint = std::max(1L, std::lround(fps.value()));
  std::vector<std::string> a = {
      "--input", job.input_path.string(),
      "--output", job.bitstream_path.string(),
      "--preset", settings.preset,
      "--keyint", std::to_string(keyint),
      quality_flag(job.mode), std::to_string(job.node.key.quality),
      "--pools", std::to_string(settings.threads),
      "--frame-threads", "1",
      "--no-progress",
  };
  if (settings.write_recon) {
    a.insert(a.end(), {"--recon", job.recon_path.string()});
  }
  switch (job.node.mode) {
    case NodeMode::kFullRdo:
      if (job.node.source) {
        throw_validation(job.node_id + ": full-search node with a source");
      }
      break;
    case NodeMode::kAnalysisLoad:
      if (!job.analysis_in) {
        throw_validation(job.node_id + ": analysis-load node without input");
      }
      a.insert(a.end(), {"--analysis-load", job.analysis_in->string(),
                         "--analysis-load-reuse-level", "10",
                         "--refine-intra", "4", "--refine-inter", "2",
                         "--refine-mv", "1"});
      if (job.node.scale_factor == 2) a.insert(a.end(), {"--scale-factor", "2"});
      break;
    default:
      throw_validation(job.node_id + ": unsupported node mode");
  }
  if (job.node.save_analysis) {
    if (!job.analysis_out) {
      throw_validation(job.node_id + ": saving node without an output path");
    }
    a.insert(a.end(), {"--analysis-save", job.analysis_out->string(),
                       "--analysis-save-reuse-level", "10"});
  }
  return a;
}

std::optional<std::string> codec_tag_from_log(const std::string& log) {
  static const std::regex kLevel(R"(level (\d)(?:\.(\d))?)");
  std::smatch m;
  if (!std::regex_search(log, m, kLevel)) return std::nullopt;
  const int major = std::stoi(m[1]);
  const int minor = m[2].matched ? std::stoi(m[2]) : 0;
  return "hvc1.1.6.L" + std::to_string(30 * major + 3 * minor) + ".90";
}

std::optional<std::filesystem::path> locate_encoder(
    const std::optional<std::string>& flag) {
  auto usable = [](const std::filesystem::path& p) {
    std::error_code ec;
    return std::filesystem::is_regular_file(p, ec) && access(p.c_str(), X_OK) == 0;
  };
  if (flag) {
    if (usable(*flag)) return std::filesystem::path(*flag);
    return std::nullopt;
  }
  if (const char* env = std::getenv(kEncoderEnvVar); env && *env) {
    if (usable(env)) return std::filesystem::path(env);
    return std::nullopt;
  }
  if (const char* path = std::getenv("PATH")) {
    std::stringstream dirs(path);
    std::string dir;
    while (std::getline(dirs, dir, ':')) {
      const std::filesystem::path candidate = std::filesystem::path(dir) / "x265";
      if (!dir.empty() && usable(candidate)) return candidate;
    }
  }
  return std::nullopt;
}

X265Backend::X265Backend(std::filesystem::path binary, X265Settings settings)
    : binary_(std::move(binary)), settings_(std::move(settings)) {}

EncodeResult X265Backend::encode(const EncodeJob& job) {
  if (job.analysis_in && !std::filesystem::exists(*job.analysis_in)) {
    throw_runtime("missing analysis artifact " + job.analysis_in->string());
  }
  const std::vector<std::string> args = x265_adapter_command(job, settings_);
  std::filesystem::path log = job.bitstream_path;
  log.replace_extension(".log");
  const ProcessResult pr = run_process(binary_, args, log);
  const std::string text = read_text(log);
  if (pr.exit_code != 0) {
    std::string tail = text.size() > 400 ? text.substr(text.size() - 400) : text;
    throw_runtime("x265 exited with status " + std::to_string(pr.exit_code) +
                  ": " + tail);
  }
  std::error_code ec;
  const uintmax_t bytes = std::filesystem::file_size(job.bitstream_path, ec);
  if (ec || bytes == 0) throw_runtime("x265 produced no bitstream");
  const size_t frames = job.input->frame_count();
  EncodeResult r;
  r.bitstream_path = job.bitstream_path;
  r.time_s = std::max(pr.seconds, 1e-6);
  r.bitrate_kbps = static_cast<double>(bytes) * 8.0 * job.input->fps().value() /
                   static_cast<double>(frames) / 1000.0;
  r.analysis_out_path = job.analysis_out;
  r.codec_tag = codec_tag_from_log(text);
  if (settings_.write_recon) {
    r.decoded_preview = std::make_shared<const VideoSequence>(read_y4m(
        job.recon_path, job.input->projection(), job.input->face()));
  }
  return r;
}

nlohmann::json X265Backend::describe() const {
  return {{"backend", "x265"},
          {"binary", binary_.string()},
          {"preset", settings_.preset},
          {"threads", settings_.threads}};
}

// -----------------------------------------------------------------------------
// Scheduling

int default_worker_limit() {
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, hw / 4);
}

TimingLedger build_ledger(const EncodePlan& plan,
                          const std::vector<double>& node_times,
                          const std::vector<bool>& executed, int worker_limit) {
  const size_t n = plan.nodes.size();
  TimingLedger ledger;
  ledger.worker_limit = worker_limit;
  ledger.node_times = node_times;
  ledger.schedule.assign(n, {});
  for (size_t i = 0; i < n; ++i) {
    if (executed[i]) ledger.serial_sum += node_times[i];
  }
  for (const Resolution& r : plan.ladder.resolutions) {
    ledger.per_tier.push_back({r.label, 0.0, 0.0});
  }
  for (size_t i = 0; i < n; ++i) {
    if (!executed[i]) continue;
    TierTiming& t = ledger.per_tier[plan.nodes[i].key.resolution];
    t.serial_s += node_times[i];
    t.max_s = std::max(t.max_s, node_times[i]);
  }

  std::vector<std::vector<size_t>> dependents(n);
  std::set<size_t> ready;
  for (size_t i = 0; i < n; ++i) {
    if (!executed[i]) continue;
    if (plan.nodes[i].source) {
      dependents[*plan.nodes[i].source].push_back(i);
    } else {
      ready.insert(i);
    }
  }
  using Running = std::pair<double, size_t>;  // finish time, node
  std::priority_queue<Running, std::vector<Running>, std::greater<>> running;
  double now = 0.0;
  while (!ready.empty() || !running.empty()) {
    while (!ready.empty() && static_cast<int>(running.size()) < worker_limit) {
      const size_t i = *ready.begin();
      ready.erase(ready.begin());
      ledger.schedule[i] = {now, now + node_times[i]};
      running.push({now + node_times[i], i});
    }
    now = running.top().first;
    while (!running.empty() && running.top().first == now) {
      const size_t done = running.top().second;
      running.pop();
      for (size_t d : dependents[done]) {
        if (executed[d]) ready.insert(d);
      }
    }
    ledger.makespan = std::max(ledger.makespan, now);
  }
  return ledger;
}

RunOutcome run_plan(const EncodePlan& plan, EncoderBackend& backend,
                    const InputMap& inputs, const RunOptions& options) {
  if (options.worker_limit < 1) throw_validation("worker limit must be at least 1");
  if (const auto v = validate_plan(plan); !v.empty()) {
    throw_validation("invalid plan: " + v.front().message);
  }
  const size_t n = plan.nodes.size();
  for (const EncodeNode& node : plan.nodes) {
    const auto it = inputs.find({node.key.tile, node.key.resolution});
    if (it == inputs.end() || !it->second.sequence) {
      throw_validation("missing input for tile " + plan.tile_name(node.key.tile) +
                       " tier " + plan.ladder.resolutions[node.key.resolution].label);
    }
  }
  const std::filesystem::path bit_dir = options.work_dir / "bitstreams";
  const std::filesystem::path analysis_dir = options.work_dir / "analysis";
  const std::filesystem::path recon_dir = options.work_dir / "recon";
  for (const auto& d : {bit_dir, analysis_dir, recon_dir}) {
    std::error_code ec;
    std::filesystem::create_directories(d, ec);
    if (ec) throw_runtime("cannot create " + d.string() + ": " + ec.message());
  }

  enum class State { kPending, kRunning, kDone, kFailed };
  std::vector<State> state(n, State::kPending);
  std::vector<std::vector<size_t>> dependents(n);
  for (size_t i = 0; i < n; ++i) {
    if (plan.nodes[i].source) dependents[*plan.nodes[i].source].push_back(i);
  }

  RunOutcome outcome;
  std::mutex mu;
  std::condition_variable cv;
  std::set<size_t> ready;
  size_t finished = 0;

  for (const auto& [index, result] : options.completed) {
    if (index < n) {
      state[index] = State::kDone;
      outcome.results[index] = result;
      ++finished;
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (state[i] != State::kPending) continue;
    const auto& src = plan.nodes[i].source;
    if (!src || state[*src] == State::kDone) ready.insert(i);
  }

  auto make_job = [&](size_t i) {
    const EncodeNode& node = plan.nodes[i];
    EncodeJob job;
    job.node_index = i;
    job.node_id = plan.node_id(i);
    job.node = node;
    job.resolution = plan.resolution_of(i);
    job.mode = plan.ladder.mode;
    job.reuse_depth = plan.reuse_depth(i);
    const TileInput& in = inputs.at({node.key.tile, node.key.resolution});
    job.input = in.sequence;
    job.input_path = in.path;
    job.bitstream_path = bit_dir / plan.bitstream_file_name(i);
    job.recon_path = recon_dir / (job.node_id + ".y4m");
    if (node.source) job.analysis_in = analysis_dir / plan.analysis_file_name(*node.source);
    if (node.save_analysis) job.analysis_out = analysis_dir / plan.analysis_file_name(i);
    return job;
  };

  // Marks every transitive dependent of `i` as failed; caller holds mu.
  auto fail_downstream = [&](size_t i) {
    std::deque<size_t> todo(dependents[i].begin(), dependents[i].end());
    while (!todo.empty()) {
      const size_t d = todo.front();
      todo.pop_front();
      if (state[d] != State::kPending) continue;
      state[d] = State::kFailed;
      ready.erase(d);
      ++finished;
      outcome.failures.push_back(
          {d, "skipped: analysis source " + plan.node_id(i) + " failed", true});
      todo.insert(todo.end(), dependents[d].begin(), dependents[d].end());
    }
  };

  const auto wall_start = std::chrono::steady_clock::now();
  auto worker = [&] {
    std::unique_lock lock(mu);
    while (true) {
      cv.wait(lock, [&] { return !ready.empty() || finished == n; });
      if (ready.empty()) return;
      const size_t i = *ready.begin();
      ready.erase(ready.begin());
      state[i] = State::kRunning;
      lock.unlock();
      std::optional<EncodeResult> result;
      std::string error;
      try {
        result = backend.encode(make_job(i));
        if (!(result->time_s > 0.0) || !(result->bitrate_kbps > 0.0)) {
          throw_runtime("backend reported a non-positive time or bitrate");
        }
      } catch (const std::exception& e) {
        error = e.what();
      }
      lock.lock();
      ++finished;
      if (result) {
        state[i] = State::kDone;
        outcome.results[i] = std::move(*result);
        for (size_t d : dependents[i]) {
          if (state[d] == State::kPending) ready.insert(d);
        }
      } else {
        state[i] = State::kFailed;
        outcome.failures.push_back({i, plan.node_id(i) + ": " + error, false});
        fail_downstream(i);
      }
      cv.notify_all();
    }
  };
  {
    std::vector<std::thread> pool;
    const int threads = std::min<int>(options.worker_limit, std::max<size_t>(n, 1));
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  outcome.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
          .count();
  std::sort(outcome.failures.begin(), outcome.failures.end(),
            [](const NodeFailure& a, const NodeFailure& b) { return a.node < b.node; });

  std::vector<double> times(n, 0.0);
  std::vector<bool> executed(n, false);
  for (const auto& [i, r] : outcome.results) {
    times[i] = r.time_s;
    executed[i] = true;
  }
  outcome.ledger = build_ledger(plan, times, executed, options.worker_limit);

  if (!options.keep_analysis) {
    std::error_code ec;
    std::filesystem::remove_all(analysis_dir, ec);
  }
  std::error_code ec;
  std::filesystem::remove(recon_dir, ec);  // only if the backend wrote nothing
  return outcome;
}

nlohmann::json ledger_to_json(const TimingLedger& ledger) {
  nlohmann::json tiers = nlohmann::json::array();
  for (const TierTiming& t : ledger.per_tier) {
    tiers.push_back({{"tier", t.label}, {"serial_s", t.serial_s}, {"max_s", t.max_s}});
  }
  return {{"worker_limit", ledger.worker_limit},
          {"serial_sum_s", ledger.serial_sum},
          {"makespan_s", ledger.makespan},
          {"per_tier", tiers}};
}

}  // namespace ladder360
