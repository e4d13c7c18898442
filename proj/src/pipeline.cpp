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

#include "ladder360/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ladder360/omaf.hpp"
#include "ladder360/quality.hpp"

namespace ladder360 {

namespace {

std::string trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string> split_list(const std::string& value) {
  std::string body = trim(value);
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') throw_validation("unterminated list '" + value + "'");
    body = body.substr(1, body.size() - 2);
  }
  std::vector<std::string> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = unquote(trim(item));
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used == v.size()) return x;
  } catch (const std::logic_error&) {
  }
  throw_validation("config key '" + key + "' expects an integer, got '" + v + "'");
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::logic_error&) {
  }
  throw_validation("config key '" + key + "' expects a number, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw_validation("config key '" + key + "' expects true/false, got '" + v + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& v) {
  const std::filesystem::path p(v);
  return p.is_absolute() || base.empty() ? p : base / p;
}

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  } catch (const std::exception& e) {
    throw StageError(name, Error(ErrorKind::kRuntime, e.what()));
  }
}

bool verify_bitstream(const std::filesystem::path& path, const NodeRecord& n) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) return false;
  if (std::filesystem::file_size(path, ec) != n.bitstream_bytes || ec) return false;
  return file_sha256(path) == n.checksum;
}

}  // namespace

std::string tile_input_name(const std::string& tile, const Resolution& r) {
  return tile + "_" + std::to_string(r.width) + "x" + std::to_string(r.height) + ".y4m";
}

void apply_config_value(PipelineConfig& c, const std::string& key,
                        const std::string& raw, const std::filesystem::path& base) {
  const std::string v = unquote(trim(raw));
  if (key == "input") c.input = resolve(base, v);
  else if (key == "width") c.width = to_int(key, v);
  else if (key == "height") c.height = to_int(key, v);
  else if (key == "fps") c.fps = parse_rational(v);
  else if (key == "sequence") c.sequence = v;
  else if (key == "variant") c.variant = variant_from_name(v);
  else if (key == "anchor") c.anchor = anchor_from_name(v);
  else if (key == "pra_cross_resolution") c.pra_cross_resolution = to_bool(key, v);
  else if (key == "tiers") c.tiers = to_int(key, v);
  else if (key == "qualities") {
    c.qualities.clear();
    for (const std::string& q : split_list(raw)) c.qualities.push_back(to_int(key, q));
  } else if (key == "mode") {
    if (v != "qp" && v != "crf") throw_validation("mode must be qp or crf");
    c.mode = v == "qp" ? LadderMode::kFixedQp : LadderMode::kCrf;
  } else if (key == "ladder") {
    std::ifstream in(resolve(base, v));
    if (!in) throw_validation("cannot open ladder file " + v);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw_validation("ladder file " + v + ": " + e.what());
    }
    c.ladder = ladder_from_json(j);
  } else if (key == "backend") {
    if (v == "simulated") c.backend = BackendKind::kSimulated;
    else if (v == "x265") c.backend = BackendKind::kX265;
    else throw_validation("backend must be simulated or x265");
  } else if (key == "encoder_path") c.encoder_path = v;
  else if (key == "preset") c.x265.preset = v;
  else if (key == "threads") c.x265.threads = to_int(key, v);
  else if (key == "output") c.output_dir = resolve(base, v);
  else if (key == "workers") c.worker_limit = to_int(key, v);
  else if (key == "keep_analysis") c.keep_analysis = to_bool(key, v);
  else if (key == "ladder_filter") c.ladder_filter = filter_from_name(v);
  else if (key == "sphere_filter") c.sphere_filter = filter_from_name(v);
  else if (key == "cost.kappa") c.cost_model.kappa = to_double(key, v);
  else if (key == "cost.rho") c.cost_model.rho = to_double(key, v);
  else if (key == "cost.r0") c.cost_model.r0 = to_double(key, v);
  else if (key == "cost.quality_a") c.cost_model.quality_a = to_double(key, v);
  else if (key == "cost.quality_b") c.cost_model.quality_b = to_double(key, v);
  else if (key == "cost.epsilon") c.cost_model.epsilon = to_double(key, v);
  else throw_validation("unknown config key '" + key + "'");
}

PipelineConfig parse_config(const std::string& text,
                            const std::filesystem::path& base_dir) {
  PipelineConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const size_t hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw_validation("config line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_config_value(c, trim(line.substr(0, eq)), line.substr(eq + 1), base_dir);
  }
  return c;
}

PipelineConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_validation("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

// -----------------------------------------------------------------------------

RunRecord cmd_pipeline(const PipelineConfig& config) {
  namespace fs = std::filesystem;

  // Startup checks run before anything is written.
  std::unique_ptr<EncoderBackend> backend = stage("startup", [&] {
    if (config.output_dir.empty()) throw_validation("no output directory given");
    if (config.input.empty()) throw_validation("no input file given");
    std::unique_ptr<EncoderBackend> b;
    if (config.backend == BackendKind::kX265) {
      const auto binary = locate_encoder(config.encoder_path);
      if (!binary) {
        throw_runtime("x265 encoder not found (use --encoder-path or $" +
                      std::string(kEncoderEnvVar) + ")");
      }
      b = std::make_unique<X265Backend>(*binary, config.x265);
    } else {
      b = std::make_unique<SimulatedBackend>(config.cost_model);
    }
    return b;
  });

  const auto source = stage("input", [&] {
    auto seq = std::make_shared<const VideoSequence>(
        read_video(config.input, config.width, config.height, config.fps));
    if (seq->empty()) throw_validation(config.input.string() + " has no frames");
    if (seq->projection() != Projection::kErp) throw_validation("input must be ERP");
    return seq;
  });

  const Ladder erp_ladder = stage("plan", [&] {
    Ladder l = config.ladder ? *config.ladder
                             : Ladder::halving(source->width(), source->height(),
                                               config.tiers, config.qualities);
    if (!config.ladder) l.mode = config.mode;
    l.validate();
    return l;
  });
  const bool cubemap = is_cubemap(config.variant);
  const int tiles = tile_count(config.variant);

  // ERP references per tier, and tile inputs per (tile, tier).
  std::vector<std::shared_ptr<const VideoSequence>> references;
  InputMap inputs;
  std::vector<VideoSequence> top_faces = stage("convert", [&] {
    if (!cubemap) return std::vector<VideoSequence>{};
    return erp_to_cmp(*source, source->height() / 2, config.sphere_filter);
  });
  stage("resize", [&] {
    for (size_t t = 0; t < erp_ladder.resolutions.size(); ++t) {
      const Resolution& r = erp_ladder.resolutions[t];
      references.push_back(std::make_shared<const VideoSequence>(
          resize(*source, r.width, r.height, config.ladder_filter)));
      for (int tile = 0; tile < tiles; ++tile) {
        TileInput in;
        if (cubemap) {
          const int n = r.height / 2;
          in.sequence = std::make_shared<const VideoSequence>(
              resize(top_faces[tile], n, n, config.ladder_filter));
        } else {
          in.sequence = references.back();
        }
        inputs[{tile, static_cast<int>(t)}] = in;
      }
    }
    return 0;
  });
  top_faces.clear();

  const EncodePlan plan = stage("plan", [&] {
    PlanOptions opts;
    opts.pra_cross_resolution = config.pra_cross_resolution;
    EncodePlan p = build_plan(config.variant, cubemap ? erp_ladder.faces() : erp_ladder,
                              config.anchor, opts);
    if (const auto v = validate_plan(p); !v.empty()) {
      throw_validation("planner produced an invalid plan: " + v.front().message);
    }
    return p;
  });

  const fs::path out = config.output_dir;
  const fs::path record_path = out / "run.json";
  const nlohmann::json plan_json = plan_to_json(plan);
  nlohmann::json environment = backend->describe();

  stage("output", [&] {
    fs::create_directories(out);
    if (config.backend == BackendKind::kX265) fs::create_directories(out / "inputs");
    std::ofstream(out / "plan.json") << plan_json.dump(2) << "\n";
    for (auto& [key, in] : inputs) {
      const std::string tile = plan.tile_name(key.first);
      in.path = out / "inputs" / tile_input_name(tile, plan.ladder.resolutions[key.second]);
      if (config.backend == BackendKind::kX265) write_y4m(*in.sequence, in.path);
    }
    return 0;
  });

  // Reuse nodes of a compatible earlier run whose bitstreams still verify.
  RunOptions run_opts;
  run_opts.work_dir = out;
  run_opts.keep_analysis = config.keep_analysis;
  run_opts.worker_limit =
      config.worker_limit > 0 ? config.worker_limit : default_worker_limit();
  std::map<size_t, NodeRecord> prior_nodes;
  if (fs::exists(record_path)) {
    try {
      const RunRecord prior = load_run_record(record_path);
      if (plan_to_json(prior.plan) == plan_json && prior.frames == source->frame_count() &&
          prior.environment.value("backend", nlohmann::json()) == environment["backend"] &&
          prior.environment.value("cost_model", nlohmann::json()) ==
              environment.value("cost_model", nlohmann::json())) {
        const auto results = prior.results(out);
        for (const auto& [i, r] : results) {
          const NodeRecord& n = prior.nodes.at(plan.node_id(i));
          const bool recon_ok = config.backend != BackendKind::kX265 ||
                                fs::exists(out / "recon" / (plan.node_id(i) + ".y4m"));
          if (recon_ok && verify_bitstream(r.bitstream_path, n)) {
            run_opts.completed[i] = r;
            prior_nodes[i] = n;
          }
        }
      }
    } catch (const Error&) {
      // Unreadable or foreign record: start from scratch.
    }
    // A pending node needs its source's analysis file; re-encode sources whose
    // artifact is gone.
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < plan.nodes.size(); ++i) {
        if (run_opts.completed.count(i)) continue;
        const auto& src = plan.nodes[i].source;
        if (src && run_opts.completed.count(*src) &&
            !fs::exists(out / "analysis" / plan.analysis_file_name(*src))) {
          run_opts.completed.erase(*src);
          prior_nodes.erase(*src);
          changed = true;
        }
      }
    }
  }

  RunOutcome outcome = stage("encode", [&] {
    return run_plan(plan, *backend, inputs, run_opts);
  });

  RunRecord record;
  record.sequence = config.sequence.empty() ? config.input.stem().string() : config.sequence;
  record.frames = source->frame_count();
  record.fps = source->fps();
  record.erp_ladder = erp_ladder;
  record.plan = plan;
  record.ledger = outcome.ledger;
  for (const NodeFailure& f : outcome.failures) record.failures.push_back(f.diagnostic);
  record.environment = environment;
  if (config.backend == BackendKind::kX265) {
    record.environment["wall_clock_s"] = outcome.wall_clock_s;
  }

  stage("evaluate", [&] {
    for (auto& [i, r] : outcome.results) {
      const EncodeNode& node = plan.nodes[i];
      const TileInput& in = inputs.at({node.key.tile, node.key.resolution});
      if (!r.decoded_preview) {
        if (config.backend == BackendKind::kX265) {
          r.decoded_preview = std::make_shared<const VideoSequence>(
              read_y4m(out / "recon" / (plan.node_id(i) + ".y4m"),
                       in.sequence->projection(), in.sequence->face()));
        } else {
          r.decoded_preview = in.sequence;
        }
      }
      NodeRecord n;
      if (const auto p = prior_nodes.find(i); p != prior_nodes.end()) {
        n = p->second;
      } else {
        n.id = plan.node_id(i);
        n.bitrate_kbps = r.bitrate_kbps;
        n.time_s = r.time_s;
        n.bitstream = fs::relative(r.bitstream_path, out).generic_string();
        n.bitstream_bytes = fs::file_size(r.bitstream_path);
        n.checksum = file_sha256(r.bitstream_path);
        n.codec_tag = r.codec_tag;
        n.model_quality = r.model_quality;
      }
      if (cubemap && !r.model_quality) {
        const QualityScore s = evaluate(*in.sequence, *r.decoded_preview);
        n.face_psnr_y = s.psnr_y;
        n.face_wspsnr_y = s.wspsnr_y;
      }
      record.nodes[n.id] = n;
    }
    for (size_t t = 0; t < erp_ladder.resolutions.size(); ++t) {
      const Resolution& res = erp_ladder.resolutions[t];
      for (int q : erp_ladder.qualities) {
        std::vector<const EncodeResult*> parts;
        for (int tile = 0; tile < tiles; ++tile) {
          const auto idx = plan.find({tile, static_cast<int>(t), q});
          const auto it = idx ? outcome.results.find(*idx) : outcome.results.end();
          if (it != outcome.results.end()) parts.push_back(&it->second);
        }
        if (static_cast<int>(parts.size()) != tiles) continue;
        RepresentationRecord rep;
        rep.tier = static_cast<int>(t);
        rep.quality = q;
        bool modelled = true;
        double model_sum = 0.0;
        for (const EncodeResult* p : parts) {
          rep.rate_kbps += p->bitrate_kbps;
          rep.time_s += p->time_s;
          modelled = modelled && p->model_quality.has_value();
          if (p->model_quality) model_sum += *p->model_quality;
        }
        if (modelled) {
          rep.psnr_y = rep.wspsnr_y = model_sum / tiles;
        } else {
          QualityScore s;
          if (cubemap) {
            std::vector<VideoSequence> faces;
            for (const EncodeResult* p : parts) faces.push_back(*p->decoded_preview);
            s = evaluate(*references[t],
                         cmp_to_erp(faces, res.width, res.height, config.sphere_filter));
          } else {
            s = evaluate(*references[t], *parts.front()->decoded_preview);
          }
          rep.psnr_y = s.psnr_y;
          rep.wspsnr_y = s.wspsnr_y;
        }
        record.representations.push_back(rep);
      }
    }
    return 0;
  });

  stage("package", [&] {
    if (!record.complete()) return 0;
    ManifestOptions mo;
    mo.fps = source->fps();
    mo.duration_s = static_cast<double>(source->frame_count()) / source->fps().value();
    const PresentationManifest m = build_manifest(outcome.results, plan, mo);
    std::ofstream(out / "manifest.mpd") << serialize_mpd(m);
    return 0;
  });

  stage("persist", [&] {
    save_run_record(record, record_path);
    return 0;
  });
  return record;
}

}  // namespace ladder360
