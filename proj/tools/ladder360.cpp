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

// ladder360 command-line front end.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "ladder360/bd.hpp"
#include "ladder360/error.hpp"
#include "ladder360/executor.hpp"
#include "ladder360/media_io.hpp"
#include "ladder360/omaf.hpp"
#include "ladder360/pipeline.hpp"
#include "ladder360/planner.hpp"
#include "ladder360/quality.hpp"
#include "ladder360/report.hpp"
#include "ladder360/run_record.hpp"
#include "ladder360/sphere.hpp"
#include "ladder360_fixtures/cards.hpp"

namespace fs = std::filesystem;
using namespace ladder360;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Geometry {
  std::optional<int> width;
  std::optional<int> height;
  std::string fps = "30";
};

void add_geometry(CLI::App* app, Geometry& g) {
  app->add_option("--width", g.width, "Width of headerless input");
  app->add_option("--height", g.height, "Height of headerless input");
  app->add_option("--fps", g.fps, "Frame rate of headerless input (n, n:d or n/d)");
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw_validation("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const fs::path& p) {
  try {
    return nlohmann::json::parse(read_text(p));
  } catch (const nlohmann::json::exception& e) {
    throw_validation(p.string() + ": " + e.what());
  }
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.empty() || p == "-") {
    std::cout << text;
    return;
  }
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw_runtime("cannot write " + p.string());
  out << text;
}

// Six faces "<dir>/<face>.y4m".
std::vector<VideoSequence> read_faces(const fs::path& dir) {
  std::vector<VideoSequence> faces;
  for (FaceId f : kAllFaces) {
    faces.push_back(read_y4m(dir / (std::string(face_name(f)) + ".y4m"),
                             Projection::kCmpFace, f));
  }
  return faces;
}

std::pair<int, int> parse_size(const std::string& s) {
  int w = 0, h = 0;
  char x = 0;
  std::istringstream in(s);
  if (!(in >> w >> x >> h) || x != 'x') throw_validation("expected WxH, got '" + s + "'");
  return {w, h};
}

// ---------------------------------------------------------------------------

struct ConvertArgs {
  std::string input;
  std::string output;
  std::string to = "cmp";
  int face_size = 0;
  std::string erp_size;
  std::string scale;
  std::string filter;  // bilinear for projection changes, lanczos3 for scaling
  Geometry geometry;
};

int run_convert(const ConvertArgs& a) {
  const ResampleFilter filter = filter_from_name(
      !a.filter.empty() ? a.filter : a.to == "scale" ? "lanczos3" : "bilinear");
  if (a.to == "cmp") {
    const VideoSequence erp =
        read_video(a.input, a.geometry.width, a.geometry.height, parse_rational(a.geometry.fps));
    const int n = a.face_size > 0 ? a.face_size : erp.height() / 2;
    fs::create_directories(a.output);
    for (const VideoSequence& f : erp_to_cmp(erp, n, filter)) {
      write_y4m(f, fs::path(a.output) / (std::string(face_name(*f.face())) + ".y4m"));
    }
    std::cerr << "wrote 6 faces of " << n << "x" << n << " to " << a.output << "\n";
  } else if (a.to == "erp") {
    const std::vector<VideoSequence> faces = read_faces(a.input);
    int w = 4 * faces[0].width(), h = 2 * faces[0].width();
    if (!a.erp_size.empty()) std::tie(w, h) = parse_size(a.erp_size);
    write_y4m(cmp_to_erp(faces, w, h, filter), a.output);
  } else if (a.to == "scale") {
    if (a.scale.empty()) throw_validation("--to scale needs --scale WxH");
    const auto [w, h] = parse_size(a.scale);
    const VideoSequence in =
        read_video(a.input, a.geometry.width, a.geometry.height, parse_rational(a.geometry.fps));
    write_y4m(resize(in, w, h, filter), a.output);
  } else {
    throw_validation("--to must be cmp, erp or scale");
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct LadderArgs {
  std::string ladder_file;
  int width = 8192;  // three halving tiers from here give the reference ladder
  int height = 4096;
  int tiers = 3;
  std::vector<int> qualities = kReferenceQualities;
  std::string mode = "qp";
};

void add_ladder(CLI::App* app, LadderArgs& l) {
  app->add_option("--ladder", l.ladder_file, "Ladder JSON file");
  app->add_option("--top-width", l.width, "Widest ERP tier (default 8192)");
  app->add_option("--top-height", l.height, "Tallest ERP tier (default 4096)");
  app->add_option("--tiers", l.tiers, "Number of halving tiers");
  app->add_option("--qualities", l.qualities, "QP/CRF levels")->delimiter(',');
  app->add_option("--mode", l.mode, "qp or crf");
}

Ladder ladder_from_args(const LadderArgs& l) {
  Ladder out;
  if (!l.ladder_file.empty()) {
    out = ladder_from_json(read_json(l.ladder_file));
  } else {
    out = Ladder::halving(l.width, l.height, l.tiers, l.qualities);
    if (l.mode != "qp" && l.mode != "crf") throw_validation("--mode must be qp or crf");
    out.mode = l.mode == "qp" ? LadderMode::kFixedQp : LadderMode::kCrf;
  }
  out.validate();
  return out;
}

struct PlanArgs {
  std::string variant = "erp-crc";
  std::string anchor = "hq";
  bool pra_cross = false;
  LadderArgs ladder;
  std::string output = "-";
};

int run_plan_cmd(const PlanArgs& a) {
  const Variant v = variant_from_name(a.variant);
  Ladder erp = ladder_from_args(a.ladder);
  PlanOptions opts;
  opts.pra_cross_resolution = a.pra_cross;
  const EncodePlan plan =
      build_plan(v, is_cubemap(v) ? erp.faces() : erp, anchor_from_name(a.anchor), opts);
  const auto violations = validate_plan(plan);
  for (const Violation& x : violations) std::cerr << "violation: " << x.message << "\n";
  if (!violations.empty()) return kExitValidation;
  write_text(a.output, plan_to_json(plan).dump(2) + "\n");
  const auto saved = plan_storage_count(plan);
  std::cerr << plan.nodes.size() << " nodes, " << saved.front() << " saved analyses per tile\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct BackendArgs {
  std::string backend = "simulated";
  std::optional<std::string> encoder_path;
  std::string preset = "medium";
  int workers = 0;
  bool keep_analysis = false;
};

void add_backend(CLI::App* app, BackendArgs& b) {
  app->add_option("--backend", b.backend, "simulated or x265");
  app->add_option("--encoder-path", b.encoder_path, "x265 binary");
  app->add_option("--preset", b.preset, "x265 preset");
  app->add_option("--workers", b.workers, "Concurrent encodes (default: cores / 4)");
  app->add_flag("--keep-analysis", b.keep_analysis, "Keep analysis files");
}

struct EncodeArgs {
  std::string plan;
  std::string inputs;
  std::string output;
  BackendArgs backend;
};

int run_encode(const EncodeArgs& a) {
  const EncodePlan plan = plan_from_json(read_json(a.plan));
  std::unique_ptr<EncoderBackend> backend;
  if (a.backend.backend == "x265") {
    const auto bin = locate_encoder(a.backend.encoder_path);
    if (!bin) throw_runtime("x265 encoder not found");
    X265Settings s;
    s.preset = a.backend.preset;
    backend = std::make_unique<X265Backend>(*bin, s);
  } else if (a.backend.backend == "simulated") {
    backend = std::make_unique<SimulatedBackend>();
  } else {
    throw_validation("--backend must be simulated or x265");
  }
  InputMap inputs;
  for (int t = 0; t < plan.tiles; ++t) {
    for (size_t r = 0; r < plan.ladder.resolutions.size(); ++r) {
      TileInput in;
      in.path = fs::path(a.inputs) / tile_input_name(plan.tile_name(t), plan.ladder.resolutions[r]);
      const bool cmp = is_cubemap(plan.variant);
      in.sequence = std::make_shared<const VideoSequence>(
          read_y4m(in.path, cmp ? Projection::kCmpFace : Projection::kErp,
                   cmp ? std::optional<FaceId>(kAllFaces[t]) : std::nullopt));
      inputs[{t, static_cast<int>(r)}] = in;
    }
  }
  RunOptions opts;
  opts.work_dir = a.output;
  opts.keep_analysis = a.backend.keep_analysis;
  opts.worker_limit = a.backend.workers > 0 ? a.backend.workers : default_worker_limit();
  const RunOutcome out = run_plan(plan, *backend, inputs, opts);
  nlohmann::json j;
  j["ledger"] = ledger_to_json(out.ledger);
  for (const auto& [i, r] : out.results) {
    j["results"][plan.node_id(i)] = {{"bitrate_kbps", r.bitrate_kbps}, {"time_s", r.time_s}};
  }
  for (const NodeFailure& f : out.failures) j["failures"].push_back(f.diagnostic);
  write_text(fs::path(a.output) / "ledger.json", j.dump(2) + "\n");
  for (const NodeFailure& f : out.failures) std::cerr << "failed: " << f.diagnostic << "\n";
  return out.complete() ? 0 : kExitRuntime;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string ref;
  std::string dist;
  std::string projection = "erp";
  std::string plane = "y";
  std::string pooling = "frame";
  Geometry geometry;
};

int run_evaluate(const EvaluateArgs& a) {
  ScoreOptions opts;
  if (a.plane == "y") opts.plane = Plane::kY;
  else if (a.plane == "u") opts.plane = Plane::kCb;
  else if (a.plane == "v") opts.plane = Plane::kCr;
  else throw_validation("--plane must be y, u or v");
  if (a.pooling == "frame") opts.pooling = Pooling::kPerFrameDb;
  else if (a.pooling == "mse") opts.pooling = Pooling::kPooledMse;
  else throw_validation("--pooling must be frame or mse");

  QualityScore s;
  if (a.projection == "cmp" && fs::is_directory(a.ref)) {
    const auto ref = read_faces(a.ref);
    const auto dist = read_faces(a.dist);
    s = evaluate_cubemap(ref, dist, opts);
  } else {
    Projection p;
    if (a.projection == "erp") p = Projection::kErp;
    else if (a.projection == "cmp") p = Projection::kCmpFace;
    else throw_validation("--projection must be erp or cmp");
    const Rational fps = parse_rational(a.geometry.fps);
    const std::optional<FaceId> face =
        p == Projection::kCmpFace ? std::optional<FaceId>(FaceId::kFront) : std::nullopt;
    const VideoSequence ref =
        read_video(a.ref, a.geometry.width, a.geometry.height, fps).retagged(p, face);
    const VideoSequence dist =
        read_video(a.dist, a.geometry.width, a.geometry.height, fps).retagged(p, face);
    s = evaluate(ref, dist, opts);
  }
  std::cout << "frame,psnr,wspsnr\n";
  for (size_t i = 0; i < s.per_frame.size(); ++i) {
    std::cout << i << "," << format_number(s.per_frame[i].psnr) << ","
              << format_number(s.per_frame[i].wspsnr) << "\n";
  }
  std::cout << (a.pooling == "frame" ? "mean" : "pooled") << "," << format_number(s.psnr_y)
            << "," << format_number(s.wspsnr_y) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> refs;
  std::vector<std::string> tests;
  std::string format = "csv";
  std::string interp = "pchip";
  std::string output = "-";
};

int run_report(const ReportArgs& a) {
  BdInterpolation mode;
  if (a.interp == "pchip") mode = BdInterpolation::kPchip;
  else if (a.interp == "cubic") mode = BdInterpolation::kCubicPolynomial;
  else throw_validation("--interp must be pchip or cubic");
  std::vector<RunRecord> refs, tests;
  for (const auto& p : a.refs) refs.push_back(load_run_record(p));
  for (const auto& p : a.tests) tests.push_back(load_run_record(p));
  const auto rows = cmd_report(refs, tests, mode);
  if (a.format == "csv") write_text(a.output, rows_to_csv(rows));
  else if (a.format == "json") write_text(a.output, rows_to_json(rows).dump(2) + "\n");
  else throw_validation("--format must be csv or json");
  return 0;
}

struct PackageArgs {
  std::string run;
  std::string output = "manifest.mpd";
};

int run_package(const PackageArgs& a) {
  const RunRecord rec = load_run_record(a.run);
  if (!rec.complete()) {
    throw_validation("run " + a.run + " has failed nodes; nothing to package");
  }
  ManifestOptions mo;
  mo.fps = rec.fps;
  mo.duration_s = static_cast<double>(rec.frames) / rec.fps.value();
  const auto manifest = build_manifest(rec.results(fs::path(a.run).parent_path()), rec.plan, mo);
  write_text(a.output, serialize_mpd(manifest));
  return 0;
}

// ---------------------------------------------------------------------------

struct PipelineArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string input;
  std::string output;
  std::string variant;
  std::string anchor;
  BackendArgs backend;
};

int run_pipeline(const PipelineArgs& a) {
  PipelineConfig c = a.config.empty() ? PipelineConfig{} : load_config_file(a.config);
  if (!a.input.empty()) c.input = a.input;
  if (!a.output.empty()) c.output_dir = a.output;
  if (!a.variant.empty()) c.variant = variant_from_name(a.variant);
  if (!a.anchor.empty()) c.anchor = anchor_from_name(a.anchor);
  if (a.backend.backend != "simulated") apply_config_value(c, "backend", a.backend.backend);
  if (a.backend.encoder_path) c.encoder_path = a.backend.encoder_path;
  if (a.backend.workers > 0) c.worker_limit = a.backend.workers;
  if (a.backend.keep_analysis) c.keep_analysis = true;
  c.x265.preset = a.backend.preset;
  for (const std::string& kv : a.sets) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos) throw_validation("--set expects key=value, got '" + kv + "'");
    apply_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  const RunRecord rec = cmd_pipeline(c);
  std::cerr << rec.nodes.size() << "/" << rec.plan.nodes.size() << " nodes, "
            << rec.representations.size() << " representations, serial "
            << format_number(rec.ledger.serial_sum) << " s, makespan "
            << format_number(rec.ledger.makespan) << " s\n";
  for (const std::string& f : rec.failures) std::cerr << "failed: " << f << "\n";
  return rec.complete() ? 0 : kExitRuntime;
}

struct CardArgs {
  std::string kind = "sinusoid:4,2";
  int width = 64;
  int height = 32;
  int frames = 2;
  std::string fps = "30";
  std::string output;
};

int run_fixtures(const CardArgs& a) {
  const auto seq = fixtures::generate_card(fixtures::parse_card(a.kind), a.width, a.height,
                                           a.frames, parse_rational(a.fps));
  const fs::path out(a.output);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  if (out.extension() == ".y4m") write_y4m(seq, out);
  else write_raw_yuv(seq, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multirate 360-degree ladder encoding with analysis reuse"};
  app.require_subcommand(1);

  ConvertArgs convert;
  auto* c = app.add_subcommand("convert", "ERP <-> cubemap conversion and scaling");
  c->add_option("--input", convert.input, "Input video, or face directory for --to erp")->required();
  c->add_option("--out", convert.output, "Output file, or face directory for --to cmp")->required();
  c->add_option("--to", convert.to, "cmp, erp or scale");
  c->add_option("--face-size", convert.face_size, "Face edge in pixels (default: height/2)");
  c->add_option("--erp-size", convert.erp_size, "ERP output WxH (default: 4n x 2n)");
  c->add_option("--scale", convert.scale, "Target WxH for --to scale");
  c->add_option("--filter", convert.filter, "bilinear or lanczos3");
  add_geometry(c, convert.geometry);

  PlanArgs plan;
  auto* p = app.add_subcommand("plan", "Build and validate an encode plan");
  p->add_option("--variant", plan.variant, "erp-default|erp-crc|erp-pra|cmp-crc|cmp-pra");
  p->add_option("--anchor", plan.anchor, "hq, mq or lq");
  p->add_flag("--pra-cross-resolution", plan.pra_cross, "PRA anchors load the tier below");
  p->add_option("--out", plan.output, "Plan JSON (default stdout)");
  add_ladder(p, plan.ladder);

  EncodeArgs encode;
  auto* e = app.add_subcommand("encode", "Execute a plan over prepared tile inputs");
  e->add_option("--plan", encode.plan, "Plan JSON")->required();
  e->add_option("--inputs", encode.inputs, "Directory of <tile>_<W>x<H>.y4m inputs")->required();
  e->add_option("--out", encode.output, "Work directory")->required();
  add_backend(e, encode.backend);

  EvaluateArgs eval;
  auto* v = app.add_subcommand("evaluate", "PSNR and WS-PSNR of a distorted sequence");
  v->add_option("--ref", eval.ref, "Reference video (face directory for cmp)")->required();
  v->add_option("--dist", eval.dist, "Distorted video (face directory for cmp)")->required();
  v->add_option("--projection", eval.projection, "erp or cmp");
  v->add_option("--plane", eval.plane, "y, u or v");
  v->add_option("--pooling", eval.pooling, "frame (mean dB) or mse (pooled)");
  add_geometry(v, eval.geometry);

  ReportArgs compare;
  auto* cm = app.add_subcommand("compare", "Compare one run against a reference run");
  cm->add_option("--ref", compare.refs, "Reference run.json")->required()->expected(1);
  cm->add_option("--test", compare.tests, "Test run.json")->required()->expected(1);
  cm->add_option("--format", compare.format, "csv or json");
  cm->add_option("--interp", compare.interp, "pchip or cubic");
  cm->add_option("--out", compare.output, "Output file (default stdout)");

  PackageArgs package;
  auto* pk = app.add_subcommand("package", "Write the DASH manifest of a run");
  pk->add_option("--run", package.run, "run.json")->required();
  pk->add_option("--out", package.output, "Manifest path");

  PipelineArgs pipe;
  auto* pl = app.add_subcommand("pipeline", "convert, resize, plan, encode, evaluate, package");
  pl->add_option("--config", pipe.config, "Config file (key = value)");
  pl->add_option("--set", pipe.sets, "Override a config key (key=value)");
  pl->add_option("--input", pipe.input, "Input ERP video");
  pl->add_option("--out", pipe.output, "Output directory");
  pl->add_option("--variant", pipe.variant, "erp-default|erp-crc|erp-pra|cmp-crc|cmp-pra");
  pl->add_option("--anchor", pipe.anchor, "hq, mq or lq");
  add_backend(pl, pipe.backend);

  ReportArgs report;
  auto* r = app.add_subcommand("report", "Comparison table over sequences");
  r->add_option("--ref", report.refs, "Reference run.json files")->required();
  r->add_option("--test", report.tests, "Test run.json files")->required();
  r->add_option("--format", report.format, "csv or json");
  r->add_option("--interp", report.interp, "pchip or cubic");
  r->add_option("--out", report.output, "Output file (default stdout)");

  CardArgs card;
  auto* fx = app.add_subcommand("fixtures", "Synthetic test content");
  auto* gen = fx->add_subcommand("generate", "Write a test card");
  fx->require_subcommand(1);
  gen->add_option("--kind", card.kind, "constant[:v] | hgradient | sinusoid[:fx,fy] | zoneplate");
  gen->add_option("--width", card.width);
  gen->add_option("--height", card.height);
  gen->add_option("--frames", card.frames);
  gen->add_option("--fps", card.fps);
  gen->add_option("--out", card.output, ".y4m or raw .yuv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*c) return run_convert(convert);
    if (*p) return run_plan_cmd(plan);
    if (*e) return run_encode(encode);
    if (*v) return run_evaluate(eval);
    if (*cm) return run_report(compare);
    if (*pk) return run_package(package);
    if (*pl) return run_pipeline(pipe);
    if (*r) return run_report(report);
    if (*gen) return run_fixtures(card);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return err.kind() == ErrorKind::kValidation ? kExitValidation : kExitRuntime;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
