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

#include "ladder360/run_record.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include "ladder360/error.hpp"

namespace ladder360 {

std::string file_sha256(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_runtime("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                               EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw_runtime("sha256 unavailable");
  }
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), in.gcount());
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof(byte), "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

std::vector<double> RunRecord::tier_times(int tier) const {
  std::vector<double> out;
  for (size_t i = 0; i < plan.nodes.size(); ++i) {
    if (plan.nodes[i].key.resolution != tier) continue;
    const auto it = nodes.find(plan.node_id(i));
    if (it != nodes.end()) out.push_back(it->second.time_s);
  }
  return out;
}

std::map<size_t, EncodeResult> RunRecord::results(
    const std::filesystem::path& run_dir) const {
  std::map<size_t, EncodeResult> out;
  for (size_t i = 0; i < plan.nodes.size(); ++i) {
    const auto it = nodes.find(plan.node_id(i));
    if (it == nodes.end()) continue;
    const NodeRecord& n = it->second;
    EncodeResult r;
    r.bitstream_path = run_dir / n.bitstream;
    r.bitrate_kbps = n.bitrate_kbps;
    r.time_s = n.time_s;
    r.codec_tag = n.codec_tag;
    r.model_quality = n.model_quality;
    out[i] = std::move(r);
  }
  return out;
}

nlohmann::json run_record_to_json(const RunRecord& record) {
  nlohmann::json nodes = nlohmann::json::array();
  for (size_t i = 0; i < record.plan.nodes.size(); ++i) {
    const std::string id = record.plan.node_id(i);
    const auto it = record.nodes.find(id);
    if (it == record.nodes.end()) continue;
    const NodeRecord& n = it->second;
    nlohmann::json j = {{"id", id},
                        {"bitrate_kbps", n.bitrate_kbps},
                        {"time_s", n.time_s},
                        {"bitstream", n.bitstream},
                        {"bitstream_bytes", n.bitstream_bytes},
                        {"sha256", n.checksum}};
    if (n.codec_tag) j["codec_tag"] = *n.codec_tag;
    if (n.model_quality) j["model_quality"] = *n.model_quality;
    if (n.face_psnr_y) j["face_psnr_y"] = *n.face_psnr_y;
    if (n.face_wspsnr_y) j["face_wspsnr_y"] = *n.face_wspsnr_y;
    nodes.push_back(std::move(j));
  }
  nlohmann::json reps = nlohmann::json::array();
  for (const RepresentationRecord& r : record.representations) {
    reps.push_back({{"tier", record.erp_ladder.resolutions.at(r.tier).label},
                    {"quality", r.quality},
                    {"rate_kbps", r.rate_kbps},
                    {"time_s", r.time_s},
                    {"psnr_y", r.psnr_y},
                    {"wspsnr_y", r.wspsnr_y}});
  }
  return {{"schema", record.schema},
          {"sequence", record.sequence},
          {"frames", record.frames},
          {"fps", std::to_string(record.fps.num) + ":" + std::to_string(record.fps.den)},
          {"erp_ladder", ladder_to_json(record.erp_ladder)},
          {"plan", plan_to_json(record.plan)},
          {"nodes", nodes},
          {"representations", reps},
          {"ledger", ledger_to_json(record.ledger)},
          {"failures", record.failures},
          {"environment", record.environment}};
}

RunRecord run_record_from_json(const nlohmann::json& j) {
  try {
    RunRecord r;
    r.schema = j.at("schema").get<std::string>();
    if (r.schema != kRunRecordSchema) {
      throw_validation("unsupported run record schema '" + r.schema + "'");
    }
    r.sequence = j.at("sequence").get<std::string>();
    r.frames = j.at("frames").get<size_t>();
    r.fps = parse_rational(j.at("fps").get<std::string>());
    r.erp_ladder = ladder_from_json(j.at("erp_ladder"));
    r.plan = plan_from_json(j.at("plan"));
    if (r.plan.ladder.resolutions.size() != r.erp_ladder.resolutions.size() ||
        r.plan.ladder.qualities != r.erp_ladder.qualities) {
      throw_validation("run record plan and ERP ladder disagree");
    }
    for (const auto& jn : j.at("nodes")) {
      NodeRecord n;
      n.id = jn.at("id").get<std::string>();
      n.bitrate_kbps = jn.at("bitrate_kbps").get<double>();
      n.time_s = jn.at("time_s").get<double>();
      n.bitstream = jn.at("bitstream").get<std::string>();
      n.bitstream_bytes = jn.at("bitstream_bytes").get<uint64_t>();
      n.checksum = jn.at("sha256").get<std::string>();
      if (jn.contains("codec_tag")) n.codec_tag = jn["codec_tag"].get<std::string>();
      if (jn.contains("model_quality")) n.model_quality = jn["model_quality"].get<double>();
      if (jn.contains("face_psnr_y")) n.face_psnr_y = jn["face_psnr_y"].get<double>();
      if (jn.contains("face_wspsnr_y")) n.face_wspsnr_y = jn["face_wspsnr_y"].get<double>();
      r.nodes[n.id] = n;
    }
    for (const auto& jr : j.at("representations")) {
      RepresentationRecord rep;
      const std::string tier = jr.at("tier").get<std::string>();
      const auto& res = r.erp_ladder.resolutions;
      const auto it = std::find_if(res.begin(), res.end(),
                                   [&](const Resolution& x) { return x.label == tier; });
      if (it == res.end()) throw_validation("representation names unknown tier " + tier);
      rep.tier = static_cast<int>(it - res.begin());
      rep.quality = jr.at("quality").get<int>();
      rep.rate_kbps = jr.at("rate_kbps").get<double>();
      rep.time_s = jr.at("time_s").get<double>();
      rep.psnr_y = jr.at("psnr_y").get<double>();
      rep.wspsnr_y = jr.at("wspsnr_y").get<double>();
      r.representations.push_back(rep);
    }
    // The ledger is derived data; rebuild it from node times.
    const auto& jl = j.at("ledger");
    std::vector<double> times(r.plan.nodes.size(), 0.0);
    std::vector<bool> executed(r.plan.nodes.size(), false);
    for (size_t i = 0; i < r.plan.nodes.size(); ++i) {
      const auto it = r.nodes.find(r.plan.node_id(i));
      if (it == r.nodes.end()) continue;
      times[i] = it->second.time_s;
      executed[i] = true;
    }
    r.ledger = build_ledger(r.plan, times, executed, jl.at("worker_limit").get<int>());
    r.failures = j.at("failures").get<std::vector<std::string>>();
    r.environment = j.at("environment");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw_validation(std::string("malformed run record: ") + e.what());
  }
}

RunRecord load_run_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_runtime("cannot open run record " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw_validation(path.string() + ": " + e.what());
  }
  return run_record_from_json(j);
}

void save_run_record(const RunRecord& record, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw_runtime("cannot create " + path.string());
  out << run_record_to_json(record).dump(2) << "\n";
  if (!out) throw_runtime("write failed for " + path.string());
}

}  // namespace ladder360
