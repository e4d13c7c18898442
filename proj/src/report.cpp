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

#include "ladder360/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ladder360/error.hpp"

namespace ladder360 {

namespace {

constexpr const char* kMetricNames[] = {"bd_psnr_db",      "bd_wspsnr_db",
                                        "bdet_psnr_pct",   "bdet_wspsnr_pct",
                                        "delta_ts_pct",    "delta_tp_pct"};

std::vector<double> as_vector(const ComparisonMetrics& m) {
  return {m.bd_psnr_db,    m.bd_wspsnr_db,  m.bdet_psnr_pct,
          m.bdet_wspsnr_pct, m.delta_ts_pct, m.delta_tp_pct};
}

ComparisonMetrics from_vector(const std::vector<double>& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

enum class QualityAxis { kPsnr, kWsPsnr };

// Representations of one tier in ascending-rate order (descending QP).
RDCurve tier_curve(const RunRecord& r, int tier, QualityAxis axis) {
  std::vector<RDPoint> pts;
  for (auto it = r.erp_ladder.qualities.rbegin(); it != r.erp_ladder.qualities.rend();
       ++it) {
    const auto rep = std::find_if(
        r.representations.begin(), r.representations.end(),
        [&](const RepresentationRecord& x) { return x.tier == tier && x.quality == *it; });
    if (rep == r.representations.end()) {
      throw_validation(r.sequence + " (" + variant_name(r.plan.variant) +
                       ") lacks representation " +
                       r.erp_ladder.resolutions[tier].label + "/" + std::to_string(*it));
    }
    pts.push_back({rep->rate_kbps,
                   axis == QualityAxis::kPsnr ? rep->psnr_y : rep->wspsnr_y,
                   rep->time_s});
  }
  return RDCurve(std::move(pts));
}

void check_compatible(const RunRecord& ref, const RunRecord& test) {
  const Ladder& a = ref.erp_ladder;
  const Ladder& b = test.erp_ladder;
  if (a.qualities != b.qualities || a.mode != b.mode) {
    throw_validation("ladder mismatch: quality levels differ between " +
                     std::string(variant_name(ref.plan.variant)) + " and " +
                     variant_name(test.plan.variant));
  }
  if (a.resolutions.size() != b.resolutions.size()) {
    throw_validation("missing tiers: records have different tier counts");
  }
  for (size_t i = 0; i < a.resolutions.size(); ++i) {
    if (a.resolutions[i] != b.resolutions[i]) {
      throw_validation("ladder mismatch at tier " + a.resolutions[i].label);
    }
  }
}

}  // namespace

std::string format_number(double v) { return nlohmann::json(v).dump(); }

std::vector<ComparisonRow> compare_records(const RunRecord& ref,
                                           const RunRecord& test,
                                           BdInterpolation mode) {
  check_compatible(ref, test);
  std::vector<ComparisonRow> rows;
  const size_t tiers = ref.erp_ladder.resolutions.size();
  std::vector<double> sum(6, 0.0);
  std::vector<std::string> all_notes;
  for (size_t t = 0; t < tiers; ++t) {
    const int ti = static_cast<int>(t);
    ComparisonRow row;
    row.method = variant_name(test.plan.variant);
    row.ref = anchor_name(test.plan.anchor);
    row.resolution = ref.erp_ladder.resolutions[t].label;
    row.sequences = 1;
    const RDCurve ref_psnr = tier_curve(ref, ti, QualityAxis::kPsnr);
    const RDCurve test_psnr = tier_curve(test, ti, QualityAxis::kPsnr);
    const RDCurve ref_ws = tier_curve(ref, ti, QualityAxis::kWsPsnr);
    const RDCurve test_ws = tier_curve(test, ti, QualityAxis::kWsPsnr);
    row.mean.bd_psnr_db = bd_quality(ref_psnr, test_psnr, mode);
    row.mean.bd_wspsnr_db = bd_quality(ref_ws, test_ws, mode);
    row.mean.bdet_psnr_pct = bdet(ref_psnr, test_psnr, mode);
    row.mean.bdet_wspsnr_pct = bdet(ref_ws, test_ws, mode);
    const std::vector<double> ref_times = ref.tier_times(ti);
    const std::vector<double> test_times = test.tier_times(ti);
    row.mean.delta_ts_pct = delta_t_serial(ref_times, test_times);
    row.mean.delta_tp_pct = delta_t_parallel(ref_times, test_times);
    if (quality_overlap(ref_psnr, test_psnr) < kNarrowOverlapDb ||
        quality_overlap(ref_ws, test_ws) < kNarrowOverlapDb) {
      row.notes.push_back("narrow-quality-overlap");
    }
    const std::vector<double> v = as_vector(row.mean);
    for (size_t k = 0; k < v.size(); ++k) sum[k] += v[k];
    for (const std::string& n : row.notes) all_notes.push_back(row.resolution + ":" + n);
    rows.push_back(std::move(row));
  }
  ComparisonRow avg;
  avg.method = variant_name(test.plan.variant);
  avg.ref = anchor_name(test.plan.anchor);
  avg.resolution = kAverageTier;
  avg.sequences = 1;
  for (double& s : sum) s /= static_cast<double>(tiers);
  avg.mean = from_vector(sum);
  avg.notes = all_notes;
  rows.push_back(std::move(avg));
  return rows;
}

std::vector<ComparisonRow> cmd_report(const std::vector<RunRecord>& refs,
                                      const std::vector<RunRecord>& tests,
                                      BdInterpolation mode) {
  if (refs.empty() || tests.empty()) {
    throw_validation("report needs at least one reference and one test record");
  }
  std::map<std::string, const RunRecord*> ref_by_seq;
  for (const RunRecord& r : refs) {
    if (!ref_by_seq.emplace(r.sequence, &r).second) {
      throw_validation("duplicate reference record for sequence " + r.sequence);
    }
  }
  // (method, anchor) groups in first-appearance order.
  std::vector<std::pair<std::string, std::string>> groups;
  std::map<std::pair<std::string, std::string>, std::vector<std::vector<ComparisonRow>>>
      per_group;
  for (const RunRecord& t : tests) {
    const auto it = ref_by_seq.find(t.sequence);
    if (it == ref_by_seq.end()) {
      throw_validation("no reference record for sequence " + t.sequence);
    }
    const auto key = std::make_pair(std::string(variant_name(t.plan.variant)),
                                    std::string(anchor_name(t.plan.anchor)));
    if (!per_group.count(key)) groups.push_back(key);
    per_group[key].push_back(compare_records(*it->second, t, mode));
  }

  std::vector<ComparisonRow> out;
  for (const auto& key : groups) {
    const auto& runs = per_group[key];
    for (size_t r = 0; r < runs.front().size(); ++r) {
      ComparisonRow row;
      row.method = key.first;
      row.ref = key.second;
      row.resolution = runs.front()[r].resolution;
      row.sequences = static_cast<int>(runs.size());
      std::vector<double> mean(6, 0.0), sd(6, 0.0);
      for (const auto& run : runs) {
        const std::vector<double> v = as_vector(run[r].mean);
        for (size_t k = 0; k < 6; ++k) mean[k] += v[k];
        for (const std::string& n : run[r].notes) row.notes.push_back(n);
      }
      for (double& m : mean) m /= static_cast<double>(runs.size());
      if (runs.size() > 1) {
        for (const auto& run : runs) {
          const std::vector<double> v = as_vector(run[r].mean);
          for (size_t k = 0; k < 6; ++k) sd[k] += (v[k] - mean[k]) * (v[k] - mean[k]);
        }
        for (double& s : sd) s = std::sqrt(s / static_cast<double>(runs.size() - 1));
      }
      row.mean = from_vector(mean);
      row.sd = from_vector(sd);
      out.push_back(std::move(row));
    }
  }
  return out;
}

std::string rows_to_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream s;
  s << "method,ref,resolution";
  for (const char* name : kMetricNames) s << ',' << name << ',' << name << "_sample_sd";
  s << ",sequences,notes\n";
  for (const ComparisonRow& r : rows) {
    s << r.method << ',' << r.ref << ',' << r.resolution;
    const std::vector<double> m = as_vector(r.mean);
    const std::vector<double> d = as_vector(r.sd);
    for (size_t k = 0; k < m.size(); ++k) {
      s << ',' << format_number(m[k]) << ',' << format_number(d[k]);
    }
    s << ',' << r.sequences << ',';
    for (size_t k = 0; k < r.notes.size(); ++k) s << (k ? ";" : "") << r.notes[k];
    s << '\n';
  }
  return s.str();
}

nlohmann::json rows_to_json(const std::vector<ComparisonRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const ComparisonRow& r : rows) {
    nlohmann::json j = {{"method", r.method},
                        {"ref", r.ref},
                        {"resolution", r.resolution}};
    const std::vector<double> m = as_vector(r.mean);
    const std::vector<double> d = as_vector(r.sd);
    for (size_t k = 0; k < m.size(); ++k) {
      j[kMetricNames[k]] = m[k];
      j[std::string(kMetricNames[k]) + "_sample_sd"] = d[k];
    }
    j["sequences"] = r.sequences;
    j["notes"] = r.notes;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace ladder360
