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

#ifndef LADDER360_REPORT_HPP
#define LADDER360_REPORT_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "ladder360/bd.hpp"
#include "ladder360/run_record.hpp"

namespace ladder360 {

struct ComparisonMetrics {
  double bd_psnr_db = 0.0;
  double bd_wspsnr_db = 0.0;
  double bdet_psnr_pct = 0.0;
  double bdet_wspsnr_pct = 0.0;
  double delta_ts_pct = 0.0;
  double delta_tp_pct = 0.0;
};

// One row of the comparison table: mean and sample standard deviation over
// sequences for one (method, anchor, tier). Tier "Avg" averages the tiers.
struct ComparisonRow {
  std::string method;
  std::string ref;  // anchor policy of the method
  std::string resolution;
  ComparisonMetrics mean;
  ComparisonMetrics sd;
  int sequences = 0;
  std::vector<std::string> notes;
};

inline constexpr char kAverageTier[] = "Avg";

// Per-tier rows plus Avg for one test run against one reference run.
std::vector<ComparisonRow> compare_records(
    const RunRecord& ref, const RunRecord& test,
    BdInterpolation mode = BdInterpolation::kPchip);

// Pairs each test record with the reference record of the same sequence and
// aggregates per (method, anchor, tier).
std::vector<ComparisonRow> cmd_report(
    const std::vector<RunRecord>& refs, const std::vector<RunRecord>& tests,
    BdInterpolation mode = BdInterpolation::kPchip);

std::string rows_to_csv(const std::vector<ComparisonRow>& rows);
nlohmann::json rows_to_json(const std::vector<ComparisonRow>& rows);

// Shortest round-trip decimal form, shared by CSV and JSON output.
std::string format_number(double v);

}  // namespace ladder360

#endif  // LADDER360_REPORT_HPP
