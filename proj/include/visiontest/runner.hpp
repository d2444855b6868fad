/**
 * Copyright 2026 The visiontest Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "visiontest/diff.hpp"
#include "visiontest/sut.hpp"
#include "visiontest/testgen.hpp"

namespace vt {

/// One line of a run report: which modification was applied, how similar the
/// result is to its source, and what the system answered.
struct ReportRow {
  std::string test_id;
  std::string source_id = "-";
  std::string op = "-";
  std::string params = "-";
  std::optional<bool> sim;       // absent for initial cases
  std::optional<double> ssim;    // present iff the case was generated
  std::optional<double> mse;     // only when requested
  bool geometric = false;        // expectation kept although content moved
  std::string expected;
  std::string actual;
  Verdict verdict = Verdict::Fail;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct OperatorTally {
  std::size_t passed = 0;
  std::size_t total = 0;
  double rate() const { return total == 0 ? 0.0 : static_cast<double>(passed) / static_cast<double>(total); }
  friend bool operator==(const OperatorTally&, const OperatorTally&) = default;
};

struct RunSummary {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::map<std::string, OperatorTally> per_operator;  // keyed by op name, "-" for initial cases
  std::chrono::milliseconds wall_time{0};
};

struct RunOptions {
  int workers = 1;
  SsimParams<double> ssim;
  bool with_mse = false;
  double iou_threshold = kDefaultIouThreshold;
};

struct RunResult {
  std::vector<ReportRow> rows;  // sorted by test_id
  RunSummary summary;
};

using AdapterFactory = std::function<std::unique_ptr<SutAdapter>()>;

/// Queries every case exactly once, each worker through its own adapter.
/// All image files are checked before the first query (Error(MissingImage)).
/// Adapter failures become failing rows; they never abort the run.
RunResult run_suite(const TestSuite& suite, const AdapterFactory& make_adapter, const RunOptions& options = {});

enum class ReportFormat { Csv, Json, Markdown };

std::optional<ReportFormat> parse_report_format(std::string_view name);

struct ReportOptions {
  bool clamp01 = false;  // clamp displayed SSIM to [0,1] in Markdown
};

std::string render_csv(const std::vector<ReportRow>& rows);
std::string render_markdown(const std::vector<ReportRow>& rows, const RunSummary& summary,
                            const ReportOptions& options = {});
nlohmann::ordered_json report_to_json(const std::vector<ReportRow>& rows, const RunSummary& summary);

/// Throws Error(InvalidArgument) for an empty row list, Error(IoError) on write failure.
void export_report(const std::vector<ReportRow>& rows, const RunSummary& summary, ReportFormat format,
                   const std::filesystem::path& path, const ReportOptions& options = {});

/// Reads back rows written by the JSON exporter.
std::vector<ReportRow> rows_from_json(const nlohmann::json& report);

}  // namespace vt
