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
#include "visiontest/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <system_error>
#include <thread>
#include <unordered_map>

#include "visiontest/error.hpp"
#include "visiontest/image_io.hpp"

namespace vt {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void require_file(const fs::path& path, const std::string& what) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorKind::MissingImage, what + " not found: " + path.string());
  }
}

class ImageCache {
 public:
  const Image& get(const fs::path& path) {
    auto it = images_.find(path.string());
    if (it == images_.end()) it = images_.emplace(path.string(), load_image(path)).first;
    return it->second;
  }

 private:
  std::unordered_map<std::string, Image> images_;
};

ReportRow evaluate(const TestCase& tc, Task task, SutAdapter& adapter, ImageCache& cache,
                   const RunOptions& options) {
  ReportRow row;
  row.test_id = tc.id;
  if (tc.provenance) {
    const Modification& mod = tc.provenance->modification;
    row.source_id = tc.provenance->source_id;
    row.op = op_name(mod.op());
    row.params = params_to_json(mod.params).dump();
    row.sim = mod.sim;
    row.geometric = is_geometric(mod.op());
    const Image& source = cache.get(tc.provenance->source_image);
    const Image modified = load_image(tc.image);
    row.ssim = mssim<double>(source, modified, options.ssim).mean;
    if (options.with_mse) row.mse = mse(source, modified);
  }
  const SutOutput actual = adapter.query(tc.image, task);
  row.expected = summarize(tc.expected);
  row.actual = summarize(actual);
  row.verdict = compare_outputs(tc.expected, actual, task, options.iou_threshold);
  return row;
}

}  // namespace

RunResult run_suite(const TestSuite& suite, const AdapterFactory& make_adapter, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  if (options.workers < 1) throw Error(ErrorKind::InvalidArgument, "workers must be at least 1");
  validate_suite(suite);
  for (const TestCase& tc : suite.cases) {
    require_file(tc.image, "image of " + tc.id);
    if (tc.provenance) require_file(tc.provenance->source_image, "source image of " + tc.id);
  }

  const std::size_t n = suite.cases.size();
  std::vector<ReportRow> rows(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    try {
      std::unique_ptr<SutAdapter> adapter = make_adapter();
      ImageCache cache;
      for (std::size_t i = next++; i < n && !stop; i = next++) {
        rows[i] = evaluate(suite.cases[i], suite.task, *adapter, cache, options);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      stop = true;
    }
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(options.workers), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) { return a.test_id < b.test_id; });

  RunResult result;
  result.summary.total = n;
  for (const ReportRow& row : rows) {
    const bool pass = row.verdict == Verdict::Pass;
    result.summary.passed += pass ? 1 : 0;
    OperatorTally& tally = result.summary.per_operator[row.op];
    tally.total += 1;
    tally.passed += pass ? 1 : 0;
  }
  result.summary.failed = result.summary.total - result.summary.passed;
  result.rows = std::move(rows);
  result.summary.wall_time =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  return result;
}

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  if (name == "md" || name == "markdown") return ReportFormat::Markdown;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string full_precision(double v) { return json(v).dump(); }

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string md_cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += '\\';
    out += (c == '\n' ? ' ' : c);
  }
  return out;
}

std::string two_decimals(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string sim_text(const std::optional<bool>& sim) {
  return sim.has_value() ? (*sim ? "true" : "false") : "-";
}

}  // namespace

std::string render_csv(const std::vector<ReportRow>& rows) {
  const bool with_mse = std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.mse.has_value(); });
  std::string out = "test_id,source_id,op,params,sim,ssim,expected,actual,verdict";
  out += with_mse ? ",mse\n" : "\n";
  for (const ReportRow& r : rows) {
    out += csv_field(r.test_id) + ',' + csv_field(r.source_id) + ',' + csv_field(r.op) + ',' +
           csv_field(r.params) + ',' + sim_text(r.sim) + ',' + (r.ssim ? full_precision(*r.ssim) : "") + ',' +
           csv_field(r.expected) + ',' + csv_field(r.actual) + ',' + std::string(verdict_name(r.verdict));
    if (with_mse) out += ',' + (r.mse ? full_precision(*r.mse) : "");
    out += '\n';
  }
  return out;
}

std::string render_markdown(const std::vector<ReportRow>& rows, const RunSummary& summary,
                            const ReportOptions& options) {
  std::string out = "| source | test | modification | SSIM | result | verdict |\n";
  out += "|---|---|---|---|---|---|\n";
  for (const ReportRow& r : rows) {
    std::string modification = r.op == "-" ? "original" : r.op + " " + r.params;
    if (r.geometric) modification += " (geometric)";
    std::string ssim = "-";
    if (r.ssim) ssim = two_decimals(options.clamp01 ? std::clamp(*r.ssim, 0.0, 1.0) : *r.ssim);
    out += "| " + md_cell(r.source_id) + " | " + md_cell(r.test_id) + " | " + md_cell(modification) + " | " + ssim +
           " | " + md_cell(r.actual) + " | " + std::string(verdict_name(r.verdict)) + " |\n";
  }
  out += "\n" + std::to_string(summary.passed) + "/" + std::to_string(summary.total) + " passed\n";
  return out;
}

ordered_json report_to_json(const std::vector<ReportRow>& rows, const RunSummary& summary) {
  ordered_json j;
  j["rows"] = ordered_json::array();
  for (const ReportRow& r : rows) {
    ordered_json row;
    row["test_id"] = r.test_id;
    row["source_id"] = r.source_id;
    row["op"] = r.op;
    row["params"] = r.params;
    row["sim"] = r.sim ? ordered_json(*r.sim) : ordered_json(nullptr);
    row["ssim"] = r.ssim ? ordered_json(*r.ssim) : ordered_json(nullptr);
    if (r.mse) row["mse"] = *r.mse;
    row["geometric"] = r.geometric;
    row["expected"] = r.expected;
    row["actual"] = r.actual;
    row["verdict"] = verdict_name(r.verdict);
    j["rows"].push_back(std::move(row));
  }
  ordered_json per_op = ordered_json::object();
  for (const auto& [op, tally] : summary.per_operator) {
    per_op[op] = {{"passed", tally.passed}, {"total", tally.total}, {"rate", tally.rate()}};
  }
  j["summary"] = {{"total", summary.total},
                  {"passed", summary.passed},
                  {"failed", summary.failed},
                  {"per_operator", std::move(per_op)}};
  return j;
}

std::vector<ReportRow> rows_from_json(const json& report) {
  std::vector<ReportRow> rows;
  for (const json& r : report.at("rows")) {
    ReportRow row;
    row.test_id = r.at("test_id").get<std::string>();
    row.source_id = r.at("source_id").get<std::string>();
    row.op = r.at("op").get<std::string>();
    row.params = r.at("params").get<std::string>();
    if (!r.at("sim").is_null()) row.sim = r.at("sim").get<bool>();
    if (!r.at("ssim").is_null()) row.ssim = r.at("ssim").get<double>();
    if (r.contains("mse")) row.mse = r.at("mse").get<double>();
    row.geometric = r.at("geometric").get<bool>();
    row.expected = r.at("expected").get<std::string>();
    row.actual = r.at("actual").get<std::string>();
    row.verdict = r.at("verdict").get<std::string>() == "pass" ? Verdict::Pass : Verdict::Fail;
    rows.push_back(std::move(row));
  }
  return rows;
}

void export_report(const std::vector<ReportRow>& rows, const RunSummary& summary, ReportFormat format,
                   const fs::path& path, const ReportOptions& options) {
  if (rows.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to report");
  switch (format) {
    case ReportFormat::Csv: write_text_file(path, render_csv(rows)); break;
    case ReportFormat::Json: write_text_file(path, report_to_json(rows, summary).dump(2) + "\n"); break;
    case ReportFormat::Markdown: write_text_file(path, render_markdown(rows, summary, options)); break;
  }
}

}  // namespace vt
