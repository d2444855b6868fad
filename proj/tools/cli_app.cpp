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
#include "cli_app.hpp"

#include <cstdio>
#include <filesystem>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "visiontest/diff.hpp"
#include "visiontest/error.hpp"
#include "visiontest/image_io.hpp"
#include "visiontest/modifiers.hpp"
#include "visiontest/runner.hpp"
#include "visiontest/sut.hpp"
#include "visiontest/testgen.hpp"

namespace vt::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "vtest 0.1.0";

struct GlobalFlags {
  std::uint64_t seed = 0;
  bool quiet = false;
};

struct ModifyFlags {
  std::string op;
  std::string params = "{}";
  std::string in;
  std::string out;
};

struct DiffFlags {
  std::string metric = "ssim";
  std::string a;
  std::string b;
};

struct GenFlags {
  std::string suite;
  std::string mods;
  std::string out_dir;
};

struct RunFlags {
  std::string suite;
  std::string sut;
  std::string report;
  std::string format;
  int workers = 1;
  bool with_mse = false;
  bool clamp01 = false;
  double iou_threshold = kDefaultIouThreshold;
  int timeout_ms = 30000;
};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

int cmd_modify(const ModifyFlags& flags, const GlobalFlags& global, std::ostream& out) {
  const auto op = parse_op_name(flags.op);
  if (!op) throw Error(ErrorKind::InvalidParams, "unknown operator \"" + flags.op + "\"", "/op");
  nlohmann::json params;
  try {
    params = nlohmann::json::parse(flags.params);
  } catch (const nlohmann::json::parse_error&) {
    throw Error(ErrorKind::InvalidParams, "--params is not valid JSON", "/params");
  }
  Modification mod;
  mod.params = params_from_json(*op, params);
  mod.seed = global.seed;
  validate(mod);

  const Image input = load_image(flags.in);
  save_image(apply(mod, input), flags.out);
  out << flags.out << '\n';
  return kExitPass;
}

int cmd_diff(const DiffFlags& flags, std::ostream& out) {
  const Image a = load_image(flags.a);
  const Image b = load_image(flags.b);
  const double value = flags.metric == "mse" ? mse(a, b) : mssim<double>(a, b).mean;
  out << fixed6(value) << '\n';
  return kExitPass;
}

int cmd_gen(const GenFlags& flags, const GlobalFlags& global, std::ostream& out, std::ostream& err) {
  const TestSuite initial = load_suite(flags.suite);
  if (initial.kind != SuiteKind::Initial) {
    throw Error(ErrorKind::SchemaViolation, "generation needs an initial suite", "/kind");
  }
  const std::vector<Modification> mods = load_modifications(flags.mods);
  const GeneratedSuites generated = generate_suites(initial, mods, flags.out_dir);
  for (const TestSuite* suite : {&generated.similar, &generated.severe}) {
    if (suite->cases.empty() && !global.quiet) {
      err << "warning: " << suite_kind_name(suite->kind) << " suite is empty\n";
    }
  }
  save_suite(generated.similar, fs::path(flags.out_dir) / "similar.json");
  save_suite(generated.severe, fs::path(flags.out_dir) / "severe.json");
  out << "similar: " << generated.similar.cases.size() << ", severe: " << generated.severe.cases.size() << '\n';
  return kExitPass;
}

int cmd_run(const RunFlags& flags, const GlobalFlags& global, std::ostream& out, std::ostream& err) {
  ReportFormat format = ReportFormat::Csv;
  if (!flags.format.empty()) {
    format = *parse_report_format(flags.format);
  } else if (const auto ext = fs::path(flags.report).extension(); ext == ".json") {
    format = ReportFormat::Json;
  } else if (ext == ".md") {
    format = ReportFormat::Markdown;
  }
  const auto timeout = std::chrono::milliseconds(flags.timeout_ms);
  // Fail on a malformed command before spawning anything.
  if (flags.sut != "mock" && split_command(flags.sut).empty()) {
    throw Error(ErrorKind::InvalidArgument, "--sut is empty");
  }

  const TestSuite suite = load_suite(flags.suite);
  if (suite.cases.empty()) throw Error(ErrorKind::InvalidArgument, flags.suite + " has no cases");

  RunOptions options;
  options.workers = flags.workers;
  options.with_mse = flags.with_mse;
  options.iou_threshold = flags.iou_threshold;
  const std::string sut = flags.sut;
  const RunResult result = run_suite(suite, [&] { return make_adapter(sut, timeout); }, options);
  export_report(result.rows, result.summary, format, flags.report, ReportOptions{flags.clamp01});

  if (!global.quiet) {
    err << result.summary.passed << "/" << result.summary.total << " passed (" << result.summary.wall_time.count()
        << " ms)\n";
  }
  out << flags.report << '\n';
  return result.summary.failed == 0 ? kExitPass : kExitFail;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metamorphic test generation and execution for vision systems", "vtest"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags global;
  app.add_option("--seed", global.seed, "Seed for stochastic operators");
  app.add_flag("--quiet", global.quiet, "Suppress informational messages");

  ModifyFlags modify;
  auto* modify_cmd = app.add_subcommand("modify", "Apply one modification operator to an image");
  modify_cmd->add_option("--op", modify.op, "Operator name")->required();
  modify_cmd->add_option("--params", modify.params, "Operator parameters as a JSON object");
  modify_cmd->add_option("--in", modify.in, "Input image")->required();
  modify_cmd->add_option("--out", modify.out, "Output PNG")->required();

  DiffFlags diff;
  auto* diff_cmd = app.add_subcommand("diff", "Compare two images");
  diff_cmd->add_option("--metric", diff.metric, "ssim or mse")->check(CLI::IsMember({"ssim", "mse"}));
  diff_cmd->add_option("a", diff.a, "First image")->required();
  diff_cmd->add_option("b", diff.b, "Second image")->required();

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate similar and severe suites from an initial suite");
  gen_cmd->add_option("--suite", gen.suite, "Initial suite manifest")->required();
  gen_cmd->add_option("--mods", gen.mods, "Modification list (JSON array)")->required();
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->required();

  RunFlags runf;
  auto* run_cmd = app.add_subcommand("run", "Run a suite against a system under test");
  run_cmd->add_option("--suite", runf.suite, "Suite manifest")->required();
  run_cmd->add_option("--sut", runf.sut, "\"mock\" or a command line speaking the SUT protocol")->required();
  run_cmd->add_option("--report", runf.report, "Report path")->required();
  run_cmd->add_option("--format", runf.format, "csv, json or md (default: from extension, else csv)")
      ->check(CLI::IsMember({"csv", "json", "md", "markdown"}));
  run_cmd->add_option("--workers", runf.workers, "Parallel adapter processes")->check(CLI::Range(1, 256));
  run_cmd->add_flag("--mse", runf.with_mse, "Add an MSE column");
  run_cmd->add_flag("--clamp01", runf.clamp01, "Clamp displayed SSIM to [0,1] in Markdown reports");
  run_cmd->add_option("--iou-threshold", runf.iou_threshold, "Detection match threshold")
      ->check(CLI::Range(0.0, 1.0));
  run_cmd->add_option("--timeout-ms", runf.timeout_ms, "Per-request SUT timeout")->check(CLI::Range(1, 3600000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (modify_cmd->parsed()) return cmd_modify(modify, global, out);
    if (diff_cmd->parsed()) return cmd_diff(diff, out);
    if (gen_cmd->parsed()) return cmd_gen(gen, global, out, err);
    if (run_cmd->parsed()) return cmd_run(runf, global, out, err);
  } catch (const Error& e) {
    err << "vtest: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "vtest: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace vt::cli
