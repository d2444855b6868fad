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
#include <atomic>
#include <map>
#include <mutex>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "fixtures.hpp"
#include "visiontest/error.hpp"
#include "visiontest/runner.hpp"

namespace vt {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

Modification mod_of(OpParams params, std::optional<bool> sim = std::nullopt, std::uint64_t seed = 0) {
  return {params, seed, sim};
}

AdapterFactory mock_factory() {
  return [] { return std::make_unique<MockAdapter>(); };
}

// Counts queries per image path across all adapters it hands out.
class CountingFactory {
 public:
  AdapterFactory factory() {
    return [this] { return std::make_unique<Adapter>(*this); };
  }
  std::map<std::string, int> counts() const {
    std::lock_guard lock(mutex_);
    return counts_;
  }
  int adapters() const { return adapters_; }

 private:
  class Adapter final : public SutAdapter {
   public:
    explicit Adapter(CountingFactory& owner) : owner_(owner) { ++owner_.adapters_; }
    SutOutput query(const fs::path& image, Task task) override {
      {
        std::lock_guard lock(owner_.mutex_);
        ++owner_.counts_[image.string()];
      }
      return inner_.query(image, task);
    }

   private:
    CountingFactory& owner_;
    MockAdapter inner_;
  };

  mutable std::mutex mutex_;
  std::map<std::string, int> counts_;
  std::atomic<int> adapters_{0};
};

class RunnerTest : public ::testing::Test {
 protected:
  void SetUp() override { initial_ = testing::write_box_corpus(dir_.path()); }

  GeneratedSuites generate(const std::vector<Modification>& mods) {
    return generate_suites(initial_, mods, dir_ / "gen");
  }

  TempDir dir_;
  TestSuite initial_;
};

TEST_F(RunnerTest, SlightBrighteningPasses) {
  const auto suites = generate({mod_of(BrightnessParams{0.1})});
  TestSuite three = suites.similar;
  three.cases.resize(3);
  const RunResult result = run_suite(three, mock_factory());
  EXPECT_EQ(result.summary.total, 3u);
  EXPECT_EQ(result.summary.passed, 3u);
  for (const ReportRow& row : result.rows) {
    EXPECT_EQ(row.verdict, Verdict::Pass);
    EXPECT_EQ(row.op, "brightness");
    EXPECT_EQ(row.sim, std::optional<bool>(true));
    ASSERT_TRUE(row.ssim.has_value());
    EXPECT_GT(*row.ssim, 0.5);
    EXPECT_LT(*row.ssim, 1.0);
  }
}

TEST_F(RunnerTest, BlackoutSuitePassesBecauseTheMockReportsDarkFrames) {
  const RunResult result = run_suite(generate({mod_of(BlackoutParams{})}).severe, mock_factory());
  EXPECT_EQ(result.summary.passed, 5u);
  EXPECT_EQ(result.rows.front().actual, "err(dark_frame)");
  EXPECT_EQ(result.rows.front().expected, "err");
}

TEST_F(RunnerTest, InvertedCaseWithKeptExpectationFails) {
  const auto suites = generate({mod_of(InvertParams{}, true)});
  const RunResult result = run_suite(suites.similar, mock_factory());
  EXPECT_EQ(result.summary.failed, 5u);
  EXPECT_EQ(result.rows.front().actual, "no detections");
}

TEST_F(RunnerTest, InitialRowsHaveNoSimilarity) {
  const RunResult result = run_suite(initial_, mock_factory());
  EXPECT_EQ(result.summary.passed, 5u);
  for (const ReportRow& row : result.rows) {
    EXPECT_FALSE(row.ssim.has_value());
    EXPECT_FALSE(row.sim.has_value());
    EXPECT_EQ(row.source_id, "-");
    EXPECT_EQ(row.op, "-");
  }
}

TEST_F(RunnerTest, EachCaseQueriedExactlyOnceAcrossWorkers) {
  const auto suites = generate({mod_of(BrightnessParams{0.1}), mod_of(BlurParams{0.1}),
                                mod_of(WeatherParams{WeatherKind::Rain, 0.3}, std::nullopt, 4)});
  CountingFactory counting;
  RunOptions options;
  options.workers = 4;
  const RunResult result = run_suite(suites.similar, counting.factory(), options);
  EXPECT_EQ(result.rows.size(), 15u);
  const auto counts = counting.counts();
  EXPECT_EQ(counts.size(), 15u);
  for (const auto& [path, n] : counts) EXPECT_EQ(n, 1) << path;
  EXPECT_EQ(counting.adapters(), 4);
  EXPECT_TRUE(std::is_sorted(result.rows.begin(), result.rows.end(),
                             [](const ReportRow& a, const ReportRow& b) { return a.test_id < b.test_id; }));
}

TEST_F(RunnerTest, ReportIndependentOfWorkerCount) {
  const auto suites = generate({mod_of(BrightnessParams{0.1}), mod_of(PixelNoiseParams{30}, std::nullopt, 8),
                                mod_of(WeatherParams{WeatherKind::Snow, 0.5}, std::nullopt, 2),
                                mod_of(FlipParams{FlipAxis::Vertical}, true)});
  RunOptions one;
  RunOptions four;
  four.workers = 4;
  const RunResult a = run_suite(suites.similar, mock_factory(), one);
  const RunResult b = run_suite(suites.similar, mock_factory(), four);
  EXPECT_EQ(render_csv(a.rows), render_csv(b.rows));
  EXPECT_EQ(report_to_json(a.rows, a.summary).dump(), report_to_json(b.rows, b.summary).dump());
}

TEST_F(RunnerTest, MissingImageStopsBeforeAnyQuery) {
  TestSuite suite = initial_;
  suite.cases[3].image = dir_ / "images" / "gone.png";
  CountingFactory counting;
  try {
    run_suite(suite, counting.factory());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingImage);
  }
  EXPECT_TRUE(counting.counts().empty());
}

TEST_F(RunnerTest, AdapterErrorsBecomeFailingRows) {
  class Broken final : public SutAdapter {
   public:
    SutOutput query(const fs::path&, Task) override { return SutError{"crash: gone"}; }
  };
  const RunResult result = run_suite(initial_, [] { return std::make_unique<Broken>(); });
  EXPECT_EQ(result.summary.failed, 5u);
  EXPECT_EQ(result.rows.front().actual, "err(crash: gone)");
}

TEST_F(RunnerTest, SummaryTalliesPerOperator) {
  auto suites = generate({mod_of(BrightnessParams{0.1}), mod_of(InvertParams{}, true)});
  const RunResult result = run_suite(suites.similar, mock_factory());
  EXPECT_EQ(result.summary.passed + result.summary.failed, result.summary.total);
  EXPECT_EQ(result.summary.per_operator.at("brightness"), (OperatorTally{5, 5}));
  EXPECT_EQ(result.summary.per_operator.at("invert"), (OperatorTally{0, 5}));
  EXPECT_EQ(result.summary.per_operator.at("invert").rate(), 0.0);
}

TEST_F(RunnerTest, SsimMatchesDirectComputation) {
  const auto suites = generate({mod_of(WeatherParams{WeatherKind::Sun, 0.5}, std::nullopt, 3)});
  RunOptions options;
  options.with_mse = true;
  const RunResult result = run_suite(suites.similar, mock_factory(), options);
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const TestCase& tc = suites.similar.cases[i];
    ASSERT_EQ(result.rows[i].test_id, tc.id);
    const Image source = load_image(tc.provenance->source_image);
    const Image modified = load_image(tc.image);
    EXPECT_EQ(*result.rows[i].ssim, mssim(source, modified).mean);
    EXPECT_EQ(*result.rows[i].mse, mse(source, modified));
  }
}

TEST(Reports, SinglePassRowCsv) {
  ReportRow row;
  row.test_id = "t1";
  row.expected = "cat";
  row.actual = "cat";
  row.verdict = Verdict::Pass;
  EXPECT_EQ(render_csv({row}), "test_id,source_id,op,params,sim,ssim,expected,actual,verdict\nt1,-,-,-,-,,cat,cat,pass\n");
}

TEST(Reports, CsvQuotesFieldsAndAddsMseOnlyWhenPresent) {
  ReportRow row;
  row.test_id = "a";
  row.source_id = "s";
  row.op = "blur";
  row.params = R"({"strength":0.2})";
  row.sim = true;
  row.ssim = 0.25;
  row.expected = "red@[1,2,3,4]; blue@[0,0,5,5]";
  row.actual = "err(said \"no\")";
  const std::string csv = render_csv({row});
  EXPECT_NE(csv.find(R"csv(a,s,blur,"{""strength"":0.2}",true,0.25,"red@[1,2,3,4]; blue@[0,0,5,5]","err(said ""no"")",fail)csv"),
            std::string::npos)
      << csv;
  EXPECT_EQ(csv.find("mse"), std::string::npos);
  row.mse = 12.5;
  EXPECT_EQ(render_csv({row}).substr(0, 65), "test_id,source_id,op,params,sim,ssim,expected,actual,verdict,mse\n");
  EXPECT_NE(render_csv({row}).find(",fail,12.5\n"), std::string::npos);
}

TEST(Reports, MarkdownTableWithTwoDecimalSsim) {
  std::vector<ReportRow> rows;
  RunSummary summary;
  for (int i = 0; i < 12; ++i) {
    ReportRow row;
    row.test_id = "t" + std::to_string(10 + i);
    row.source_id = "src";
    row.op = i % 2 == 0 ? "flip" : "brightness";
    row.params = "{}";
    row.geometric = row.op == "flip";
    row.ssim = 0.123456 * i - 0.1;
    row.actual = "x|y";
    row.verdict = i % 3 == 0 ? Verdict::Pass : Verdict::Fail;
    summary.passed += row.verdict == Verdict::Pass ? 1 : 0;
    rows.push_back(row);
  }
  summary.total = rows.size();
  const std::string md = render_markdown(rows, summary);
  const std::regex data_row(R"(^\| src \| t\d+ \| [a-z]+ \{\}( \(geometric\))? \| -?\d\.\d\d \| x\\\|y \| (pass|fail) \|$)");
  std::istringstream lines(md);
  std::string line;
  int matched = 0;
  while (std::getline(lines, line)) matched += std::regex_match(line, data_row) ? 1 : 0;
  EXPECT_EQ(matched, 12) << md;
  EXPECT_NE(md.find("| -0.10 |"), std::string::npos);
  EXPECT_NE(md.find("\n4/12 passed\n"), std::string::npos);
  ReportOptions clamp;
  clamp.clamp01 = true;
  EXPECT_NE(render_markdown(rows, summary, clamp).find("| 0.00 |"), std::string::npos);
}

TEST_F(RunnerTest, JsonExportRoundTrips) {
  const auto suites = generate({mod_of(BrightnessParams{0.1}), mod_of(FlipParams{}, true)});
  RunOptions options;
  options.with_mse = true;
  const RunResult result = run_suite(suites.similar, mock_factory(), options);
  export_report(result.rows, result.summary, ReportFormat::Json, dir_ / "report.json");
  const auto reloaded = rows_from_json(read_json_file(dir_ / "report.json"));
  EXPECT_EQ(reloaded, result.rows);
  const auto j = read_json_file(dir_ / "report.json");
  EXPECT_EQ(j.at("summary").at("total"), 10);
  EXPECT_FALSE(j.at("summary").contains("wall_time"));
}

TEST(Reports, EmptyRowsAreRejected) {
  TempDir dir;
  try {
    export_report({}, {}, ReportFormat::Csv, dir / "r.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
  EXPECT_FALSE(fs::exists(dir / "r.csv"));
}

TEST(Reports, FormatNames) {
  EXPECT_EQ(parse_report_format("csv"), ReportFormat::Csv);
  EXPECT_EQ(parse_report_format("md"), ReportFormat::Markdown);
  EXPECT_EQ(parse_report_format("json"), ReportFormat::Json);
  EXPECT_FALSE(parse_report_format("xml").has_value());
}

}  // namespace
}  // namespace vt
