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
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli_app.hpp"
#include "corpus.hpp"
#include "fixtures.hpp"
#include "visiontest/image_io.hpp"
#include "visiontest/modifiers.hpp"

namespace vt {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome vtest(std::vector<std::string> args) {
  args.insert(args.begin(), "vtest");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  TempDir dir_;
};

TEST_F(CliTest, ModifyInvertsAndPrintsTheOutputPath) {
  const Image img = testing::random_image(1, 20, 20);
  save_image(img, path("a.png"));
  const Outcome r = vtest({"modify", "--op", "invert", "--in", path("a.png"), "--out", path("b.png")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, path("b.png") + "\n");
  EXPECT_EQ(load_image(path("b.png")), invert(img));
}

TEST_F(CliTest, ModifyIsDeterministic) {
  save_image(testing::random_image(2, 30, 30), path("a.png"));
  for (const char* out : {"x.png", "y.png"}) {
    ASSERT_EQ(vtest({"--seed", "9", "modify", "--op", "weather", "--params", R"({"kind":"rain","intensity":0.6})",
                     "--in", path("a.png"), "--out", path(out)})
                  .code,
              0);
  }
  EXPECT_EQ(testing::read_file(path("x.png")), testing::read_file(path("y.png")));
  ASSERT_EQ(vtest({"--seed", "10", "modify", "--op", "weather", "--params", R"({"kind":"rain","intensity":0.6})",
                   "--in", path("a.png"), "--out", path("z.png")})
                .code,
            0);
  EXPECT_NE(testing::read_file(path("x.png")), testing::read_file(path("z.png")));
}

TEST_F(CliTest, ModifyRejectsOutOfRangeParamNamingTheField) {
  save_image(Image(12, 12), path("a.png"));
  const Outcome r =
      vtest({"modify", "--op", "blur", "--params", R"({"strength":1.5})", "--in", path("a.png"), "--out", path("b.png")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("strength"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("b.png")));
}

TEST_F(CliTest, ModifyUsageErrors) {
  save_image(Image(12, 12), path("a.png"));
  EXPECT_EQ(vtest({"modify", "--op", "sharpen", "--in", path("a.png"), "--out", path("b.png")}).code, 2);
  EXPECT_EQ(vtest({"modify", "--op", "blur", "--params", "{", "--in", path("a.png"), "--out", path("b.png")}).code, 2);
  EXPECT_EQ(vtest({"modify", "--op", "invert", "--in", path("nope.png"), "--out", path("b.png")}).code, 2);
  EXPECT_EQ(vtest({"modify", "--op", "invert"}).code, 2);
  EXPECT_EQ(vtest({}).code, 2);
  EXPECT_EQ(vtest({"frobnicate"}).code, 2);
}

TEST_F(CliTest, DiffPrintsSixDecimals) {
  const Image img = testing::random_image(3, 32, 32);
  save_image(img, path("a.png"));
  save_image(Image(16, 16), path("black.png"));
  save_image(Image(16, 16, {255, 255, 255}), path("white.png"));
  Outcome r = vtest({"diff", "--metric", "ssim", path("a.png"), path("a.png")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1.000000\n");
  r = vtest({"diff", "--metric", "mse", path("black.png"), path("white.png")});
  EXPECT_EQ(r.out, "65025.000000\n");
  r = vtest({"diff", path("black.png"), path("white.png")});
  EXPECT_EQ(r.out, "0.000100\n");
}

TEST_F(CliTest, DiffErrors) {
  save_image(Image(16, 16), path("a.png"));
  save_image(Image(16, 17), path("b.png"));
  EXPECT_EQ(vtest({"diff", path("a.png"), path("b.png")}).code, 2);
  EXPECT_EQ(vtest({"diff", path("a.png"), path("missing.png")}).code, 2);
  EXPECT_EQ(vtest({"diff", "--metric", "psnr", path("a.png"), path("a.png")}).code, 2);
}

TEST_F(CliTest, GenPrintsCardinalitiesAndIsRepeatable) {
  testing::write_box_corpus(dir_.path());
  testing::write_file(dir_ / "mods.json",
                      R"([{"op":"brightness","params":{"factor":0.1}},{"op":"blur","params":{"strength":0.1}},)"
                      R"({"op":"weather","params":{"kind":"fog","intensity":0.4},"seed":3},)"
                      R"({"op":"invert"},{"op":"blackout"}])");
  for (const char* out : {"gen1", "gen2"}) {
    const Outcome r = vtest({"gen", "--suite", path("initial.json"), "--mods", path("mods.json"), "--out-dir", path(out)});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "similar: 15, severe: 10\n");
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir_ / "gen1")) {
    ++files;
    EXPECT_EQ(testing::read_file(entry.path()), testing::read_file(dir_ / "gen2" / entry.path().filename()))
        << entry.path();
  }
  EXPECT_EQ(files, 25u + 2u);
}

TEST_F(CliTest, GenWarnsAboutEmptySide) {
  testing::write_box_corpus(dir_.path());
  testing::write_file(dir_ / "mods.json", R"([{"op":"blackout"}])");
  const Outcome r = vtest({"gen", "--suite", path("initial.json"), "--mods", path("mods.json"), "--out-dir", path("g")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "similar: 0, severe: 5\n");
  EXPECT_NE(r.err.find("similar suite is empty"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "g" / "similar.json"));
}

TEST_F(CliTest, GenErrors) {
  testing::write_box_corpus(dir_.path());
  testing::write_file(dir_ / "empty.json", "[]");
  testing::write_file(dir_ / "bad.json", R"([{"op":"invert"},{"op":"brightness","params":{"factor":3}}])");
  Outcome r = vtest({"gen", "--suite", path("initial.json"), "--mods", path("empty.json"), "--out-dir", path("g")});
  EXPECT_EQ(r.code, 2);
  r = vtest({"gen", "--suite", path("initial.json"), "--mods", path("bad.json"), "--out-dir", path("g")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/1/params/factor"), std::string::npos) << r.err;
  testing::write_file(dir_ / "broken.json", R"({"schema":1,"kind":"initial","task":"detection","cases":[{"id":3}]})");
  r = vtest({"gen", "--suite", path("broken.json"), "--mods", path("bad.json"), "--out-dir", path("g")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/cases/0"), std::string::npos) << r.err;
}

class CliRunTest : public CliTest {
 protected:
  void SetUp() override {
    testing::write_box_corpus(dir_.path());
    testing::write_file(dir_ / "mods.json",
                        R"([{"op":"brightness","params":{"factor":0.1}},{"op":"blackout"},{"op":"invert","sim":true}])");
    ASSERT_EQ(vtest({"gen", "--suite", path("initial.json"), "--mods", path("mods.json"), "--out-dir", path("gen")}).code, 0);
  }
};

TEST_F(CliRunTest, AllPassingSuiteExitsZero) {
  const Outcome r = vtest({"run", "--suite", path("gen/severe.json"), "--sut", "mock", "--report", path("r.csv")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, path("r.csv") + "\n");
  EXPECT_NE(r.err.find("5/5 passed"), std::string::npos);
  const std::string csv = testing::read_file(dir_ / "r.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "test_id,source_id,op,params,sim,ssim,expected,actual,verdict");
}

TEST_F(CliRunTest, FailingCaseExitsOne) {
  const Outcome r = vtest({"run", "--suite", path("gen/similar.json"), "--sut", "mock", "--report", path("r.md")});
  EXPECT_EQ(r.code, 1);
  const std::string md = testing::read_file(dir_ / "r.md");
  EXPECT_EQ(md.rfind("| source | test | modification | SSIM | result | verdict |", 0), 0u);
  EXPECT_NE(md.find("5/10 passed"), std::string::npos);
}

TEST_F(CliRunTest, FormatFlagAndExtensionInference) {
  ASSERT_EQ(vtest({"run", "--suite", path("gen/severe.json"), "--sut", "mock", "--report", path("r.json")}).code, 0);
  EXPECT_EQ(read_json_file(dir_ / "r.json").at("summary").at("passed"), 5);
  ASSERT_EQ(
      vtest({"run", "--suite", path("gen/severe.json"), "--sut", "mock", "--report", path("r.txt"), "--format", "md"})
          .code,
      0);
  EXPECT_EQ(testing::read_file(dir_ / "r.txt").rfind("| source", 0), 0u);
  ASSERT_EQ(vtest({"run", "--suite", path("gen/severe.json"), "--sut", "mock", "--report", path("r.out"), "--mse"})
                .code,
            0);
  EXPECT_EQ(testing::read_file(dir_ / "r.out").rfind("test_id,", 0), 0u);
  EXPECT_NE(testing::read_file(dir_ / "r.out").find(",verdict,mse\n"), std::string::npos);
}

TEST_F(CliRunTest, WorkerCountDoesNotChangeTheReport) {
  ASSERT_EQ(vtest({"run", "--suite", path("gen/similar.json"), "--sut", "mock", "--report", path("w1.csv"), "--workers",
                   "1"})
                .code,
            1);
  ASSERT_EQ(vtest({"run", "--suite", path("gen/similar.json"), "--sut", "mock", "--report", path("w4.csv"), "--workers",
                   "4"})
                .code,
            1);
  EXPECT_EQ(testing::read_file(dir_ / "w1.csv"), testing::read_file(dir_ / "w4.csv"));
}

TEST_F(CliRunTest, ExternalAdapterCommand) {
  const std::string sut = std::string("'") + VT_MOCK_SUT_PATH + "'";
  const Outcome r = vtest({"run", "--suite", path("gen/severe.json"), "--sut", sut, "--report", path("ext.csv"),
                           "--workers", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(vtest({"run", "--suite", path("gen/severe.json"), "--sut", "mock", "--report", path("int.csv")}).code, 0);
  EXPECT_EQ(testing::read_file(dir_ / "ext.csv"), testing::read_file(dir_ / "int.csv"));
}

TEST_F(CliRunTest, CrashingAdapterFailsErrExpectationsOnlyAsPasses) {
  // A crash is an error outcome, so severe cases still pass; initial ones fail.
  Outcome r = vtest({"run", "--suite", path("gen/severe.json"), "--sut", "false", "--report", path("c.csv")});
  EXPECT_EQ(r.code, 0) << r.err;
  r = vtest({"run", "--suite", path("initial.json"), "--sut", "false", "--report", path("c.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(testing::read_file(dir_ / "c.csv").find("err(crash: "), std::string::npos);
}

TEST_F(CliRunTest, SetupErrorsExitTwo) {
  EXPECT_EQ(vtest({"run", "--suite", path("nope.json"), "--sut", "mock", "--report", path("r.csv")}).code, 2);
  EXPECT_EQ(vtest({"run", "--suite", path("gen/severe.json"), "--sut", "mock", "--report", path("r.csv"), "--format",
                   "xml"})
                .code,
            2);
  EXPECT_EQ(vtest({"run", "--suite", path("gen/severe.json"), "--sut", "mock", "--report", path("r.csv"), "--workers",
                   "0"})
                .code,
            2);
  EXPECT_EQ(vtest({"run", "--suite", path("gen/severe.json"), "--sut", "", "--report", path("r.csv")}).code, 2);
  testing::write_file(dir_ / "empty.json", R"({"schema":1,"kind":"severe","task":"detection","cases":[]})");
  EXPECT_EQ(vtest({"run", "--suite", path("empty.json"), "--sut", "mock", "--report", path("r.csv")}).code, 2);
  fs::remove(dir_ / "images" / "scene2.png");
  EXPECT_EQ(vtest({"run", "--suite", path("initial.json"), "--sut", "mock", "--report", path("r.csv")}).code, 2);
}

TEST(CliMisc, VersionAndHelpExitZero) {
  Outcome r = vtest({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("vtest"), std::string::npos);
  r = vtest({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("modify"), std::string::npos);
}

}  // namespace
}  // namespace vt
