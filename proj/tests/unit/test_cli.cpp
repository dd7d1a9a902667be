#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <memory>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "firerisk/csv.hpp"
#include "firerisk/labeling.hpp"
#include "support/temp_dir.hpp"

namespace fs = std::filesystem;
using testing_support::read_text;
using testing_support::write_text;

namespace {

struct Result {
  int rc = -1;
  std::string output;
};

Result sh(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" FIRERISK_CLI "' " + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.output.append(buf.data(), n);
  const int status = pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// One synthetic region run through the whole pipeline, shared by the suite.
class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    tmp_ = new testing_support::TempDir();
    const auto s = sh("-q synth " + dir().string() + " --nx 3 --ny 3");
    ASSERT_EQ(s.rc, 0) << s.output;
    const auto r = sh("-q run -c " + config().string());
    ASSERT_EQ(r.rc, 0) << r.output;
  }
  static void TearDownTestSuite() {
    delete tmp_;
    tmp_ = nullptr;
  }
  static fs::path dir() { return tmp_->path() / "region"; }
  static fs::path config() { return dir() / "config.json"; }
  static fs::path out() { return dir() / "out"; }
  static fs::path scratch(const std::string& name) { return tmp_->path() / name; }

  // Replays test-year labels of one target as one-hot predictions.
  static std::string truth_as_predictions(const std::string& model, firerisk::Target target) {
    std::string csv = "model,target,department,date,s0,s1,s2,s3,s4\n";
    for (const auto& s : firerisk::read_labels_csv(out() / "labels.csv")) {
      if (s.target != target) continue;
      for (std::size_t i = 0; i < s.dates.size(); ++i) {
        if (s.dates[i].year() != 2023) continue;
        csv += model + "," + std::string(firerisk::to_string(target)) + "," + s.department_id + "," +
               s.dates[i].iso();
        for (int c = 0; c < 5; ++c) csv += c == s.labels[i] ? ",1" : ",0";
        csv += "\n";
      }
    }
    return csv;
  }

 private:
  static testing_support::TempDir* tmp_;
};

testing_support::TempDir* Cli::tmp_ = nullptr;

}  // namespace

TEST_F(Cli, HelpForEverySubcommand) {
  EXPECT_EQ(sh("--help").rc, 0);
  for (const char* c : {"synth", "ingest", "compute-indices", "label", "cluster", "encode", "select", "export-windows",
                        "train", "sweep", "report", "run", "evaluate"}) {
    const auto r = sh(std::string(c) + " --help");
    EXPECT_EQ(r.rc, 0) << c;
    EXPECT_NE(r.output.find("Usage"), std::string::npos) << c;
  }
  EXPECT_NE(sh("").rc, 0);
  EXPECT_NE(sh("frobnicate").rc, 0);
}

TEST_F(Cli, ReportPrintsBaselines) {
  const auto r = sh("-q report -c " + config().string());
  ASSERT_EQ(r.rc, 0) << r.output;
  EXPECT_EQ(r.output.rfind("model,target,", 0), 0u) << r.output;
  for (const char* m : {"logistic,fo", "logistic,ba", "logistic_binary,fo", "fwi,fo", "random,ba"}) {
    EXPECT_NE(r.output.find(m), std::string::npos) << m;
  }
}

TEST_F(Cli, CachedStagesReportCached) {
  const auto r = sh("-q cluster -c " + config().string());
  ASSERT_EQ(r.rc, 0) << r.output;
  EXPECT_NE(r.output.find("clustering: cached"), std::string::npos) << r.output;
}

TEST_F(Cli, EvaluateTruthReplayIsPerfect) {
  write_text(scratch("truth.csv"), truth_as_predictions("oracle", firerisk::Target::FO));
  const auto r = sh("-q evaluate " + scratch("truth.csv").string() + " -c " + config().string() + " --report-dir " +
                    scratch("ext").string());
  ASSERT_EQ(r.rc, 0) << r.output;
  const auto j = nlohmann::json::parse(read_text(scratch("ext") / "report.json"));
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["global"]["f1"], 1.0);
  EXPECT_EQ(j[0]["global"]["iou"], 1.0);
  EXPECT_EQ(j[0]["global"]["auoc"], 0.0);
}

TEST_F(Cli, EvaluateMalformedNamesLine) {
  std::string csv = truth_as_predictions("bad", firerisk::Target::FO);
  // Break the third data row (file line 4).
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) pos = csv.find('\n', pos) + 1;
  csv.insert(csv.find('\n', pos), "9");
  write_text(scratch("bad.csv"), csv);
  const auto r = sh("evaluate " + scratch("bad.csv").string() + " -c " + config().string());
  EXPECT_NE(r.rc, 0);
  EXPECT_NE(r.output.find("bad.csv:4:"), std::string::npos) << r.output;
}

TEST_F(Cli, EvaluateRejectsDuplicateModel) {
  write_text(scratch("a.csv"), truth_as_predictions("same", firerisk::Target::FO));
  write_text(scratch("b.csv"), truth_as_predictions("same", firerisk::Target::FO));
  const auto r = sh("evaluate " + scratch("a.csv").string() + " " + scratch("b.csv").string() + " -c " +
                    config().string() + " --report-dir " + scratch("dup").string());
  EXPECT_NE(r.rc, 0);
  EXPECT_NE(r.output.find("a.csv"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("b.csv"), std::string::npos) << r.output;
}

TEST_F(Cli, OutputRootPrecedence) {
  const fs::path env_out = scratch("env_out"), flag_out = scratch("flag_out");
  auto r = sh("-q label -c " + config().string(), "FIRERISK_OUT='" + env_out.string() + "'");
  ASSERT_EQ(r.rc, 0) << r.output;
  EXPECT_TRUE(fs::exists(env_out / "labels.csv"));
  r = sh("-q --out " + flag_out.string() + " label -c " + config().string(),
         "FIRERISK_OUT='" + env_out.string() + "'");
  ASSERT_EQ(r.rc, 0) << r.output;
  EXPECT_TRUE(fs::exists(flag_out / "labels.csv"));
  EXPECT_FALSE(fs::exists(flag_out / "report.json"));
}

TEST_F(Cli, StandaloneComputeIndices) {
  const auto cubes = out() / "cubes";
  ASSERT_TRUE(fs::exists(cubes));
  const fs::path first = *fs::directory_iterator(cubes);
  const auto r = sh("-q compute-indices --cube " + first.string() + " --out " + scratch("idx").string());
  ASSERT_EQ(r.rc, 0) << r.output;
  EXPECT_TRUE(fs::exists(scratch("idx")));
  EXPECT_NE(sh("compute-indices --cube " + first.string() + " -c " + config().string()).rc, 0);
}
