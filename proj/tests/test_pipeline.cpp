#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "fixtures.hpp"
#include "infoflow/pipeline.hpp"
#include "infoflow/rng.hpp"
#include "json.hpp"

using namespace infoflow;
using json = nlohmann::ordered_json;

namespace {

RunConfig panel_config(const fs::path& in, const fs::path& out) {
  RunConfig c;
  c.input_dir = in;
  c.input_kind = InputKind::panels;
  c.out_dir = out;
  c.p_max = 5;
  c.n_max = 3;
  return c;
}

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  int n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

std::vector<fs::path> outputs(const fs::path& out) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(out)) {
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), out));
  }
  std::sort(files.begin(), files.end());
  return files;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(INFOFLOW_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    in_ = new fs::path(fixture::scratch("pipeline_in"));
    fixture::write_panel_dir(*in_, fixture::chain(6, 21), 4, 3000);
  }
  static void TearDownTestSuite() {
    fs::remove_all(*in_);
    delete in_;
  }
  static fs::path* in_;
  Logger quiet_{nullptr};
};

fs::path* PipelineTest::in_ = nullptr;

TEST_F(PipelineTest, ProducesEveryOutput) {
  const auto out = fixture::scratch("pipeline_out");
  const auto report = run_pipeline(panel_config(*in_, out), quiet_);
  EXPECT_EQ(report.exit_code, ExitCode::ok);
  EXPECT_EQ(report.windows, 4);
  EXPECT_EQ(report.analysed, 4);
  for (int w = 0; w < 4; ++w) {
    for (const char* stem : {"edges_", "strengths_", "matrix_", "multiplets_"}) {
      EXPECT_TRUE(fs::exists(out / "windows" / (stem + std::to_string(w) + ".csv"))) << stem << w;
    }
    EXPECT_TRUE(fs::exists(out / "windows" / ("gc_" + std::to_string(w) + ".json")));
    EXPECT_TRUE(fs::exists(out / "windows" / ("oinfo_" + std::to_string(w) + ".json")));
  }
  for (const char* f : {"window_corr.csv", "window_corr_p.csv", "indicators.csv",
                        "avg_network.csv", "avg_strengths.csv", "membership.csv",
                        "class_fractions.csv", "age_strength.csv", "age_strength_corr.csv",
                        "manifest.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_EQ(count_lines(out / "window_corr.csv"), 5);
  EXPECT_EQ(count_lines(out / "indicators.csv"), 5);

  const auto manifest = json::parse(fixture::slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["windows"].size(), 4u);
  EXPECT_EQ(manifest["failed"], 0);
  EXPECT_EQ(manifest["rng"], kRngAlgorithm);
}

TEST_F(PipelineTest, RerunIsIdempotent) {
  const auto out = fixture::scratch("pipeline_rerun");
  const auto config = panel_config(*in_, out);
  run_pipeline(config, quiet_);
  std::map<fs::path, std::string> first;
  for (const auto& f : outputs(out)) first[f] = fixture::slurp(out / f);
  const auto again = run_pipeline(config, quiet_);
  EXPECT_EQ(again.resumed, 4);
  EXPECT_EQ(again.analysed, 0);
  for (const auto& f : outputs(out)) EXPECT_EQ(fixture::slurp(out / f), first[f]) << f;
}

TEST_F(PipelineTest, ChangedConfigDoesNotResume) {
  const auto out = fixture::scratch("pipeline_changed");
  auto config = panel_config(*in_, out);
  run_pipeline(config, quiet_);
  config.alpha = 0.05;
  EXPECT_EQ(run_pipeline(config, quiet_).resumed, 0);
}

TEST_F(PipelineTest, ParallelRunMatchesSerial) {
  const auto a = fixture::scratch("pipeline_serial");
  const auto b = fixture::scratch("pipeline_parallel");
  run_pipeline(panel_config(*in_, a), quiet_);
  auto config = panel_config(*in_, b);
  config.jobs = 3;
  run_pipeline(config, quiet_);
  const auto files = outputs(a);
  EXPECT_EQ(files, outputs(b));
  for (const auto& f : files) {
    if (f == "manifest.json") continue;  // records the out path and job count
    EXPECT_EQ(fixture::slurp(a / f), fixture::slurp(b / f)) << f;
  }
}

TEST(Pipeline, CorruptWindowIsSkipped) {
  const auto in = fixture::scratch("pipeline_corrupt_in");
  fixture::write_panel_dir(in, fixture::chain(4, 5), 3, 2000);
  {
    std::ofstream bad(in / "panel_1.csv", std::ios::binary);
    bad << "X0,X1\n1.0,oops\n";
  }
  const auto out = fixture::scratch("pipeline_corrupt_out");
  Logger quiet(nullptr);
  const auto report = run_pipeline(panel_config(in, out), quiet);
  EXPECT_EQ(report.exit_code, ExitCode::partial_failure);
  EXPECT_EQ(report.failed, 1);
  EXPECT_EQ(report.analysed, 2);
  EXPECT_TRUE(fs::exists(out / "windows" / "edges_0.csv"));
  EXPECT_TRUE(fs::exists(out / "windows" / "edges_2.csv"));
  EXPECT_FALSE(fs::exists(out / "windows" / "edges_1.csv"));
  EXPECT_TRUE(fs::exists(out / "window_corr.csv"));
  const auto manifest = json::parse(fixture::slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["windows"][1]["status"], "failed");
  EXPECT_EQ(manifest["windows"][1]["diagnostics"][0]["code"], "window_failed");
}

TEST(Pipeline, StrictRunSkipsGlobalOutputs) {
  const auto in = fixture::scratch("pipeline_strict_in");
  fixture::write_panel_dir(in, fixture::chain(4, 6), 2, 2000);
  {
    std::ofstream bad(in / "panel_0.csv", std::ios::binary);
    bad << "garbage";
  }
  const auto out = fixture::scratch("pipeline_strict_out");
  auto config = panel_config(in, out);
  config.strict = true;
  Logger quiet(nullptr);
  EXPECT_EQ(run_pipeline(config, quiet).exit_code, ExitCode::partial_failure);
  EXPECT_FALSE(fs::exists(out / "window_corr.csv"));
}

TEST(Pipeline, InvalidConfigThrows) {
  RunConfig c;
  c.input_dir = "/definitely/not/here";
  c.out_dir = fixture::scratch("pipeline_invalid");
  Logger quiet(nullptr);
  EXPECT_THROW(run_pipeline(c, quiet), ConfigError);
}

TEST(Cli, ExitCodes) {
  const auto dir = fixture::scratch("cli");
  EXPECT_EQ(run_cli("run --in /definitely/not/here --out " + (dir / "o").string()), 2);
  EXPECT_EQ(run_cli("run --in " + dir.string() + " --out " + (dir / "o").string() +
                    " --alpha 2"),
            2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("synth --format panels --windows 2 --length 2000 --vars 4 --out " +
                    (dir / "p").string()),
            0);
  EXPECT_TRUE(fs::exists(dir / "p" / "panel_1.csv"));
  EXPECT_EQ(run_cli("run --kind panels --pmax 3 --nmax 3 --in " + (dir / "p").string() +
                    " --out " + (dir / "o").string()),
            0);
  EXPECT_TRUE(fs::exists(dir / "o" / "indicators.csv"));
}

TEST(Cli, TapeEndToEnd) {
  const auto dir = fixture::scratch("cli_tape");
  ASSERT_EQ(run_cli("synth --format tape --windows 2 --vars 4 --out " + (dir / "t").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "t" / "X0USD.csv"));
  EXPECT_TRUE(fs::exists(dir / "t" / "assets.csv"));
  ASSERT_EQ(run_cli("run --pmax 3 --nmax 3 --in " + (dir / "t").string() + " --out " +
                    (dir / "o").string()),
            0);
  EXPECT_EQ(count_lines(dir / "o" / "panels" / "windows.csv"), 3);
  const auto manifest = json::parse(fixture::slurp(dir / "o" / "manifest.json"));
  EXPECT_EQ(manifest["windows"][0]["start_date"], "2020-01-06");
  EXPECT_EQ(manifest["windows"][0]["rows"], 10080);
}
