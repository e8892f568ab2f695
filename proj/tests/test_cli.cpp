#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string output;
};

Run run_cli(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "cli.log";
  const std::string cmd = std::string(CITEPRED_CLI) + " " + args + " > '" + log.string() + "' 2>&1";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, testutil::slurp(log)};
}

const char* kSmall =
    " --synth_publications 600 --synth_authors 1200 --synth_journals 50 --synth_abstract_tokens 40"
    " --synth_coefficients sjr:0.5,x9:0.5 --repetitions 3 --rounds 15 --max_depth 3";

}  // namespace

TEST(Cli, HelpExitsZero) {
  auto dir = testutil::scratch_dir("cli_help");
  auto r = run_cli("--help", dir);
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.output.find("compare-groups"), std::string::npos);
  EXPECT_NE(r.output.find("--label_quantile"), std::string::npos);
}

TEST(Cli, TrainWithoutFeaturesNamesTheFile) {
  auto dir = testutil::scratch_dir("cli_missing");
  auto r = run_cli("train --workdir '" + (dir / "out").string() + "'", dir);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("features.csv"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("features stage"), std::string::npos) << r.output;
  EXPECT_EQ(std::count(r.output.begin(), r.output.end(), '\n'), 1) << r.output;
}

TEST(Cli, ConfigErrorsExitOne) {
  auto dir = testutil::scratch_dir("cli_config");
  EXPECT_EQ(run_cli("train --label_quantile 1.5", dir).status, 1);
  EXPECT_EQ(run_cli("train --tie_rule sometimes", dir).status, 1);
  EXPECT_EQ(run_cli("nosuchstage", dir).status, 1);
  EXPECT_EQ(run_cli("", dir).status, 1);
  EXPECT_EQ(run_cli("synth --synth_coefficients sjr=2", dir).status, 1);
}

TEST(Cli, MissingCorpusExitsTwo) {
  auto dir = testutil::scratch_dir("cli_nocorpus");
  auto r = run_cli("ingest --corpus '" + (dir / "absent.jsonl").string() + "' --workdir '" + dir.string() + "'", dir);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("absent.jsonl"), std::string::npos);
}

TEST(Cli, SynthThenReportFromConfigFile) {
  auto dir = testutil::scratch_dir("cli_report");
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "corpus=" << (dir / "corpus.jsonl").string() << "\n"
        << "workdir=" << (dir / "out").string() << "\n"
        << "seed=7\n"
        << "synth_publications=600\nsynth_authors=1200\nsynth_journals=50\nsynth_abstract_tokens=40\n"
        << "repetitions=3\nrounds=15\nmax_depth=3\n";
  }
  const std::string cfg = " --config '" + (dir / "run.cfg").string() + "'";
  auto synth = run_cli("synth" + cfg, dir);
  ASSERT_EQ(synth.status, 0) << synth.output;
  auto report = run_cli("report" + cfg + " --threads 1", dir);
  ASSERT_EQ(report.status, 0) << report.output;
  for (const char* f : {"correlations.csv", "importances.json", "groups.csv", "descriptive.csv", "feature_summary.csv",
                        "evaluation.json"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / "report" / f)) << f;
  }
  const auto importances = testutil::slurp(dir / "out" / "report" / "importances.json");
  EXPECT_NE(importances.find("\"seed\": \"7\""), std::string::npos) << importances.substr(0, 400);
  const auto corr = testutil::slurp(dir / "out" / "report" / "correlations.csv");
  EXPECT_EQ(corr.rfind("# seed=7\n", 0), 0u);

  // A command-line flag overrides the file.
  auto again = run_cli("features" + cfg + " --label_quantile 0.2", dir);
  ASSERT_EQ(again.status, 0) << again.output;
  EXPECT_NE(testutil::slurp(dir / "out" / "features.csv").find("# label_quantile=0.2\n"), std::string::npos);
}

TEST(Cli, ReportIsReproducibleAcrossThreadCounts) {
  auto dir = testutil::scratch_dir("cli_repro");
  const std::string corpus = " --corpus '" + (dir / "corpus.jsonl").string() + "'";
  ASSERT_EQ(run_cli(std::string("synth") + kSmall + corpus, dir).status, 0);
  auto a = run_cli(std::string("report") + kSmall + corpus + " --threads 1 --workdir '" + (dir / "a").string() + "'", dir);
  auto b = run_cli(std::string("report") + kSmall + corpus + " --threads 4 --workdir '" + (dir / "b").string() + "'", dir);
  ASSERT_EQ(a.status, 0) << a.output;
  ASSERT_EQ(b.status, 0) << b.output;
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a" / "report")) {
    const auto other = dir / "b" / "report" / entry.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(testutil::slurp(entry.path()), testutil::slurp(other)) << entry.path().filename();
    ++compared;
  }
  EXPECT_EQ(compared, 7);
}
