#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "citepred/error.hpp"
#include "citepred/evaluation.hpp"

using namespace citepred;
using namespace citepred::evaluation;

namespace {

features::FeatureTable planted_table(int n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> z;
  features::FeatureTable t;
  t.citations.resize(n);
  t.predictors.resize(n, features::kPredictorCount);
  t.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    t.pub_ids.push_back("p" + std::to_string(10000 + i));
    for (Eigen::Index f = 0; f < features::kPredictorCount; ++f) t.predictors(i, f) = std::round(z(eng) * 8) / 8;
    const double score = 2.0 * t.predictors(i, features::kSjr) + t.predictors(i, features::kRotatingLeadership) + z(eng);
    t.citations[i] = std::floor(std::exp(1 + score));
    t.labels[i] = score > 1.0;
  }
  return t;
}

CvConfig small_config() {
  CvConfig cfg;
  cfg.repetitions = 6;
  cfg.hyperparameters.rounds = 20;
  cfg.hyperparameters.max_depth = 3;
  return cfg;
}

}  // namespace

TEST(Split, SeventyFiveTwentyFive) {
  auto [train, test] = split_rows(100, 0.75, 42);
  EXPECT_EQ(train.size(), 75u);
  EXPECT_EQ(test.size(), 25u);
  EXPECT_TRUE(std::is_sorted(train.begin(), train.end()));
  std::vector<Eigen::Index> all(train);
  all.insert(all.end(), test.begin(), test.end());
  std::sort(all.begin(), all.end());
  for (Eigen::Index i = 0; i < 100; ++i) EXPECT_EQ(all[static_cast<std::size_t>(i)], i);
  EXPECT_NE(split_rows(100, 0.75, 43).first, train);
}

TEST(MonteCarlo, OneRepetitionSizes) {
  auto t = planted_table(100, 1);
  auto cfg = small_config();
  cfg.repetitions = 1;
  auto r = monte_carlo_cv(t, cfg);
  ASSERT_EQ(r.repetitions.size(), 1u);
  EXPECT_EQ(r.repetitions[0].train_size, 75);
  EXPECT_EQ(r.repetitions[0].test_size, 25);
  EXPECT_EQ(r.importances.size(), 16u);
}

TEST(MonteCarlo, RecoversPlantedOrdering) {
  auto t = planted_table(800, 2);
  auto r = monte_carlo_cv(t, small_config());
  EXPECT_GT(r.accuracy.mean, 0.8);
  EXPECT_EQ(r.importances[0].feature, "sjr");
  EXPECT_EQ(r.importances[1].feature, "x9");
  for (std::size_t i = 1; i < r.importances.size(); ++i) EXPECT_GE(r.importances[i - 1].mean, r.importances[i].mean);
  double mean = 0.0;
  for (const auto& rep : r.repetitions) mean += rep.mean_abs_shap[features::kSjr] / 6.0;
  EXPECT_NEAR(r.importances[0].mean, mean, 1e-12);
}

TEST(MonteCarlo, DeterministicAcrossRunsAndThreads) {
  auto t = planted_table(300, 3);
  auto cfg = small_config();
  const ConfigEcho echo{{"seed", "42"}};
  std::ostringstream a, b, c;
  write_evaluation_json(a, monte_carlo_cv(t, cfg), echo);
  write_evaluation_json(b, monte_carlo_cv(t, cfg), echo);
  cfg.threads = 4;
  write_evaluation_json(c, monte_carlo_cv(t, cfg), echo);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), c.str());
  EXPECT_NE(a.str().find("\"config\""), std::string::npos);
}

TEST(MonteCarlo, TooSmallTableThrows) {
  auto t = planted_table(8, 4);
  t.labels.setZero();
  t.labels[0] = 1;
  auto cfg = small_config();
  EXPECT_THROW(monte_carlo_cv(t, cfg), DataError);
  t.labels.resize(0);
  EXPECT_THROW(monte_carlo_cv(t, cfg), DataError);
}

TEST(MonteCarlo, ConfigValidation) {
  CvConfig cfg;
  cfg.repetitions = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.repetitions = 1;
  cfg.train_fraction = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(MonteCarlo, ImportancesJsonIsSorted) {
  auto t = planted_table(200, 5);
  std::ostringstream out;
  write_importances_json(out, monte_carlo_cv(t, small_config()), {{"seed", "42"}});
  const auto s = out.str();
  EXPECT_LT(s.find("\"sjr\""), s.find("\"x14\""));
}
