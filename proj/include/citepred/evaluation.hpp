#pragma once

// Monte-Carlo cross-validation of the boosted classifier with mean-|SHAP|
// importances on the held-out rows.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "citepred/feature_table.hpp"
#include "citepred/format.hpp"
#include "citepred/gbt.hpp"

namespace citepred::evaluation {

struct CvConfig {
  int repetitions = 300;
  double train_fraction = 0.75;
  gbt::Hyperparameters hyperparameters;
  std::uint64_t seed = 42;
  unsigned threads = 1;

  void validate() const;
};

struct RepetitionResult {
  Eigen::Index train_size = 0;
  Eigen::Index test_size = 0;
  double accuracy = 0.0;
  double kappa = 0.0;
  double auc = 0.0;
  Eigen::VectorXd mean_abs_shap;  // per feature, over the test rows
};

struct Importance {
  std::string feature;
  double mean = 0.0;  // mean over repetitions of the per-repetition mean |SHAP|
  double sd = 0.0;    // sample sd of the same quantity across repetitions
};

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
};

struct EvaluationReport {
  std::vector<RepetitionResult> repetitions;
  Summary accuracy, kappa, auc;
  std::vector<Importance> importances;  // sorted by decreasing mean, ties in column order
};

// Repetition r shuffles the rows with seed + r, trains on the first
// round(train_fraction * n) rows and tests on the rest. Repetitions run in
// parallel; the report does not depend on the thread count. Throws DataError
// when a split leaves a class missing from train or test.
EvaluationReport monte_carlo_cv(const features::FeatureTable& table, const CvConfig& config);

// Split indices of one repetition: {train, test}, each ascending.
std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>> split_rows(Eigen::Index n, double train_fraction,
                                                                           std::uint64_t seed);

// JSON documents carrying the config echo under "config".
void write_evaluation_json(std::ostream& out, const EvaluationReport& report, const ConfigEcho& echo);
void write_importances_json(std::ostream& out, const EvaluationReport& report, const ConfigEcho& echo);

}  // namespace citepred::evaluation
