#include "citepred/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "citepred/error.hpp"
#include "citepred/parallel.hpp"
#include "citepred/random.hpp"
#include "citepred/shap.hpp"
#include "citepred/stats.hpp"

namespace citepred::evaluation {

namespace {

Summary summarize(const std::vector<double>& v) {
  Summary s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

nlohmann::ordered_json config_json(const ConfigEcho& echo) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : echo) j[k] = v;
  return j;
}

nlohmann::ordered_json summary_json(const Summary& s) { return {{"mean", s.mean}, {"sd", s.sd}}; }

nlohmann::ordered_json importances_json(const EvaluationReport& report) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& imp : report.importances) {
    arr.push_back({{"feature", imp.feature}, {"mean_abs_shap", imp.mean}, {"sd", imp.sd}});
  }
  return arr;
}

}  // namespace

void CvConfig::validate() const {
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train_fraction must lie in (0, 1)");
  hyperparameters.validate();
}

std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>> split_rows(Eigen::Index n, double train_fraction,
                                                                           std::uint64_t seed) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  rng::Engine eng(seed);
  rng::shuffle(std::span<Eigen::Index>(perm), eng);
  const auto train_size = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  std::vector<Eigen::Index> train(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(train_size));
  std::vector<Eigen::Index> test(perm.begin() + static_cast<std::ptrdiff_t>(train_size), perm.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

EvaluationReport monte_carlo_cv(const features::FeatureTable& table, const CvConfig& config) {
  config.validate();
  if (!table.labeled()) throw DataError("cross-validation needs a labeled feature table");
  const Eigen::Index n = table.rows();
  EvaluationReport report;
  report.repetitions.resize(static_cast<std::size_t>(config.repetitions));

  parallel_for(report.repetitions.size(), config.threads, [&](unsigned, std::size_t r) {
    const std::uint64_t seed = config.seed + r;
    auto [train_rows, test_rows] = split_rows(n, config.train_fraction, seed);
    const auto train = table.take(train_rows);
    const auto test = table.take(test_rows);
    auto both_classes = [](const Eigen::VectorXi& y) {
      const auto pos = (y.array() != 0).count();
      return pos > 0 && pos < y.size();
    };
    if (!both_classes(train.labels) || !both_classes(test.labels)) {
      throw DataError("table too small: a cross-validation split lacks one class (repetition " +
                      std::to_string(r) + ")");
    }
    const auto model = gbt::fit(train, config.hyperparameters, seed);
    const Eigen::VectorXd prob = model.probabilities(test.predictors);
    const Eigen::VectorXi predicted = (prob.array() >= 0.5).cast<int>();

    RepetitionResult& out = report.repetitions[r];
    out.train_size = train.rows();
    out.test_size = test.rows();
    out.accuracy = stats::accuracy(predicted, test.labels);
    out.kappa = stats::cohen_kappa(predicted, test.labels);
    out.auc = stats::roc_auc(prob, test.labels);

    const shap::ShapExplainer explainer(model, train.predictors);
    out.mean_abs_shap = Eigen::VectorXd::Zero(features::kPredictorCount);
    for (Eigen::Index i = 0; i < test.rows(); ++i) {
      out.mean_abs_shap += explainer.values(test.predictors.row(i)).cwiseAbs();
    }
    out.mean_abs_shap /= static_cast<double>(test.rows());
  });

  std::vector<double> acc, kappa, auc;
  for (const auto& r : report.repetitions) {
    acc.push_back(r.accuracy);
    kappa.push_back(r.kappa);
    auc.push_back(r.auc);
  }
  report.accuracy = summarize(acc);
  report.kappa = summarize(kappa);
  report.auc = summarize(auc);

  for (Eigen::Index f = 0; f < features::kPredictorCount; ++f) {
    std::vector<double> v;
    for (const auto& r : report.repetitions) v.push_back(r.mean_abs_shap[f]);
    const auto s = summarize(v);
    report.importances.push_back({features::predictor_names()[static_cast<std::size_t>(f)], s.mean, s.sd});
  }
  std::stable_sort(report.importances.begin(), report.importances.end(),
                   [](const Importance& a, const Importance& b) { return a.mean > b.mean; });
  return report;
}

void write_evaluation_json(std::ostream& out, const EvaluationReport& report, const ConfigEcho& echo) {
  nlohmann::ordered_json j;
  j["config"] = config_json(echo);
  j["shap"] = {{"explained_rows", "test"}, {"background", "train"}};
  j["accuracy"] = summary_json(report.accuracy);
  j["kappa"] = summary_json(report.kappa);
  j["auc"] = summary_json(report.auc);
  auto reps = nlohmann::ordered_json::array();
  for (const auto& r : report.repetitions) {
    reps.push_back({{"train_size", r.train_size},
                    {"test_size", r.test_size},
                    {"accuracy", r.accuracy},
                    {"kappa", r.kappa},
                    {"auc", r.auc}});
  }
  j["repetitions"] = std::move(reps);
  j["importances"] = importances_json(report);
  out << j.dump(1) << '\n';
}

void write_importances_json(std::ostream& out, const EvaluationReport& report, const ConfigEcho& echo) {
  nlohmann::ordered_json j;
  j["config"] = config_json(echo);
  j["importances"] = importances_json(report);
  out << j.dump(1) << '\n';
}

}  // namespace citepred::evaluation
