#pragma once

// Rank correlation, classification scores and two-sample tests.
//
// Free functions over Eigen dense expressions: anything with .size() and
// coefficient access (vectors, columns, blocks, arrays) can be passed
// directly.

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "citepred/error.hpp"
#include "citepred/feature_table.hpp"
#include "citepred/format.hpp"

namespace citepred::stats {

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with df degrees of freedom (df may be
// fractional).
double student_t_two_sided_p(double t, double df);

// 1-based ranks; tied values share their mean rank.
template <class Derived>
Eigen::VectorXd fractional_ranks(const Eigen::DenseBase<Derived>& values) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });
  Eigen::VectorXd ranks(n);
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i;
    while (j + 1 < n && values(order[static_cast<std::size_t>(j + 1)]) == values(order[static_cast<std::size_t>(i)])) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Eigen::Index k = i; k <= j; ++k) ranks[order[static_cast<std::size_t>(k)]] = rank;
    i = j + 1;
  }
  return ranks;
}

// Pearson correlation; NaN when either series is constant.
template <class DX, class DY>
double pearson(const Eigen::DenseBase<DX>& x, const Eigen::DenseBase<DY>& y) {
  const Eigen::VectorXd xc = x.derived().template cast<double>().array() - x.derived().template cast<double>().mean();
  const Eigen::VectorXd yc = y.derived().template cast<double>().array() - y.derived().template cast<double>().mean();
  const double sxx = xc.squaredNorm();
  const double syy = yc.squaredNorm();
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::clamp(xc.dot(yc) / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct Correlation {
  double rho = 0.0;
  double p_value = 1.0;
};

// Two-sided p from t = rho * sqrt((n-2) / (1-rho^2)) on n-2 degrees of freedom.
double correlation_p_value(double rho, Eigen::Index n);

// Spearman's rho (Pearson on fractional ranks). nullopt when either series
// has zero variance. Throws DataError unless sizes match and n >= 3.
template <class DX, class DY>
std::optional<Correlation> spearman(const Eigen::DenseBase<DX>& x, const Eigen::DenseBase<DY>& y) {
  if (x.size() != y.size()) throw DataError("spearman: series lengths differ");
  if (x.size() < 3) throw DataError("spearman: need at least 3 observations");
  const double rho = pearson(fractional_ranks(x), fractional_ranks(y));
  if (std::isnan(rho)) return std::nullopt;
  return Correlation{rho, correlation_p_value(rho, x.size())};
}

struct CorrelationMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd rho;      // NaN where undefined
  Eigen::MatrixXd p_value;  // NaN where undefined
};

// Spearman between every pair of columns. Exactly symmetric.
CorrelationMatrix correlation_matrix(const Eigen::MatrixXd& columns, std::vector<std::string> names);
// Citations followed by the 16 predictors.
CorrelationMatrix correlation_matrix(const features::FeatureTable& table);

enum class StarScale {
  correlation,  // *** p<0.001, ** p<0.05, * p<0.1
  group_test,   // *** p<0.001, * p<0.05
};
std::string_view significance_stars(double p_value, StarScale scale);

// "row,column,rho,p_value,stars" for the lower triangle (diagonal included),
// NA for undefined cells.
void write_correlation_csv(std::ostream& out, const CorrelationMatrix& m, const ConfigEcho& echo = {});

namespace detail {
inline void check_binary_pair(Eigen::Index a, Eigen::Index b) {
  if (a != b) throw DataError("prediction and truth lengths differ");
  if (a == 0) throw DataError("no observations");
}
}  // namespace detail

template <class DP, class DT>
double accuracy(const Eigen::DenseBase<DP>& predicted, const Eigen::DenseBase<DT>& truth) {
  detail::check_binary_pair(predicted.size(), truth.size());
  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) correct += (predicted(i) != 0) == (truth(i) != 0);
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

// (p_o - p_e) / (1 - p_e) with p_e from the product of marginals. Throws
// DataError when truth holds a single class.
template <class DP, class DT>
double cohen_kappa(const Eigen::DenseBase<DP>& predicted, const Eigen::DenseBase<DT>& truth) {
  detail::check_binary_pair(predicted.size(), truth.size());
  const auto n = static_cast<double>(truth.size());
  double agree = 0.0, pred_pos = 0.0, true_pos = 0.0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    const bool p = predicted(i) != 0;
    const bool t = truth(i) != 0;
    agree += p == t;
    pred_pos += p;
    true_pos += t;
  }
  if (true_pos == 0.0 || true_pos == n) throw DataError("kappa needs both classes in the truth");
  const double po = agree / n;
  const double pe = (pred_pos / n) * (true_pos / n) + (1.0 - pred_pos / n) * (1.0 - true_pos / n);
  return (po - pe) / (1.0 - pe);
}

// Mann-Whitney estimate of ROC AUC; tied scores earn half credit.
template <class DS, class DT>
double roc_auc(const Eigen::DenseBase<DS>& scores, const Eigen::DenseBase<DT>& truth) {
  detail::check_binary_pair(scores.size(), truth.size());
  const Eigen::VectorXd ranks = fractional_ranks(scores);
  double pos = 0.0, rank_sum = 0.0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    if (truth(i) != 0) {
      pos += 1.0;
      rank_sum += ranks[i];
    }
  }
  const double neg = static_cast<double>(truth.size()) - pos;
  if (pos == 0.0 || neg == 0.0) throw DataError("AUC needs both classes in the truth");
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

struct TTest {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

// Welch's unequal-variance test from group summaries (sample variances).
TTest welch_t_test(double mean_a, double var_a, double n_a, double mean_b, double var_b, double n_b);

template <class DA, class DB>
TTest welch_t_test(const Eigen::DenseBase<DA>& a, const Eigen::DenseBase<DB>& b) {
  if (a.size() < 2 || b.size() < 2) throw DataError("welch test needs at least 2 observations per group");
  auto summary = [](const auto& v) {
    const double mean = v.derived().template cast<double>().mean();
    const double ss = (v.derived().template cast<double>().array() - mean).square().sum();
    return std::pair{mean, ss / static_cast<double>(v.size() - 1)};
  };
  const auto [ma, va] = summary(a);
  const auto [mb, vb] = summary(b);
  return welch_t_test(ma, va, static_cast<double>(a.size()), mb, vb, static_cast<double>(b.size()));
}

// Nearest-rank quantile: the ceil(p*n)-th smallest value, p in (0, 1].
template <class Derived>
double nearest_rank_quantile(const Eigen::DenseBase<Derived>& values, double p) {
  if (values.size() == 0) throw DataError("quantile of an empty series");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("quantile level must lie in (0, 1]");
  std::vector<double> sorted(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) sorted[static_cast<std::size_t>(i)] = static_cast<double>(values(i));
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

// Label-positive rows split by journal rank: A has sjr at or below the
// nearest-rank low_q quantile, B has sjr above the 75th percentile.
struct ExceptionGroups {
  std::vector<Eigen::Index> low_sjr_high_cite;
  std::vector<Eigen::Index> top_journal_high_cite;
  double low_threshold = 0.0;
  double top_threshold = 0.0;
};

// Throws ConfigError for low_q outside [0, 0.75] and DataError for an
// unlabeled table or an empty group.
ExceptionGroups split_exception_groups(const features::FeatureTable& table, double low_q);

struct GroupRow {
  std::string variable;
  double mean_a = 0.0;
  double mean_b = 0.0;
  std::optional<TTest> test;  // nullopt when both groups are constant
};

// Welch tests on citations and every predictor, group A versus group B.
std::vector<GroupRow> compare_groups(const features::FeatureTable& table, const ExceptionGroups& groups);

// "variable,mean_low_sjr,mean_top_journal,t,df,p_value,stars".
void write_group_csv(std::ostream& out, const std::vector<GroupRow>& rows, const ExceptionGroups& groups,
                     const ConfigEcho& echo = {});

}  // namespace citepred::stats
