#include "citepred/stats.hpp"

#include <ostream>

namespace citepred::stats {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

// I_x(a, b) given both x and 1 - x, so callers can pass an accurate
// complement.
double incomplete_beta_pair(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

std::string cell(double v) { return std::isnan(v) ? std::string("NA") : format_decimal(v); }

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw ConfigError("incomplete beta needs positive shape parameters");
  if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("incomplete beta argument outside [0, 1]");
  return incomplete_beta_pair(a, b, x, 1.0 - x);
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw ConfigError("t distribution needs positive degrees of freedom");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  const double x = df / (df + t2);
  const double y = t2 / (df + t2);
  return std::clamp(incomplete_beta_pair(0.5 * df, 0.5, x, y), 0.0, 1.0);
}

double correlation_p_value(double rho, Eigen::Index n) {
  if (n < 3) return std::numeric_limits<double>::quiet_NaN();
  const double df = static_cast<double>(n - 2);
  const double r2 = rho * rho;
  if (r2 >= 1.0) return 0.0;
  return student_t_two_sided_p(rho * std::sqrt(df / (1.0 - r2)), df);
}

CorrelationMatrix correlation_matrix(const Eigen::MatrixXd& columns, std::vector<std::string> names) {
  const Eigen::Index k = columns.cols();
  if (static_cast<Eigen::Index>(names.size()) != k) throw ConfigError("one name per column required");
  if (columns.rows() < 3) throw DataError("correlation matrix needs at least 3 rows");
  Eigen::MatrixXd centered(columns.rows(), k);
  Eigen::VectorXd norms(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::VectorXd r = fractional_ranks(columns.col(c));
    centered.col(c) = r.array() - r.mean();
    norms[c] = centered.col(c).norm();
  }
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  CorrelationMatrix m{std::move(names), Eigen::MatrixXd::Constant(k, k, nan), Eigen::MatrixXd::Constant(k, k, nan)};
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      if (norms[i] == 0.0 || norms[j] == 0.0) continue;
      const double rho = (i == j) ? 1.0
                                  : std::clamp(centered.col(i).dot(centered.col(j)) / (norms[i] * norms[j]), -1.0, 1.0);
      const double p = correlation_p_value(rho, columns.rows());
      m.rho(i, j) = m.rho(j, i) = rho;
      m.p_value(i, j) = m.p_value(j, i) = p;
    }
  }
  return m;
}

CorrelationMatrix correlation_matrix(const features::FeatureTable& table) {
  Eigen::MatrixXd columns(table.rows(), features::kPredictorCount + 1);
  columns.col(0) = table.citations;
  columns.rightCols(features::kPredictorCount) = table.predictors;
  std::vector<std::string> names{"citations"};
  for (const auto& n : features::predictor_names()) names.push_back(n);
  return correlation_matrix(columns, std::move(names));
}

std::string_view significance_stars(double p, StarScale scale) {
  if (std::isnan(p)) return "";
  if (p < 0.001) return "***";
  if (scale == StarScale::correlation) {
    if (p < 0.05) return "**";
    if (p < 0.1) return "*";
    return "";
  }
  return p < 0.05 ? "*" : "";
}

void write_correlation_csv(std::ostream& out, const CorrelationMatrix& m, const ConfigEcho& echo) {
  write_echo(out, echo);
  out << "row,column,rho,p_value,stars\n";
  const auto k = static_cast<Eigen::Index>(m.names.size());
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      out << m.names[static_cast<std::size_t>(i)] << ',' << m.names[static_cast<std::size_t>(j)] << ','
          << cell(m.rho(i, j)) << ',' << cell(m.p_value(i, j)) << ','
          << significance_stars(m.p_value(i, j), StarScale::correlation) << '\n';
    }
  }
}

TTest welch_t_test(double mean_a, double var_a, double n_a, double mean_b, double var_b, double n_b) {
  if (n_a < 2.0 || n_b < 2.0) throw DataError("welch test needs at least 2 observations per group");
  const double sa = var_a / n_a;
  const double sb = var_b / n_b;
  const double se2 = sa + sb;
  if (!(se2 > 0.0)) throw DataError("welch test undefined: both groups have zero variance");
  TTest r;
  r.t = (mean_a - mean_b) / std::sqrt(se2);
  r.df = se2 * se2 / (sa * sa / (n_a - 1.0) + sb * sb / (n_b - 1.0));
  r.p_value = student_t_two_sided_p(r.t, r.df);
  return r;
}

ExceptionGroups split_exception_groups(const features::FeatureTable& table, double low_q) {
  if (!(low_q >= 0.0 && low_q <= 0.75)) throw ConfigError("low SJR quantile must lie in [0, 0.75]");
  if (!table.labeled()) throw DataError("group split needs a labeled feature table");
  const auto sjr = table.predictors.col(features::kSjr);
  ExceptionGroups g;
  g.top_threshold = nearest_rank_quantile(sjr, 0.75);
  g.low_threshold = low_q > 0.0 ? nearest_rank_quantile(sjr, low_q) : -std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    if (table.labels[r] == 0) continue;
    if (low_q > 0.0 && sjr[r] <= g.low_threshold) {
      g.low_sjr_high_cite.push_back(r);
    } else if (sjr[r] > g.top_threshold) {
      g.top_journal_high_cite.push_back(r);
    }
  }
  if (g.low_sjr_high_cite.empty()) throw DataError("no highly cited publications in low-ranked journals");
  if (g.top_journal_high_cite.empty()) throw DataError("no highly cited publications in top journals");
  return g;
}

std::vector<GroupRow> compare_groups(const features::FeatureTable& table, const ExceptionGroups& groups) {
  std::vector<GroupRow> rows;
  auto compare = [&](std::string name, const Eigen::VectorXd& column) {
    Eigen::VectorXd a(static_cast<Eigen::Index>(groups.low_sjr_high_cite.size()));
    Eigen::VectorXd b(static_cast<Eigen::Index>(groups.top_journal_high_cite.size()));
    for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = column[groups.low_sjr_high_cite[static_cast<std::size_t>(i)]];
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = column[groups.top_journal_high_cite[static_cast<std::size_t>(i)]];
    GroupRow row{std::move(name), a.mean(), b.mean(), std::nullopt};
    if (a.size() >= 2 && b.size() >= 2) {
      try {
        row.test = welch_t_test(a, b);
      } catch (const DataError&) {
        // both groups constant: leave the test undefined
      }
    }
    rows.push_back(std::move(row));
  };
  compare("citations", table.citations);
  for (Eigen::Index c = 0; c < features::kPredictorCount; ++c) {
    compare(features::predictor_names()[static_cast<std::size_t>(c)], table.predictors.col(c));
  }
  return rows;
}

void write_group_csv(std::ostream& out, const std::vector<GroupRow>& rows, const ExceptionGroups& groups,
                     const ConfigEcho& echo) {
  write_echo(out, echo);
  out << "# group_low_sjr_size=" << groups.low_sjr_high_cite.size() << '\n';
  out << "# group_top_journal_size=" << groups.top_journal_high_cite.size() << '\n';
  out << "# low_sjr_threshold=" << format_decimal(groups.low_threshold) << '\n';
  out << "# top_sjr_threshold=" << format_decimal(groups.top_threshold) << '\n';
  out << "variable,mean_low_sjr,mean_top_journal,t,df,p_value,stars\n";
  for (const auto& r : rows) {
    out << r.variable << ',' << format_decimal(r.mean_a) << ',' << format_decimal(r.mean_b) << ',';
    if (r.test) {
      out << format_decimal(r.test->t) << ',' << format_decimal(r.test->df) << ','
          << format_decimal(r.test->p_value) << ',' << significance_stars(r.test->p_value, StarScale::group_test);
    } else {
      out << "NA,NA,NA,";
    }
    out << '\n';
  }
}

}  // namespace citepred::stats
