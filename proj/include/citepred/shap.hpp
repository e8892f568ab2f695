#pragma once

// Exact interventional SHAP values for a TreeEnsemble margin.
//
// For one leaf reached through the distinct path features F (|F| = d), the
// value function is v(S) = w * [x satisfies the S-conditions] * Q(F \ S),
// where Q(T) is the fraction of background rows satisfying the conditions on
// T. Q is tabulated once per leaf (histogram of condition masks plus a
// superset sum), after which each explained row costs O(2^|A| d) per leaf,
// A being the path features whose condition the row meets.

#include <vector>

#include <Eigen/Core>

#include "citepred/gbt.hpp"

namespace citepred::shap {

class ShapExplainer {
 public:
  // Throws DataError for an empty background or a width mismatch, and
  // ConfigError when a leaf depends on more than kMaxPathFeatures features.
  ShapExplainer(const gbt::TreeEnsemble& model, const Eigen::MatrixXd& background);

  static constexpr int kMaxPathFeatures = 20;

  // Expected margin over the background.
  double base_value() const { return base_value_; }

  // One contribution per feature; they sum to margin(row) - base_value().
  Eigen::VectorXd values(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;

  // One row of contributions per input row.
  Eigen::MatrixXd values_all(const Eigen::MatrixXd& rows) const;

 private:
  struct Leaf {
    double value = 0.0;  // learning-rate scaled weight
    std::vector<int> features;
    std::vector<double> lo, hi;  // condition lo <= x < hi per path feature
    std::vector<double> q;       // indexed by feature subset mask
  };

  Eigen::Index width_ = 0;
  double base_value_ = 0.0;
  std::vector<Leaf> leaves_;
  // weights_[d][s] = s! (d - s - 1)! / d!
  std::vector<std::vector<double>> weights_;
};

}  // namespace citepred::shap
