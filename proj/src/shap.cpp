#include "citepred/shap.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "citepred/error.hpp"

namespace citepred::shap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

ShapExplainer::ShapExplainer(const gbt::TreeEnsemble& model, const Eigen::MatrixXd& background)
    : width_(model.feature_count()) {
  if (background.rows() == 0) throw DataError("SHAP background is empty");
  if (background.cols() != width_) throw DataError("SHAP background has the wrong number of features");

  weights_.resize(kMaxPathFeatures + 1);
  for (int d = 1; d <= kMaxPathFeatures; ++d) {
    weights_[static_cast<std::size_t>(d)].resize(static_cast<std::size_t>(d));
    for (int s = 0; s < d; ++s) {
      weights_[static_cast<std::size_t>(d)][static_cast<std::size_t>(s)] =
          std::exp(std::lgamma(s + 1.0) + std::lgamma(static_cast<double>(d - s)) - std::lgamma(d + 1.0));
    }
  }

  // Walk every root-to-leaf path, intersecting the conditions per feature.
  struct Frame {
    int node;
    std::vector<int> features;
    std::vector<double> lo, hi;
  };
  for (const auto& tree : model.trees) {
    std::vector<Frame> stack;
    stack.push_back({0, {}, {}, {}});
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      const auto& node = tree.nodes[static_cast<std::size_t>(f.node)];
      if (node.is_leaf()) {
        Leaf leaf;
        leaf.value = model.learning_rate * node.weight;
        leaf.features = std::move(f.features);
        leaf.lo = std::move(f.lo);
        leaf.hi = std::move(f.hi);
        if (leaf.features.size() > static_cast<std::size_t>(kMaxPathFeatures)) {
          throw ConfigError("tree path uses too many distinct features for exact SHAP");
        }
        leaves_.push_back(std::move(leaf));
        continue;
      }
      std::size_t k = 0;
      while (k < f.features.size() && f.features[k] != node.feature) ++k;
      if (k == f.features.size()) {
        f.features.push_back(node.feature);
        f.lo.push_back(-kInf);
        f.hi.push_back(kInf);
      }
      Frame left = f;
      left.node = node.left;
      left.hi[k] = std::min(left.hi[k], node.threshold);
      Frame right = std::move(f);
      right.node = node.right;
      right.lo[k] = std::max(right.lo[k], node.threshold);
      stack.push_back(std::move(right));
      stack.push_back(std::move(left));
    }
  }

  const auto n = static_cast<double>(background.rows());
  base_value_ = model.base_score;
  for (auto& leaf : leaves_) {
    const int d = static_cast<int>(leaf.features.size());
    const std::size_t size = std::size_t{1} << d;
    std::vector<double> count(size, 0.0);
    for (Eigen::Index r = 0; r < background.rows(); ++r) {
      std::size_t mask = 0;
      for (int k = 0; k < d; ++k) {
        const double v = background(r, leaf.features[static_cast<std::size_t>(k)]);
        if (leaf.lo[static_cast<std::size_t>(k)] <= v && v < leaf.hi[static_cast<std::size_t>(k)]) mask |= std::size_t{1} << k;
      }
      count[mask] += 1.0;
    }
    // Superset sums: q[T] = #rows whose mask contains T.
    for (int k = 0; k < d; ++k) {
      const std::size_t bit = std::size_t{1} << k;
      for (std::size_t mask = 0; mask < size; ++mask) {
        if (!(mask & bit)) count[mask] += count[mask | bit];
      }
    }
    for (auto& c : count) c /= n;
    leaf.q = std::move(count);
    base_value_ += leaf.value * leaf.q[size - 1];
  }
}

Eigen::VectorXd ShapExplainer::values(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  if (row.size() != width_) throw DataError("row has the wrong number of features");
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(width_);
  for (const auto& leaf : leaves_) {
    const int d = static_cast<int>(leaf.features.size());
    if (d == 0) continue;
    const std::size_t full = (std::size_t{1} << d) - 1;
    std::size_t a = 0;
    for (int k = 0; k < d; ++k) {
      const double v = row[leaf.features[static_cast<std::size_t>(k)]];
      if (leaf.lo[static_cast<std::size_t>(k)] <= v && v < leaf.hi[static_cast<std::size_t>(k)]) a |= std::size_t{1} << k;
    }
    const auto& w = weights_[static_cast<std::size_t>(d)];
    // Outside features share one sum: -value * sum_{S subset of A} w(|S|) Q(F \ S).
    double outside = 0.0;
    // Enumerate subsets S of A, including the empty set.
    std::size_t s = 0;
    while (true) {
      const int size_s = std::popcount(s);
      const double ws = w[static_cast<std::size_t>(size_s)];
      const std::size_t rest = full ^ s;
      const double q_rest = leaf.q[rest];
      if (~a & full) outside += ws * q_rest;
      for (std::size_t others = a & ~s; others != 0; others &= others - 1) {
        const int k = std::countr_zero(others);
        phi[leaf.features[static_cast<std::size_t>(k)]] +=
            leaf.value * ws * (leaf.q[rest ^ (std::size_t{1} << k)] - q_rest);
      }
      if (s == a) break;
      s = (s - a) & a;  // next subset of a in increasing order
    }
    for (std::size_t out = ~a & full; out != 0; out &= out - 1) {
      phi[leaf.features[static_cast<std::size_t>(std::countr_zero(out))]] -= leaf.value * outside;
    }
  }
  return phi;
}

Eigen::MatrixXd ShapExplainer::values_all(const Eigen::MatrixXd& rows) const {
  Eigen::MatrixXd out(rows.rows(), width_);
  for (Eigen::Index r = 0; r < rows.rows(); ++r) out.row(r) = values(rows.row(r)).transpose();
  return out;
}

}  // namespace citepred::shap
