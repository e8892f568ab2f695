#pragma once

// Gradient-boosted regression trees on the logistic loss, grown with exact
// greedy split search.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "citepred/error.hpp"
#include "citepred/feature_table.hpp"

namespace citepred::gbt {

struct Hyperparameters {
  int rounds = 100;
  int max_depth = 4;
  double learning_rate = 0.1;
  double lambda = 1.0;            // L2 penalty on leaf weights
  double gamma = 0.0;             // a split must gain strictly more than this
  double min_child_weight = 1.0;  // minimum hessian sum in each child
  double subsample = 1.0;         // row fraction per round; the seed only matters below 1

  void validate() const;
};

// Internal nodes send x[feature] < threshold to the left child.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double weight = 0.0;  // leaves only
  double cover = 0.0;   // training hessian sum

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  template <class Derived>
  int leaf_index(const Eigen::DenseBase<Derived>& row) const {
    int i = 0;
    while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
      const auto& n = nodes[static_cast<std::size_t>(i)];
      i = row(n.feature) < n.threshold ? n.left : n.right;
    }
    return i;
  }

  template <class Derived>
  double value(const Eigen::DenseBase<Derived>& row) const {
    return nodes[static_cast<std::size_t>(leaf_index(row))].weight;
  }

  int depth() const;
};

struct TreeEnsemble {
  std::vector<Tree> trees;
  double learning_rate = 0.1;
  double base_score = 0.0;  // log-odds
  std::vector<std::string> feature_names;

  Eigen::Index feature_count() const { return static_cast<Eigen::Index>(feature_names.size()); }

  // base_score + learning_rate * sum of leaf weights. Throws DataError when
  // the row width differs from the feature count.
  template <class Derived>
  double margin(const Eigen::DenseBase<Derived>& row) const {
    if (row.size() != feature_count()) throw DataError("row has the wrong number of features");
    double sum = 0.0;
    for (const auto& t : trees) sum += t.value(row);
    return base_score + learning_rate * sum;
  }

  template <class Derived>
  double probability(const Eigen::DenseBase<Derived>& row) const {
    return logistic(margin(row));
  }

  Eigen::VectorXd margins(const Eigen::MatrixXd& rows) const;
  Eigen::VectorXd probabilities(const Eigen::MatrixXd& rows) const;

  static double logistic(double m) { return 1.0 / (1.0 + std::exp(-m)); }
};

// Rows are put into a canonical order before fitting, so the result does not
// depend on how the training rows are arranged. Throws DataError when the
// labels hold a single class.
TreeEnsemble fit(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, const Hyperparameters& hp,
                 std::uint64_t seed, std::vector<std::string> feature_names = {});
TreeEnsemble fit(const features::FeatureTable& train, const Hyperparameters& hp, std::uint64_t seed);

// Versioned JSON tree dump; doubles survive the round trip exactly.
std::string to_json(const TreeEnsemble& model);
TreeEnsemble from_json(const std::string& text);

}  // namespace citepred::gbt
