#include "citepred/gbt.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "citepred/random.hpp"

namespace citepred::gbt {

namespace {

constexpr int kFormatVersion = 1;

struct Split {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

// Midpoint between consecutive distinct values a < b, falling back to b when
// the midpoint rounds onto a.
double split_point(double a, double b) {
  const double mid = a + (b - a) / 2.0;
  return mid > a ? mid : b;
}

class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& x, const std::vector<std::vector<Eigen::Index>>& sorted,
              const Hyperparameters& hp)
      : x_(x), sorted_(sorted), hp_(hp) {}

  Tree grow(const Eigen::VectorXd& g, const Eigen::VectorXd& h, const std::vector<char>& in_sample) {
    const Eigen::Index n = x_.rows();
    pos_.assign(static_cast<std::size_t>(n), -1);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (in_sample[static_cast<std::size_t>(r)]) pos_[static_cast<std::size_t>(r)] = 0;
    }
    Tree tree;
    tree.nodes.emplace_back();
    std::vector<int> frontier{0};
    for (int depth = 0; !frontier.empty(); ++depth) {
      std::vector<double> gs, hs;
      sums(frontier, g, h, gs, hs);
      std::vector<Split> best(frontier.size());
      if (depth < hp_.max_depth) best = find_splits(frontier, g, h, gs, hs);

      std::vector<int> next;
      for (std::size_t s = 0; s < frontier.size(); ++s) {
        auto& node = tree.nodes[static_cast<std::size_t>(frontier[s])];
        node.cover = hs[s];
        if (best[s].feature < 0) {
          node.weight = -gs[s] / (hs[s] + hp_.lambda);
          continue;
        }
        node.feature = best[s].feature;
        node.threshold = best[s].threshold;
        node.left = static_cast<int>(tree.nodes.size());
        node.right = node.left + 1;
        next.push_back(node.left);
        next.push_back(node.right);
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
      }
      for (Eigen::Index r = 0; r < n; ++r) {
        int& p = pos_[static_cast<std::size_t>(r)];
        if (p < 0) continue;
        const auto& node = tree.nodes[static_cast<std::size_t>(p)];
        if (node.is_leaf()) {
          p = -1;
        } else {
          p = x_(r, node.feature) < node.threshold ? node.left : node.right;
        }
      }
      frontier = std::move(next);
    }
    return tree;
  }

 private:
  // Gradient and hessian sums per frontier node, accumulated in row order.
  void sums(const std::vector<int>& frontier, const Eigen::VectorXd& g, const Eigen::VectorXd& h,
            std::vector<double>& gs, std::vector<double>& hs) {
    slot_.assign(static_cast<std::size_t>(frontier.back() + 1), -1);
    for (std::size_t s = 0; s < frontier.size(); ++s) slot_[static_cast<std::size_t>(frontier[s])] = static_cast<int>(s);
    gs.assign(frontier.size(), 0.0);
    hs.assign(frontier.size(), 0.0);
    for (Eigen::Index r = 0; r < x_.rows(); ++r) {
      const int p = pos_[static_cast<std::size_t>(r)];
      if (p < 0) continue;
      const auto s = static_cast<std::size_t>(slot_[static_cast<std::size_t>(p)]);
      gs[s] += g[r];
      hs[s] += h[r];
    }
  }

  // One scan per feature over the presorted column serves every frontier
  // node at once. Features and thresholds are visited in increasing order and
  // only a strictly larger gain replaces the incumbent, which settles ties.
  std::vector<Split> find_splits(const std::vector<int>& frontier, const Eigen::VectorXd& g,
                                 const Eigen::VectorXd& h, const std::vector<double>& gs,
                                 const std::vector<double>& hs) {
    const std::size_t k = frontier.size();
    std::vector<Split> best(k);
    std::vector<double> parent(k);
    for (std::size_t s = 0; s < k; ++s) {
      best[s].gain = hp_.gamma;
      parent[s] = gs[s] * gs[s] / (hs[s] + hp_.lambda);
    }
    std::vector<double> gl(k), hl(k), last(k);
    std::vector<char> seen(k);
    for (Eigen::Index f = 0; f < x_.cols(); ++f) {
      std::fill(gl.begin(), gl.end(), 0.0);
      std::fill(hl.begin(), hl.end(), 0.0);
      std::fill(seen.begin(), seen.end(), 0);
      for (const Eigen::Index r : sorted_[static_cast<std::size_t>(f)]) {
        const int p = pos_[static_cast<std::size_t>(r)];
        if (p < 0) continue;
        const auto s = static_cast<std::size_t>(slot_[static_cast<std::size_t>(p)]);
        const double v = x_(r, f);
        if (seen[s] && v > last[s]) {
          const double hr = hs[s] - hl[s];
          if (hl[s] >= hp_.min_child_weight && hr >= hp_.min_child_weight) {
            const double gr = gs[s] - gl[s];
            const double gain = gl[s] * gl[s] / (hl[s] + hp_.lambda) + gr * gr / (hr + hp_.lambda) - parent[s];
            if (gain > best[s].gain) best[s] = {gain, static_cast<int>(f), split_point(last[s], v)};
          }
        }
        gl[s] += g[r];
        hl[s] += h[r];
        last[s] = v;
        seen[s] = 1;
      }
    }
    return best;
  }

  const Eigen::MatrixXd& x_;
  const std::vector<std::vector<Eigen::Index>>& sorted_;
  const Hyperparameters& hp_;
  std::vector<int> pos_;
  std::vector<int> slot_;
};

int subtree_depth(const Tree& t, int i) {
  const auto& n = t.nodes[static_cast<std::size_t>(i)];
  if (n.is_leaf()) return 0;
  return 1 + std::max(subtree_depth(t, n.left), subtree_depth(t, n.right));
}

}  // namespace

void Hyperparameters::validate() const {
  if (rounds < 0) throw ConfigError("rounds must be non-negative");
  if (max_depth < 0) throw ConfigError("max_depth must be non-negative");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be non-negative");
  if (!(gamma >= 0.0)) throw ConfigError("gamma must be non-negative");
  if (!(min_child_weight >= 0.0)) throw ConfigError("min_child_weight must be non-negative");
  if (!(subsample > 0.0 && subsample <= 1.0)) throw ConfigError("subsample must lie in (0, 1]");
}

int Tree::depth() const { return nodes.empty() ? 0 : subtree_depth(*this, 0); }

Eigen::VectorXd TreeEnsemble::margins(const Eigen::MatrixXd& rows) const {
  Eigen::VectorXd out(rows.rows());
  for (Eigen::Index r = 0; r < rows.rows(); ++r) out[r] = margin(rows.row(r));
  return out;
}

Eigen::VectorXd TreeEnsemble::probabilities(const Eigen::MatrixXd& rows) const {
  return margins(rows).unaryExpr([](double m) { return logistic(m); });
}

TreeEnsemble fit(const Eigen::MatrixXd& x_in, const Eigen::VectorXi& y_in, const Hyperparameters& hp,
                 std::uint64_t seed, std::vector<std::string> feature_names) {
  hp.validate();
  const Eigen::Index n = x_in.rows();
  const Eigen::Index m = x_in.cols();
  if (y_in.size() != n) throw DataError("label count differs from row count");
  if (feature_names.empty()) {
    for (Eigen::Index f = 0; f < m; ++f) feature_names.push_back("f" + std::to_string(f));
  }
  if (static_cast<Eigen::Index>(feature_names.size()) != m) throw ConfigError("one name per feature required");
  if (!x_in.allFinite()) throw DataError("training features must be finite");
  const Eigen::Index positives = (y_in.array() != 0).count();
  if (positives == 0 || positives == n) throw DataError("training set holds a single class");

  // Canonical row order: lexicographic on (features, label).
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index f = 0; f < m; ++f) {
      if (x_in(a, f) != x_in(b, f)) return x_in(a, f) < x_in(b, f);
    }
    return (y_in[a] != 0) < (y_in[b] != 0);
  });
  Eigen::MatrixXd x(n, m);
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    x.row(r) = x_in.row(order[static_cast<std::size_t>(r)]);
    y[r] = y_in[order[static_cast<std::size_t>(r)]] != 0 ? 1.0 : 0.0;
  }

  std::vector<std::vector<Eigen::Index>> sorted(static_cast<std::size_t>(m));
  for (Eigen::Index f = 0; f < m; ++f) {
    auto& s = sorted[static_cast<std::size_t>(f)];
    s.resize(static_cast<std::size_t>(n));
    std::iota(s.begin(), s.end(), Eigen::Index{0});
    std::stable_sort(s.begin(), s.end(), [&](Eigen::Index a, Eigen::Index b) { return x(a, f) < x(b, f); });
  }

  TreeEnsemble model;
  model.learning_rate = hp.learning_rate;
  model.feature_names = std::move(feature_names);
  const double prior = static_cast<double>(positives) / static_cast<double>(n);
  model.base_score = std::log(prior / (1.0 - prior));

  rng::Engine eng(seed);
  TreeBuilder builder(x, sorted, hp);
  Eigen::VectorXd margin = Eigen::VectorXd::Constant(n, model.base_score);
  std::vector<char> in_sample(static_cast<std::size_t>(n), 1);
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
  const auto sample_size = std::max<Eigen::Index>(1, std::llround(hp.subsample * static_cast<double>(n)));
  for (int round = 0; round < hp.rounds; ++round) {
    const Eigen::VectorXd p = margin.unaryExpr([](double v) { return TreeEnsemble::logistic(v); });
    const Eigen::VectorXd g = p - y;
    const Eigen::VectorXd h = p.array() * (1.0 - p.array());
    if (hp.subsample < 1.0) {
      std::iota(rows.begin(), rows.end(), Eigen::Index{0});
      std::fill(in_sample.begin(), in_sample.end(), 0);
      // Partial Fisher-Yates: the first sample_size slots are the draw.
      for (Eigen::Index i = 0; i < sample_size; ++i) {
        const auto j = static_cast<std::size_t>(i) + rng::below(eng, static_cast<std::uint64_t>(n - i));
        std::swap(rows[static_cast<std::size_t>(i)], rows[j]);
        in_sample[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)])] = 1;
      }
    }
    Tree tree = builder.grow(g, h, in_sample);
    for (Eigen::Index r = 0; r < n; ++r) margin[r] += hp.learning_rate * tree.value(x.row(r));
    model.trees.push_back(std::move(tree));
  }
  return model;
}

TreeEnsemble fit(const features::FeatureTable& train, const Hyperparameters& hp, std::uint64_t seed) {
  if (!train.labeled()) throw DataError("training table is not labeled");
  std::vector<std::string> names(features::predictor_names().begin(), features::predictor_names().end());
  return fit(train.predictors, train.labels, hp, seed, std::move(names));
}

std::string to_json(const TreeEnsemble& model) {
  nlohmann::ordered_json j;
  j["format"] = "citepred-gbt";
  j["version"] = kFormatVersion;
  j["learning_rate"] = model.learning_rate;
  j["base_score"] = model.base_score;
  j["features"] = model.feature_names;
  auto& trees = j["trees"] = nlohmann::ordered_json::array();
  for (const auto& t : model.trees) {
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& n : t.nodes) {
      nlohmann::ordered_json node;
      if (n.is_leaf()) {
        node["leaf"] = n.weight;
      } else {
        node["feature"] = n.feature;
        node["threshold"] = n.threshold;
        node["left"] = n.left;
        node["right"] = n.right;
      }
      node["cover"] = n.cover;
      nodes.push_back(std::move(node));
    }
    trees.push_back(std::move(nodes));
  }
  return j.dump(1) + "\n";
}

TreeEnsemble from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model dump is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "citepred-gbt") throw DataError("not a citepred-gbt model dump");
    if (j.at("version").get<int>() != kFormatVersion) throw DataError("unsupported model dump version");
    TreeEnsemble model;
    model.learning_rate = j.at("learning_rate").get<double>();
    model.base_score = j.at("base_score").get<double>();
    model.feature_names = j.at("features").get<std::vector<std::string>>();
    const int m = static_cast<int>(model.feature_names.size());
    for (const auto& jt : j.at("trees")) {
      Tree t;
      for (const auto& jn : jt) {
        TreeNode n;
        n.cover = jn.at("cover").get<double>();
        if (jn.contains("leaf")) {
          n.weight = jn.at("leaf").get<double>();
        } else {
          n.feature = jn.at("feature").get<int>();
          n.threshold = jn.at("threshold").get<double>();
          n.left = jn.at("left").get<int>();
          n.right = jn.at("right").get<int>();
        }
        t.nodes.push_back(n);
      }
      const int size = static_cast<int>(t.nodes.size());
      if (size == 0) throw DataError("model dump holds an empty tree");
      for (int i = 0; i < size; ++i) {
        const auto& n = t.nodes[static_cast<std::size_t>(i)];
        if (n.is_leaf()) continue;
        // Children must come after their parent so walks always terminate.
        if (n.feature >= m || n.left <= i || n.right <= i || n.left >= size || n.right >= size) {
          throw DataError("model dump holds a malformed tree");
        }
      }
      model.trees.push_back(std::move(t));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model dump: ") + e.what());
  }
}

}  // namespace citepred::gbt
