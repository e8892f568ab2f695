#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "citepred/centrality.hpp"
#include "citepred/error.hpp"
#include "oracles.hpp"

using namespace citepred;
using namespace citepred::centrality;

namespace {

WeightedGraph path3() { return WeightedGraph::from_edges({"a", "b", "c"}, {{0, 1, 1.0}, {1, 2, 1.0}}); }

WeightedGraph triangle(double w = 1.0) {
  return WeightedGraph::from_edges({"a", "b", "c"}, {{0, 1, w}, {1, 2, w}, {0, 2, w}});
}

WeightedGraph scaled(const WeightedGraph& g, double k) {
  auto edges = g.edges();
  for (auto& e : edges) e.weight *= k;
  return WeightedGraph::from_edges(g.node_ids(), edges);
}

}  // namespace

TEST(Degree, PathAndIsolated) {
  auto g = WeightedGraph::from_edges({"a", "b", "c", "d"}, {{0, 1, 1.0}, {1, 2, 1.0}});
  auto d = degree_all(g);
  EXPECT_EQ(d[1], 2.0);
  EXPECT_EQ(d[3], 0.0);
}

TEST(Degree, MatchesAdjacencySum) {
  std::mt19937_64 eng(5);
  for (int t = 0; t < 10; ++t) {
    auto g = oracle::random_graph(eng, 10, 0.4);
    Eigen::VectorXd expected = oracle::weight_matrix(g).rowwise().sum();
    EXPECT_EQ(degree_all(g), expected);
  }
}

TEST(Betweenness, PathMiddleIsOne) {
  auto b = betweenness_all(path3());
  EXPECT_EQ(b[0], 0.0);
  EXPECT_EQ(b[1], 1.0);
  EXPECT_EQ(b[2], 0.0);
}

TEST(Betweenness, TriangleIsZero) { EXPECT_TRUE(betweenness_all(triangle()).isZero(0.0)); }

TEST(Betweenness, MatchesPathEnumeration) {
  std::mt19937_64 eng(2024);
  for (int t = 0; t < 50; ++t) {
    const int n = 3 + static_cast<int>(eng() % 10);
    auto g = oracle::random_graph(eng, n, 0.3);
    auto b = betweenness_all(g);
    auto expected = oracle::betweenness(g);
    for (int i = 0; i < n; ++i) ASSERT_NEAR(b[i], expected[i], 1e-9) << "graph " << t << " node " << i;
  }
}

TEST(Closeness, StarCenterIsOne) {
  auto g = WeightedGraph::from_edges({"c", "l1", "l2", "l3", "l4"},
                                     {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}});
  auto c = closeness_all(g);
  EXPECT_DOUBLE_EQ(c[*g.index_of("c")], 1.0);
}

TEST(Closeness, IsolatedIsZero) {
  auto g = WeightedGraph::from_edges({"a", "b", "z"}, {{0, 1, 1.0}});
  EXPECT_EQ(closeness_all(g)[2], 0.0);
}

TEST(Closeness, MatchesDistanceSums) {
  std::mt19937_64 eng(99);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(eng() % 11);
    auto g = oracle::random_graph(eng, n, 0.3);
    auto c = closeness_all(g);
    auto expected = oracle::closeness(g);
    for (int i = 0; i < n; ++i) ASSERT_NEAR(c[i], expected[i], 1e-9);
  }
}

TEST(Constraint, DyadTriangleOpenTriad) {
  auto dyad = WeightedGraph::from_edges({"a", "b"}, {{0, 1, 3.0}});
  EXPECT_EQ(constraint_all(dyad)[0], 1.0);
  auto tri = constraint_all(triangle());
  for (int i = 0; i < 3; ++i) EXPECT_EQ(tri[i], 1.125);
  auto triad = WeightedGraph::from_edges({"a", "b", "c"}, {{0, 1, 1.0}, {0, 2, 1.0}});
  EXPECT_EQ(constraint_all(triad)[0], 0.5);
}

TEST(Constraint, IsolatedIsOne) {
  auto g = WeightedGraph::from_edges({"a", "b", "z"}, {{0, 1, 1.0}});
  EXPECT_EQ(constraint_all(g)[2], 1.0);
}

TEST(Constraint, MatchesFormula) {
  std::mt19937_64 eng(17);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(eng() % 11);
    auto g = oracle::random_graph(eng, n, 0.3);
    auto c = constraint_all(g);
    auto expected = oracle::constraint(g);
    for (int i = 0; i < n; ++i) ASSERT_NEAR(c[i], expected[i], 1e-9);
  }
}

// Ego 0 with neighbors 1..3 forming a unit clique; removing any one edge
// among the neighbors opens a hole.
TEST(Constraint, DeletingCliqueEdgeNeverRaisesConstraint) {
  std::vector<WeightedGraph::Edge> clique;
  for (WeightedGraph::Index u = 0; u < 4; ++u) {
    for (WeightedGraph::Index v = u + 1; v < 4; ++v) clique.push_back({u, v, 1.0});
  }
  const std::vector<std::string> ids{"e", "n1", "n2", "n3"};
  const double full = constraint_all(WeightedGraph::from_edges(ids, clique))[0];
  for (std::size_t drop = 0; drop < clique.size(); ++drop) {
    if (clique[drop].u == 0) continue;
    auto edges = clique;
    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(drop));
    EXPECT_LE(constraint_all(WeightedGraph::from_edges(ids, edges))[0], full);
  }
}

TEST(Centrality, ScalingWeights) {
  std::mt19937_64 eng(3);
  for (int t = 0; t < 20; ++t) {
    auto g = oracle::random_graph(eng, 9, 0.35);
    auto h = scaled(g, 2.5);
    auto a = compute_all(g);
    auto b = compute_all(h);
    EXPECT_EQ(a.betweenness, b.betweenness);
    EXPECT_EQ(a.closeness, b.closeness);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(a.constraint[i], b.constraint[i], 1e-12);
      EXPECT_NEAR(2.5 * a.degree[i], b.degree[i], 1e-12);
    }
  }
}

TEST(Centrality, ThreadCountDoesNotChangeBits) {
  std::mt19937_64 eng(8);
  auto g = oracle::random_graph(eng, 300, 0.02);
  auto one = compute_all(g, 1);
  auto many = compute_all(g, 8);
  EXPECT_EQ(one.betweenness, many.betweenness);
  EXPECT_EQ(one.closeness, many.closeness);
  EXPECT_EQ(one.constraint, many.constraint);
  EXPECT_EQ(betweenness_all(g, 1), betweenness_all(g, 3));
}

TEST(Centrality, SumOfBetweennessCountsInteriorVertices) {
  // Raw sum over nodes equals the sum over pairs of the mean interior length.
  std::mt19937_64 eng(12);
  for (int t = 0; t < 20; ++t) {
    auto g = oracle::random_graph(eng, 8, 0.4);
    const auto d = oracle::hop_distances(oracle::weight_matrix(g));
    double interior = 0.0;
    for (int j = 0; j < 8; ++j) {
      for (int k = j + 1; k < 8; ++k) interior += d[j][k] > 1 ? d[j][k] - 1 : 0;
    }
    EXPECT_NEAR(betweenness_all(g).sum() * 7.0 * 6.0 / 2.0, interior, 1e-9);
  }
}

TEST(MetricDump, RoundTrip) {
  std::mt19937_64 eng(4);
  auto t = compute_all(oracle::random_graph(eng, 12, 0.3));
  std::ostringstream out;
  write_metric_dump(out, t, {{"seed", "1"}});
  std::istringstream in(out.str());
  auto back = read_metric_dump(in);
  EXPECT_EQ(back.ids, t.ids);
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(back.betweenness[i], t.betweenness[i], 1e-11);
    EXPECT_NEAR(back.constraint[i], t.constraint[i], 1e-11);
  }
  EXPECT_EQ(t.find("n05"), Eigen::Index{5});
  EXPECT_FALSE(t.find("nope"));
}

TEST(RotatingLeadership, Examples) {
  const std::vector<double> flat{0.2, 0.2, 0.2}, peak{0.0, 0.5, 0.0}, rising{0.1, 0.2, 0.3};
  EXPECT_EQ(rotating_leadership(flat, 0.1), 0);
  EXPECT_EQ(rotating_leadership(peak, 0.1), 1);
  EXPECT_EQ(rotating_leadership(rising, 0.1), 0);
  const std::vector<double> zigzag{0.1, 0.3, 0.1, 0.3, 0.1};
  EXPECT_EQ(rotating_leadership(zigzag, 0.1), 3);
  const std::vector<double> wobble{0.100, 0.105, 0.100};
  EXPECT_EQ(rotating_leadership(wobble, 0.1), 0);
  EXPECT_EQ(rotating_leadership(wobble, 0.01), 1);
  EXPECT_THROW(rotating_leadership(std::vector<double>{}, 0.1), DataError);
}

TEST(RotatingLeadership, ScaleInvariant) {
  std::mt19937_64 eng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> s(6), k(6);
    for (int i = 0; i < 6; ++i) s[i] = u(eng) < 0.2 ? 0.0 : u(eng);
    for (int i = 0; i < 6; ++i) k[i] = 8.0 * s[i];
    EXPECT_EQ(rotating_leadership(s, 0.1), rotating_leadership(k, 0.1));
  }
}

TEST(RotatingLeadership, TableCoversEveryAuthorAndYear) {
  std::map<int, WeightedGraph> yearly;
  yearly[2010] = WeightedGraph::from_edges({"a", "b", "c"}, {{0, 1, 1.0}, {1, 2, 1.0}});
  yearly[2011] = WeightedGraph::from_edges({"a", "b"}, {{0, 1, 1.0}});
  yearly[2012] = WeightedGraph::from_edges({"a", "b", "c"}, {{0, 1, 1.0}, {1, 2, 1.0}});
  auto t = leadership_table(yearly, 0.1);
  EXPECT_EQ(t.years, (std::vector<int>{2010, 2011, 2012}));
  EXPECT_EQ(t.series.at("b"), (std::vector<double>{1.0, 0.0, 1.0}));
  EXPECT_EQ(t.series.at("c"), (std::vector<double>{0.0, 0.0, 0.0}));
  EXPECT_EQ(t.counts.at("b"), 1);
  EXPECT_EQ(t.counts.at("a"), 0);

  std::ostringstream out;
  write_leadership_table(out, t);
  std::istringstream in(out.str());
  auto back = read_leadership_table(in);
  EXPECT_EQ(back.counts, t.counts);
}
