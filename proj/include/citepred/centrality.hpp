#pragma once

// Node metrics on a WeightedGraph: weighted degree, normalized betweenness,
// component-corrected closeness, Burt's constraint, and the rotating
// leadership count over yearly betweenness series.
//
// Shortest paths count hops; edge weights are tie strengths and only enter
// degree and constraint. Per-source work runs in parallel, and every result is
// bit-identical for any thread count.

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "citepred/format.hpp"
#include "citepred/graph.hpp"

namespace citepred::centrality {

using graph::WeightedGraph;

// Relative change threshold for rotating leadership.
inline constexpr double kDefaultOscillationEpsilon = 0.10;

// Sum of incident edge weights.
Eigen::VectorXd degree_all(const WeightedGraph& g);

// B(i) = sum over unordered pairs j<k (i not an endpoint) of the share of
// j-k shortest paths through i, divided by (n-1)(n-2)/2. Brandes' algorithm.
// All zeros when n < 3.
Eigen::VectorXd betweenness_all(const WeightedGraph& g, unsigned threads = 1);

// (n_c - 1) / sum of hop distances inside the node's component, scaled by
// (n_c - 1)/(n - 1). Isolated nodes score 0.
Eigen::VectorXd closeness_all(const WeightedGraph& g, unsigned threads = 1);

// Burt's constraint with weight-proportional ties p_ij = w_ij / sum_k w_ik:
//   C_i = sum_j (p_ij + sum_q p_iq p_qj)^2,  q ranging over shared neighbors.
// Isolated nodes score 1.
Eigen::VectorXd constraint_all(const WeightedGraph& g, unsigned threads = 1);

// All four metrics for one graph, indexed like g.node_ids(). Betweenness and
// closeness share one breadth-first pass per source.
struct MetricTable {
  std::vector<std::string> ids;
  Eigen::VectorXd degree;
  Eigen::VectorXd betweenness;
  Eigen::VectorXd closeness;
  Eigen::VectorXd constraint;

  Eigen::Index size() const { return static_cast<Eigen::Index>(ids.size()); }
  // ids are sorted, so this is a binary search.
  std::optional<Eigen::Index> find(std::string_view id) const;
};

MetricTable compute_all(const WeightedGraph& g, unsigned threads = 1);

// "id degree betweenness closeness constraint" per node, 12 significant
// digits, lexicographic id order, preceded by the config echo.
void write_metric_dump(std::ostream& out, const MetricTable& table, const ConfigEcho& echo = {});
MetricTable read_metric_dump(std::istream& in);

// Number of interior points of the chronological series that are strict
// local extrema and differ significantly from both neighbors:
//   |v_t - v_s| > epsilon * max(v_t, v_s, 1e-12)  for s = t-1, t+1.
int rotating_leadership(std::span<const double> series, double epsilon = kDefaultOscillationEpsilon);

// Yearly betweenness per author across the corpus window (0 in years the
// author did not publish), plus the resulting oscillation count.
struct LeadershipTable {
  std::vector<int> years;
  std::map<std::string, std::vector<double>> series;
  std::map<std::string, int> counts;
};

LeadershipTable leadership_table(const std::map<int, WeightedGraph>& yearly, double epsilon,
                                 unsigned threads = 1);

// "author count v_year..." per author with a header naming the years.
void write_leadership_table(std::ostream& out, const LeadershipTable& table, const ConfigEcho& echo = {});
// Reads the counts back; the series columns are parsed as well.
LeadershipTable read_leadership_table(std::istream& in);

}  // namespace citepred::centrality
