#include "citepred/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "citepred/error.hpp"
#include "citepred/format.hpp"

namespace citepred::graph {

namespace {

using Index = WeightedGraph::Index;

std::uint64_t pair_key(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

void check_years(const corpus::Corpus& corpus, const std::set<int>& years) {
  if (years.empty()) throw ConfigError("empty year selection");
  for (int y : years) {
    if (!corpus.year_window().contains(y)) {
      throw ConfigError("year " + std::to_string(y) + " is outside the corpus window");
    }
  }
}

WeightedGraph from_pair_counts(std::vector<std::string> ids,
                               const std::unordered_map<std::uint64_t, double>& counts) {
  std::vector<WeightedGraph::Edge> edges;
  edges.reserve(counts.size());
  for (const auto& [key, w] : counts) {
    edges.push_back({static_cast<Index>(key >> 32), static_cast<Index>(key & 0xffffffffu), w});
  }
  return WeightedGraph::from_edges(std::move(ids), std::move(edges));
}

}  // namespace

WeightedGraph WeightedGraph::from_edges(std::vector<std::string> node_ids, std::vector<Edge> edges) {
  const std::size_t n = node_ids.size();
  if (n >= std::numeric_limits<Index>::max()) throw DataError("graph too large");

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return node_ids[a] < node_ids[b]; });
  std::vector<Index> rank(n);
  for (Index r = 0; r < n; ++r) rank[order[r]] = r;

  WeightedGraph g;
  g.ids_.reserve(n);
  for (Index r = 0; r < n; ++r) {
    if (r > 0 && node_ids[order[r]] == g.ids_.back()) {
      throw DataError("duplicate node id '" + node_ids[order[r]] + "'");
    }
    g.ids_.push_back(std::move(node_ids[order[r]]));
  }

  for (auto& e : edges) {
    if (e.u >= n || e.v >= n) throw DataError("edge endpoint out of range");
    if (e.u == e.v) throw DataError("self-loop on node '" + g.ids_[rank[e.u]] + "'");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) throw DataError("edge weight must be positive");
    e.u = rank[e.u];
    e.v = rank[e.v];
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
      throw DataError("parallel edge between '" + g.ids_[edges[i].u] + "' and '" + g.ids_[edges[i].v] + "'");
    }
  }

  std::vector<std::size_t> deg(n + 1, 0);
  for (const auto& e : edges) {
    ++deg[e.u + 1];
    ++deg[e.v + 1];
  }
  std::partial_sum(deg.begin(), deg.end(), deg.begin());
  g.offsets_ = deg;
  g.adjacency_.resize(2 * edges.size());
  // Edges are sorted by (u, v). The first pass writes each node's lower
  // neighbors in increasing order, the second appends the higher ones.
  std::vector<std::size_t> cursor(deg.begin(), deg.end() - 1);
  for (const auto& e : edges) g.adjacency_[cursor[e.v]++] = {e.u, e.weight};
  for (const auto& e : edges) g.adjacency_[cursor[e.u]++] = {e.v, e.weight};
  g.targets_.reserve(g.adjacency_.size());
  for (const auto& nb : g.adjacency_) g.targets_.push_back(nb.node);
  g.edge_count_ = edges.size();
  return g;
}

std::optional<WeightedGraph::Index> WeightedGraph::index_of(std::string_view id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<Index>(it - ids_.begin());
}

double WeightedGraph::weight(Index u, Index v) const {
  auto list = neighbors(u);
  auto it = std::lower_bound(list.begin(), list.end(), v,
                             [](const Neighbor& nb, Index x) { return nb.node < x; });
  return (it != list.end() && it->node == v) ? it->weight : 0.0;
}

std::vector<WeightedGraph::Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Index u = 0; u < node_count(); ++u) {
    for (const auto& nb : neighbors(u)) {
      if (nb.node > u) out.push_back({u, nb.node, nb.weight});
    }
  }
  return out;
}

WeightedGraph build_author_network(const corpus::Corpus& corpus, const std::set<int>& years) {
  check_years(corpus, years);
  std::vector<std::string> ids;
  std::unordered_map<std::string_view, Index> index;
  std::vector<std::vector<Index>> bylines;
  for (const auto& r : corpus.records()) {
    if (!years.contains(r.year)) continue;
    std::vector<Index> byline;
    byline.reserve(r.author_ids.size());
    for (const auto& a : r.author_ids) {
      auto [it, inserted] = index.try_emplace(a, static_cast<Index>(ids.size()));
      if (inserted) ids.push_back(a);
      byline.push_back(it->second);
    }
    bylines.push_back(std::move(byline));
  }
  std::unordered_map<std::uint64_t, double> counts;
  for (const auto& byline : bylines) {
    for (std::size_t i = 0; i < byline.size(); ++i) {
      for (std::size_t j = i + 1; j < byline.size(); ++j) counts[pair_key(byline[i], byline[j])] += 1.0;
    }
  }
  return from_pair_counts(std::move(ids), counts);
}

WeightedGraph build_publication_network(const corpus::Corpus& corpus, const std::set<int>& years) {
  check_years(corpus, years);
  std::vector<std::string> ids;
  std::unordered_map<std::string_view, std::vector<Index>> pubs_by_author;
  for (const auto& r : corpus.records()) {
    if (!years.contains(r.year)) continue;
    const auto node = static_cast<Index>(ids.size());
    ids.push_back(r.pub_id);
    for (const auto& a : r.author_ids) pubs_by_author[a].push_back(node);
  }
  std::unordered_map<std::uint64_t, double> counts;
  for (const auto& [author, pubs] : pubs_by_author) {
    for (std::size_t i = 0; i < pubs.size(); ++i) {
      for (std::size_t j = i + 1; j < pubs.size(); ++j) counts[pair_key(pubs[i], pubs[j])] += 1.0;
    }
  }
  return from_pair_counts(std::move(ids), counts);
}

std::set<int> window_years(const corpus::Corpus& corpus) {
  const auto ys = corpus.year_window().years();
  return {ys.begin(), ys.end()};
}

std::map<int, WeightedGraph> yearly_author_networks(const corpus::Corpus& corpus) {
  if (corpus.empty()) throw DataError("cannot build yearly networks from an empty corpus");
  std::map<int, WeightedGraph> out;
  for (int y : corpus.year_window().years()) out.emplace(y, build_author_network(corpus, {y}));
  return out;
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  for (const auto& e : g.edges()) {
    out << g.id(e.u) << ' ' << g.id(e.v) << ' ' << format_decimal(e.weight) << '\n';
  }
}

}  // namespace citepred::graph
