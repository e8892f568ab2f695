#pragma once

// Undirected weighted graphs and the two co-authorship constructions.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citepred/corpus.hpp"

namespace citepred::graph {

// Compressed adjacency over nodes kept in lexicographic id order. Every
// neighbor list is sorted by node index, so iteration order (and anything
// accumulated from it) is reproducible.
class WeightedGraph {
 public:
  using Index = std::uint32_t;

  struct Neighbor {
    Index node;
    double weight;
  };

  struct Edge {
    Index u;
    Index v;
    double weight;
  };

  WeightedGraph() = default;

  // node_ids must be unique. Edges refer to positions in node_ids, must have
  // u != v and a finite positive weight, and may appear once per unordered
  // pair. Throws DataError otherwise.
  static WeightedGraph from_edges(std::vector<std::string> node_ids, std::vector<Edge> edges);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::vector<std::string>& node_ids() const { return ids_; }
  const std::string& id(Index i) const { return ids_[i]; }
  std::optional<Index> index_of(std::string_view id) const;

  std::span<const Neighbor> neighbors(Index i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  // Neighbor indices alone, for traversals that ignore weights.
  std::span<const Index> adjacent(Index i) const {
    return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
  }
  std::size_t degree(Index i) const { return offsets_[i + 1] - offsets_[i]; }
  // Weight of edge (u, v), or 0 when absent.
  double weight(Index u, Index v) const;
  // Every edge once with u < v, ordered by (u, v).
  std::vector<Edge> edges() const;

 private:
  std::vector<std::string> ids_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<Index> targets_;
  std::size_t edge_count_ = 0;
};

// Authors of the selected years; weight = number of selected publications
// co-written by the pair. Authors without co-authors are isolated nodes.
WeightedGraph build_author_network(const corpus::Corpus& corpus, const std::set<int>& years);

// Selected publications; weight = number of shared authors, edges only where
// that number is positive.
WeightedGraph build_publication_network(const corpus::Corpus& corpus, const std::set<int>& years);

// One author network per calendar year of the corpus window.
std::map<int, WeightedGraph> yearly_author_networks(const corpus::Corpus& corpus);

// All years in the corpus window.
std::set<int> window_years(const corpus::Corpus& corpus);

// "u v w" per edge, original ids, lexicographic order.
void write_edge_list(std::ostream& out, const WeightedGraph& g);

}  // namespace citepred::graph
