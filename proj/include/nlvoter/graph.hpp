#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlvoter/random.hpp"

namespace nlvoter {

using NodeId = std::uint32_t;

enum class Topology : std::uint8_t { lattice2d, er, nw, ba };

std::string to_string(Topology t);

/// Immutable undirected simple graph in compressed neighbor-list form.
class Graph {
 public:
  Graph() = default;

  /// Takes ownership of a CSR structure. Throws std::invalid_argument when the
  /// structure is not a valid undirected simple graph.
  Graph(std::vector<std::uint32_t> offsets, std::vector<NodeId> neighbors,
        Topology topology);

  /// Builds from an undirected edge list; each edge listed once, any
  /// orientation. Rejects self-loops and duplicates.
  static Graph from_edges(std::size_t node_count,
                          std::span<const std::pair<NodeId, NodeId>> edges,
                          Topology topology);

  std::size_t node_count() const noexcept {
    return offsets_.empty() ? 0 : offsets_.size() - 1;
  }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }
  Topology topology() const noexcept { return topology_; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::uint32_t degree(NodeId v) const noexcept {
    return offsets_[v + 1] - offsets_[v];
  }
  std::uint32_t max_degree() const noexcept { return max_degree_; }

  std::span<const std::uint32_t> offsets() const noexcept { return offsets_; }
  std::span<const NodeId> neighbor_list() const noexcept { return neighbors_; }

  bool has_edge(NodeId u, NodeId v) const noexcept;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<NodeId> neighbors_;
  Topology topology_ = Topology::lattice2d;
  std::uint32_t max_degree_ = 0;
};

/// Walks the adjacency structure; returns a description of the first violated
/// invariant (asymmetry, self-loop, duplicate, bad offsets) or nullopt.
std::optional<std::string> check_invariants(std::span<const std::uint32_t> offsets,
                                            std::span<const NodeId> neighbors);

struct DegreeStats {
  double mean_degree = 0.0;
  std::uint32_t min_degree = 0;
  std::uint32_t max_degree = 0;
  std::size_t component_count = 0;
};

DegreeStats degree_stats(const Graph& g);

/// Component label per node; labels are assigned in order of each component's
/// smallest node index, so label 0 contains node 0.
std::vector<std::uint32_t> component_labels(const Graph& g,
                                            std::size_t* component_count = nullptr);

/// L x L torus; node (r, c) has index r * L + c. Requires L >= 3.
Graph make_lattice(std::uint32_t side);

/// Raw G(N, p): every pair linked independently with probability p.
Graph make_gnp(std::uint32_t n, double p, GraphEngine& rng);

/// G(N, p) with p = k_avg / (N - 1), reduced to its giant component.
Graph make_er(std::uint32_t n, double k_avg, GraphEngine& rng);

/// Ring where each node links to ring_degree / 2 neighbors per side, plus one
/// random shortcut per ring edge with probability shortcut_prob.
Graph make_nw(std::uint32_t n, std::uint32_t ring_degree, double shortcut_prob,
              GraphEngine& rng);

/// Preferential attachment from a complete seed graph on m + 1 nodes.
Graph make_ba(std::uint32_t n, std::uint32_t m, GraphEngine& rng);

/// Node-induced subgraph on the largest connected component, re-indexed in
/// ascending original order. Ties go to the component holding the smallest
/// original index.
Graph giant_component(const Graph& g);

}  // namespace nlvoter
