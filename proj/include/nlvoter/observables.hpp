#pragma once

#include <cstdint>
#include <vector>

#include "nlvoter/dynamics.hpp"
#include "nlvoter/graph.hpp"
#include "nlvoter/union_find.hpp"

namespace nlvoter {

/// Opinion clusters: connected components of the subgraph that keeps only
/// edges joining equal opinions.
struct ClusterCensus {
  std::size_t cluster_count = 0;
  std::vector<std::uint32_t> cluster_sizes;  // sorted, largest first
  double largest_fraction = 0.0;

  std::uint32_t largest() const noexcept {
    return cluster_sizes.empty() ? 0 : cluster_sizes.front();
  }
};

/// |sum of opinions| / N.
double order_parameter(const OpinionState& state);

/// Fraction of +1 opinions.
double rho_plus(const OpinionState& state);

bool is_consensus(const OpinionState& state);

/// Throws std::invalid_argument when the state does not match the graph.
ClusterCensus opinion_clusters(const OpinionState& state, const Graph& g);

/// Reusable workspace for repeated census calls on one graph. Only the count
/// and the largest size are produced, which is what the time series need.
class ClusterCounter {
 public:
  struct Summary {
    std::uint32_t cluster_count = 0;
    std::uint32_t largest = 0;
  };

  Summary operator()(const OpinionState& state, const Graph& g);

 private:
  UnionFind uf_;
};

}  // namespace nlvoter
