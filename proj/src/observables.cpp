#include "nlvoter/observables.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <stdexcept>

namespace nlvoter {

namespace {

void require_nonempty(const OpinionState& s) {
  if (s.opinions.empty()) throw std::invalid_argument("observable of an empty state");
}

void require_match(const OpinionState& s, const Graph& g) {
  if (s.size() != g.node_count()) {
    throw std::invalid_argument("state has " + std::to_string(s.size()) +
                                " nodes, graph has " + std::to_string(g.node_count()));
  }
}

void join_equal_opinions(UnionFind& uf, const OpinionState& s, const Graph& g) {
  uf.reset(g.node_count());
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    for (NodeId u : g.neighbors(static_cast<NodeId>(v))) {
      if (u > v && s.opinions[u] == s.opinions[v]) uf.unite(static_cast<std::uint32_t>(v), u);
    }
  }
}

}  // namespace

double order_parameter(const OpinionState& state) {
  require_nonempty(state);
  std::int64_t sum = 0;
  for (Opinion o : state.opinions) sum += o;
  return static_cast<double>(std::llabs(sum)) / static_cast<double>(state.size());
}

double rho_plus(const OpinionState& state) {
  require_nonempty(state);
  return static_cast<double>(state.count_plus()) / static_cast<double>(state.size());
}

bool is_consensus(const OpinionState& state) {
  require_nonempty(state);
  const Opinion first = state.opinions.front();
  return std::all_of(state.opinions.begin(), state.opinions.end(),
                     [first](Opinion o) { return o == first; });
}

ClusterCensus opinion_clusters(const OpinionState& state, const Graph& g) {
  require_nonempty(state);
  require_match(state, g);
  UnionFind uf;
  join_equal_opinions(uf, state, g);
  ClusterCensus census;
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    if (uf.find(v) == v) census.cluster_sizes.push_back(uf.set_size(v));
  }
  std::sort(census.cluster_sizes.begin(), census.cluster_sizes.end(), std::greater<>{});
  census.cluster_count = census.cluster_sizes.size();
  census.largest_fraction =
      static_cast<double>(census.largest()) / static_cast<double>(g.node_count());
  return census;
}

ClusterCounter::Summary ClusterCounter::operator()(const OpinionState& state, const Graph& g) {
  require_nonempty(state);
  require_match(state, g);
  join_equal_opinions(uf_, state, g);
  Summary out;
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    if (uf_.find(v) == v) {
      ++out.cluster_count;
      out.largest = std::max(out.largest, uf_.set_size(v));
    }
  }
  return out;
}

}  // namespace nlvoter
