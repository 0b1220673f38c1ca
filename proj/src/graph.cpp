#include "nlvoter/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace nlvoter {

std::string to_string(Topology t) {
  switch (t) {
    case Topology::lattice2d: return "lattice";
    case Topology::er: return "er";
    case Topology::nw: return "nw";
    case Topology::ba: return "ba";
  }
  return "unknown";
}

std::optional<std::string> check_invariants(std::span<const std::uint32_t> offsets,
                                            std::span<const NodeId> neighbors) {
  if (offsets.empty()) return "offsets must have node_count + 1 entries";
  if (offsets.front() != 0) return "offsets[0] must be 0";
  const std::size_t n = offsets.size() - 1;
  for (std::size_t v = 0; v < n; ++v) {
    if (offsets[v + 1] < offsets[v]) return "offsets not nondecreasing";
  }
  if (offsets.back() != neighbors.size()) {
    return "offsets[node_count] != neighbor_list length";
  }
  auto row = [&](std::size_t v) {
    return neighbors.subspan(offsets[v], offsets[v + 1] - offsets[v]);
  };
  for (std::size_t v = 0; v < n; ++v) {
    const auto adj = row(v);
    for (std::size_t k = 0; k < adj.size(); ++k) {
      const NodeId u = adj[k];
      if (u >= n) return "neighbor index out of range at node " + std::to_string(v);
      if (u == v) return "self-loop at node " + std::to_string(v);
      if (k > 0 && adj[k - 1] >= u) {
        return "duplicate or unsorted neighbors at node " + std::to_string(v);
      }
      const auto back = row(u);
      if (!std::binary_search(back.begin(), back.end(), static_cast<NodeId>(v))) {
        return "edge " + std::to_string(v) + "->" + std::to_string(u) +
               " has no reverse";
      }
    }
  }
  return std::nullopt;
}

Graph::Graph(std::vector<std::uint32_t> offsets, std::vector<NodeId> neighbors,
             Topology topology)
    : offsets_(std::move(offsets)),
      neighbors_(std::move(neighbors)),
      topology_(topology) {
  if (offsets_.empty()) throw std::invalid_argument("graph: missing offsets");
  if (offsets_.back() == neighbors_.size()) {
    for (std::size_t v = 0; v + 1 < offsets_.size(); ++v) {
      if (offsets_[v] <= offsets_[v + 1] && offsets_[v + 1] <= neighbors_.size()) {
        std::sort(neighbors_.begin() + offsets_[v], neighbors_.begin() + offsets_[v + 1]);
      }
    }
  }
  if (auto err = check_invariants(offsets_, neighbors_)) {
    throw std::invalid_argument("graph: " + *err);
  }
  for (std::size_t v = 0; v < node_count(); ++v) {
    max_degree_ = std::max(max_degree_, degree(static_cast<NodeId>(v)));
  }
}

Graph Graph::from_edges(std::size_t node_count,
                        std::span<const std::pair<NodeId, NodeId>> edges,
                        Topology topology) {
  if (node_count == 0) throw std::invalid_argument("graph: node_count must be positive");
  std::vector<std::uint32_t> offsets(node_count + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u >= node_count || v >= node_count) {
      throw std::invalid_argument("graph: edge endpoint out of range");
    }
    ++offsets[u + 1];
    ++offsets[v + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<NodeId> neighbors(offsets.back());
  std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [u, v] : edges) {
    neighbors[cursor[u]++] = v;
    neighbors[cursor[v]++] = u;
  }
  return Graph(std::move(offsets), std::move(neighbors), topology);
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
  const auto adj = neighbors(u);
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<std::uint32_t> component_labels(const Graph& g, std::size_t* component_count) {
  constexpr auto unset = ~std::uint32_t{0};
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> label(n, unset);
  std::vector<NodeId> stack;
  std::uint32_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    stack.push_back(static_cast<NodeId>(s));
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId u : g.neighbors(v)) {
        if (label[u] == unset) {
          label[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  if (component_count) *component_count = next;
  return label;
}

DegreeStats degree_stats(const Graph& g) {
  DegreeStats s;
  const std::size_t n = g.node_count();
  if (n == 0) return s;
  s.min_degree = g.degree(0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto d = g.degree(static_cast<NodeId>(v));
    s.min_degree = std::min(s.min_degree, d);
    s.max_degree = std::max(s.max_degree, d);
  }
  s.mean_degree = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(n);
  component_labels(g, &s.component_count);
  return s;
}

Graph make_lattice(std::uint32_t side) {
  if (side < 3) {
    throw std::invalid_argument("lattice: side must be >= 3 (got " +
                                std::to_string(side) + ")");
  }
  const std::size_t n = std::size_t{side} * side;
  if (n > std::numeric_limits<std::uint32_t>::max() / 4) {
    throw std::invalid_argument("lattice: too large");
  }
  std::vector<std::uint32_t> offsets(n + 1);
  std::vector<NodeId> neighbors(4 * n);
  for (std::uint32_t r = 0; r < side; ++r) {
    for (std::uint32_t c = 0; c < side; ++c) {
      const std::size_t v = std::size_t{r} * side + c;
      offsets[v] = static_cast<std::uint32_t>(4 * v);
      const std::uint32_t up = (r + side - 1) % side;
      const std::uint32_t down = (r + 1) % side;
      const std::uint32_t left = (c + side - 1) % side;
      const std::uint32_t right = (c + 1) % side;
      neighbors[4 * v + 0] = up * side + c;
      neighbors[4 * v + 1] = r * side + left;
      neighbors[4 * v + 2] = r * side + right;
      neighbors[4 * v + 3] = down * side + c;
    }
  }
  offsets[n] = static_cast<std::uint32_t>(4 * n);
  return Graph(std::move(offsets), std::move(neighbors), Topology::lattice2d);
}

Graph make_gnp(std::uint32_t n, double p, GraphEngine& rng) {
  if (n < 1) throw std::invalid_argument("gnp: N must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gnp: p must lie in [0, 1]");
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(static_cast<std::size_t>(p * n * (n - 1) / 2.0 * 1.1) + 16);
  if (p >= 1.0) {
    for (NodeId v = 1; v < n; ++v) {
      for (NodeId w = 0; w < v; ++w) edges.emplace_back(v, w);
    }
  } else if (p > 0.0) {
    // Geometric skipping over the lower triangle (Batagelj & Brandes 2005).
    const double log_q = std::log1p(-p);
    std::int64_t v = 1;
    std::int64_t w = -1;
    while (v < n) {
      const double r = uniform01(rng);
      w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
      while (w >= v && v < n) {
        w -= v;
        ++v;
      }
      if (v < n) edges.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>(w));
    }
  }
  return Graph::from_edges(n, edges, Topology::er);
}

Graph make_er(std::uint32_t n, double k_avg, GraphEngine& rng) {
  if (n < 2) throw std::invalid_argument("er: N must be >= 2");
  if (!(k_avg > 0.0) || k_avg > static_cast<double>(n - 1)) {
    throw std::invalid_argument("er: k must satisfy 0 < k <= N-1");
  }
  return giant_component(make_gnp(n, k_avg / static_cast<double>(n - 1), rng));
}

Graph make_nw(std::uint32_t n, std::uint32_t ring_degree, double shortcut_prob,
              GraphEngine& rng) {
  if (ring_degree < 2 || ring_degree % 2 != 0) {
    throw std::invalid_argument("nw: ring degree must be even and >= 2");
  }
  if (n <= ring_degree) throw std::invalid_argument("nw: N must exceed ring degree");
  if (!(shortcut_prob >= 0.0 && shortcut_prob <= 1.0)) {
    throw std::invalid_argument("nw: shortcut probability must lie in [0, 1]");
  }
  auto key = [](NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t{a} << 32) | b;
  };
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::unordered_set<std::uint64_t> present;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId d = 1; d <= ring_degree / 2; ++d) {
      const NodeId j = (i + d) % n;
      edges.emplace_back(i, j);
      present.insert(key(i, j));
    }
  }
  const std::size_t ring_edges = edges.size();
  const std::uint64_t complete = std::uint64_t{n} * (n - 1) / 2;
  for (std::size_t e = 0; e < ring_edges; ++e) {
    if (!(uniform01(rng) < shortcut_prob)) continue;
    if (present.size() >= complete) break;
    NodeId a, b;
    do {
      a = static_cast<NodeId>(uniform_below(rng, n));
      b = static_cast<NodeId>(uniform_below(rng, n));
    } while (a == b || present.contains(key(a, b)));
    edges.emplace_back(a, b);
    present.insert(key(a, b));
  }
  return Graph::from_edges(n, edges, Topology::nw);
}

Graph make_ba(std::uint32_t n, std::uint32_t m, GraphEngine& rng) {
  if (m < 1) throw std::invalid_argument("ba: m must be >= 1");
  if (n <= m + 1) throw std::invalid_argument("ba: N must exceed m + 1");
  std::vector<std::pair<NodeId, NodeId>> edges;
  // Every edge contributes both endpoints, so a uniform pick from this list is
  // a degree-proportional pick of a node.
  std::vector<NodeId> endpoints;
  edges.reserve(std::size_t{n} * m);
  endpoints.reserve(2 * std::size_t{n} * m);
  for (NodeId v = 1; v <= m; ++v) {
    for (NodeId w = 0; w < v; ++w) {
      edges.emplace_back(v, w);
      endpoints.push_back(v);
      endpoints.push_back(w);
    }
  }
  std::vector<NodeId> targets;
  for (NodeId v = m + 1; v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const NodeId t = endpoints[uniform_below(rng, endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
        targets.push_back(t);
      }
    }
    for (NodeId t : targets) {
      edges.emplace_back(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return Graph::from_edges(n, edges, Topology::ba);
}

Graph giant_component(const Graph& g) {
  std::size_t count = 0;
  const auto label = component_labels(g, &count);
  if (count <= 1) return g;
  std::vector<std::size_t> size(count, 0);
  for (auto l : label) ++size[l];
  // First maximum wins; labels follow smallest node index.
  const auto best = static_cast<std::uint32_t>(
      std::max_element(size.begin(), size.end()) - size.begin());
  constexpr auto unset = ~NodeId{0};
  std::vector<NodeId> remap(g.node_count(), unset);
  NodeId next = 0;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    if (label[v] == best) remap[v] = next++;
  }
  std::vector<std::uint32_t> offsets{0};
  std::vector<NodeId> neighbors;
  offsets.reserve(next + 1);
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    if (remap[v] == unset) continue;
    for (NodeId u : g.neighbors(static_cast<NodeId>(v))) neighbors.push_back(remap[u]);
    offsets.push_back(static_cast<std::uint32_t>(neighbors.size()));
  }
  return Graph(std::move(offsets), std::move(neighbors), g.topology());
}

}  // namespace nlvoter
