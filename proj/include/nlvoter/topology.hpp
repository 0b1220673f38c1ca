#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "nlvoter/graph.hpp"

namespace nlvoter {

/// Parameters for one of the four substrates, written on the command line as
///   lattice:L=50   er:N=3000,k=4   nw:N=3000,ring=4,ps=0.05   ba:N=3000,m=2
struct TopologySpec {
  Topology kind = Topology::lattice2d;
  std::uint32_t side = 50;        // lattice
  std::uint32_t nodes = 3000;     // er, nw, ba
  double mean_degree = 4.0;       // er
  std::uint32_t ring_degree = 4;  // nw
  double shortcut_prob = 0.05;    // nw
  std::uint32_t attach = 2;       // ba

  /// Throws std::invalid_argument with a description of the bad token.
  static TopologySpec parse(std::string_view text);

  /// Canonical text; parse(to_string()) reproduces the spec.
  std::string to_string() const;

  /// Filesystem-friendly label, e.g. "er_N3000_k4".
  std::string label() const;

  /// Number of nodes requested (before any giant-component reduction).
  std::uint32_t requested_nodes() const noexcept;

  /// Random generators consume `rng`; the lattice ignores it.
  Graph build(GraphEngine& rng) const;

  friend bool operator==(const TopologySpec&, const TopologySpec&) = default;
};

}  // namespace nlvoter
