#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nlvoter/dynamics.hpp"
#include "nlvoter/topology.hpp"

namespace nlvoter {

enum class ExperimentKind { run, sweep, series, pattern, meanfield, networks, graphinfo };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_kind(std::string_view text);

/// Everything an experiment needs; the output is a pure function of this.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::sweep;
  TopologySpec topology;
  std::vector<TopologySpec> topologies;  // networks only
  std::vector<Alpha> alphas;
  std::uint32_t runs = 1;    // realizations per graph
  std::uint32_t graphs = 1;  // independent graphs for random topologies
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 100000;
  std::uint64_t record_every = 1;
  std::uint32_t block = 30;
  std::vector<std::uint64_t> snapshots;
  double rho0 = 0.6;
  double dt = 0.01;
  double t_max = 200.0;
  std::uint32_t threads = 0;  // 0 = OpenMP default; never affects results
  std::string out_dir = ".";

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// Graph realizations actually used for `spec` (always 1 for the lattice).
  std::uint32_t graphs_for(const TopologySpec& spec) const noexcept;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Default horizon when none is given: 3000 for series, the last snapshot
/// (or 700) for pattern, 100000 otherwise.
std::uint64_t default_max_steps(ExperimentKind kind,
                                const std::vector<std::uint64_t>& snapshots);

/// The three random substrates at matched size and <k> = 4.
std::vector<TopologySpec> default_network_topologies();

/// "a:b:step" (inclusive, step > 0), a comma list, or a single value; each
/// item may be "inf".
std::vector<Alpha> parse_alpha_list(std::string_view text);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Missing fields take defaults except "seed", which is mandatory. Unknown
/// keys are rejected. The result is validated.
ExperimentConfig config_from_json(const nlohmann::json& j);

}  // namespace nlvoter
