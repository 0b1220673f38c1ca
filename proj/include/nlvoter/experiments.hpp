#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nlvoter/config.hpp"
#include "nlvoter/dynamics.hpp"
#include "nlvoter/graph.hpp"

namespace nlvoter {

struct SeriesPoint {
  std::uint64_t t = 0;
  double eta = 0.0;
  double rho_plus = 0.0;
  std::uint32_t clusters = 0;
  double s1 = 0.0;
};

struct RunResult {
  std::optional<std::uint64_t> consensus_time;  // nullopt: censored at max_steps
  std::uint64_t steps = 0;
  double final_eta = 0.0;
  std::vector<SeriesPoint> series;
  OpinionState final_state;

  bool censored() const noexcept { return !consensus_time.has_value(); }
};

/// Steps until consensus or `max_steps`. Starts from `initial` when given,
/// otherwise from init_random(stream). With cadence > 0 the observables are
/// recorded at every multiple of the cadence and at the last step.
RunResult run_to_consensus(const Graph& g, Alpha alpha, const UpdateStream& stream,
                           std::uint64_t max_steps, std::uint64_t cadence,
                           std::optional<OpinionState> initial = std::nullopt,
                           bool parallel_kernel = false);

struct SweepRow {
  Alpha alpha;
  std::optional<double> mean_tc;  // over non-censored runs
  double se_tc = 0.0;
  double censored_fraction = 0.0;
  std::uint64_t runs = 0;
  // Censored runs counted at max_steps: a lower bound on the true mean, used
  // to rank grid points.
  double restricted_mean = 0.0;
  double restricted_se = 0.0;
};

struct SweepTable {
  TopologySpec topology;
  std::vector<SweepRow> rows;
  std::size_t argmin = 0;  // by restricted mean; ties go to the smaller alpha index
  double mean_nodes = 0.0;
  double mean_degree = 0.0;

  const SweepRow& best() const { return rows.at(argmin); }
};

/// Graph realizations for `spec`; graph i uses the stream
/// derive_stream(seed, graph, topology_index, 0, i).
std::vector<Graph> build_graphs(const ExperimentConfig& cfg, const TopologySpec& spec,
                                std::uint32_t topology_index);

/// graphs.size() * cfg.runs independent runs; realization r runs on graph
/// r / cfg.runs with stream derive_stream(seed, dynamics, topology_index,
/// alpha_index, r). An empty mean means every run was censored.
SweepRow ensemble_consensus_time(const ExperimentConfig& cfg, std::span<const Graph> graphs,
                                 std::uint32_t alpha_index, std::uint32_t topology_index = 0);

SweepTable sweep_alpha(const ExperimentConfig& cfg);

/// One SweepTable per entry of cfg.topologies, same alpha grid.
std::vector<SweepTable> network_comparison(const ExperimentConfig& cfg);

struct AveragedSeries {
  std::vector<std::uint64_t> t;
  std::vector<double> eta_mean;
  std::vector<double> rho_plus_mean;
  std::vector<double> clusters_mean;
  std::vector<double> s1_mean;
};

/// Pointwise ensemble means on the grid 0, c, 2c, ... (plus max_steps).
/// Runs that hit an absorbing consensus keep their final values afterwards.
AveragedSeries time_series_ensemble(const ExperimentConfig& cfg, std::uint32_t alpha_index);

struct PatternResult {
  std::vector<std::uint64_t> t;  // 0 .. max_steps
  std::vector<double> rho_plus_mean;
  std::vector<double> rho_plus_se;
  std::vector<std::pair<std::uint64_t, OpinionState>> snapshots;  // realization 0
};

/// Block initial condition on cfg.topology (a lattice), run for max_steps.
PatternResult pattern_experiment(const ExperimentConfig& cfg, std::uint32_t alpha_index);

/// Worker count for a config: cfg.threads, or the OpenMP default when 0.
int resolve_threads(std::uint32_t requested);

}  // namespace nlvoter
