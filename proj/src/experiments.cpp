#include "nlvoter/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

#include "nlvoter/observables.hpp"
#include "nlvoter/random.hpp"

namespace nlvoter {

namespace {

// Exact accumulator for sums of squared step counts.
__extension__ typedef unsigned __int128 Wide;

/// Double-buffered state plus the running +1 count.
class Stepper {
 public:
  Stepper(const Graph& g, Alpha alpha, const UpdateStream& stream, OpinionState initial,
          bool parallel)
      : g_(g),
        stream_(stream),
        table_(alpha, g.max_degree()),
        absorbing_(alpha.absorbing()),
        parallel_(parallel),
        cur_(std::move(initial)) {
    if (cur_.size() != g.node_count()) {
      throw std::invalid_argument("initial state does not match the graph");
    }
    plus_ = cur_.count_plus();
  }

  void step() {
    plus_ = step_sync(cur_, next_, g_, table_, stream_, parallel_);
    std::swap(cur_, next_);
  }

  const OpinionState& state() const noexcept { return cur_; }
  OpinionState& state() noexcept { return cur_; }
  std::uint64_t time() const noexcept { return cur_.time_step; }
  std::size_t plus() const noexcept { return plus_; }
  bool consensus() const noexcept { return plus_ == 0 || plus_ == cur_.size(); }
  bool frozen() const noexcept { return absorbing_ && consensus(); }
  double eta() const noexcept {
    const auto n = static_cast<double>(cur_.size());
    return std::abs(2.0 * static_cast<double>(plus_) - n) / n;
  }
  double rho() const noexcept {
    return static_cast<double>(plus_) / static_cast<double>(cur_.size());
  }

 private:
  const Graph& g_;
  UpdateStream stream_;
  SelectionTable table_;
  bool absorbing_;
  bool parallel_;
  OpinionState cur_;
  OpinionState next_;
  std::size_t plus_ = 0;
};

SeriesPoint observe(const Stepper& s, const Graph& g, ClusterCounter& counter) {
  const auto census = counter(s.state(), g);
  return SeriesPoint{s.time(), s.eta(), s.rho(), census.cluster_count,
                     static_cast<double>(census.largest) / static_cast<double>(g.node_count())};
}

/// Runs fn(r) for r in [first, last) on `threads` workers. The first
/// exception by realization index is rethrown after the loop.
template <class Fn>
void for_each_realization(std::size_t first, std::size_t last, int threads, Fn&& fn) {
  std::exception_ptr error;
  auto error_index = std::numeric_limits<std::int64_t>::max();
  const auto begin = static_cast<std::int64_t>(first);
  const auto end = static_cast<std::int64_t>(last);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t r = begin; r < end; ++r) {
    try {
      fn(static_cast<std::size_t>(r));
    } catch (...) {
#pragma omp critical(nlvoter_realization_error)
      if (r < error_index) {
        error_index = r;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<std::uint64_t> record_grid(std::uint64_t horizon, std::uint64_t cadence) {
  std::vector<std::uint64_t> grid;
  for (std::uint64_t t = 0; t <= horizon; t += cadence) {
    grid.push_back(t);
    if (horizon - t < cadence) break;
  }
  if (grid.back() != horizon) grid.push_back(horizon);
  return grid;
}

UpdateStream dynamics_stream(const ExperimentConfig& cfg, std::uint32_t topology_index,
                             std::uint32_t alpha_index, std::size_t realization) {
  return UpdateStream(derive_stream(cfg.seed, StreamPurpose::dynamics, topology_index,
                                    alpha_index, static_cast<std::uint32_t>(realization)));
}

void require_alpha_index(const ExperimentConfig& cfg, std::uint32_t alpha_index) {
  if (alpha_index >= cfg.alphas.size()) {
    throw std::out_of_range("alpha index " + std::to_string(alpha_index) + " out of range");
  }
}

}  // namespace

int resolve_threads(std::uint32_t requested) {
  return requested == 0 ? omp_get_max_threads() : static_cast<int>(requested);
}

RunResult run_to_consensus(const Graph& g, Alpha alpha, const UpdateStream& stream,
                           std::uint64_t max_steps, std::uint64_t cadence,
                           std::optional<OpinionState> initial, bool parallel_kernel) {
  OpinionState start = initial ? std::move(*initial) : init_random(g.node_count(), stream);
  Stepper s(g, alpha, stream, std::move(start), parallel_kernel);
  const std::uint64_t t0 = s.time();
  ClusterCounter counter;
  RunResult result;
  if (cadence > 0) result.series.push_back(observe(s, g, counter));
  while (!s.consensus() && s.time() - t0 < max_steps) {
    s.step();
    if (cadence > 0 &&
        (s.time() % cadence == 0 || s.consensus() || s.time() - t0 == max_steps)) {
      result.series.push_back(observe(s, g, counter));
    }
  }
  if (s.consensus()) result.consensus_time = s.time() - t0;
  result.steps = s.time() - t0;
  result.final_eta = s.eta();
  result.final_state = std::move(s.state());
  return result;
}

std::vector<Graph> build_graphs(const ExperimentConfig& cfg, const TopologySpec& spec,
                                std::uint32_t topology_index) {
  const std::uint32_t count = cfg.graphs_for(spec);
  std::vector<Graph> graphs(count);
  for_each_realization(0, count, resolve_threads(cfg.threads), [&](std::size_t i) {
    GraphEngine eng(derive_stream(cfg.seed, StreamPurpose::graph, topology_index, 0,
                                  static_cast<std::uint32_t>(i)));
    graphs[i] = spec.build(eng);
  });
  return graphs;
}

SweepRow ensemble_consensus_time(const ExperimentConfig& cfg, std::span<const Graph> graphs,
                                 std::uint32_t alpha_index, std::uint32_t topology_index) {
  require_alpha_index(cfg, alpha_index);
  if (graphs.empty()) throw std::invalid_argument("ensemble: no graphs");
  const Alpha alpha = cfg.alphas[alpha_index];
  const std::size_t total = graphs.size() * std::size_t{cfg.runs};
  std::vector<std::optional<std::uint64_t>> times(total);
  for_each_realization(0, total, resolve_threads(cfg.threads), [&](std::size_t r) {
    const Graph& g = graphs[r / cfg.runs];
    times[r] = run_to_consensus(g, alpha, dynamics_stream(cfg, topology_index, alpha_index, r),
                                cfg.max_steps, 0)
                   .consensus_time;
  });

  // Integer sums: exact, so the summary is independent of evaluation order.
  Wide sum = 0, sum_sq = 0, rsum = 0, rsum_sq = 0;
  std::uint64_t done = 0;
  for (const auto& t : times) {
    const std::uint64_t v = t.value_or(cfg.max_steps);
    rsum += v;
    rsum_sq += static_cast<Wide>(v) * v;
    if (t) {
      ++done;
      sum += *t;
      sum_sq += static_cast<Wide>(*t) * *t;
    }
  }
  auto standard_error = [](Wide s, Wide ss, std::uint64_t n) {
    if (n < 2) return 0.0;
    const auto num = static_cast<long double>(ss * n - s * s);
    const long double var = num / (static_cast<long double>(n) * (n - 1));
    return static_cast<double>(std::sqrt(var / n));
  };
  SweepRow row;
  row.alpha = alpha;
  row.runs = total;
  row.censored_fraction = static_cast<double>(total - done) / static_cast<double>(total);
  if (done > 0) {
    row.mean_tc = static_cast<double>(static_cast<long double>(sum) / done);
    row.se_tc = standard_error(sum, sum_sq, done);
  }
  row.restricted_mean = static_cast<double>(static_cast<long double>(rsum) / total);
  row.restricted_se = standard_error(rsum, rsum_sq, total);
  return row;
}

namespace {

SweepTable sweep_on(const ExperimentConfig& cfg, const TopologySpec& spec,
                    std::uint32_t topology_index) {
  const auto graphs = build_graphs(cfg, spec, topology_index);
  SweepTable table;
  table.topology = spec;
  for (const auto& g : graphs) {
    table.mean_nodes += static_cast<double>(g.node_count());
    table.mean_degree += degree_stats(g).mean_degree;
  }
  table.mean_nodes /= static_cast<double>(graphs.size());
  table.mean_degree /= static_cast<double>(graphs.size());
  for (std::uint32_t a = 0; a < cfg.alphas.size(); ++a) {
    table.rows.push_back(ensemble_consensus_time(cfg, graphs, a, topology_index));
  }
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (table.rows[i].restricted_mean < table.rows[table.argmin].restricted_mean) {
      table.argmin = i;
    }
  }
  return table;
}

}  // namespace

SweepTable sweep_alpha(const ExperimentConfig& cfg) {
  if (cfg.alphas.empty()) throw std::invalid_argument("sweep: empty alpha grid");
  return sweep_on(cfg, cfg.topology, 0);
}

std::vector<SweepTable> network_comparison(const ExperimentConfig& cfg) {
  if (cfg.topologies.empty()) throw std::invalid_argument("networks: no topologies");
  if (cfg.topologies.size() > max_topology_index + 1) {
    throw std::invalid_argument("networks: at most 16 topologies");
  }
  std::vector<SweepTable> out;
  for (std::uint32_t i = 0; i < cfg.topologies.size(); ++i) {
    out.push_back(sweep_on(cfg, cfg.topologies[i], i));
  }
  return out;
}

AveragedSeries time_series_ensemble(const ExperimentConfig& cfg, std::uint32_t alpha_index) {
  require_alpha_index(cfg, alpha_index);
  const Alpha alpha = cfg.alphas[alpha_index];
  const auto graphs = build_graphs(cfg, cfg.topology, 0);
  const auto grid = record_grid(cfg.max_steps, cfg.record_every);
  const std::size_t total = graphs.size() * std::size_t{cfg.runs};
  const int threads = resolve_threads(cfg.threads);

  AveragedSeries out;
  out.t = grid;
  out.eta_mean.assign(grid.size(), 0.0);
  out.rho_plus_mean.assign(grid.size(), 0.0);
  out.clusters_mean.assign(grid.size(), 0.0);
  out.s1_mean.assign(grid.size(), 0.0);

  // Fixed chunking with an in-order reduction keeps the floating-point sums
  // identical for any worker count.
  constexpr std::size_t chunk = 64;
  std::vector<std::vector<SeriesPoint>> buffer(chunk);
  for (std::size_t first = 0; first < total; first += chunk) {
    const std::size_t last = std::min(total, first + chunk);
    for_each_realization(first, last, threads, [&](std::size_t r) {
      const Graph& g = graphs[r / cfg.runs];
      const auto stream = dynamics_stream(cfg, 0, alpha_index, r);
      Stepper s(g, alpha, stream, init_random(g.node_count(), stream), false);
      ClusterCounter counter;
      auto& rows = buffer[r - first];
      rows.clear();
      std::optional<SeriesPoint> absorbed;
      for (std::uint64_t target : grid) {
        if (!absorbed) {
          while (s.time() < target && !s.frozen()) s.step();
        }
        SeriesPoint p = absorbed ? *absorbed : observe(s, g, counter);
        p.t = target;
        rows.push_back(p);
        if (!absorbed && s.frozen()) absorbed = p;
      }
    });
    for (std::size_t r = first; r < last; ++r) {
      const auto& rows = buffer[r - first];
      for (std::size_t k = 0; k < grid.size(); ++k) {
        out.eta_mean[k] += rows[k].eta;
        out.rho_plus_mean[k] += rows[k].rho_plus;
        out.clusters_mean[k] += rows[k].clusters;
        out.s1_mean[k] += rows[k].s1;
      }
    }
  }
  const auto n = static_cast<double>(total);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.eta_mean[k] /= n;
    out.rho_plus_mean[k] /= n;
    out.clusters_mean[k] /= n;
    out.s1_mean[k] /= n;
  }
  return out;
}

PatternResult pattern_experiment(const ExperimentConfig& cfg, std::uint32_t alpha_index) {
  require_alpha_index(cfg, alpha_index);
  if (cfg.topology.kind != Topology::lattice2d) {
    throw std::invalid_argument("pattern: lattice topology required");
  }
  const Alpha alpha = cfg.alphas[alpha_index];
  const Graph g = make_lattice(cfg.topology.side);
  const OpinionState start = init_block(cfg.topology.side, cfg.block);
  const std::uint64_t horizon = cfg.max_steps;
  const std::size_t steps = horizon + 1;
  std::vector<std::uint64_t> sum(steps, 0), sum_sq(steps, 0);
  PatternResult out;
  std::vector<std::uint64_t> snaps = cfg.snapshots;
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());

  // Integer accumulators: merge order cannot change the totals.
  std::exception_ptr error;
#pragma omp parallel num_threads(resolve_threads(cfg.threads))
  {
    std::vector<std::uint64_t> local(steps, 0), local_sq(steps, 0);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(cfg.runs); ++r) {
      try {
        Stepper s(g, alpha, dynamics_stream(cfg, 0, alpha_index, static_cast<std::size_t>(r)),
                  start, false);
        std::size_t next_snap = 0;
        for (std::uint64_t t = 0; t <= horizon; ++t) {
          if (t > 0 && !s.frozen()) s.step();
          const std::uint64_t c = s.plus();
          local[t] += c;
          local_sq[t] += c * c;
          if (r == 0 && next_snap < snaps.size() && snaps[next_snap] == t) {
            OpinionState snap = s.state();
            snap.time_step = t;
#pragma omp critical(nlvoter_pattern_snap)
            out.snapshots.emplace_back(t, std::move(snap));
            ++next_snap;
          }
        }
      } catch (...) {
#pragma omp critical(nlvoter_pattern_error)
        if (!error) error = std::current_exception();
      }
    }
#pragma omp critical(nlvoter_pattern_merge)
    for (std::size_t t = 0; t < steps; ++t) {
      sum[t] += local[t];
      sum_sq[t] += local_sq[t];
    }
  }
  if (error) std::rethrow_exception(error);

  const auto runs = static_cast<long double>(cfg.runs);
  const auto n = static_cast<long double>(g.node_count());
  out.t.resize(steps);
  out.rho_plus_mean.resize(steps);
  out.rho_plus_se.resize(steps, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    out.t[t] = t;
    out.rho_plus_mean[t] = static_cast<double>(static_cast<long double>(sum[t]) / (runs * n));
    if (cfg.runs > 1) {
      const auto num = static_cast<Wide>(sum_sq[t]) * cfg.runs -
                       static_cast<Wide>(sum[t]) * sum[t];
      const long double var = static_cast<long double>(num) / (runs * (runs - 1)) / (n * n);
      out.rho_plus_se[t] = static_cast<double>(std::sqrt(var / runs));
    }
  }
  return out;
}

}  // namespace nlvoter
