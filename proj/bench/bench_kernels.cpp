// Synchronous-update kernels: serial reference vs blocked kernel, with and
// without OpenMP. Also times the ensemble driver at fixed thread counts.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "nlvoter/dynamics.hpp"
#include "nlvoter/experiments.hpp"
#include "nlvoter/observables.hpp"

namespace {

using namespace nlvoter;

const Alpha kAlpha = Alpha::finite(1.1);

void BM_StepReference(benchmark::State& st) {
  const auto g = make_lattice(static_cast<std::uint32_t>(st.range(0)));
  const UpdateStream stream(7);
  auto state = init_random(g.node_count(), stream);
  for (auto _ : st) {
    state = reference::step_sync(state, g, kAlpha, stream);
    benchmark::DoNotOptimize(state.opinions.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(g.node_count()));
}

void step_blocked(benchmark::State& st, bool parallel) {
  const auto g = make_lattice(static_cast<std::uint32_t>(st.range(0)));
  const UpdateStream stream(7);
  const SelectionTable table(kAlpha, g.max_degree());
  auto cur = init_random(g.node_count(), stream);
  OpinionState next;
  for (auto _ : st) {
    benchmark::DoNotOptimize(step_sync(cur, next, g, table, stream, parallel));
    std::swap(cur, next);
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(g.node_count()));
}

void BM_StepSerial(benchmark::State& st) { step_blocked(st, false); }
void BM_StepOpenMP(benchmark::State& st) { step_blocked(st, true); }

void BM_Census(benchmark::State& st) {
  const auto g = make_lattice(static_cast<std::uint32_t>(st.range(0)));
  const auto state = init_random(g.node_count(), UpdateStream(3));
  ClusterCounter counter;
  for (auto _ : st) benchmark::DoNotOptimize(counter(state, g));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(g.node_count()));
}

void BM_Ensemble(benchmark::State& st) {
  ExperimentConfig cfg;
  cfg.topology = TopologySpec::parse("lattice:L=20");
  cfg.alphas = {kAlpha};
  cfg.runs = 32;
  cfg.seed = 11;
  cfg.threads = static_cast<std::uint32_t>(st.range(0));
  const auto graphs = build_graphs(cfg, cfg.topology, 0);
  for (auto _ : st) benchmark::DoNotOptimize(ensemble_consensus_time(cfg, graphs, 0));
}

BENCHMARK(BM_StepReference)->Arg(50)->Arg(200)->Arg(1000);
BENCHMARK(BM_StepSerial)->Arg(50)->Arg(200)->Arg(1000);
BENCHMARK(BM_StepOpenMP)->Arg(50)->Arg(200)->Arg(1000);
BENCHMARK(BM_Census)->Arg(50)->Arg(200);
BENCHMARK(BM_Ensemble)->Arg(1)->Arg(omp_get_max_threads())->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
