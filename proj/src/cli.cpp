#include "nlvoter/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>

#include "nlvoter/experiments.hpp"
#include "nlvoter/meanfield.hpp"
#include "nlvoter/output.hpp"
#include "nlvoter/text.hpp"

namespace nlvoter {

namespace {

struct Flags {
  std::string config;
  std::vector<std::string> topologies;
  std::string alpha;
  std::uint32_t runs = 0;
  std::uint32_t graphs = 0;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 0;
  std::uint64_t record_every = 0;
  std::uint32_t block = 0;
  std::vector<std::uint64_t> snapshots;
  double rho0 = 0.0;
  double dt = 0.0;
  double t_max = 0.0;
  std::uint32_t threads = 0;
  std::string out;
};

struct Registered {
  CLI::App* app;
  std::vector<std::pair<std::string, CLI::Option*>> options;  // json key -> option
};

Registered add_subcommand(CLI::App& root, ExperimentKind kind, const std::string& help,
                          Flags& f) {
  Registered reg{root.add_subcommand(to_string(kind), help), {}};
  CLI::App* app = reg.app;
  auto add = [&](const std::string& key, CLI::Option* opt) { reg.options.emplace_back(key, opt); };
  app->add_option("--config", f.config, "JSON config file; flags override its fields");
  add("seed", app->add_option("--seed", f.seed, "master seed (required)"));
  add("threads", app->add_option("--threads", f.threads, "worker threads (0 = all)"));
  add("out", app->add_option("--out", f.out, "output directory"));
  if (kind == ExperimentKind::meanfield) {
    add("alpha", app->add_option("--alpha", f.alpha, "alpha list or start:stop:step"));
    add("rho0", app->add_option("--rho0", f.rho0, "initial +1 fraction"));
    add("dt", app->add_option("--dt", f.dt, "RK4 step"));
    add("t_max", app->add_option("--tmax", f.t_max, "integration horizon"));
    return reg;
  }
  if (kind == ExperimentKind::networks) {
    add("topologies", app->add_option("--topology", f.topologies, "substrate, repeatable"));
  } else {
    add("topology", app->add_option("--topology", f.topologies,
                                    "lattice:L=50 | er:N=..,k=.. | nw:N=..,ring=..,ps=.. | ba:N=..,m=..")
                        ->expected(1));
  }
  if (kind == ExperimentKind::graphinfo) return reg;
  add("alpha", app->add_option("--alpha", f.alpha, "alpha list (e.g. 1.1,2,inf) or start:stop:step"));
  add("runs", app->add_option("--runs", f.runs, "realizations per graph"));
  add("graphs", app->add_option("--graphs", f.graphs, "graph realizations (random topologies)"));
  add("max_steps", app->add_option("--max-steps", f.max_steps, "step limit / horizon"));
  if (kind == ExperimentKind::run || kind == ExperimentKind::series) {
    add("record_every", app->add_option("--record-every", f.record_every, "recording cadence"));
  }
  if (kind == ExperimentKind::pattern) {
    add("block", app->add_option("--block", f.block, "side of the centered +1 block"));
    add("snapshots", app->add_option("--snapshots", f.snapshots, "snapshot times")->delimiter(','));
  }
  return reg;
}

nlohmann::json flag_value(const std::string& key, const Flags& f) {
  if (key == "seed") return f.seed;
  if (key == "threads") return f.threads;
  if (key == "out") return f.out;
  if (key == "alpha") return f.alpha;
  if (key == "rho0") return f.rho0;
  if (key == "dt") return f.dt;
  if (key == "t_max") return f.t_max;
  if (key == "topologies") return f.topologies;
  if (key == "topology") return f.topologies.front();
  if (key == "runs") return f.runs;
  if (key == "graphs") return f.graphs;
  if (key == "max_steps") return f.max_steps;
  if (key == "record_every") return f.record_every;
  if (key == "block") return f.block;
  if (key == "snapshots") return f.snapshots;
  throw std::logic_error("unmapped flag " + key);
}

}  // namespace

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  CLI::App root{"Nonlinear voter model simulator", "nlvoter"};
  root.require_subcommand(1);
  Flags f;
  std::vector<std::pair<ExperimentKind, Registered>> subs;
  const std::pair<ExperimentKind, const char*> kinds[] = {
      {ExperimentKind::run, "single realization; consensus time and observable series"},
      {ExperimentKind::sweep, "ensemble consensus time over an alpha grid"},
      {ExperimentKind::series, "ensemble-averaged eta, rho+, cluster count and S1 over time"},
      {ExperimentKind::pattern, "centered block initial condition on a lattice"},
      {ExperimentKind::meanfield, "integrate the mean-field rate equation"},
      {ExperimentKind::networks, "alpha sweeps on several random substrates"},
      {ExperimentKind::graphinfo, "degree statistics of a generated substrate"}};
  for (const auto& [kind, help] : kinds) subs.emplace_back(kind, add_subcommand(root, kind, help, f));

  std::vector<const char*> argv{"nlvoter"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    root.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw std::invalid_argument(root.help());
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (const auto& [kind, reg] : subs) {
      if (reg.app->parsed()) msg += "\n" + reg.app->help();
    }
    throw std::invalid_argument(msg);
  }

  for (const auto& [kind, reg] : subs) {
    if (!reg.app->parsed()) continue;
    nlohmann::json j = nlohmann::json::object();
    if (!f.config.empty()) {
      std::ifstream is(f.config);
      if (!is) throw std::invalid_argument("cannot read config file '" + f.config + "'");
      try {
        j = nlohmann::json::parse(is);
      } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config file '" + f.config + "': " + e.what());
      }
      if (j.contains("kind") && j["kind"] != to_string(kind)) {
        throw std::invalid_argument("config file is for '" + j["kind"].get<std::string>() +
                                    "', not '" + to_string(kind) + "'");
      }
    }
    j["kind"] = to_string(kind);
    for (const auto& [key, opt] : reg.options) {
      if (opt->count() > 0) j[key] = flag_value(key, f);
    }
    if (!j.contains("seed")) {
      throw std::invalid_argument("--seed is required (all randomness derives from it)");
    }
    return config_from_json(j);
  }
  throw std::invalid_argument("no subcommand given");
}

namespace {

std::filesystem::path out_path(const ExperimentConfig& cfg, const std::string& name) {
  return std::filesystem::path(cfg.out_dir) / name;
}

void print_sweep(std::ostream& out, const SweepTable& t) {
  out << "# " << t.topology.to_string() << "  nodes=" << format_shortest(t.mean_nodes)
      << "  <k>=" << format_sig9(t.mean_degree) << "\n";
  for (const auto& r : t.rows) {
    out << "alpha=" << r.alpha.to_string() << "  mean_Tc="
        << (r.mean_tc ? format_sig9(*r.mean_tc) : std::string("nan"))
        << "  se=" << format_sig9(r.se_tc) << "  censored=" << format_sig9(r.censored_fraction)
        << "\n";
  }
  out << "alpha_opt=" << t.best().alpha.to_string() << "\n";
}

}  // namespace

int execute(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  omp_set_num_threads(resolve_threads(cfg.threads));
  std::filesystem::create_directories(cfg.out_dir);

  switch (cfg.kind) {
    case ExperimentKind::graphinfo: {
      const auto graphs = build_graphs(cfg, cfg.topology, 0);
      const auto& g = graphs.front();
      const auto s = degree_stats(g);
      out << "topology=" << cfg.topology.to_string() << "\nnodes=" << g.node_count()
          << "\nedges=" << g.edge_count() << "\nmean_degree=" << format_sig9(s.mean_degree)
          << "\nmin_degree=" << s.min_degree << "\nmax_degree=" << s.max_degree
          << "\ncomponents=" << s.component_count << "\n";
      return 0;
    }
    case ExperimentKind::run: {
      const auto graphs = build_graphs(cfg, cfg.topology, 0);
      const auto& g = graphs.front();
      for (std::uint32_t a = 0; a < cfg.alphas.size(); ++a) {
        const UpdateStream stream(derive_stream(cfg.seed, StreamPurpose::dynamics, 0, a, 0));
        const auto res = run_to_consensus(g, cfg.alphas[a], stream, cfg.max_steps,
                                          cfg.record_every, std::nullopt, true);
        AveragedSeries s;
        for (const auto& p : res.series) {
          s.t.push_back(p.t);
          s.eta_mean.push_back(p.eta);
          s.rho_plus_mean.push_back(p.rho_plus);
          s.clusters_mean.push_back(p.clusters);
          s.s1_mean.push_back(p.s1);
        }
        const std::string tag = cfg.alphas[a].to_string();
        write_csv(out_path(cfg, "run_a" + tag + ".csv"), series_table(s));
        if (cfg.topology.kind == Topology::lattice2d) {
          write_pbm(out_path(cfg, "final_a" + tag + ".pbm"), res.final_state, cfg.topology.side);
        }
        out << "alpha=" << tag << "  nodes=" << g.node_count() << "  ";
        if (res.consensus_time) out << "consensus_time=" << *res.consensus_time << "\n";
        else out << "censored_at=" << res.steps << "  eta=" << format_sig9(res.final_eta) << "\n";
      }
      return 0;
    }
    case ExperimentKind::sweep: {
      const auto table = sweep_alpha(cfg);
      write_csv(out_path(cfg, "sweep.csv"), sweep_table(table.rows));
      print_sweep(out, table);
      return 0;
    }
    case ExperimentKind::series: {
      for (std::uint32_t a = 0; a < cfg.alphas.size(); ++a) {
        const auto s = time_series_ensemble(cfg, a);
        write_csv(out_path(cfg, "series_a" + cfg.alphas[a].to_string() + ".csv"), series_table(s));
        out << "alpha=" << cfg.alphas[a].to_string() << "  points=" << s.t.size()
            << "  final_eta_mean=" << format_sig9(s.eta_mean.back()) << "\n";
      }
      return 0;
    }
    case ExperimentKind::pattern: {
      for (std::uint32_t a = 0; a < cfg.alphas.size(); ++a) {
        const auto p = pattern_experiment(cfg, a);
        const std::string tag = cfg.alphas[a].to_string();
        write_csv(out_path(cfg, "pattern_a" + tag + ".csv"), pattern_table(p));
        for (const auto& [t, state] : p.snapshots) {
          write_pbm(out_path(cfg, "snapshot_a" + tag + "_t" + std::to_string(t) + ".pbm"), state,
                    cfg.topology.side);
        }
        out << "alpha=" << tag;
        for (auto t : cfg.snapshots) {
          out << "  rho+(" << t << ")=" << format_sig9(p.rho_plus_mean[t]);
        }
        out << "\n";
      }
      return 0;
    }
    case ExperimentKind::meanfield: {
      for (const auto& alpha : cfg.alphas) {
        const auto traj = mf_integrate(cfg.rho0, alpha.value(), cfg.dt, cfg.t_max);
        write_csv(out_path(cfg, "meanfield_a" + alpha.to_string() + ".csv"), meanfield_table(traj));
        out << "alpha=" << alpha.to_string() << "  rho(" << format_shortest(traj.times.back())
            << ")=" << format_sig9(traj.rho_values.back());
        if (alpha.value() == 1.0) {
          out << "  fixed points: degenerate (rate vanishes identically)\n";
        } else {
          const auto rep = mf_fixed_point_stability(alpha.value());
          out << "  fixed points:";
          for (const auto& p : rep.points) {
            out << " " << format_shortest(p.rho) << "=" << to_string(p.stability);
          }
          out << "\n";
        }
      }
      return 0;
    }
    case ExperimentKind::networks: {
      const auto tables = network_comparison(cfg);
      for (const auto& t : tables) {
        write_csv(out_path(cfg, "sweep_" + t.topology.label() + ".csv"), sweep_table(t.rows));
        print_sweep(out, t);
      }
      write_csv(out_path(cfg, "networks.csv"), networks_table(tables));
      return 0;
    }
  }
  return 1;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const bool wants_help =
      args.empty() || std::any_of(args.begin(), args.end(),
                                  [](const std::string& a) { return a == "-h" || a == "--help"; });
  ExperimentConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const std::invalid_argument& e) {
    (wants_help ? out : err) << e.what() << "\n";
    return wants_help ? 0 : 2;
  }
  err << "# config " << to_json(cfg).dump() << "\n";
  try {
    return execute(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nlvoter
