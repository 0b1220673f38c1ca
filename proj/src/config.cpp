#include "nlvoter/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "nlvoter/random.hpp"

namespace nlvoter {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::run: return "run";
    case ExperimentKind::sweep: return "sweep";
    case ExperimentKind::series: return "series";
    case ExperimentKind::pattern: return "pattern";
    case ExperimentKind::meanfield: return "meanfield";
    case ExperimentKind::networks: return "networks";
    case ExperimentKind::graphinfo: return "graphinfo";
  }
  return "unknown";
}

ExperimentKind parse_kind(std::string_view text) {
  for (auto k : {ExperimentKind::run, ExperimentKind::sweep, ExperimentKind::series,
                 ExperimentKind::pattern, ExperimentKind::meanfield, ExperimentKind::networks,
                 ExperimentKind::graphinfo}) {
    if (to_string(k) == text) return k;
  }
  throw std::invalid_argument("unknown experiment kind '" + std::string(text) + "'");
}

std::uint64_t default_max_steps(ExperimentKind kind, const std::vector<std::uint64_t>& snapshots) {
  switch (kind) {
    case ExperimentKind::series: return 3000;
    case ExperimentKind::pattern:
      return snapshots.empty() ? 700 : *std::max_element(snapshots.begin(), snapshots.end());
    default: return 100000;
  }
}

std::vector<TopologySpec> default_network_topologies() {
  return {TopologySpec::parse("er:N=3000,k=4"), TopologySpec::parse("nw:N=3000,ring=4,ps=0.05"),
          TopologySpec::parse("ba:N=3000,m=2")};
}

std::vector<Alpha> parse_alpha_list(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("alpha: empty list");
  std::vector<Alpha> out;
  if (text.find(':') != std::string_view::npos) {
    std::vector<double> parts;
    std::string_view rest = text;
    while (true) {
      const auto colon = rest.find(':');
      const std::string item(rest.substr(0, colon));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (item.empty() || used != item.size() || !std::isfinite(v)) {
        throw std::invalid_argument("alpha range: bad number '" + item + "'");
      }
      parts.push_back(v);
      if (colon == std::string_view::npos) break;
      rest = rest.substr(colon + 1);
    }
    if (parts.size() != 3) throw std::invalid_argument("alpha range must be start:stop:step");
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (!(step > 0.0) || stop < start) {
      throw std::invalid_argument("alpha range needs step > 0 and stop >= start");
    }
    const double span = (stop - start) / step;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    if (count > max_alpha_index + 1) throw std::invalid_argument("alpha range too long");
    for (std::size_t i = 0; i < count; ++i) {
      // Round to 12 decimals so 0.9 + 2 * 0.1 prints as 1.1.
      const double v = std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12;
      out.push_back(Alpha::finite(v));
    }
    return out;
  }
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(Alpha::parse(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::uint32_t ExperimentConfig::graphs_for(const TopologySpec& spec) const noexcept {
  return spec.kind == Topology::lattice2d ? 1 : graphs;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (kind != ExperimentKind::meanfield && kind != ExperimentKind::graphinfo &&
      kind != ExperimentKind::networks && alphas.empty()) {
    fail("alpha: at least one value required");
  }
  if (alphas.size() > max_alpha_index + 1) fail("alpha: too many grid points");
  if (runs < 1) fail("runs must be >= 1");
  if (graphs < 1) fail("graphs must be >= 1");
  if (std::uint64_t{runs} * graphs > 0xFFFFFFFFull) fail("runs * graphs exceeds 2^32 - 1");
  if (max_steps < 1) fail("max_steps must be >= 1");
  if (record_every < 1) fail("record_every must be >= 1");
  if (kind == ExperimentKind::pattern) {
    if (topology.kind != Topology::lattice2d) {
      fail("pattern requires a lattice topology (got " + topology.to_string() + ")");
    }
    if (block < 1 || block > topology.side) fail("block must satisfy 1 <= B <= L");
    for (auto t : snapshots) {
      if (t > max_steps) fail("snapshot time " + std::to_string(t) + " beyond max_steps");
    }
  }
  if (kind == ExperimentKind::meanfield) {
    if (alphas.empty()) fail("alpha: at least one value required");
    for (const auto& a : alphas) {
      if (a.is_infinite()) fail("meanfield needs finite alpha");
    }
    if (!(rho0 >= 0.0 && rho0 <= 1.0)) fail("rho0 must lie in [0, 1]");
    if (!(dt > 0.0) || !(t_max > 0.0) || dt > t_max) fail("need 0 < dt <= t_max");
  }
  if (kind == ExperimentKind::networks) {
    if (topologies.empty()) fail("networks: topology list empty");
    if (topologies.size() > max_topology_index + 1) fail("networks: at most 16 topologies");
    if (alphas.empty()) fail("alpha: at least one value required");
  }
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["kind"] = to_string(cfg.kind);
  j["topology"] = cfg.topology.to_string();
  auto& topos = j["topologies"] = nlohmann::json::array();
  for (const auto& t : cfg.topologies) topos.push_back(t.to_string());
  auto& alphas = j["alpha"] = nlohmann::json::array();
  for (const auto& a : cfg.alphas) alphas.push_back(a.to_string());
  j["runs"] = cfg.runs;
  j["graphs"] = cfg.graphs;
  j["seed"] = cfg.seed;
  j["max_steps"] = cfg.max_steps;
  j["record_every"] = cfg.record_every;
  j["block"] = cfg.block;
  j["snapshots"] = cfg.snapshots;
  j["rho0"] = cfg.rho0;
  j["dt"] = cfg.dt;
  j["t_max"] = cfg.t_max;
  j["threads"] = cfg.threads;
  j["out"] = cfg.out_dir;
  return j;
}

namespace {

std::vector<Alpha> alphas_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_alpha_list(v.get<std::string>());
  if (v.is_number()) return {Alpha::finite(v.get<double>())};
  if (!v.is_array()) throw std::invalid_argument("alpha: expected string, number or array");
  std::vector<Alpha> out;
  for (const auto& item : v) {
    if (item.is_string()) out.push_back(Alpha::parse(item.get<std::string>()));
    else if (item.is_number()) out.push_back(Alpha::finite(item.get<double>()));
    else throw std::invalid_argument("alpha: array items must be numbers or strings");
  }
  return out;
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known{
      "kind", "topology", "topologies", "alpha", "runs", "graphs", "seed", "max_steps",
      "record_every", "block", "snapshots", "rho0", "dt", "t_max", "threads", "out"};
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw std::invalid_argument("config: unknown field '" + key + "'");
  }
  if (!j.contains("seed")) throw std::invalid_argument("config: 'seed' is required");

  ExperimentConfig cfg;
  try {
    if (j.contains("kind")) cfg.kind = parse_kind(j.at("kind").get<std::string>());
    if (j.contains("topology")) cfg.topology = TopologySpec::parse(j.at("topology").get<std::string>());
    if (j.contains("topologies")) {
      for (const auto& t : j.at("topologies")) {
        cfg.topologies.push_back(TopologySpec::parse(t.get<std::string>()));
      }
    }
    if (cfg.kind == ExperimentKind::networks && cfg.topologies.empty()) {
      cfg.topologies = default_network_topologies();
    }
    if (j.contains("alpha")) cfg.alphas = alphas_from_json(j.at("alpha"));
    if (j.contains("runs")) cfg.runs = j.at("runs").get<std::uint32_t>();
    if (j.contains("graphs")) cfg.graphs = j.at("graphs").get<std::uint32_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("block")) cfg.block = j.at("block").get<std::uint32_t>();
    if (j.contains("snapshots")) cfg.snapshots = j.at("snapshots").get<std::vector<std::uint64_t>>();
    else if (cfg.kind == ExperimentKind::pattern) cfg.snapshots = {0, 200, 500, 700};
    cfg.max_steps = j.contains("max_steps") ? j.at("max_steps").get<std::uint64_t>()
                                            : default_max_steps(cfg.kind, cfg.snapshots);
    if (j.contains("record_every")) cfg.record_every = j.at("record_every").get<std::uint64_t>();
    if (j.contains("rho0")) cfg.rho0 = j.at("rho0").get<double>();
    if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
    if (j.contains("t_max")) cfg.t_max = j.at("t_max").get<double>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<std::uint32_t>();
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace nlvoter
