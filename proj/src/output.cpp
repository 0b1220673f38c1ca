#include "nlvoter/output.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "nlvoter/text.hpp"

namespace nlvoter {

std::string to_csv_text(const CsvTable& table) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

CsvTable sweep_table(std::span<const SweepRow> rows) {
  CsvTable t{{"alpha", "mean_Tc", "se_Tc", "censored_frac", "runs"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.alpha.to_string(), r.mean_tc ? format_sig9(*r.mean_tc) : "nan",
                      format_sig9(r.se_tc), format_sig9(r.censored_fraction),
                      std::to_string(r.runs)});
  }
  return t;
}

CsvTable series_table(const AveragedSeries& s) {
  CsvTable t{{"t", "eta_mean", "rho_plus_mean", "ncl_mean", "s1_mean"}, {}};
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    t.rows.push_back({std::to_string(s.t[k]), format_sig9(s.eta_mean[k]),
                      format_sig9(s.rho_plus_mean[k]), format_sig9(s.clusters_mean[k]),
                      format_sig9(s.s1_mean[k])});
  }
  return t;
}

CsvTable pattern_table(const PatternResult& p) {
  CsvTable t{{"t", "rho_plus_mean", "rho_plus_se"}, {}};
  for (std::size_t k = 0; k < p.t.size(); ++k) {
    t.rows.push_back({std::to_string(p.t[k]), format_sig9(p.rho_plus_mean[k]),
                      format_sig9(p.rho_plus_se[k])});
  }
  return t;
}

CsvTable meanfield_table(const MfTrajectory& traj) {
  CsvTable t{{"t", "rho_plus"}, {}};
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    t.rows.push_back({format_sig9(traj.times[k]), format_sig9(traj.rho_values[k])});
  }
  return t;
}

CsvTable networks_table(std::span<const SweepTable> tables) {
  CsvTable t{{"topology", "mean_nodes", "mean_degree", "alpha_opt", "mean_Tc_opt"}, {}};
  for (const auto& s : tables) {
    const auto& best = s.best();
    t.rows.push_back({s.topology.to_string(), format_sig9(s.mean_nodes),
                      format_sig9(s.mean_degree), best.alpha.to_string(),
                      best.mean_tc ? format_sig9(*best.mean_tc) : "nan"});
  }
  return t;
}

std::string pbm_text(const OpinionState& state, std::uint32_t side) {
  if (state.size() != std::size_t{side} * side) {
    throw std::invalid_argument("pbm: state is not " + std::to_string(side) + "x" +
                                std::to_string(side));
  }
  constexpr std::size_t max_line = 70;
  std::string out = "P1\n" + std::to_string(side) + " " + std::to_string(side) + "\n";
  for (std::uint32_t r = 0; r < side; ++r) {
    std::size_t on_line = 0;
    for (std::uint32_t c = 0; c < side; ++c) {
      if (on_line == max_line) {
        out += '\n';
        on_line = 0;
      }
      out += state.opinions[std::size_t{r} * side + c] > 0 ? '0' : '1';
      ++on_line;
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing: " +
                             std::strerror(errno));
  }
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  os.flush();
  if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace nlvoter
