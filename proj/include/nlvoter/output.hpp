#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nlvoter/dynamics.hpp"
#include "nlvoter/experiments.hpp"
#include "nlvoter/meanfield.hpp"

namespace nlvoter {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Comma-separated, header first, LF line endings.
std::string to_csv_text(const CsvTable& table);

// Column orders are fixed; reals use nine significant digits.
CsvTable sweep_table(std::span<const SweepRow> rows);        // alpha,mean_Tc,se_Tc,censored_frac,runs
CsvTable series_table(const AveragedSeries& series);         // t,eta_mean,rho_plus_mean,ncl_mean,s1_mean
CsvTable pattern_table(const PatternResult& pattern);        // t,rho_plus_mean,rho_plus_se
CsvTable meanfield_table(const MfTrajectory& trajectory);    // t,rho_plus
CsvTable networks_table(std::span<const SweepTable> tables); // topology,mean_nodes,mean_degree,alpha_opt,mean_Tc_opt

/// Plain PBM (P1) of an L x L lattice state, row-major. +1 -> 0 (white),
/// -1 -> 1 (black). Rows longer than 70 digits are wrapped.
std::string pbm_text(const OpinionState& state, std::uint32_t side);

/// Writes `text` to `path`; throws std::runtime_error naming the path.
void write_text_file(const std::filesystem::path& path, const std::string& text);

inline void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  write_text_file(path, to_csv_text(table));
}

inline void write_pbm(const std::filesystem::path& path, const OpinionState& state,
                      std::uint32_t side) {
  write_text_file(path, pbm_text(state, side));
}

}  // namespace nlvoter
