#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nlvoter/config.hpp"

namespace nlvoter {

/// Parses a command line (without the program name), e.g.
///   {"sweep", "--topology", "lattice:L=50", "--alpha", "0.9:5.0:0.1", "--seed", "42"}
/// Flags override fields from an optional --config JSON file. Throws
/// std::invalid_argument with a user-facing message on any error.
ExperimentConfig parse_config(const std::vector<std::string>& args);

/// Runs a validated config, writing data files under cfg.out_dir and a short
/// summary to `out`. Returns a process exit code.
int execute(const ExperimentConfig& cfg, std::ostream& out);

/// Full entry point: parse, echo the resolved config to `err`, execute.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nlvoter
