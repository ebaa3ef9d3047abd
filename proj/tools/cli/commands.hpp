#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace markov_ucb::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNumerical = 2,
};

// Each command writes its output (provenance line first) to `out`.
void cmd_inspect(const ExperimentConfig& config, std::ostream& out, bool as_json);
void cmd_simulate(const ExperimentConfig& config, std::ostream& out, unsigned threads = 0);
void cmd_bound(const ExperimentConfig& config, std::ostream& out);
void cmd_lower_bound(const ExperimentConfig& config, std::ostream& out);
void cmd_deviation_check(const ExperimentConfig& config, std::ostream& out);

/// Full command-line entry point. `args` excludes the program name. Output
/// goes to --out when given, else to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace markov_ucb::cli
