#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "markov_ucb/analysis.hpp"
#include "markov_ucb/simulator.hpp"

namespace markov_ucb::cli {

/// "# markov_ucb <command> config_hash=0x... seed=<seed>"
std::string provenance_line(const std::string& command, std::uint64_t config_hash,
                            std::uint64_t seed);

/// CSV body: `horizon,mean_regret,std_error,plays_1,...,plays_K`, one row per
/// checkpoint.
void write_trajectory_csv(std::ostream& out, const RegretTrajectory& trajectory);

nlohmann::json instance_json(const BanditInstance& instance);

/// Fixed-width table: one row per arm with its stationary law, mean, eigen
/// gap, and reward gap, then the instance aggregates.
void write_instance_table(std::ostream& out, const BanditInstance& instance);

nlohmann::json bound_json(const BoundReport& report, std::span<const double> horizons);
nlohmann::json lower_bound_json(const KlRateReport& report);
nlohmann::json deviation_json(std::size_t arm, std::span<const OccupationTailEstimate> tails,
                              const DeviationReport& report, const StoppingRule& rule);

}  // namespace markov_ucb::cli
