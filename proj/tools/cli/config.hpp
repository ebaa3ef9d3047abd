#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "markov_ucb/instance.hpp"

namespace markov_ucb::cli {

struct InstanceSource {
  enum class Kind { kPreset, kTheta, kArms };
  Kind kind = Kind::kPreset;
  std::string preset;          // "S1" or "S2"
  std::vector<double> thetas;  // kTheta
  nlohmann::json arms;         // kArms: array of arm objects
};

struct DeviationConfig {
  std::size_t arm = 1;  // 1-based, like the arm labels in reports
  std::vector<std::size_t> subset{1};
  std::int64_t steps = 500;
  std::vector<double> gammas{10.0, 25.0, 50.0};
  std::size_t runs = 100000;
  std::string stopping = "first-return";  // or "fixed"
};

struct ExperimentConfig {
  std::optional<InstanceSource> instance;
  std::string policy = "ucb";
  double exploration = 2.0;
  std::int64_t horizon = 100000;
  std::size_t runs = 100;
  std::uint64_t seed = 1;
  std::vector<std::int64_t> checkpoints;
  double checkpoint_ratio = 1.3;
  std::string out;
  std::vector<double> bound_horizons{1e3, 1e4, 1e5};
  DeviationConfig deviation;
};

/// Parses the JSON config document. Unknown keys are rejected so that typos
/// surface as errors instead of silently using defaults.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON form of a resolved config (the input to config_hash).
nlohmann::json to_json(const ExperimentConfig& config);

/// 64-bit FNV-1a of the canonical JSON dump.
std::uint64_t config_hash(const ExperimentConfig& config);

/// Checks cross-field invariants: exactly one instance source, L >= 0,
/// runs >= 1, policy == "ucb".
void validate(const ExperimentConfig& config);

BanditInstance build_instance(const InstanceSource& source);

/// Arms of the two-state presets; S2 is the theta family at
/// {0.5, 1, 7, 5, 3}.
BanditInstance preset_instance(const std::string& name);
std::vector<double> preset_thetas(const std::string& name);

/// Theta list for lower-bound evaluation; throws ConfigError when the
/// instance is not a theta-family instance.
std::vector<double> theta_list(const InstanceSource& source);

}  // namespace markov_ucb::cli
