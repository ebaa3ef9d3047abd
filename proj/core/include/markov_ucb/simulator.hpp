#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "markov_ucb/instance.hpp"

namespace markov_ucb {

struct PolicySpec {
  double exploration = 2.0;  // L
};

/// Checkpoint grid first, ceil(first*ratio), ... with `horizon` always last.
std::vector<std::int64_t> log_checkpoints(std::int64_t first, std::int64_t horizon,
                                          double ratio = 1.3);

struct EpisodeOptions {
  // Sorted step indices in [1, horizon] at which totals are recorded.
  // Empty means log_checkpoints(K, horizon).
  std::vector<std::int64_t> checkpoints;
  // Per-arm fixed start states; otherwise each arm draws its start from its
  // initial distribution.
  std::optional<std::vector<std::size_t>> initial_states;
  bool record_trace = false;
};

struct StepRecord {
  std::size_t arm;
  std::size_t state;  // state of `arm` after its transition
  double reward;
};

struct EpisodeRecord {
  std::vector<std::int64_t> checkpoints;
  std::vector<double> reward_at;                       // accumulated reward per checkpoint
  std::vector<std::vector<std::int64_t>> plays_at;     // [checkpoint][arm]
  std::vector<std::int64_t> plays;                     // at the horizon
  std::vector<double> reward_by_arm;                   // at the horizon
  std::vector<std::size_t> initial_states;
  std::vector<std::size_t> final_states;
  double total_reward = 0.0;
  std::vector<StepRecord> trace;                       // only when requested
};

/// One rested-bandit run of the UCB policy. On each step the chosen arm makes
/// one transition and pays the reward of the state it lands in; all other
/// arms keep their state.
EpisodeRecord run_episode(const BanditInstance& instance, const PolicySpec& policy,
                          std::int64_t horizon, std::uint64_t seed,
                          const EpisodeOptions& options = {});

/// Seed used for run `run` of a Monte Carlo batch.
std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t run);

struct RegretTrajectory {
  std::vector<std::int64_t> horizons;
  std::vector<double> mean_regret;         // n mu* - accumulated reward
  std::vector<double> std_error;
  std::vector<double> mean_pseudo_regret;  // sum_i gap_i T^i(n)
  std::vector<double> pseudo_std_error;
  // Per-run (sum_i mu^i T^i(n) - accumulated reward), i.e. direct minus
  // pseudo regret.
  std::vector<double> mean_accounting_gap;
  std::vector<double> accounting_gap_std_error;
  std::vector<std::vector<double>> mean_plays;  // [checkpoint][arm]
  std::size_t runs = 0;
  std::uint64_t base_seed = 0;
};

struct MonteCarloOptions {
  std::vector<std::int64_t> checkpoints;
  std::optional<std::vector<std::size_t>> initial_states;
  // Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Averages `runs` independent episodes; run r uses run_seed(base_seed, r).
/// The reduction is ordered by run index, so results do not depend on the
/// thread count.
RegretTrajectory monte_carlo_regret(const BanditInstance& instance, const PolicySpec& policy,
                                    std::int64_t horizon, std::size_t runs,
                                    std::uint64_t base_seed,
                                    const MonteCarloOptions& options = {});

struct RegretDecomposition {
  std::int64_t horizon = 0;
  std::vector<double> per_arm;  // gap_i * mean T^i(n)
  double total = 0.0;
  double direct_regret = 0.0;
  double difference = 0.0;  // direct_regret - total
  double difference_std_error = 0.0;
};

/// Gap-weighted play counts at the final checkpoint against the directly
/// measured regret.
RegretDecomposition regret_decomposition(const RegretTrajectory& trajectory,
                                         const BanditInstance& instance);

}  // namespace markov_ucb
