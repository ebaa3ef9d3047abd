#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "markov_ucb/instance.hpp"

namespace markov_ucb {

/// sqrt(L ln t / s). Throws kUndefinedIndex for s == 0 and
/// ValidationError for t < 1 or L < 0.
double exploration_bonus(std::int64_t t, std::int64_t s, double exploration);

// Complete memory of the UCB policy: play counts, running sample means, the
// number of completed steps, and the exploration constant L.
class UcbState {
 public:
  UcbState(std::size_t num_arms, double exploration);

  std::size_t num_arms() const { return plays_.size(); }
  double exploration() const { return exploration_; }

  // Steps completed so far; the next decision is made at step completed() + 1.
  std::int64_t completed() const { return completed_; }
  std::int64_t current_step() const { return completed_ + 1; }

  std::int64_t plays(std::size_t arm) const { return plays_.at(arm); }
  double sample_mean(std::size_t arm) const { return means_.at(arm); }
  const std::vector<std::int64_t>& plays() const { return plays_; }
  const std::vector<double>& sample_means() const { return means_; }

  /// Sample mean plus exploration bonus at the current step.
  double index(std::size_t arm) const;

  /// Recursive mean update: mean += (reward - mean) / plays.
  void record_reward(std::size_t arm, double reward);

 private:
  double exploration_;
  std::int64_t completed_ = 0;
  std::vector<std::int64_t> plays_;
  std::vector<double> means_;
};

/// Arm to play at state.current_step(): arm n-1 (0-based) during the first K
/// steps, otherwise the highest index with ties to the lowest arm.
std::size_t select_arm(const UcbState& state);

inline void record_reward(UcbState& state, std::size_t arm, double reward) {
  state.record_reward(arm, reward);
}

/// Arm with the largest stationary mean reward; ties to the lowest index.
std::size_t best_arm(const BanditInstance& instance);

}  // namespace markov_ucb
