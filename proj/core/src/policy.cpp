#include "markov_ucb/policy.hpp"

#include <cmath>

#include "markov_ucb/errors.hpp"

namespace markov_ucb {

double exploration_bonus(std::int64_t t, std::int64_t s, double exploration) {
  if (s <= 0) {
    throw ValidationError(ErrorCode::kUndefinedIndex, "index of an arm with no plays");
  }
  if (t < 1 || exploration < 0.0) {
    throw ValidationError(ErrorCode::kConfiguration, "bonus needs t >= 1 and L >= 0");
  }
  return std::sqrt(exploration * std::log(static_cast<double>(t)) / static_cast<double>(s));
}

UcbState::UcbState(std::size_t num_arms, double exploration)
    : exploration_(exploration), plays_(num_arms, 0), means_(num_arms, 0.0) {
  if (num_arms == 0) throw ConfigError("UCB needs at least one arm");
  if (!(exploration >= 0.0)) throw ConfigError("exploration constant L must be >= 0");
}

double UcbState::index(std::size_t arm) const {
  return means_.at(arm) + exploration_bonus(current_step(), plays_.at(arm), exploration_);
}

void UcbState::record_reward(std::size_t arm, double reward) {
  auto& count = plays_.at(arm);
  ++count;
  means_[arm] += (reward - means_[arm]) / static_cast<double>(count);
  ++completed_;
}

std::size_t select_arm(const UcbState& state) {
  const std::int64_t n = state.current_step();
  const auto k = static_cast<std::int64_t>(state.num_arms());
  if (n <= k) return static_cast<std::size_t>(n - 1);

  // log(n) is shared by every arm; hoist it out of the bonus.
  const double scaled_log = state.exploration() * std::log(static_cast<double>(n));
  std::size_t best = 0;
  double best_index = -INFINITY;
  for (std::size_t i = 0; i < state.num_arms(); ++i) {
    const auto s = state.plays(i);
    if (s == 0) return i;  // reachable only when steps were recorded out of order
    const double g = state.sample_mean(i) + std::sqrt(scaled_log / static_cast<double>(s));
    if (g > best_index) {
      best_index = g;
      best = i;
    }
  }
  return best;
}

std::size_t best_arm(const BanditInstance& instance) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < instance.size(); ++i) {
    if (instance.arm(i).mean() > instance.arm(best).mean()) best = i;
  }
  return best;
}

}  // namespace markov_ucb
