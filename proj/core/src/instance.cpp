#include "markov_ucb/instance.hpp"

#include <algorithm>
#include <limits>

#include "markov_ucb/errors.hpp"

namespace markov_ucb {

BanditInstance BanditInstance::make(std::vector<Arm> arms) {
  if (arms.size() < 2) {
    throw ConfigError("a bandit instance needs at least two arms, got " +
                      std::to_string(arms.size()));
  }
  BanditInstance inst;
  inst.best_mean_ = -std::numeric_limits<double>::infinity();
  inst.eps_min_ = std::numeric_limits<double>::infinity();
  inst.eps_max_ = 0.0;
  inst.r_min_ = std::numeric_limits<double>::infinity();
  inst.r_max_ = 0.0;
  inst.pi_min_ = 1.0;
  for (const Arm& a : arms) {
    inst.best_mean_ = std::max(inst.best_mean_, a.mean());
    inst.eps_min_ = std::min(inst.eps_min_, a.gap());
    inst.eps_max_ = std::max(inst.eps_max_, a.gap());
    inst.s_max_ = std::max(inst.s_max_, a.num_states());
    inst.r_min_ = std::min(inst.r_min_, a.min_reward());
    inst.r_max_ = std::max(inst.r_max_, a.max_reward());
    inst.pi_min_ = std::min(inst.pi_min_, a.stationary().minCoeff());
  }
  inst.gaps_.reserve(arms.size());
  for (const Arm& a : arms) inst.gaps_.push_back(inst.best_mean_ - a.mean());
  inst.arms_ = std::move(arms);
  return inst;
}

}  // namespace markov_ucb
