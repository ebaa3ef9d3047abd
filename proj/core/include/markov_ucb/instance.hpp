#pragma once

#include <cstddef>
#include <vector>

#include "markov_ucb/chain.hpp"

namespace markov_ucb {

/// K >= 2 arms together with the aggregates the regret analysis needs:
/// best mean, per-arm gaps, and extremes of gap/size/reward/stationary mass.
class BanditInstance {
 public:
  static BanditInstance make(std::vector<Arm> arms);

  const std::vector<Arm>& arms() const { return arms_; }
  const Arm& arm(std::size_t i) const { return arms_.at(i); }
  std::size_t size() const { return arms_.size(); }

  double best_mean() const { return best_mean_; }
  const std::vector<double>& gaps() const { return gaps_; }
  double gap(std::size_t i) const { return gaps_.at(i); }

  double eps_min() const { return eps_min_; }
  double eps_max() const { return eps_max_; }
  std::size_t s_max() const { return s_max_; }
  double r_max() const { return r_max_; }
  double r_min() const { return r_min_; }
  double pi_min() const { return pi_min_; }

 private:
  BanditInstance() = default;

  std::vector<Arm> arms_;
  double best_mean_ = 0.0;
  std::vector<double> gaps_;
  double eps_min_ = 0.0;
  double eps_max_ = 0.0;
  std::size_t s_max_ = 0;
  double r_max_ = 0.0;
  double r_min_ = 0.0;
  double pi_min_ = 0.0;
};

}  // namespace markov_ucb
