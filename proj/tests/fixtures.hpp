#pragma once

#include <vector>

#include "markov_ucb/chain.hpp"
#include "markov_ucb/instance.hpp"

namespace markov_ucb::testing {

// Two-state arms of the S1 instance, built by hand so core tests don't depend
// on the CLI presets.
inline BanditInstance s1_instance() {
  std::vector<Arm> arms;
  arms.push_back(two_state_arm(0.3, 0.5, 1.0, 1.2));
  arms.push_back(two_state_arm(0.2, 0.6, 1.0, 1.7));
  arms.push_back(two_state_arm(0.6, 0.3, 1.0, 1.5));
  arms.push_back(two_state_arm(0.7, 0.2, 1.0, 1.8));
  arms.push_back(two_state_arm(0.4, 0.8, 1.0, 1.3));
  return BanditInstance::make(std::move(arms));
}

inline BanditInstance s2_instance() {
  std::vector<Arm> arms;
  for (double t : {0.5, 1.0, 7.0, 5.0, 3.0}) arms.push_back(theta_arm(t));
  return BanditInstance::make(std::move(arms));
}

// Rows equal, so the next state is independent of the current one and the
// reward stream is i.i.d. whatever the policy does.
inline BanditInstance memoryless_identical_instance(std::size_t k) {
  std::vector<Arm> arms;
  for (std::size_t i = 0; i < k; ++i) arms.push_back(two_state_arm(0.3, 0.7, 1.0, 2.0));
  return BanditInstance::make(std::move(arms));
}

// Random reversible chain: symmetric positive weights w, p_xy = w_xy / w_x.
// Stationary law is proportional to the row sums.
template <typename Rng>
Matrix random_reversible(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Matrix w(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index x = 0; x < w.rows(); ++x) {
    for (Eigen::Index y = x; y < w.cols(); ++y) w(x, y) = w(y, x) = u(rng);
  }
  Matrix p = w;
  for (Eigen::Index x = 0; x < p.rows(); ++x) p.row(x) /= w.row(x).sum();
  return p;
}

}  // namespace markov_ucb::testing
