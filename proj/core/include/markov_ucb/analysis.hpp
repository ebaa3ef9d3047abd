#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "markov_ucb/chain.hpp"
#include "markov_ucb/instance.hpp"

namespace markov_ucb {

// ---------------------------------------------------------------------------
// Upper regret bound for UCB on rested Markovian arms
// ---------------------------------------------------------------------------

/// 90 S_max^2 r_max^2 / eps_min: the smallest exploration constant for which
/// the logarithmic regret bound is guaranteed.
double min_exploration_constant(const BanditInstance& instance);

/// sum_y r_y / pi_min over all arms and states: an upper estimate of the
/// constant relating regret to gap-weighted play counts.
double accounting_constant_upper(const BanditInstance& instance);

/// sum_{t >= 1} t^-2, evaluated in closed form.
double basel_constant();

struct BoundReport {
  double exploration = 0.0;      // L
  double min_exploration = 0.0;  // L_min
  bool condition_satisfied = false;
  std::size_t best_arm = 0;
  std::vector<double> gaps;
  std::vector<double> d;  // D^i
  std::vector<double> c;  // C^i = 1 + (D^i + D^*) beta
  double beta = 0.0;
  // Stand-in for the accounting constant; always the upper estimate, never
  // the exact value.
  double accounting_constant = 0.0;
  double leading_coefficient = 0.0;  // 4 L sum_{gap > 0} 1 / gap
  double gap_weighted_constant = 0.0;  // sum_{gap > 0} gap C^i
  // True when every arm is optimal: the ln n term vanishes.
  bool degenerate = false;

  double constant_term() const { return gap_weighted_constant + accounting_constant; }
  double bound_at(double n) const;
};

/// Evaluates every constant of the bound for `exploration`. Values of L
/// below the threshold are reported with condition_satisfied = false rather
/// than rejected.
BoundReport theorem1_bound(const BanditInstance& instance, double exploration);

// ---------------------------------------------------------------------------
// Occupation-time tail (Gillman)
// ---------------------------------------------------------------------------

/// ||(q_x / pi_x)_x||_2 with q the arm's initial distribution.
double initial_distribution_norm(const Arm& arm);

/// 1 / min_x pi_x, an upper estimate of initial_distribution_norm.
double initial_distribution_norm_upper(const Arm& arm);

struct GillmanTail {
  double bound = 0.0;  // min(raw, 1)
  double raw = 0.0;
  double n_q = 0.0;
  double pi_a = 0.0;
};

/// Upper bound on P(t_A(n) - n pi_A >= gamma), where t_A(n) counts the visits
/// to `subset` among the first n states of the chain.
GillmanTail gillman_tail(const Arm& arm, std::span<const std::size_t> subset,
                         std::int64_t steps, double gamma);

struct OccupationTailEstimate {
  double gamma = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  GillmanTail bound;
  // empirical <= bound.bound + 3 std_error
  bool consistent = false;
};

/// Monte Carlo estimate of the occupation tail for each gamma, from `runs`
/// independent chains of length `steps` started from the arm's initial
/// distribution.
std::vector<OccupationTailEstimate> occupation_tail_check(
    const Arm& arm, std::span<const std::size_t> subset, std::int64_t steps,
    std::span<const double> gammas, std::size_t runs, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Visit-count deviation at a stopping time
// ---------------------------------------------------------------------------

struct StoppingRule {
  enum class Kind { kFixedHorizon, kFirstReturn };
  Kind kind = Kind::kFixedHorizon;
  std::int64_t horizon = 0;

  static StoppingRule fixed(std::int64_t n) { return {Kind::kFixedHorizon, n}; }
  // tau = number of states observed before the chain first revisits X_1.
  static StoppingRule first_return() { return {Kind::kFirstReturn, 0}; }
};

struct StateDeviation {
  std::size_t state = 0;
  double mean_visits = 0.0;     // E^[N(x, tau)]
  double expected_visits = 0.0;  // pi_x E^[tau]
  double deviation = 0.0;       // |mean_visits - expected_visits|
  double std_error = 0.0;
  bool exceeds_reference = false;  // deviation - 3 std_error > reference
};

struct DeviationReport {
  std::vector<StateDeviation> states;
  double mean_stopping_time = 0.0;
  double reference = 0.0;  // 1 / pi_min
  std::size_t runs = 0;
  bool any_exceeds = false;
};

DeviationReport lemma1_constant_check(const Arm& arm, const StoppingRule& rule,
                                      std::size_t runs, std::uint64_t seed);

// ---------------------------------------------------------------------------
// KL rate and the asymptotic lower bound
// ---------------------------------------------------------------------------

/// sum_x pi^j_x sum_y p^j_xy ln(p^j_xy / p^*_xy), in nats. Returns +inf when
/// some transition of `arm` is impossible under `reference`.
double kl_rate(const Arm& arm, const Arm& reference);
double kl_rate(const ThetaFamilyPoint& arm, const ThetaFamilyPoint& reference);

struct KlRateReport {
  std::vector<double> thetas;
  std::size_t best_arm = 0;
  std::vector<double> means;
  std::vector<double> gaps;
  std::vector<double> rates;  // I(j,*); 0 for arms with zero gap
  double coefficient = 0.0;   // sum_{gap > 0} gap / I(j,*)
  bool diverges = false;      // some positive-gap arm has I(j,*) == 0
};

/// Coefficient of ln n in the asymptotic regret lower bound for the theta
/// family. Arms tied with the best mean are skipped.
KlRateReport lower_bound_coefficient(std::span<const double> thetas);

}  // namespace markov_ucb
