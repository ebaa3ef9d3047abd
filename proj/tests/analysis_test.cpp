#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "markov_ucb/analysis.hpp"
#include "markov_ucb/errors.hpp"
#include "markov_ucb/simulator.hpp"

namespace markov_ucb {
namespace {

using testing::s1_instance;
using testing::s2_instance;

// =============================================================================
// Exploration threshold and upper bound
// =============================================================================

TEST(MinExplorationConstant, Presets) {
  EXPECT_NEAR(min_exploration_constant(s1_instance()), 1458.0, 1e-9);
  EXPECT_NEAR(min_exploration_constant(s2_instance()), 1688.2, 0.1);
}

TEST(MinExplorationConstant, UnitGapTwoState) {
  std::vector<Arm> arms;
  arms.push_back(two_state_arm(0.5, 0.5, 1.0, 1.0));
  arms.push_back(two_state_arm(0.5, 0.5, 0.5, 1.0));
  EXPECT_NEAR(min_exploration_constant(BanditInstance::make(std::move(arms))), 360.0, 1e-9);
}

TEST(Theorem1Bound, S1LeadingCoefficient) {
  const auto rep = theorem1_bound(s1_instance(), 2000.0);
  // Independent arithmetic from the rounded table gaps.
  const double rounded = 8000.0 * (1 / 0.547 + 1 / 0.447 + 1 / 0.289 + 1 / 0.522);
  EXPECT_NEAR(rep.leading_coefficient, rounded, 1e-3 * rounded);
  EXPECT_NEAR(rep.leading_coefficient, 7.553e4, 50.0);
  EXPECT_TRUE(rep.condition_satisfied);
  EXPECT_EQ(rep.best_arm, 3u);
  EXPECT_FALSE(rep.degenerate);
}

TEST(Theorem1Bound, ConstantsByHand) {
  const auto inst = s1_instance();
  const double l = 2000.0;
  const auto rep = theorem1_bound(inst, l);
  // pi_min = 2/9 (ch.4, state 0); eps_max = 1.2; r_min = 1; all |S| = 2.
  const double pi_min = 2.0 / 9.0;
  const double d = 2.0 / pi_min * (1.0 + 1.2 * std::sqrt(l) / (10.0 * 2.0 * 1.0));
  const double beta = std::numbers::pi * std::numbers::pi / 6.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    EXPECT_NEAR(rep.d[i], d, 1e-9);
    EXPECT_NEAR(rep.c[i], 1.0 + 2.0 * d * beta, 1e-9);
  }
  EXPECT_NEAR(rep.beta, 1.6449340668482264, 1e-9);
  // Reward sums (2.2 + 2.7 + 2.5 + 2.8 + 2.3) / pi_min.
  EXPECT_NEAR(rep.accounting_constant, 12.5 / pi_min, 1e-9);
  const double n = 1e5;
  double expected = rep.accounting_constant;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double g = inst.gap(i);
    if (g > 0) expected += 4.0 * l * std::log(n) / g + g * rep.c[i];
  }
  EXPECT_NEAR(rep.bound_at(n), expected, 1e-6 * expected);
}

TEST(Theorem1Bound, BelowThresholdIsFlaggedNotRejected) {
  const auto rep = theorem1_bound(s2_instance(), 0.05);
  EXPECT_FALSE(rep.condition_satisfied);
  EXPECT_GT(rep.leading_coefficient, 0.0);
}

TEST(Theorem1Bound, IdenticalArmsDegenerate) {
  std::vector<Arm> arms;
  for (int i = 0; i < 4; ++i) arms.push_back(two_state_arm(0.3, 0.5, 1.0, 1.2));
  const auto rep = theorem1_bound(BanditInstance::make(std::move(arms)), 2000.0);
  EXPECT_TRUE(rep.degenerate);
  EXPECT_EQ(rep.leading_coefficient, 0.0);
  EXPECT_EQ(rep.gap_weighted_constant, 0.0);
  EXPECT_DOUBLE_EQ(rep.bound_at(10.0), rep.bound_at(1e9));
}

TEST(Theorem1Bound, MonotoneInHorizonAndExploration) {
  for (const auto& inst : {s1_instance(), s2_instance()}) {
    double previous_l = -1.0;
    for (double l : {0.0, 0.05, 2.0, 100.0, 1500.0, 2000.0, 1e4}) {
      const auto rep = theorem1_bound(inst, l);
      double previous_n = -1.0;
      for (double n : {2.0, 10.0, 1e3, 1e5, 1e7}) {
        EXPECT_GE(rep.bound_at(n), previous_n);
        previous_n = rep.bound_at(n);
      }
      EXPECT_GT(rep.bound_at(1e5), previous_l);
      previous_l = rep.bound_at(1e5);
    }
  }
}

TEST(Theorem1Bound, MonteCarloRegretBelowBound) {
  for (const auto& inst : {s1_instance(), s2_instance()}) {
    const double l = std::ceil(min_exploration_constant(inst));
    const auto traj = monte_carlo_regret(inst, {l}, 20000, 20, 3);
    const auto rep = theorem1_bound(inst, l);
    ASSERT_TRUE(rep.condition_satisfied);
    for (std::size_t c = 0; c < traj.horizons.size(); ++c) {
      EXPECT_LE(traj.mean_regret[c], rep.bound_at(static_cast<double>(traj.horizons[c])));
    }
  }
}

// =============================================================================
// Occupation tail
// =============================================================================

TEST(GillmanTail, ZeroDeviationIsNq) {
  const Arm arm = two_state_arm(0.6, 0.3, 1.0, 1.5, Vector{{0.9, 0.1}});
  const std::size_t subset[] = {1};
  const auto tail = gillman_tail(arm, subset, 100, 0.0);
  EXPECT_DOUBLE_EQ(tail.raw, tail.n_q);
  const double expected = std::hypot(0.9 / arm.stationary()(0), 0.1 / arm.stationary()(1));
  EXPECT_NEAR(tail.n_q, expected, 1e-12);
  EXPECT_EQ(tail.bound, 1.0);  // clamped; raw > 1
  EXPECT_LE(tail.n_q, initial_distribution_norm_upper(arm) * std::sqrt(2.0));
}

TEST(GillmanTail, SymmetricStationaryStart) {
  const Arm arm = two_state_arm(0.5, 0.5, 1.0, 2.0);
  const std::size_t subset[] = {0};
  const auto tail = gillman_tail(arm, subset, 10, 0.0);
  EXPECT_NEAR(tail.n_q, std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(tail.pi_a, 0.5, 1e-14);
}

TEST(GillmanTail, InvalidSubsets) {
  const Arm arm = two_state_arm(0.5, 0.5, 1.0, 2.0);
  try {
    gillman_tail(arm, std::span<const std::size_t>{}, 10, 1.0);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptySubset);
  }
  const std::size_t everything[] = {0, 1};
  EXPECT_THROW(gillman_tail(arm, everything, 10, 1.0), ValidationError);
  const std::size_t outside[] = {2};
  EXPECT_THROW(gillman_tail(arm, outside, 10, 1.0), ValidationError);
}

TEST(GillmanTail, DecreasingPastTurningPoint) {
  const auto inst = s1_instance();
  const std::size_t subset[] = {1};
  for (const Arm& arm : inst.arms()) {
    const double n = 500.0;
    const double eps = arm.gap();
    // f(g) = (1 + a g) exp(-b g^2) with a = eps/10n, b = eps/20n has
    // f'(g) <= 0 iff 2ab g^2 + 2b g - a >= 0.
    const double a = eps / (10.0 * n), b = eps / (20.0 * n);
    const double turning = (-2.0 * b + std::sqrt(4.0 * b * b + 8.0 * a * a * b)) / (4.0 * a * b);
    const double peak = gillman_tail(arm, subset, 500, turning).raw;
    for (double g = 0.0; g < turning; g += 0.5) {
      ASSERT_LE(gillman_tail(arm, subset, 500, g).raw, peak) << "gamma=" << g;
    }
    double previous = peak;
    for (double g = turning + 0.5; g < 20.0 * turning; g += 0.5) {
      const double raw = gillman_tail(arm, subset, 500, g).raw;
      ASSERT_LE(raw, previous) << "gamma=" << g;
      previous = raw;
    }
  }
}

TEST(GillmanTail, MonteCarloBelowBound) {
  const Arm arm = s1_instance().arm(2);
  const std::size_t subset[] = {1};
  const double gammas[] = {10.0, 25.0, 50.0};
  const auto checks = occupation_tail_check(arm, subset, 500, gammas, 20000, 4);
  ASSERT_EQ(checks.size(), 3u);
  for (const auto& c : checks) {
    EXPECT_TRUE(c.consistent) << "gamma=" << c.gamma << " empirical=" << c.empirical
                              << " bound=" << c.bound.bound;
    EXPECT_NEAR(c.bound.pi_a, 2.0 / 3.0, 1e-12);
  }
}

// =============================================================================
// Visit counts at stopping times
// =============================================================================

TEST(Lemma1Check, FixedHorizonFromStationarity) {
  const Arm arm = s1_instance().arm(0);
  const auto rep = lemma1_constant_check(arm, StoppingRule::fixed(50), 20000, 8);
  for (const auto& s : rep.states) {
    EXPECT_LE(s.deviation, 4.0 * s.std_error) << "state " << s.state;
  }
  EXPECT_DOUBLE_EQ(rep.mean_stopping_time, 50.0);
}

TEST(Lemma1Check, FirstReturnWithinReference) {
  const Arm arm = two_state_arm(0.3, 0.5, 1.0, 1.2);
  const auto rep = lemma1_constant_check(arm, StoppingRule::first_return(), 50000, 9);
  EXPECT_NEAR(rep.reference, 1.0 / 0.375, 1e-12);
  EXPECT_FALSE(rep.any_exceeds);
  for (const auto& s : rep.states) EXPECT_LE(s.deviation - 3.0 * s.std_error, rep.reference);
  // A regenerative cycle satisfies E N(x, tau) = pi_x E tau exactly.
  for (const auto& s : rep.states) EXPECT_LE(s.deviation, 4.0 * s.std_error + 1e-12);
}

TEST(Lemma1Check, SymmetricChainFixedHundred) {
  const Arm arm = two_state_arm(0.5, 0.5, 1.0, 2.0);
  const auto rep = lemma1_constant_check(arm, StoppingRule::fixed(100), 20000, 10);
  EXPECT_NEAR(rep.reference, 2.0, 1e-12);
  for (const auto& s : rep.states) EXPECT_LE(s.deviation - 3.0 * s.std_error, 2.0);
}

// =============================================================================
// KL rate and lower bound
// =============================================================================

using boost::multiprecision::cpp_bin_float_50;

cpp_bin_float_50 kl_rate_50(double theta_j, double theta_star) {
  using F = cpp_bin_float_50;
  auto kernel = [](double theta) {
    const F s = F(theta) / 10;
    const F p01 = s * s * s, p10 = 1 - s * s;
    return std::array<std::array<F, 2>, 2>{{{1 - p01, p01}, {p10, 1 - p10}}};
  };
  const auto p = kernel(theta_j), q = kernel(theta_star);
  const F pi0 = p[1][0] / (p[0][1] + p[1][0]);
  const F pi[2] = {pi0, 1 - pi0};
  F total = 0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) total += pi[x] * p[x][y] * log(p[x][y] / q[x][y]);
  return total;
}

TEST(KlRate, SelfIsZero) {
  const auto p = ThetaFamilyPoint::make(7.0);
  EXPECT_EQ(kl_rate(p, p), 0.0);
}

TEST(KlRate, MatchesExtendedPrecision) {
  const double rate = kl_rate(ThetaFamilyPoint::make(5.0), ThetaFamilyPoint::make(7.0));
  EXPECT_NEAR(rate, kl_rate_50(5.0, 7.0).convert_to<double>(), 1e-14);
  // Frozen 50-digit value.
  EXPECT_NEAR(rate, 0.124040359461989072458253, 1e-14);
  EXPECT_NEAR(kl_rate(ThetaFamilyPoint::make(0.5), ThetaFamilyPoint::make(7.0)),
              0.4189338165653714599311839, 1e-13);
}

TEST(KlRate, FartherParameterLargerRate) {
  const auto star = ThetaFamilyPoint::make(7.0);
  EXPECT_GT(kl_rate(ThetaFamilyPoint::make(0.5), star), kl_rate(ThetaFamilyPoint::make(5.0), star));
}

TEST(KlRate, ZeroExactlyForIdenticalKernels) {
  for (int a = 1; a < 20; ++a) {
    for (int b = 1; b < 20; ++b) {
      const double rate = kl_rate(ThetaFamilyPoint::make(0.5 * a), ThetaFamilyPoint::make(0.5 * b));
      if (a == b) {
        EXPECT_EQ(rate, 0.0);
      } else {
        EXPECT_GT(rate, 0.0) << a << " " << b;
      }
    }
  }
}

TEST(KlRate, SupportMismatchIsInfinite) {
  Matrix full(3, 3), sparse(3, 3);
  full << 0.4, 0.3, 0.3,
          0.3, 0.4, 0.3,
          0.3, 0.3, 0.4;
  sparse << 0.5, 0.5, 0.0,
            0.25, 0.5, 0.25,
            0.0, 0.5, 0.5;
  const Arm a = make_arm(full, Vector::Ones(3));
  const Arm b = make_arm(sparse, Vector::Ones(3));
  EXPECT_TRUE(std::isinf(kl_rate(a, b)));
  EXPECT_TRUE(std::isfinite(kl_rate(b, a)));
  EXPECT_THROW(kl_rate(a, two_state_arm(0.5, 0.5, 1.0, 1.0)), ValidationError);
}

TEST(LowerBound, FormulaValueOnTheStandardThetaSet) {
  const double thetas[] = {0.5, 1.0, 7.0, 5.0, 3.0};
  const auto rep = lower_bound_coefficient(thetas);
  EXPECT_EQ(rep.best_arm, 2u);
  double expected = 0.0;
  for (double t : {0.5, 1.0, 5.0, 3.0}) {
    const double gap = theta_arm(7.0).mean() - theta_arm(t).mean();
    expected += gap / kl_rate_50(t, 7.0).convert_to<double>();
  }
  EXPECT_NEAR(rep.coefficient, expected, 1e-12);
  EXPECT_EQ(rep.rates[2], 0.0);
  EXPECT_FALSE(rep.diverges);
}

TEST(LowerBound, OnlyOptimalArmsGivesZero) {
  const double thetas[] = {4.0, 4.0};
  const auto rep = lower_bound_coefficient(thetas);
  EXPECT_EQ(rep.coefficient, 0.0);
  EXPECT_FALSE(rep.diverges);
}

TEST(LowerBound, ApproachingOptimalParameterDiverges) {
  double previous = 0.0;
  for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double thetas[] = {2.0, 7.0 - delta, 7.0};
    const double c = lower_bound_coefficient(thetas).coefficient;
    EXPECT_GT(c, 5.0 * previous) << delta;
    previous = c;
  }
  EXPECT_GT(previous, 1e3);
}

TEST(LowerBound, RejectsDegenerateTheta) {
  const double thetas[] = {0.5, 10.0};
  EXPECT_THROW(lower_bound_coefficient(thetas), ValidationError);
}

}  // namespace
}  // namespace markov_ucb
