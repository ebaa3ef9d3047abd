#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "markov_ucb/errors.hpp"
#include "markov_ucb/policy.hpp"
#include "oracles.hpp"

namespace markov_ucb {
namespace {

// -----------------------------------------------------------------------------
// exploration_bonus
// -----------------------------------------------------------------------------

TEST(ExplorationBonus, Examples) {
  // t = e^2 is not an integer; the formula itself is what is checked here.
  const double t = std::exp(2.0);
  EXPECT_NEAR(std::sqrt(2.0 * std::log(t) / 4.0), 1.0, 1e-15);
  EXPECT_NEAR(exploration_bonus(7, 4, 2.0), std::sqrt(2.0 * std::log(7.0) / 4.0), 1e-15);

  EXPECT_EQ(exploration_bonus(1000, 3, 0.0), 0.0);
  EXPECT_EQ(exploration_bonus(1, 1, 123.0), 0.0);
}

TEST(ExplorationBonus, ZeroPlaysUndefined) {
  try {
    exploration_bonus(10, 0, 2.0);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefinedIndex);
  }
  EXPECT_THROW(exploration_bonus(0, 1, 2.0), ValidationError);
  EXPECT_THROW(exploration_bonus(5, 1, -1.0), ValidationError);
}

// -----------------------------------------------------------------------------
// select_arm
// -----------------------------------------------------------------------------

TEST(SelectArm, InitializationPlaysArmsInOrder) {
  UcbState state(5, 2.0);
  // Rewards seen so far are irrelevant in the first K steps.
  for (std::size_t step = 0; step < 5; ++step) {
    ASSERT_EQ(select_arm(state), step);
    state.record_reward(step, step == 0 ? 100.0 : 0.1);
  }
  EXPECT_EQ(state.completed(), 5);
}

TEST(SelectArm, TieGoesToLowestIndex) {
  UcbState state(2, 2.0);
  state.record_reward(0, 1.5);
  state.record_reward(1, 1.5);
  EXPECT_EQ(select_arm(state), 0u);
}

TEST(SelectArm, DominantMeanWins) {
  UcbState state(2, 2.0);
  state.record_reward(0, 0.0 + 1e-9);
  state.record_reward(1, 10.0);
  for (int i = 0; i < 100; ++i) {
    state.record_reward(0, 0.0 + 1e-9);
    state.record_reward(1, 10.0);
  }
  EXPECT_EQ(select_arm(state), 1u);
}

TEST(SelectArm, MatchesIndexArgmax) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> reward(1.0, 2.0);
  std::uniform_int_distribution<int> pick(0, 3);
  UcbState state(4, 3.0);
  for (int step = 0; step < 4; ++step) state.record_reward(static_cast<std::size_t>(step), reward(rng));
  for (int step = 0; step < 500; ++step) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < 4; ++i) {
      if (state.index(i) > state.index(best)) best = i;
    }
    ASSERT_EQ(select_arm(state), best);
    state.record_reward(static_cast<std::size_t>(pick(rng)), reward(rng));
  }
}

// -----------------------------------------------------------------------------
// record_reward
// -----------------------------------------------------------------------------

TEST(RecordReward, FirstReward) {
  UcbState state(3, 2.0);
  record_reward(state, 1, 1.2);
  EXPECT_DOUBLE_EQ(state.sample_mean(1), 1.2);
  EXPECT_EQ(state.plays(1), 1);
  EXPECT_EQ(state.completed(), 1);
}

TEST(RecordReward, RunningMean) {
  UcbState state(1, 2.0);
  for (double r : {1.0, 2.0, 3.0}) state.record_reward(0, r);
  EXPECT_DOUBLE_EQ(state.sample_mean(0), 2.0);
  EXPECT_EQ(state.plays(0), 3);
}

TEST(RecordReward, RecursiveMatchesBatch) {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> reward(1.0, 2.0);
  UcbState state(1, 2.0);
  std::vector<double> seen;
  for (int i = 0; i < 10000; ++i) {
    seen.push_back(reward(rng));
    state.record_reward(0, seen.back());
  }
  EXPECT_NEAR(state.sample_mean(0), oracle::batch_mean(seen), 1e-12);
}

// -----------------------------------------------------------------------------
// best_arm
// -----------------------------------------------------------------------------

TEST(BestArm, Presets) {
  EXPECT_EQ(best_arm(testing::s1_instance()), 3u);  // ch.4, mu = 1.622
  EXPECT_NEAR(testing::s1_instance().best_mean(), 1.622, 5e-4);
  EXPECT_EQ(best_arm(testing::s2_instance()), 2u);  // ch.3, mu = 1.402
  EXPECT_NEAR(testing::s2_instance().best_mean(), 1.402, 5e-4);
}

TEST(BestArm, IdenticalArmsPickFirst) {
  EXPECT_EQ(best_arm(testing::memoryless_identical_instance(4)), 0u);
}

// -----------------------------------------------------------------------------
// Properties
// -----------------------------------------------------------------------------

// Plays a random reward stream through the policy; returns the arm choices.
std::vector<std::size_t> drive(UcbState& state, std::uint64_t seed, int steps, double shift = 0.0) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> choices;
  for (int step = 0; step < steps; ++step) {
    const std::size_t arm = select_arm(state);
    choices.push_back(arm);
    std::uniform_real_distribution<double> reward(1.0, 1.0 + 0.2 * static_cast<double>(arm + 1));
    state.record_reward(arm, reward(rng) + shift);
  }
  return choices;
}

TEST(UcbProperties, CountsSumToStepsAndMeansStayInRange) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t k = 2 + seed % 6;
    UcbState state(k, 0.5 * static_cast<double>(seed % 5));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> reward(1.0, 2.0);
    for (int step = 1; step <= 300; ++step) {
      state.record_reward(select_arm(state), reward(rng));
      std::int64_t total = 0;
      for (std::size_t i = 0; i < k; ++i) {
        total += state.plays(i);
        if (state.plays(i) > 0) {
          ASSERT_GE(state.sample_mean(i), 1.0);
          ASSERT_LE(state.sample_mean(i), 2.0);
        }
        if (step >= static_cast<int>(k)) ASSERT_GE(state.plays(i), 1);
      }
      ASSERT_EQ(total, step);
    }
  }
}

TEST(UcbProperties, ShiftingEveryIndexLeavesChoiceUnchanged) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    UcbState plain(5, 2.0), shifted(5, 2.0);
    const auto a = drive(plain, seed, 400, 0.0);
    // Shifting all rewards by c shifts all indices by c.
    const auto b = drive(shifted, seed, 400, 0.75);
    ASSERT_EQ(a, b) << "seed " << seed;
  }
}

TEST(UcbProperties, ZeroExplorationIsGreedy) {
  UcbState state(3, 0.0);
  state.record_reward(0, 1.0);
  state.record_reward(1, 1.9);
  state.record_reward(2, 1.2);
  // Arm 1 keeps earning 1.5, which stays above every other sample mean.
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(select_arm(state), 1u);
    state.record_reward(1, 1.5);
  }
}

TEST(UcbProperties, DeterministicGivenRewards) {
  UcbState a(4, 2.0), b(4, 2.0);
  EXPECT_EQ(drive(a, 99, 1000), drive(b, 99, 1000));
}

}  // namespace
}  // namespace markov_ucb
