#include <benchmark/benchmark.h>

#include <random>

#include "markov_ucb/chain.hpp"
#include "markov_ucb/instance.hpp"
#include "markov_ucb/policy.hpp"
#include "markov_ucb/simulator.hpp"

namespace {

using namespace markov_ucb;

BanditInstance theta_instance() {
  std::vector<Arm> arms;
  for (double theta : {0.5, 1.0, 7.0, 5.0, 3.0}) arms.push_back(theta_arm(theta));
  return BanditInstance::make(std::move(arms));
}

void BM_RunEpisode(benchmark::State& state) {
  const auto inst = theta_instance();
  const auto horizon = state.range(0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_episode(inst, {2.0}, horizon, seed++).total_reward);
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_RunEpisode)->Arg(10000)->Arg(100000);

void BM_StationaryDistribution(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Matrix p(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) p(i, j) = u(rng);
    p.row(i) /= p.row(i).sum();
  }
  for (auto _ : state) benchmark::DoNotOptimize(stationary_distribution(p));
}
BENCHMARK(BM_StationaryDistribution)->Arg(2)->Arg(16)->Arg(128);

void BM_SelectArm(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  UcbState ucb(k, 2.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> reward(1.0, 2.0);
  for (std::size_t i = 0; i < 10 * k; ++i) ucb.record_reward(i % k, reward(rng));
  for (auto _ : state) benchmark::DoNotOptimize(select_arm(ucb));
}
BENCHMARK(BM_SelectArm)->Arg(5)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
