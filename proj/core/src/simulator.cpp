#include "markov_ucb/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "markov_ucb/errors.hpp"
#include "markov_ucb/policy.hpp"
#include "markov_ucb/rng.hpp"

namespace markov_ucb {

std::vector<std::int64_t> log_checkpoints(std::int64_t first, std::int64_t horizon, double ratio) {
  if (first < 1 || horizon < first) {
    throw ConfigError("checkpoint grid needs 1 <= first <= horizon");
  }
  if (!(ratio > 1.0)) throw ConfigError("checkpoint ratio must exceed 1");
  std::vector<std::int64_t> grid;
  for (std::int64_t c = first; c < horizon;) {
    grid.push_back(c);
    const auto next = static_cast<std::int64_t>(std::ceil(static_cast<double>(c) * ratio));
    c = std::max(next, c + 1);
  }
  grid.push_back(horizon);
  return grid;
}

namespace {

std::vector<std::int64_t> resolve_checkpoints(const std::vector<std::int64_t>& requested,
                                              std::size_t arms, std::int64_t horizon) {
  if (requested.empty()) return log_checkpoints(static_cast<std::int64_t>(arms), horizon);
  for (std::size_t i = 0; i < requested.size(); ++i) {
    if (requested[i] < 1 || requested[i] > horizon ||
        (i > 0 && requested[i] <= requested[i - 1])) {
      throw ConfigError("checkpoints must be strictly increasing within [1, horizon]");
    }
  }
  return requested;
}

}  // namespace

EpisodeRecord run_episode(const BanditInstance& instance, const PolicySpec& policy,
                          std::int64_t horizon, std::uint64_t seed,
                          const EpisodeOptions& options) {
  const std::size_t k = instance.size();
  if (horizon < static_cast<std::int64_t>(k)) {
    throw ConfigError("horizon " + std::to_string(horizon) + " is shorter than the " +
                      std::to_string(k) + " initialization plays");
  }

  EpisodeRecord rec;
  rec.checkpoints = resolve_checkpoints(options.checkpoints, k, horizon);
  rec.reward_at.reserve(rec.checkpoints.size());
  rec.plays_at.reserve(rec.checkpoints.size());
  rec.reward_by_arm.assign(k, 0.0);

  Rng rng(seed);
  std::vector<std::size_t> state(k);
  if (options.initial_states) {
    if (options.initial_states->size() != k) {
      throw ConfigError("initial_states must list one state per arm");
    }
    for (std::size_t i = 0; i < k; ++i) {
      state[i] = (*options.initial_states)[i];
      if (state[i] >= instance.arm(i).num_states()) {
        throw ValidationError(ErrorCode::kInvalidState, "initial state out of range");
      }
    }
  } else {
    for (std::size_t i = 0; i < k; ++i) state[i] = instance.arm(i).sample_initial(rng);
  }
  rec.initial_states = state;
  if (options.record_trace) rec.trace.reserve(static_cast<std::size_t>(horizon));

  UcbState ucb(k, policy.exploration);
  double total = 0.0;
  std::size_t next_checkpoint = 0;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const std::size_t i = select_arm(ucb);
    const Arm& arm = instance.arm(i);
    state[i] = arm.sample_next(state[i], rng);
    const double reward = arm.rewards()(static_cast<Eigen::Index>(state[i]));
    ucb.record_reward(i, reward);
    total += reward;
    rec.reward_by_arm[i] += reward;
    if (options.record_trace) rec.trace.push_back({i, state[i], reward});
    if (next_checkpoint < rec.checkpoints.size() && rec.checkpoints[next_checkpoint] == n) {
      rec.reward_at.push_back(total);
      rec.plays_at.push_back(ucb.plays());
      ++next_checkpoint;
    }
  }
  rec.plays = ucb.plays();
  rec.final_states = state;
  rec.total_reward = total;
  return rec;
}

std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t run) {
  return derive_seed(base_seed, run);
}

namespace {

struct RunSummary {
  std::vector<double> regret;
  std::vector<double> pseudo;
  std::vector<std::vector<std::int64_t>> plays;
};

struct Moments {
  double mean;
  double std_error;
};

Moments moments(const std::vector<RunSummary>& runs, std::size_t c,
                double (*pick)(const RunSummary&, std::size_t)) {
  const double count = static_cast<double>(runs.size());
  double sum = 0.0;
  for (const auto& r : runs) sum += pick(r, c);
  const double mean = sum / count;
  if (runs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const auto& r : runs) {
    const double d = pick(r, c) - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / (count - 1.0) / count)};
}

}  // namespace

RegretTrajectory monte_carlo_regret(const BanditInstance& instance, const PolicySpec& policy,
                                    std::int64_t horizon, std::size_t runs,
                                    std::uint64_t base_seed, const MonteCarloOptions& options) {
  if (runs < 1) throw ConfigError("runs must be >= 1");
  const std::size_t k = instance.size();
  EpisodeOptions episode_options;
  episode_options.checkpoints = resolve_checkpoints(options.checkpoints, k, horizon);
  episode_options.initial_states = options.initial_states;
  const auto& checkpoints = episode_options.checkpoints;
  const double best = instance.best_mean();

  std::vector<RunSummary> summaries(runs);
  auto simulate = [&](std::size_t r) {
    const EpisodeRecord rec = run_episode(instance, policy, horizon, run_seed(base_seed, r),
                                          episode_options);
    RunSummary s;
    s.regret.resize(checkpoints.size());
    s.pseudo.resize(checkpoints.size());
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      s.regret[c] = static_cast<double>(checkpoints[c]) * best - rec.reward_at[c];
      double pseudo = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        pseudo += instance.gap(i) * static_cast<double>(rec.plays_at[c][i]);
      }
      s.pseudo[c] = pseudo;
    }
    s.plays = rec.plays_at;
    summaries[r] = std::move(s);
  };

  unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(runs)));
  if (workers == 1) {
    for (std::size_t r = 0; r < runs; ++r) simulate(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < runs; r = next++) simulate(r);
      });
    }
  }

  RegretTrajectory traj;
  traj.horizons = checkpoints;
  traj.runs = runs;
  traj.base_seed = base_seed;
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    const auto direct = moments(summaries, c, [](const RunSummary& s, std::size_t i) {
      return s.regret[i];
    });
    const auto pseudo = moments(summaries, c, [](const RunSummary& s, std::size_t i) {
      return s.pseudo[i];
    });
    const auto gap = moments(summaries, c, [](const RunSummary& s, std::size_t i) {
      return s.regret[i] - s.pseudo[i];
    });
    traj.mean_regret.push_back(direct.mean);
    traj.std_error.push_back(direct.std_error);
    traj.mean_pseudo_regret.push_back(pseudo.mean);
    traj.pseudo_std_error.push_back(pseudo.std_error);
    traj.mean_accounting_gap.push_back(gap.mean);
    traj.accounting_gap_std_error.push_back(gap.std_error);

    std::vector<double> plays(k, 0.0);
    for (const auto& s : summaries) {
      for (std::size_t i = 0; i < k; ++i) plays[i] += static_cast<double>(s.plays[c][i]);
    }
    for (auto& p : plays) p /= static_cast<double>(runs);
    traj.mean_plays.push_back(std::move(plays));
  }
  return traj;
}

RegretDecomposition regret_decomposition(const RegretTrajectory& trajectory,
                                         const BanditInstance& instance) {
  if (trajectory.horizons.empty() || trajectory.mean_plays.empty()) {
    throw ConfigError("trajectory has no checkpoints");
  }
  const auto& plays = trajectory.mean_plays.back();
  if (plays.size() != instance.size()) {
    throw ConfigError("trajectory and instance disagree on the number of arms");
  }
  RegretDecomposition d;
  d.horizon = trajectory.horizons.back();
  d.per_arm.resize(plays.size());
  for (std::size_t i = 0; i < plays.size(); ++i) {
    d.per_arm[i] = instance.gap(i) * plays[i];
    d.total += d.per_arm[i];
  }
  if (!trajectory.mean_regret.empty()) d.direct_regret = trajectory.mean_regret.back();
  d.difference = d.direct_regret - d.total;
  if (!trajectory.accounting_gap_std_error.empty()) {
    d.difference_std_error = trajectory.accounting_gap_std_error.back();
  }
  return d;
}

}  // namespace markov_ucb
