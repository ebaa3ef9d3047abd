#include "markov_ucb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "markov_ucb/errors.hpp"
#include "markov_ucb/policy.hpp"
#include "markov_ucb/rng.hpp"

namespace markov_ucb {

double min_exploration_constant(const BanditInstance& instance) {
  const double s = static_cast<double>(instance.s_max());
  const double r = instance.r_max();
  return 90.0 * s * s * r * r / instance.eps_min();
}

double accounting_constant_upper(const BanditInstance& instance) {
  double total = 0.0;
  for (const Arm& a : instance.arms()) total += a.rewards().sum();
  return total / instance.pi_min();
}

double basel_constant() { return std::numbers::pi * std::numbers::pi / 6.0; }

double BoundReport::bound_at(double n) const {
  return leading_coefficient * std::log(n) + constant_term();
}

BoundReport theorem1_bound(const BanditInstance& instance, double exploration) {
  if (!(exploration >= 0.0)) throw ConfigError("exploration constant L must be >= 0");
  BoundReport rep;
  rep.exploration = exploration;
  rep.min_exploration = min_exploration_constant(instance);
  // Relative slack so that a threshold that is exact on paper (1458 for S1)
  // is not rejected over the last bit of rounding.
  rep.condition_satisfied = exploration >= rep.min_exploration * (1.0 - 1e-9);
  rep.best_arm = best_arm(instance);
  rep.gaps = instance.gaps();
  rep.beta = basel_constant();
  rep.accounting_constant = accounting_constant_upper(instance);

  const double sqrt_l = std::sqrt(exploration);
  for (const Arm& a : instance.arms()) {
    const double size = static_cast<double>(a.num_states());
    rep.d.push_back(size / instance.pi_min() *
                    (1.0 + instance.eps_max() * sqrt_l / (10.0 * size * instance.r_min())));
  }
  const double d_star = rep.d[rep.best_arm];
  double inverse_gaps = 0.0;
  rep.degenerate = true;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    rep.c.push_back(1.0 + (rep.d[i] + d_star) * rep.beta);
    if (rep.gaps[i] > 0.0) {
      rep.degenerate = false;
      inverse_gaps += 1.0 / rep.gaps[i];
      rep.gap_weighted_constant += rep.gaps[i] * rep.c[i];
    }
  }
  rep.leading_coefficient = 4.0 * exploration * inverse_gaps;
  return rep;
}

double initial_distribution_norm(const Arm& arm) {
  return arm.initial_distribution().cwiseQuotient(arm.stationary()).norm();
}

double initial_distribution_norm_upper(const Arm& arm) {
  return 1.0 / arm.stationary().minCoeff();
}

namespace {

std::vector<bool> subset_mask(const Arm& arm, std::span<const std::size_t> subset) {
  if (subset.empty()) throw ValidationError(ErrorCode::kEmptySubset, "state subset A is empty");
  std::vector<bool> mask(arm.num_states(), false);
  for (auto x : subset) {
    if (x >= arm.num_states()) {
      throw ValidationError(ErrorCode::kInvalidState,
                            "subset state " + std::to_string(x) + " out of range");
    }
    mask[x] = true;
  }
  if (std::all_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
    throw ValidationError(ErrorCode::kEmptySubset, "subset A must be a proper subset");
  }
  return mask;
}

}  // namespace

GillmanTail gillman_tail(const Arm& arm, std::span<const std::size_t> subset,
                         std::int64_t steps, double gamma) {
  const auto mask = subset_mask(arm, subset);
  if (steps < 1) throw ConfigError("gillman_tail needs n >= 1");
  if (!(gamma >= 0.0)) throw ConfigError("gillman_tail needs gamma >= 0");

  GillmanTail out;
  for (std::size_t x = 0; x < mask.size(); ++x) {
    if (mask[x]) out.pi_a += arm.stationary()(static_cast<Eigen::Index>(x));
  }
  out.n_q = initial_distribution_norm(arm);
  const double n = static_cast<double>(steps);
  const double eps = arm.gap();
  out.raw = (1.0 + gamma * eps / (10.0 * n)) * out.n_q * std::exp(-gamma * gamma * eps / (20.0 * n));
  out.bound = std::min(out.raw, 1.0);
  return out;
}

std::vector<OccupationTailEstimate> occupation_tail_check(
    const Arm& arm, std::span<const std::size_t> subset, std::int64_t steps,
    std::span<const double> gammas, std::size_t runs, std::uint64_t seed) {
  const auto mask = subset_mask(arm, subset);
  if (runs < 1) throw ConfigError("runs must be >= 1");

  std::vector<OccupationTailEstimate> out;
  for (double g : gammas) {
    OccupationTailEstimate e;
    e.gamma = g;
    e.bound = gillman_tail(arm, subset, steps, g);
    out.push_back(e);
  }
  const double expected = static_cast<double>(steps) * out.front().bound.pi_a;
  std::vector<std::size_t> hits(gammas.size(), 0);

  for (std::size_t r = 0; r < runs; ++r) {
    Rng rng(derive_seed(seed, r));
    std::size_t x = arm.sample_initial(rng);
    std::int64_t visits = mask[x] ? 1 : 0;
    for (std::int64_t t = 1; t < steps; ++t) {
      x = arm.sample_next(x, rng);
      visits += mask[x] ? 1 : 0;
    }
    const double excess = static_cast<double>(visits) - expected;
    for (std::size_t g = 0; g < gammas.size(); ++g) {
      if (excess >= gammas[g]) ++hits[g];
    }
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    const double p = static_cast<double>(hits[g]) / static_cast<double>(runs);
    out[g].empirical = p;
    out[g].std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(runs));
    out[g].consistent = p <= out[g].bound.bound + 3.0 * out[g].std_error;
  }
  return out;
}

DeviationReport lemma1_constant_check(const Arm& arm, const StoppingRule& rule,
                                      std::size_t runs, std::uint64_t seed) {
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (rule.kind == StoppingRule::Kind::kFixedHorizon && rule.horizon < 1) {
    throw ConfigError("fixed stopping horizon must be >= 1");
  }
  const std::size_t n = arm.num_states();
  const Vector& pi = arm.stationary();

  // Per state: running sums of Z = N(x, tau) - pi_x tau and its square.
  std::vector<double> sum_visits(n, 0.0), sum_z(n, 0.0), sum_z2(n, 0.0);
  double sum_tau = 0.0;
  std::vector<std::int64_t> visits(n);

  for (std::size_t r = 0; r < runs; ++r) {
    Rng rng(derive_seed(seed, r));
    std::fill(visits.begin(), visits.end(), 0);
    const std::size_t start = arm.sample_initial(rng);
    std::size_t x = start;
    std::int64_t tau = 0;
    if (rule.kind == StoppingRule::Kind::kFixedHorizon) {
      for (tau = 1;; ++tau) {
        ++visits[x];
        if (tau == rule.horizon) break;
        x = arm.sample_next(x, rng);
      }
    } else {
      do {
        ++visits[x];
        ++tau;
        x = arm.sample_next(x, rng);
      } while (x != start);
    }
    const double t = static_cast<double>(tau);
    sum_tau += t;
    for (std::size_t s = 0; s < n; ++s) {
      const double v = static_cast<double>(visits[s]);
      const double z = v - pi(static_cast<Eigen::Index>(s)) * t;
      sum_visits[s] += v;
      sum_z[s] += z;
      sum_z2[s] += z * z;
    }
  }

  DeviationReport rep;
  rep.runs = runs;
  const double count = static_cast<double>(runs);
  rep.mean_stopping_time = sum_tau / count;
  rep.reference = 1.0 / pi.minCoeff();
  for (std::size_t s = 0; s < n; ++s) {
    StateDeviation d;
    d.state = s;
    d.mean_visits = sum_visits[s] / count;
    d.expected_visits = pi(static_cast<Eigen::Index>(s)) * rep.mean_stopping_time;
    const double mean_z = sum_z[s] / count;
    d.deviation = std::abs(mean_z);
    if (runs > 1) {
      const double var = std::max(0.0, (sum_z2[s] - count * mean_z * mean_z) / (count - 1.0));
      d.std_error = std::sqrt(var / count);
    }
    d.exceeds_reference = d.deviation - 3.0 * d.std_error > rep.reference;
    rep.any_exceeds = rep.any_exceeds || d.exceeds_reference;
    rep.states.push_back(d);
  }
  return rep;
}

double kl_rate(const Arm& arm, const Arm& reference) {
  if (arm.num_states() != reference.num_states()) {
    throw ValidationError(ErrorCode::kShapeMismatch, "KL rate needs a shared state space");
  }
  const Matrix& p = arm.transition();
  const Matrix& q = reference.transition();
  const Vector& pi = arm.stationary();
  double rate = 0.0;
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    double row = 0.0;
    for (Eigen::Index y = 0; y < p.cols(); ++y) {
      if (p(x, y) == 0.0) continue;
      if (q(x, y) == 0.0) return std::numeric_limits<double>::infinity();
      row += p(x, y) * std::log(p(x, y) / q(x, y));
    }
    rate += pi(x) * row;
  }
  // Round-off can leave tiny negatives for nearly identical kernels.
  return std::max(rate, 0.0);
}

double kl_rate(const ThetaFamilyPoint& arm, const ThetaFamilyPoint& reference) {
  return kl_rate(arm.arm(), reference.arm());
}

KlRateReport lower_bound_coefficient(std::span<const double> thetas) {
  if (thetas.empty()) throw ConfigError("theta list is empty");
  KlRateReport rep;
  rep.thetas.assign(thetas.begin(), thetas.end());
  std::vector<ThetaFamilyPoint> points;
  for (double t : thetas) points.push_back(ThetaFamilyPoint::make(t));
  for (const auto& p : points) rep.means.push_back(p.arm().mean());

  rep.best_arm = static_cast<std::size_t>(
      std::max_element(rep.means.begin(), rep.means.end()) - rep.means.begin());
  const double best = rep.means[rep.best_arm];
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double gap = best - rep.means[j];
    rep.gaps.push_back(gap);
    if (!(gap > 0.0)) {
      rep.rates.push_back(0.0);
      continue;
    }
    const double rate = kl_rate(points[j], points[rep.best_arm]);
    rep.rates.push_back(rate);
    if (rate == 0.0) {
      rep.diverges = true;
    } else {
      rep.coefficient += gap / rate;
    }
  }
  if (rep.diverges) rep.coefficient = std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace markov_ucb
