#include "cli/reports.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>

#include "markov_ucb/analysis.hpp"
#include "markov_ucb/policy.hpp"

namespace markov_ucb::cli {

using nlohmann::json;

namespace {

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

// JSON has no infinity; infinite values are written as the string "inf".
json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

std::string provenance_line(const std::string& command, std::uint64_t config_hash,
                            std::uint64_t seed) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# markov_ucb %s config_hash=0x%016" PRIx64 " seed=%" PRIu64,
                command.c_str(), config_hash, seed);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const RegretTrajectory& traj) {
  const std::size_t k = traj.mean_plays.empty() ? 0 : traj.mean_plays.front().size();
  out << "horizon,mean_regret,std_error";
  for (std::size_t i = 1; i <= k; ++i) out << ",plays_" << i;
  out << '\n';
  for (std::size_t c = 0; c < traj.horizons.size(); ++c) {
    out << traj.horizons[c] << ',' << format("%.6f", traj.mean_regret[c]) << ','
        << format("%.6f", traj.std_error[c]);
    for (double p : traj.mean_plays[c]) out << ',' << format("%.4f", p);
    out << '\n';
  }
}

json instance_json(const BanditInstance& instance) {
  json arms = json::array();
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const Arm& a = instance.arm(i);
    json rows = json::array();
    for (Eigen::Index x = 0; x < a.transition().rows(); ++x) {
      rows.push_back(to_std(a.transition().row(x).transpose()));
    }
    arms.push_back({{"arm", i + 1},
                    {"transition", rows},
                    {"rewards", to_std(a.rewards())},
                    {"stationary", to_std(a.stationary())},
                    {"mean", a.mean()},
                    {"eigenvalue_gap", a.gap()},
                    {"reward_gap", instance.gap(i)}});
  }
  return {{"arms", arms},
          {"best_arm", best_arm(instance) + 1},
          {"best_mean", instance.best_mean()},
          {"eps_min", instance.eps_min()},
          {"eps_max", instance.eps_max()},
          {"s_max", instance.s_max()},
          {"r_min", instance.r_min()},
          {"r_max", instance.r_max()},
          {"pi_min", instance.pi_min()},
          {"min_exploration", min_exploration_constant(instance)}};
}

void write_instance_table(std::ostream& out, const BanditInstance& instance) {
  out << std::left << std::setw(6) << "arm" << std::setw(18) << "p01,p10" << std::setw(16)
      << "rewards" << std::setw(24) << "stationary" << std::setw(8) << "mu" << std::setw(8)
      << "eps" << "gap\n";
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const Arm& a = instance.arm(i);
    std::string trans = "-";
    if (a.num_states() == 2) {
      trans = format("%.4f", a.transition()(0, 1)) + "," + format("%.4f", a.transition()(1, 0));
    }
    std::string rewards, pi;
    for (Eigen::Index x = 0; x < a.rewards().size(); ++x) {
      if (x) {
        rewards += ",";
        pi += ",";
      }
      rewards += format("%g", a.rewards()(x));
      pi += format("%.4f", a.stationary()(x));
    }
    out << std::left << std::setw(6) << ("ch." + std::to_string(i + 1)) << std::setw(18) << trans
        << std::setw(16) << rewards << std::setw(24) << pi << std::setw(8)
        << format("%.3f", a.mean()) << std::setw(8) << format("%.4f", a.gap())
        << format("%.4f", instance.gap(i)) << '\n';
  }
  out << "best_arm " << best_arm(instance) + 1 << " mu* " << format("%.4f", instance.best_mean())
      << '\n'
      << "eps_min " << format("%.4f", instance.eps_min()) << " eps_max "
      << format("%.4f", instance.eps_max()) << " S_max " << instance.s_max() << " r_min "
      << format("%g", instance.r_min()) << " r_max " << format("%g", instance.r_max())
      << " pi_min " << format("%.6g", instance.pi_min()) << '\n'
      << "L_min " << format("%.1f", min_exploration_constant(instance)) << '\n';
}

json bound_json(const BoundReport& rep, std::span<const double> horizons) {
  json values = json::array();
  for (double n : horizons) values.push_back({{"n", n}, {"bound", rep.bound_at(n)}});
  return {{"L", rep.exploration},
          {"L_min", rep.min_exploration},
          {"condition", rep.condition_satisfied ? "satisfied" : "condition violated"},
          {"best_arm", rep.best_arm + 1},
          {"gaps", rep.gaps},
          {"D", rep.d},
          {"C", rep.c},
          {"beta", rep.beta},
          {"accounting_constant", rep.accounting_constant},
          {"accounting_constant_kind", "upper estimate: sum_i sum_y r_y / pi_min"},
          {"leading_coefficient", rep.leading_coefficient},
          {"gap_weighted_constant", rep.gap_weighted_constant},
          {"constant_term", rep.constant_term()},
          {"degenerate", rep.degenerate},
          {"bound_at", values}};
}

json lower_bound_json(const KlRateReport& rep) {
  json rates = json::array();
  for (double r : rep.rates) rates.push_back(number(r));
  return {{"theta", rep.thetas},
          {"best_arm", rep.best_arm + 1},
          {"means", rep.means},
          {"gaps", rep.gaps},
          {"kl_rates", rates},
          {"coefficient", number(rep.coefficient)},
          {"diverges", rep.diverges}};
}

json deviation_json(std::size_t arm, std::span<const OccupationTailEstimate> tails,
                    const DeviationReport& rep, const StoppingRule& rule) {
  json tail = json::array();
  for (const auto& t : tails) {
    tail.push_back({{"gamma", t.gamma},
                    {"empirical", t.empirical},
                    {"std_error", t.std_error},
                    {"bound", t.bound.bound},
                    {"raw_bound", t.bound.raw},
                    {"n_q", t.bound.n_q},
                    {"pi_a", t.bound.pi_a},
                    {"consistent", t.consistent}});
  }
  json states = json::array();
  for (const auto& s : rep.states) {
    states.push_back({{"state", s.state},
                      {"mean_visits", s.mean_visits},
                      {"expected_visits", s.expected_visits},
                      {"deviation", s.deviation},
                      {"std_error", s.std_error},
                      {"exceeds_reference", s.exceeds_reference}});
  }
  const bool first_return = rule.kind == StoppingRule::Kind::kFirstReturn;
  return {{"arm", arm + 1},
          {"occupation_tail", tail},
          {"stopping_rule", first_return ? "first-return" : "fixed"},
          {"stopping_horizon", rule.horizon},
          {"mean_stopping_time", rep.mean_stopping_time},
          {"reference", rep.reference},
          {"runs", rep.runs},
          {"any_exceeds", rep.any_exceeds},
          {"states", states}};
}

}  // namespace markov_ucb::cli
