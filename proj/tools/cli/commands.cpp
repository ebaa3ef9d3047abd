#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "cli/reports.hpp"
#include "markov_ucb/analysis.hpp"
#include "markov_ucb/errors.hpp"
#include "markov_ucb/simulator.hpp"

namespace markov_ucb::cli {

void cmd_inspect(const ExperimentConfig& config, std::ostream& out, bool as_json) {
  validate(config);
  const auto instance = build_instance(*config.instance);
  out << provenance_line("inspect", config_hash(config), config.seed) << '\n';
  if (as_json) {
    out << instance_json(instance).dump(2) << '\n';
  } else {
    write_instance_table(out, instance);
  }
}

void cmd_simulate(const ExperimentConfig& config, std::ostream& out, unsigned threads) {
  validate(config);
  const auto instance = build_instance(*config.instance);
  const auto k = static_cast<std::int64_t>(instance.size());
  if (config.horizon < k) {
    throw ConfigError("field 'horizon' must be >= number of arms (" + std::to_string(k) + ")");
  }
  MonteCarloOptions options;
  options.checkpoints = config.checkpoints.empty()
                            ? log_checkpoints(k, config.horizon, config.checkpoint_ratio)
                            : config.checkpoints;
  options.threads = threads;
  const auto traj = monte_carlo_regret(instance, PolicySpec{config.exploration}, config.horizon,
                                       config.runs, config.seed, options);
  out << provenance_line("simulate", config_hash(config), config.seed) << '\n';
  write_trajectory_csv(out, traj);
}

void cmd_bound(const ExperimentConfig& config, std::ostream& out) {
  validate(config);
  const auto instance = build_instance(*config.instance);
  for (double n : config.bound_horizons) {
    if (!(n >= 1.0)) throw ConfigError("field 'bound.n' entries must be >= 1");
  }
  const auto report = theorem1_bound(instance, config.exploration);
  out << provenance_line("bound", config_hash(config), config.seed) << '\n';
  out << bound_json(report, config.bound_horizons).dump(2) << '\n';
}

void cmd_lower_bound(const ExperimentConfig& config, std::ostream& out) {
  validate(config);
  const auto thetas = theta_list(*config.instance);
  if (thetas.size() < 2) throw ConfigError("lower bound needs at least two arms");
  const auto report = lower_bound_coefficient(thetas);
  out << provenance_line("lower-bound", config_hash(config), config.seed) << '\n';
  out << lower_bound_json(report).dump(2) << '\n';
}

void cmd_deviation_check(const ExperimentConfig& config, std::ostream& out) {
  validate(config);
  const auto instance = build_instance(*config.instance);
  const auto& dev = config.deviation;
  if (dev.arm < 1 || dev.arm > instance.size()) {
    throw ConfigError("field 'deviation.arm' must be in 1.." + std::to_string(instance.size()));
  }
  if (dev.runs < 1) throw ConfigError("field 'deviation.runs' must be >= 1");
  if (dev.steps < 1) throw ConfigError("field 'deviation.n' must be >= 1");
  const Arm& arm = instance.arm(dev.arm - 1);
  const auto tails = occupation_tail_check(arm, dev.subset, dev.steps, dev.gammas, dev.runs,
                                           derive_seed(config.seed, 0));
  const auto rule = dev.stopping == "fixed" ? StoppingRule::fixed(dev.steps)
                                            : StoppingRule::first_return();
  const auto report = lemma1_constant_check(arm, rule, dev.runs, derive_seed(config.seed, 1));
  out << provenance_line("deviation-check", config_hash(config), config.seed) << '\n';
  out << deviation_json(dev.arm - 1, tails, report, rule).dump(2) << '\n';
}

namespace {

struct Overrides {
  std::string config_path;
  std::string preset;
  std::vector<double> thetas;
  std::optional<double> exploration;
  std::optional<std::int64_t> horizon;
  std::optional<std::int64_t> runs;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<double> bound_horizons;
  std::optional<double> checkpoint_ratio;
  std::optional<std::size_t> arm;
  std::vector<std::size_t> subset;
  std::vector<double> gammas;
  std::optional<std::int64_t> steps;
  std::optional<std::size_t> deviation_runs;
  std::string stopping;
  std::string format = "table";
  unsigned threads = 0;
};

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  const int sources = (o.preset.empty() ? 0 : 1) + (o.thetas.empty() ? 0 : 1) +
                      (cfg.instance ? 1 : 0);
  if (sources > 1) {
    throw ConfigError("exactly one instance source allowed (--preset, --theta, or config 'instance')");
  }
  if (!o.preset.empty()) {
    InstanceSource src;
    src.kind = InstanceSource::Kind::kPreset;
    src.preset = o.preset;
    cfg.instance = src;
  } else if (!o.thetas.empty()) {
    InstanceSource src;
    src.kind = InstanceSource::Kind::kTheta;
    src.thetas = o.thetas;
    cfg.instance = src;
  }
  if (o.exploration) cfg.exploration = *o.exploration;
  if (o.horizon) cfg.horizon = *o.horizon;
  if (o.runs) {
    if (*o.runs < 1) throw ConfigError("--runs must be >= 1");
    cfg.runs = static_cast<std::size_t>(*o.runs);
  }
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out.empty()) cfg.out = o.out;
  if (!o.bound_horizons.empty()) cfg.bound_horizons = o.bound_horizons;
  if (o.checkpoint_ratio) cfg.checkpoint_ratio = *o.checkpoint_ratio;
  if (o.arm) cfg.deviation.arm = *o.arm;
  if (!o.subset.empty()) cfg.deviation.subset = o.subset;
  if (!o.gammas.empty()) cfg.deviation.gammas = o.gammas;
  if (o.steps) cfg.deviation.steps = *o.steps;
  if (o.deviation_runs) cfg.deviation.runs = *o.deviation_runs;
  if (!o.stopping.empty()) cfg.deviation.stopping = o.stopping;
  return cfg;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"UCB on rested Markovian bandits: simulation and regret bounds", "markov_ucb"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config_path, "JSON experiment config");
  app.add_option("--preset", o.preset, "Built-in instance: S1 or S2");
  app.add_option("--theta", o.thetas, "Theta-family arms, e.g. 0.5,1,7")->delimiter(',');
  app.add_option("--L", o.exploration, "UCB exploration constant");
  app.add_option("--horizon", o.horizon, "Number of plays per run");
  app.add_option("--runs", o.runs, "Monte Carlo runs");
  app.add_option("--seed", o.seed, "Base seed");
  app.add_option("--out", o.out, "Output path (default: stdout)");
  app.add_option("--n", o.bound_horizons, "Horizons at which to evaluate the bound")->delimiter(',');
  app.add_option("--checkpoint-ratio", o.checkpoint_ratio, "Growth factor of the checkpoint grid");
  app.add_option("--threads", o.threads, "Simulation threads (0 = all cores)");

  auto* inspect = app.add_subcommand("inspect", "Derived quantities of every arm");
  inspect->add_option("--format", o.format, "table or json")
      ->check(CLI::IsMember({"table", "json"}));
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo regret trajectory as CSV");
  auto* bound = app.add_subcommand("bound", "Evaluate the UCB regret upper bound");
  auto* lower = app.add_subcommand("lower-bound", "KL-rate lower-bound coefficient");
  auto* deviation = app.add_subcommand("deviation-check", "Occupation tail and visit-count checks");
  deviation->add_option("--arm", o.arm, "Arm to check (1-based)");
  deviation->add_option("--subset", o.subset, "State subset A (0-based states)")->delimiter(',');
  deviation->add_option("--gamma", o.gammas, "Deviation levels")->delimiter(',');
  deviation->add_option("--steps", o.steps, "Chain length n for the tail check");
  deviation->add_option("--deviation-runs", o.deviation_runs, "Chains per check");
  deviation->add_option("--stopping", o.stopping, "first-return or fixed")
      ->check(CLI::IsMember({"first-return", "fixed"}));

  std::vector<std::string> argv_store{"markov_ucb"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const ExperimentConfig cfg = resolve(o);
    std::ostringstream buffer;
    if (inspect->parsed()) {
      cmd_inspect(cfg, buffer, o.format == "json");
    } else if (simulate->parsed()) {
      cmd_simulate(cfg, buffer, o.threads);
    } else if (bound->parsed()) {
      cmd_bound(cfg, buffer);
    } else if (lower->parsed()) {
      cmd_lower_bound(cfg, buffer);
    } else if (deviation->parsed()) {
      cmd_deviation_check(cfg, buffer);
    }
    if (cfg.out.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!(file << buffer.str()) || !file.flush()) {
        throw ConfigError("cannot write output file '" + cfg.out + "'");
      }
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace markov_ucb::cli
