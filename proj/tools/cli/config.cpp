#include "cli/config.hpp"

#include <fstream>
#include <set>

#include "markov_ucb/chain.hpp"
#include "markov_ucb/errors.hpp"

namespace markov_ucb::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown field '" + where + key + "'");
  }
}

template <typename T>
T field(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + where + key + "' is missing or has the wrong type");
  }
}

Vector to_vector(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ConfigError("field '" + where + "' must be an array");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ConfigError("field '" + where + "' must hold numbers");
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return v;
}

Arm arm_from_json(const json& spec, std::size_t index) {
  const std::string where = "instance.arms[" + std::to_string(index) + "].";
  if (!spec.is_object()) throw ConfigError("field '" + where + "' must be an object");
  reject_unknown(spec, {"states", "transition", "rewards", "initial", "theta"}, where);
  if (spec.contains("theta")) {
    if (spec.size() != 1) throw ConfigError("field '" + where + "theta' excludes other fields");
    return theta_arm(field<double>(spec, "theta", where));
  }
  if (!spec.contains("transition") || !spec.contains("rewards")) {
    throw ConfigError("field '" + where + "transition' and 'rewards' are required");
  }
  const json& rows = spec.at("transition");
  if (!rows.is_array() || rows.empty()) {
    throw ConfigError("field '" + where + "transition' must be a non-empty array of rows");
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix p(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const Vector row = to_vector(rows[static_cast<std::size_t>(x)], where + "transition");
    if (row.size() != n) throw ConfigError("field '" + where + "transition' must be square");
    p.row(x) = row.transpose();
  }
  Vector rewards = to_vector(spec.at("rewards"), where + "rewards");
  if (spec.contains("states")) {
    const json& states = spec.at("states");
    if (!states.is_array() || static_cast<Eigen::Index>(states.size()) != n) {
      throw ConfigError("field '" + where + "states' must name every state");
    }
  }
  std::optional<Vector> initial;
  if (spec.contains("initial")) initial = to_vector(spec.at("initial"), where + "initial");
  return Arm::make(std::move(p), std::move(rewards), std::move(initial));
}

struct TwoStateRow {
  double p01, p10, r0, r1;
};

// Two-state arms ch.1 .. ch.5.
constexpr TwoStateRow kPresetS1[] = {
    {0.3, 0.5, 1.0, 1.2}, {0.2, 0.6, 1.0, 1.7}, {0.6, 0.3, 1.0, 1.5},
    {0.7, 0.2, 1.0, 1.8}, {0.4, 0.8, 1.0, 1.3},
};

constexpr double kPresetS2Thetas[] = {0.5, 1.0, 7.0, 5.0, 3.0};

}  // namespace

std::vector<double> preset_thetas(const std::string& name) {
  if (name == "S2") return {std::begin(kPresetS2Thetas), std::end(kPresetS2Thetas)};
  if (name == "S1") throw ConfigError("preset S1 is not a theta-family instance");
  throw ConfigError("unknown preset '" + name + "' (expected S1 or S2)");
}

BanditInstance preset_instance(const std::string& name) {
  std::vector<Arm> arms;
  if (name == "S1") {
    for (const auto& row : kPresetS1) {
      arms.push_back(two_state_arm(row.p01, row.p10, row.r0, row.r1));
    }
  } else {
    for (double t : preset_thetas(name)) arms.push_back(theta_arm(t));
  }
  return BanditInstance::make(std::move(arms));
}

BanditInstance build_instance(const InstanceSource& source) {
  switch (source.kind) {
    case InstanceSource::Kind::kPreset:
      return preset_instance(source.preset);
    case InstanceSource::Kind::kTheta: {
      std::vector<Arm> arms;
      for (double t : source.thetas) arms.push_back(theta_arm(t));
      return BanditInstance::make(std::move(arms));
    }
    case InstanceSource::Kind::kArms: {
      std::vector<Arm> arms;
      for (std::size_t i = 0; i < source.arms.size(); ++i) {
        arms.push_back(arm_from_json(source.arms[i], i));
      }
      return BanditInstance::make(std::move(arms));
    }
  }
  throw ConfigError("unknown instance source");
}

std::vector<double> theta_list(const InstanceSource& source) {
  switch (source.kind) {
    case InstanceSource::Kind::kPreset:
      return preset_thetas(source.preset);
    case InstanceSource::Kind::kTheta:
      return source.thetas;
    case InstanceSource::Kind::kArms: {
      std::vector<double> thetas;
      for (const auto& a : source.arms) {
        if (!a.is_object() || !a.contains("theta") || a.size() != 1) {
          throw ConfigError("lower bound needs every arm given by 'theta'");
        }
        thetas.push_back(a.at("theta").get<double>());
      }
      return thetas;
    }
  }
  throw ConfigError("unknown instance source");
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc, {"instance", "policy", "horizon", "runs", "seed", "checkpoints", "out",
                       "bound", "deviation"},
                 "");
  ExperimentConfig cfg;
  if (doc.contains("instance")) {
    const json& inst = doc.at("instance");
    if (!inst.is_object()) throw ConfigError("field 'instance' must be an object");
    reject_unknown(inst, {"preset", "theta", "arms"}, "instance.");
    if (inst.size() != 1) {
      throw ConfigError("field 'instance' needs exactly one of preset, theta, arms");
    }
    InstanceSource src;
    if (inst.contains("preset")) {
      src.kind = InstanceSource::Kind::kPreset;
      src.preset = field<std::string>(inst, "preset", "instance.");
    } else if (inst.contains("theta")) {
      src.kind = InstanceSource::Kind::kTheta;
      src.thetas = field<std::vector<double>>(inst, "theta", "instance.");
    } else {
      src.kind = InstanceSource::Kind::kArms;
      src.arms = inst.at("arms");
      if (!src.arms.is_array()) throw ConfigError("field 'instance.arms' must be an array");
    }
    cfg.instance = std::move(src);
  }
  if (doc.contains("policy")) {
    const json& pol = doc.at("policy");
    if (!pol.is_object()) throw ConfigError("field 'policy' must be an object");
    reject_unknown(pol, {"name", "L"}, "policy.");
    if (pol.contains("name")) cfg.policy = field<std::string>(pol, "name", "policy.");
    if (pol.contains("L")) cfg.exploration = field<double>(pol, "L", "policy.");
  }
  if (doc.contains("horizon")) cfg.horizon = field<std::int64_t>(doc, "horizon", "");
  if (doc.contains("runs")) {
    const auto runs = field<std::int64_t>(doc, "runs", "");
    if (runs < 1) throw ConfigError("field 'runs' must be >= 1");
    cfg.runs = static_cast<std::size_t>(runs);
  }
  if (doc.contains("seed")) cfg.seed = field<std::uint64_t>(doc, "seed", "");
  if (doc.contains("checkpoints")) {
    const json& cp = doc.at("checkpoints");
    if (cp.is_array()) {
      cfg.checkpoints = field<std::vector<std::int64_t>>(doc, "checkpoints", "");
    } else if (cp.is_object()) {
      reject_unknown(cp, {"ratio"}, "checkpoints.");
      cfg.checkpoint_ratio = field<double>(cp, "ratio", "checkpoints.");
    } else {
      throw ConfigError("field 'checkpoints' must be a list or {\"ratio\": r}");
    }
  }
  if (doc.contains("out")) cfg.out = field<std::string>(doc, "out", "");
  if (doc.contains("bound")) {
    const json& b = doc.at("bound");
    reject_unknown(b, {"n"}, "bound.");
    cfg.bound_horizons = field<std::vector<double>>(b, "n", "bound.");
  }
  if (doc.contains("deviation")) {
    const json& d = doc.at("deviation");
    reject_unknown(d, {"arm", "subset", "n", "gamma", "runs", "stopping"}, "deviation.");
    auto& dev = cfg.deviation;
    if (d.contains("arm")) dev.arm = field<std::size_t>(d, "arm", "deviation.");
    if (d.contains("subset")) dev.subset = field<std::vector<std::size_t>>(d, "subset", "deviation.");
    if (d.contains("n")) dev.steps = field<std::int64_t>(d, "n", "deviation.");
    if (d.contains("gamma")) dev.gammas = field<std::vector<double>>(d, "gamma", "deviation.");
    if (d.contains("runs")) dev.runs = field<std::size_t>(d, "runs", "deviation.");
    if (d.contains("stopping")) dev.stopping = field<std::string>(d, "stopping", "deviation.");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  json doc;
  if (cfg.instance) {
    const auto& src = *cfg.instance;
    switch (src.kind) {
      case InstanceSource::Kind::kPreset: doc["instance"] = {{"preset", src.preset}}; break;
      case InstanceSource::Kind::kTheta: doc["instance"] = {{"theta", src.thetas}}; break;
      case InstanceSource::Kind::kArms: doc["instance"] = {{"arms", src.arms}}; break;
    }
  }
  doc["policy"] = {{"name", cfg.policy}, {"L", cfg.exploration}};
  doc["horizon"] = cfg.horizon;
  doc["runs"] = cfg.runs;
  doc["seed"] = cfg.seed;
  if (cfg.checkpoints.empty()) {
    doc["checkpoints"] = {{"ratio", cfg.checkpoint_ratio}};
  } else {
    doc["checkpoints"] = cfg.checkpoints;
  }
  doc["bound"] = {{"n", cfg.bound_horizons}};
  const auto& d = cfg.deviation;
  doc["deviation"] = {{"arm", d.arm},     {"subset", d.subset}, {"n", d.steps},
                      {"gamma", d.gammas}, {"runs", d.runs},     {"stopping", d.stopping}};
  // `out` is deliberately absent: where a file is written does not change it.
  return doc;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(config).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void validate(const ExperimentConfig& config) {
  if (!config.instance) {
    throw ConfigError("no instance given (use --preset, --theta, or 'instance' in --config)");
  }
  if (config.policy != "ucb") throw ConfigError("field 'policy.name' must be \"ucb\"");
  if (!(config.exploration >= 0.0)) throw ConfigError("field 'policy.L' must be >= 0");
  if (config.runs < 1) throw ConfigError("field 'runs' must be >= 1");
  if (!(config.checkpoint_ratio > 1.0)) throw ConfigError("field 'checkpoints.ratio' must exceed 1");
  if (config.deviation.stopping != "first-return" && config.deviation.stopping != "fixed") {
    throw ConfigError("field 'deviation.stopping' must be \"first-return\" or \"fixed\"");
  }
}

}  // namespace markov_ucb::cli
