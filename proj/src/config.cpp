#include "pmelab/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pmelab {
namespace {

const std::set<std::string> kTopLevel{"experiment", "n_list", "s",          "r_list",  "T",
                                      "delta",      "seed",   "output_dir", "threads", "grid",
                                      "solver",     "sampling", "verdict"};
const std::map<std::string, std::set<std::string>> kSections{
    {"grid", {"multiplier", "max_points"}},
    {"solver", {"dt_safety", "dealias"}},
    {"sampling", {"time_samples", "early_samples"}},
    {"verdict", {"gap_fraction", "initial_gap_threshold", "random_pairs"}},
};

template <typename T>
void read(const YAML::Node& node, const std::string& key, T& out) {
  if (!node) return;
  try {
    out = node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config key '" + key + "' has an invalid value");
  }
}

void check_keys(const YAML::Node& root) {
  if (!root.IsMap()) throw ConfigError("config must be a key-value mapping");
  for (const auto& entry : root) {
    const auto key = entry.first.as<std::string>();
    if (!kTopLevel.count(key)) throw ConfigError("unknown config key '" + key + "'");
    const auto section = kSections.find(key);
    if (section == kSections.end()) continue;
    if (!entry.second.IsMap()) throw ConfigError("config key '" + key + "' must be a mapping");
    for (const auto& sub : entry.second) {
      const auto name = sub.first.as<std::string>();
      if (!section->second.count(name)) {
        throw ConfigError("unknown config key '" + key + "." + name + "'");
      }
    }
  }
}

void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' must have the form key=value");
  }
  const std::string path = assignment.substr(0, eq);
  YAML::Node value;
  try {
    value = YAML::Load(assignment.substr(eq + 1));
  } catch (const YAML::Exception&) {
    throw ConfigError("override '" + assignment + "' has an unparsable value");
  }

  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
  if (parts.empty()) throw ConfigError("override '" + assignment + "' has an empty key");
  // Nodes have reference semantics: reset() rebinds `cur`, assignment writes through it.
  YAML::Node cur = root;
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!cur[parts[i]] || !cur[parts[i]].IsMap()) cur[parts[i]] = YAML::Node(YAML::NodeType::Map);
    cur.reset(cur[parts[i]]);
  }
  cur[parts.back()] = value;
}

}  // namespace

ExperimentConfig parse_config_text(std::string_view yaml, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  if (!root.IsDefined() || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  for (const auto& o : overrides) apply_override(root, o);
  check_keys(root);

  ExperimentConfig cfg;
  if (root["experiment"]) {
    std::string kind;
    read(root["experiment"], "experiment", kind);
    cfg.kind = parse_experiment_kind(kind);
  }
  read(root["n_list"], "n_list", cfg.n_list);
  read(root["s"], "s", cfg.s);
  read(root["r_list"], "r_list", cfg.r_list);
  read(root["T"], "T", cfg.T);
  read(root["delta"], "delta", cfg.delta);
  read(root["seed"], "seed", cfg.seed);
  read(root["output_dir"], "output_dir", cfg.output_dir);
  read(root["threads"], "threads", cfg.threads);
  if (const auto g = root["grid"]) {
    read(g["multiplier"], "grid.multiplier", cfg.grid_multiplier);
    read(g["max_points"], "grid.max_points", cfg.max_grid_points);
  }
  if (const auto s = root["solver"]) {
    read(s["dt_safety"], "solver.dt_safety", cfg.dt_safety);
    read(s["dealias"], "solver.dealias", cfg.dealias);
  }
  if (const auto s = root["sampling"]) {
    read(s["time_samples"], "sampling.time_samples", cfg.time_samples);
    read(s["early_samples"], "sampling.early_samples", cfg.early_samples);
  }
  if (const auto v = root["verdict"]) {
    read(v["gap_fraction"], "verdict.gap_fraction", cfg.gap_fraction);
    read(v["initial_gap_threshold"], "verdict.initial_gap_threshold", cfg.initial_gap_threshold);
    read(v["random_pairs"], "verdict.random_pairs", cfg.random_pairs);
  }
  if (cfg.r_list.empty()) cfg.r_list = cfg.effective_r_list();
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path,
                              const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), overrides);
}

}  // namespace pmelab
