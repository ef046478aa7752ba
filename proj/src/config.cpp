#include "asrl/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "asrl/environments.hpp"

namespace asrl {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Vanilla: return "vanilla";
    case Variant::Mrl: return "mrl";
    case Variant::Shaped: return "shaped";
  }
  return "?";
}

Variant parse_variant(const std::string& text) {
  if (text == "vanilla") return Variant::Vanilla;
  if (text == "mrl") return Variant::Mrl;
  if (text == "shaped") return Variant::Shaped;
  throw ConfigError("unknown variant '" + text + "'");
}

ExperimentConfig defaults_for(const std::string& env) {
  ExperimentConfig c;
  c.env = env;
  if (env == "mountain_car") {
    c.alpha = 1e-3;
    c.gamma = 0.995;
    c.epsilon_start = 0.1;
    c.epsilon_end = 0.01;
    c.abstraction_bins = {50, 50};
    c.exploration_bins = {5, 5};
    c.episodes = 500;
    c.exploration_episodes = 500;
    c.batch_size = 64;
    c.reward_mode = RewardMode::StepPenalty;
  } else if (env == "puddle_world") {
    c.alpha = 5e-4;
    c.gamma = 0.99;
    c.epsilon_start = 0.2;
    c.epsilon_end = 0.05;
    c.abstraction_bins = {50, 50};
    c.exploration_bins = {5, 5};
    c.episodes = 1000;
    c.exploration_episodes = 1000;
    c.batch_size = 64;
    c.reward_mode = RewardMode::StepPenalty;
  } else if (env == "catcher") {
    c.alpha = 1e-5;
    c.gamma = 0.95;
    c.epsilon_start = 0.1;
    c.epsilon_end = 0.01;
    c.abstraction_bins = {20, 10, 20, 10};
    c.exploration_bins = {10, 5, 10, 5};
    c.episodes = 1000;
    c.exploration_episodes = 500;
    c.batch_size = 16;
    c.reward_mode = RewardMode::StepPenalty;
  } else {
    throw ConfigError("unknown environment '" + env + "'");
  }
  c.tau = 1e-2;
  c.omega = 1.0;
  c.mrl_alpha = c.alpha;
  auto e = make_environment(env);
  const Eigen::VectorXd lo = e->lower_bounds();
  const Eigen::VectorXd hi = e->upper_bounds();
  c.lower.assign(lo.begin(), lo.end());
  c.upper.assign(hi.begin(), hi.end());
  return c;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
  const auto e = make_environment(env);
  const auto dims = static_cast<std::size_t>(e->state_dim());
  if (!(alpha > 0.0 && std::isfinite(alpha))) fail("alpha must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma must be in (0, 1]");
  if (!(tau >= 0.0 && tau <= 1.0)) fail("tau must be in [0, 1]");
  if (!std::isfinite(omega)) fail("omega must be finite");
  for (double eps : {epsilon_start, epsilon_end, exploration_epsilon}) {
    if (!(eps >= 0.0 && eps <= 1.0)) fail("epsilon values must be in [0, 1]");
  }
  if (episodes < 1) fail("episodes must be >= 1");
  if (exploration_episodes < 1) fail("exploration_episodes must be >= 1");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (replay_capacity < batch_size) fail("replay_capacity must be >= batch_size");
  if (warmup < 0) fail("warmup must be >= 0");
  if (hidden.empty()) fail("hidden must list at least one layer");
  for (int h : hidden) {
    if (h < 1) fail("hidden widths must be >= 1");
  }
  if (abstraction_bins.size() != dims) fail("abstraction_bins must have one entry per dimension");
  if (exploration_bins.size() != dims) fail("exploration_bins must have one entry per dimension");
  for (int b : abstraction_bins) {
    if (b < 1) fail("abstraction_bins entries must be >= 1");
  }
  for (int b : exploration_bins) {
    if (b < 1) fail("exploration_bins entries must be >= 1");
  }
  if (lower.size() != dims || upper.size() != dims) fail("lower/upper must have one entry per dimension");
  for (std::size_t d = 0; d < dims; ++d) {
    if (!(lower[d] < upper[d])) fail("lower must be below upper in every dimension");
  }
  if (!(vi_tolerance > 0.0)) fail("vi_tolerance must be positive");
  if (vi_max_sweeps < 1) fail("vi_max_sweeps must be >= 1");
  if (!(mrl_alpha >= 0.0 && mrl_alpha <= 1.0)) fail("mrl_alpha must be in [0, 1]");
  if (seeds.empty()) fail("seeds must not be empty");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream ss(text);
  T v{};
  if (!(ss >> v) || !(ss >> std::ws).eof()) {
    throw ConfigError("config: bad value for '" + key + "': '" + text + "'");
  }
  return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, std::string text) {
  for (char& ch : text) {
    if (ch == '(' || ch == ')' || ch == '[' || ch == ']') ch = ' ';
  }
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_number<T>(key, item));
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << xs[i];
  return out.str();
}

std::string num(double v) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return out.str();
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"variant", [](auto& c, const auto& v) { c.variant = parse_variant(v); }},
      {"alpha", [](auto& c, const auto& v) { c.alpha = parse_number<double>("alpha", v); }},
      {"gamma", [](auto& c, const auto& v) { c.gamma = parse_number<double>("gamma", v); }},
      {"tau", [](auto& c, const auto& v) { c.tau = parse_number<double>("tau", v); }},
      {"omega", [](auto& c, const auto& v) { c.omega = parse_number<double>("omega", v); }},
      {"epsilon_start",
       [](auto& c, const auto& v) { c.epsilon_start = parse_number<double>("epsilon_start", v); }},
      {"epsilon_end",
       [](auto& c, const auto& v) { c.epsilon_end = parse_number<double>("epsilon_end", v); }},
      {"episodes", [](auto& c, const auto& v) { c.episodes = parse_number<int>("episodes", v); }},
      {"batch_size",
       [](auto& c, const auto& v) { c.batch_size = parse_number<int>("batch_size", v); }},
      {"replay_capacity",
       [](auto& c, const auto& v) { c.replay_capacity = parse_number<int>("replay_capacity", v); }},
      {"warmup", [](auto& c, const auto& v) { c.warmup = parse_number<int>("warmup", v); }},
      {"hidden", [](auto& c, const auto& v) { c.hidden = parse_list<int>("hidden", v); }},
      {"abstraction_bins",
       [](auto& c, const auto& v) { c.abstraction_bins = parse_list<int>("abstraction_bins", v); }},
      {"exploration_bins",
       [](auto& c, const auto& v) { c.exploration_bins = parse_list<int>("exploration_bins", v); }},
      {"lower", [](auto& c, const auto& v) { c.lower = parse_list<double>("lower", v); }},
      {"upper", [](auto& c, const auto& v) { c.upper = parse_list<double>("upper", v); }},
      {"exploration_episodes",
       [](auto& c, const auto& v) {
         c.exploration_episodes = parse_number<int>("exploration_episodes", v);
       }},
      {"exploration_epsilon",
       [](auto& c, const auto& v) {
         c.exploration_epsilon = parse_number<double>("exploration_epsilon", v);
       }},
      {"reward_mode", [](auto& c, const auto& v) { c.reward_mode = parse_reward_mode(v); }},
      {"shaping_mode", [](auto& c, const auto& v) { c.shaping_mode = parse_shaping_mode(v); }},
      {"vi_tolerance",
       [](auto& c, const auto& v) { c.vi_tolerance = parse_number<double>("vi_tolerance", v); }},
      {"vi_max_sweeps",
       [](auto& c, const auto& v) { c.vi_max_sweeps = parse_number<int>("vi_max_sweeps", v); }},
      {"mrl_alpha",
       [](auto& c, const auto& v) { c.mrl_alpha = parse_number<double>("mrl_alpha", v); }},
      {"seeds",
       [](auto& c, const auto& v) { c.seeds = parse_list<std::int64_t>("seeds", v); }},
      {"output", [](auto& c, const auto& v) { c.output = v; }},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::optional<std::string>& env_override) {
  using Entries = std::vector<std::pair<std::string, std::string>>;
  Entries global;
  std::map<std::string, Entries> sections;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      make_environment(section);  // rejects unknown section names
      sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key != "env" && !setters().count(key)) {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    (section.empty() ? global : sections[section]).emplace_back(std::move(key), std::move(value));
  }

  std::string env = "mountain_car";
  for (const auto& [k, v] : global) {
    if (k == "env") env = v;
  }
  if (env_override) env = *env_override;

  ExperimentConfig cfg = defaults_for(env);
  bool mrl_alpha_set = false;
  auto apply = [&](const Entries& entries) {
    for (const auto& [k, v] : entries) {
      if (k == "env") continue;
      setters().at(k)(cfg, v);
      if (k == "mrl_alpha") mrl_alpha_set = true;
    }
  };
  apply(global);
  if (auto it = sections.find(env); it != sections.end()) apply(it->second);
  if (!mrl_alpha_set) cfg.mrl_alpha = cfg.alpha;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::optional<std::string>& env_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  return parse_config(in, env_override);
}

std::string serialize(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "env = " << c.env << '\n'
      << "variant = " << to_string(c.variant) << '\n'
      << "seeds = " << join(c.seeds) << '\n'
      << "output = " << c.output << '\n'
      << '\n'
      << '[' << c.env << "]\n"
      << "alpha = " << num(c.alpha) << '\n'
      << "gamma = " << num(c.gamma) << '\n'
      << "tau = " << num(c.tau) << '\n'
      << "omega = " << num(c.omega) << '\n'
      << "epsilon_start = " << num(c.epsilon_start) << '\n'
      << "epsilon_end = " << num(c.epsilon_end) << '\n'
      << "episodes = " << c.episodes << '\n'
      << "batch_size = " << c.batch_size << '\n'
      << "replay_capacity = " << c.replay_capacity << '\n'
      << "warmup = " << c.warmup << '\n'
      << "hidden = " << join(c.hidden) << '\n'
      << "abstraction_bins = " << join(c.abstraction_bins) << '\n'
      << "exploration_bins = " << join(c.exploration_bins) << '\n'
      << "lower = " << join(c.lower) << '\n'
      << "upper = " << join(c.upper) << '\n'
      << "exploration_episodes = " << c.exploration_episodes << '\n'
      << "exploration_epsilon = " << num(c.exploration_epsilon) << '\n'
      << "reward_mode = " << to_string(c.reward_mode) << '\n'
      << "shaping_mode = " << to_string(c.shaping_mode) << '\n'
      << "vi_tolerance = " << num(c.vi_tolerance) << '\n'
      << "vi_max_sweeps = " << c.vi_max_sweeps << '\n'
      << "mrl_alpha = " << num(c.mrl_alpha) << '\n';
  return out.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : serialize(cfg)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

}  // namespace asrl
