#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "asrl/amdp.hpp"
#include "asrl/shaping.hpp"

namespace asrl {

enum class Variant { Vanilla, Mrl, Shaped };

std::string to_string(Variant v);
Variant parse_variant(const std::string& text);

/// Everything needed to reproduce one experiment. Defaults per environment
/// come from defaults_for().
struct ExperimentConfig {
  std::string env = "mountain_car";
  Variant variant = Variant::Shaped;

  // Ground learner.
  double alpha = 1e-3;
  double gamma = 0.995;
  double tau = 1e-2;
  double epsilon_start = 0.1;
  double epsilon_end = 0.01;
  int episodes = 500;
  int batch_size = 64;
  int replay_capacity = 100000;
  int warmup = 1000;
  std::vector<int> hidden{64, 64};

  // Abstraction and shaping.
  double omega = 1.0;
  std::vector<int> abstraction_bins{50, 50};
  std::vector<int> exploration_bins{5, 5};
  std::vector<double> lower;  // partition bounds; empty = environment bounds
  std::vector<double> upper;
  int exploration_episodes = 500;
  double exploration_epsilon = 0.1;
  RewardMode reward_mode = RewardMode::StepPenalty;
  ShapingMode shaping_mode = ShapingMode::PerTransition;
  double vi_tolerance = kDefaultTolerance;
  int vi_max_sweeps = kDefaultMaxSweeps;
  double mrl_alpha = 1e-3;

  std::vector<std::int64_t> seeds{0, 1, 2, 3, 4};
  std::string output = "out";

  /// Throws ConfigError on the first invalid value.
  void validate() const;
};

/// Hyper-parameter defaults for "mountain_car", "puddle_world" or "catcher".
ExperimentConfig defaults_for(const std::string& env);

/// Line-oriented `key = value` text. Keys before any `[section]` header apply
/// to every environment; keys under `[<env>]` apply only to that environment
/// and win over global keys. `#` starts a comment. The environment is
/// `env_override` if given, else the global `env` key, else mountain_car.
ExperimentConfig parse_config(std::istream& in,
                              const std::optional<std::string>& env_override = std::nullopt);
ExperimentConfig load_config(const std::string& path,
                             const std::optional<std::string>& env_override = std::nullopt);

/// Canonical text form: global env/variant/seeds/output, then one section
/// with every hyper-parameter. parse_config(serialize(c)) reproduces c.
std::string serialize(const ExperimentConfig& cfg);

/// FNV-1a of serialize(cfg), as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace asrl
