#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "asrl/exploration.hpp"
#include "asrl/partition.hpp"

namespace asrl {

enum class RewardMode {
  StepPenalty,         // -1 per abstract transition
  SummedGroundReward,  // mean observed cumulative ground reward of the transition
};

std::string to_string(RewardMode mode);
RewardMode parse_reward_mode(const std::string& text);

/// Deterministic abstract MDP. Each observed successor t' of t is one abstract
/// action that reaches t' with probability one. Goal cells are absorbing.
class Amdp {
public:
  void add_cell(const CellIndex& c) { cells_.insert(c); }
  /// Adds or overwrites the action t -> t'.
  void add_action(const CellIndex& from, const CellIndex& to, double reward);
  void add_goal(const CellIndex& g);

  const std::set<CellIndex>& cells() const { return cells_; }
  const std::set<CellIndex>& goals() const { return goals_; }
  bool contains(const CellIndex& c) const { return cells_.count(c) != 0; }
  bool is_goal(const CellIndex& c) const { return goals_.count(c) != 0; }

  /// Successor -> reward for every abstract action available in `c`.
  const std::map<CellIndex, double>& actions(const CellIndex& c) const;
  std::size_t action_count() const;

private:
  std::set<CellIndex> cells_;
  std::set<CellIndex> goals_;
  std::map<CellIndex, std::map<CellIndex, double>> actions_;
};

/// Abstract reward for an observed edge under the given mode.
double abstract_reward(const EdgeStats& stats, RewardMode mode);

Amdp build_amdp(const ObservedGraph& graph, RewardMode mode, const std::set<CellIndex>& goals);

class ValueFunction {
public:
  ValueFunction() = default;
  ValueFunction(std::map<CellIndex, double> values, double gamma, double default_value = 0.0)
      : values_(std::move(values)), gamma_(gamma), default_value_(default_value) {}

  const std::map<CellIndex, double>& values() const { return values_; }
  double gamma() const { return gamma_; }
  double default_value() const { return default_value_; }
  bool contains(const CellIndex& c) const { return values_.count(c) != 0; }
  /// Throws UsageError for unknown cells; use lookup_value() for the
  /// missing-cell protocol.
  double at(const CellIndex& c) const;

  int sweeps = 0;
  double residual = 0.0;

  /// One line per cell: `indices : value`, full precision. Lines starting with
  /// '#' carry gamma and are otherwise ignored.
  void write(std::ostream& out) const;
  static ValueFunction read(std::istream& in);
  void save(const std::string& path) const;
  static ValueFunction load(const std::string& path);

  bool operator==(const ValueFunction& o) const {
    return values_ == o.values_ && gamma_ == o.gamma_ && default_value_ == o.default_value_;
  }

private:
  std::map<CellIndex, double> values_;
  double gamma_ = 1.0;
  double default_value_ = 0.0;
};

class NonConvergence : public std::runtime_error {
public:
  NonConvergence(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr int kDefaultMaxSweeps = 100000;

/// Synchronous Bellman sweeps from V = 0: V(t) <- max_t' [R(t,t') + gamma V(t')],
/// goals pinned at 0, dead ends (no actions, not a goal) pinned at
/// -1 / (1 - gamma). Stops once the largest change in a sweep is below
/// `tolerance`.
ValueFunction value_iteration(const Amdp& amdp, double gamma, double tolerance = kDefaultTolerance,
                              int max_sweeps = kDefaultMaxSweeps);

struct LookupResult {
  double value;
  bool missing;
};

/// V(cell) if known, 0 for goals, otherwise 0 flagged as missing.
LookupResult lookup_value(const ValueFunction& vf, const CellIndex& cell, const Amdp& amdp);

/// Adds `new_cells` to the AMDP and solves it again from scratch.
ValueFunction resolve(Amdp& amdp, const std::set<CellIndex>& new_cells, double gamma,
                      double tolerance = kDefaultTolerance, int max_sweeps = kDefaultMaxSweeps);

}  // namespace asrl
