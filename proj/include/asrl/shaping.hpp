#pragma once

#include <set>
#include <string>

#include "asrl/amdp.hpp"
#include "asrl/environment.hpp"
#include "asrl/exploration.hpp"
#include "asrl/partition.hpp"

namespace asrl {

enum class ShapingMode {
  PerTransition,  // F only on steps that change abstract cell
  PerStep,        // F on every ground step
};

std::string to_string(ShapingMode mode);
ShapingMode parse_shaping_mode(const std::string& text);

struct ShapingConfig {
  double omega = 1.0;
  double gamma = 0.99;
  ShapingMode mode = ShapingMode::PerTransition;
};

struct ShapedReward {
  double ground_reward = 0.0;
  double shaping_reward = 0.0;
  double total = 0.0;
};

/// omega * V(Z(s)); cells without a value give 0 and are flagged missing.
LookupResult potential(const ValueFunction& vf, const Partitioner& p, double omega,
                       const GroundState& s);

/// gamma * phi_next - phi_prev, or exactly 0 when the step stays in one cell.
inline double shaping_reward(double phi_prev, double phi_next, bool same_cell, double gamma) {
  return same_cell ? 0.0 : gamma * phi_next - phi_prev;
}

ShapedReward shaped_transition(const Transition& base, const ValueFunction& vf,
                               const Partitioner& p, const ShapingConfig& cfg);

/// Shaping driven by a solved AMDP during training. Cells with no value read
/// as potential 0 and are queued; end_episode() folds them (and any edges seen
/// touching them) into the AMDP and re-solves.
class AbstractShaper {
public:
  AbstractShaper(Partitioner z, Amdp amdp, ValueFunction vf, ShapingConfig cfg,
                 RewardMode reward_mode, double tolerance = kDefaultTolerance,
                 int max_sweeps = kDefaultMaxSweeps);

  ShapedReward shape(const Transition& t);

  /// Call after every episode. Returns true when a re-solve happened.
  bool end_episode();

  const ValueFunction& values() const { return vf_; }
  const Amdp& amdp() const { return amdp_; }
  const std::set<CellIndex>& pending() const { return pending_; }
  int resolves() const { return resolves_; }
  long missing_lookups() const { return missing_lookups_; }

private:
  double phi(const CellIndex& c);

  Partitioner z_;
  Amdp amdp_;
  ValueFunction vf_;
  ShapingConfig cfg_;
  RewardMode reward_mode_;
  double tolerance_;
  int max_sweeps_;
  ObservedGraph seen_;
  double segment_reward_ = 0.0;
  std::set<CellIndex> pending_;
  int resolves_ = 0;
  long missing_lookups_ = 0;
};

}  // namespace asrl
