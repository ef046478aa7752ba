#include "asrl/shaping.hpp"

namespace asrl {

std::string to_string(ShapingMode mode) {
  return mode == ShapingMode::PerTransition ? "per_transition" : "per_step";
}

ShapingMode parse_shaping_mode(const std::string& text) {
  if (text == "per_transition") return ShapingMode::PerTransition;
  if (text == "per_step") return ShapingMode::PerStep;
  throw ConfigError("unknown shaping mode '" + text + "'");
}

LookupResult potential(const ValueFunction& vf, const Partitioner& p, double omega,
                       const GroundState& s) {
  auto it = vf.values().find(p.cell(s));
  if (it == vf.values().end()) return {0.0, true};
  return {omega * it->second, false};
}

ShapedReward shaped_transition(const Transition& base, const ValueFunction& vf,
                               const Partitioner& p, const ShapingConfig& cfg) {
  const bool same = p.cell(base.state) == p.cell(base.next_state);
  ShapedReward r;
  r.ground_reward = base.reward;
  if (!same || cfg.mode == ShapingMode::PerStep) {
    const double prev = potential(vf, p, cfg.omega, base.state).value;
    const double next = potential(vf, p, cfg.omega, base.next_state).value;
    // Per-step mode shapes within-cell steps too.
    r.shaping_reward = shaping_reward(prev, next, false, cfg.gamma);
  }
  r.total = r.ground_reward + r.shaping_reward;
  return r;
}

AbstractShaper::AbstractShaper(Partitioner z, Amdp amdp, ValueFunction vf, ShapingConfig cfg,
                               RewardMode reward_mode, double tolerance, int max_sweeps)
    : z_(std::move(z)),
      amdp_(std::move(amdp)),
      vf_(std::move(vf)),
      cfg_(cfg),
      reward_mode_(reward_mode),
      tolerance_(tolerance),
      max_sweeps_(max_sweeps) {}

double AbstractShaper::phi(const CellIndex& c) {
  const auto r = lookup_value(vf_, c, amdp_);
  if (r.missing) {
    ++missing_lookups_;
    pending_.insert(c);
  }
  return cfg_.omega * r.value;
}

ShapedReward AbstractShaper::shape(const Transition& t) {
  const CellIndex from = z_.cell(t.state);
  const CellIndex to = z_.cell(t.next_state);
  const bool same = from == to;
  ShapedReward r;
  r.ground_reward = t.reward;
  segment_reward_ += t.reward;
  if (!same) {
    seen_.add(from, to, segment_reward_);
    segment_reward_ = 0.0;
  }
  if (!same || cfg_.mode == ShapingMode::PerStep) {
    r.shaping_reward = shaping_reward(phi(from), phi(to), false, cfg_.gamma);
  }
  r.total = r.ground_reward + r.shaping_reward;
  return r;
}

bool AbstractShaper::end_episode() {
  segment_reward_ = 0.0;
  if (pending_.empty()) return false;
  for (const auto& [edge, st] : seen_.edges()) {
    if (pending_.count(edge.first) || pending_.count(edge.second)) {
      if (!amdp_.actions(edge.first).count(edge.second)) {
        amdp_.add_action(edge.first, edge.second, abstract_reward(st, reward_mode_));
      }
    }
  }
  vf_ = resolve(amdp_, pending_, cfg_.gamma, tolerance_, max_sweeps_);
  pending_.clear();
  ++resolves_;
  return true;
}

}  // namespace asrl
