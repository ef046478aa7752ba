#pragma once

#include <unordered_map>

#include "asrl/partition.hpp"
#include "asrl/shaping.hpp"

namespace asrl {

/// Online TD(0) estimate of abstract cell values; unvisited cells read as 0.
class TdAbstractValues {
public:
  explicit TdAbstractValues(double alpha_abs) : alpha_(alpha_abs) {}

  double value(const CellIndex& c) const {
    auto it = values_.find(c);
    return it == values_.end() ? 0.0 : it->second;
  }
  double alpha() const { return alpha_; }
  std::size_t size() const { return values_.size(); }
  std::int64_t update_count() const { return updates_; }

  /// V(t) += alpha * (reward_sum + gamma V(t') - V(t)).
  void update(const CellIndex& t, const CellIndex& t_next, double reward_sum, double gamma);

private:
  double alpha_;
  std::unordered_map<CellIndex, double, CellIndexHash> values_;
  std::int64_t updates_ = 0;
};

inline void mrl_update(TdAbstractValues& tv, const CellIndex& t, const CellIndex& t_next,
                       double reward_sum, double gamma) {
  tv.update(t, t_next, reward_sum, gamma);
}

/// omega * (gamma V(t') - V(t)); 0 when t == t'.
inline double mrl_shaping(const TdAbstractValues& tv, const CellIndex& t, const CellIndex& t_next,
                          double gamma, double omega) {
  return shaping_reward(omega * tv.value(t), omega * tv.value(t_next), t == t_next, gamma);
}

/// Per-step driver: shapes each transition with the current estimates, then
/// applies the TD update on every abstract cell change.
class MrlShaper {
public:
  MrlShaper(Partitioner z, double alpha_abs, double gamma, double omega);

  void begin_episode(const GroundState& s);
  ShapedReward shape(const Transition& t);

  const TdAbstractValues& values() const { return values_; }

private:
  Partitioner z_;
  TdAbstractValues values_;
  double gamma_;
  double omega_;
  CellIndex current_;
  double segment_reward_ = 0.0;
};

}  // namespace asrl
