#include "asrl/mrl.hpp"

namespace asrl {

void TdAbstractValues::update(const CellIndex& t, const CellIndex& t_next, double reward_sum,
                              double gamma) {
  const double next = value(t_next);
  double& v = values_[t];
  v += alpha_ * (reward_sum + gamma * next - v);
  ++updates_;
}

MrlShaper::MrlShaper(Partitioner z, double alpha_abs, double gamma, double omega)
    : z_(std::move(z)), values_(alpha_abs), gamma_(gamma), omega_(omega) {}

void MrlShaper::begin_episode(const GroundState& s) {
  current_ = z_.cell(s);
  segment_reward_ = 0.0;
}

ShapedReward MrlShaper::shape(const Transition& t) {
  ShapedReward r;
  r.ground_reward = t.reward;
  segment_reward_ += t.reward;
  CellIndex next = z_.cell(t.next_state);
  if (next != current_) {
    r.shaping_reward = mrl_shaping(values_, current_, next, gamma_, omega_);
    mrl_update(values_, current_, next, segment_reward_, gamma_);
    current_ = std::move(next);
    segment_reward_ = 0.0;
  }
  r.total = r.ground_reward + r.shaping_reward;
  return r;
}

}  // namespace asrl
