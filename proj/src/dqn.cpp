#include "asrl/dqn.hpp"

#include <algorithm>

namespace asrl {

double EpsilonSchedule::value(int episode) const {
  const double frac =
      total_episodes > 0 ? std::min(1.0, static_cast<double>(episode) / total_episodes) : 1.0;
  return start + (end - start) * frac;
}

DqnAgent::DqnAgent(int state_dim, int action_count, GroundState lower, GroundState upper,
                   const DqnConfig& cfg, Rng& init_rng)
    : cfg_(cfg),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      online_(state_dim, cfg.hidden, action_count),
      replay_(cfg.replay_capacity, state_dim) {
  if (cfg.batch_size == 0) throw ConfigError("dqn: batch size must be positive");
  online_.initialize(init_rng);
  target_ = online_;
  opt_ = Adam<Scalar>(online_, static_cast<Scalar>(cfg.alpha));
}

DqnAgent::Net::Vector DqnAgent::encode(const GroundState& s) const {
  return normalize_state(s, lower_, upper_).cast<Scalar>();
}

DqnAgent::Net::Vector DqnAgent::q_values(const GroundState& s) const {
  return online_.forward(encode(s));
}

int DqnAgent::act(const GroundState& s, double epsilon, Rng& rng) const {
  return select_action(online_, encode(s), epsilon, rng);
}

void DqnAgent::observe(const Transition& t, double learner_reward, Rng& rng) {
  replay_.push(encode(t.state), t.action, static_cast<Scalar>(learner_reward),
               encode(t.next_state), t.terminal);
  if (replay_.size() < std::max(cfg_.warmup, cfg_.batch_size)) return;
  const auto batch = replay_.sample(cfg_.batch_size, rng);
  last_loss_ = train_batch(online_, target_, opt_, batch, static_cast<Scalar>(cfg_.gamma));
  soft_update(target_, online_, static_cast<Scalar>(cfg_.tau));
  ++updates_;
}

}  // namespace asrl
