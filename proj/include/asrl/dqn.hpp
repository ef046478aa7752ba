#pragma once

#include <cstdint>
#include <vector>

#include "asrl/environment.hpp"
#include "asrl/qnetwork.hpp"
#include "asrl/replay_buffer.hpp"

namespace asrl {

/// Linear anneal from `start` to `end` over `total_episodes`, then flat.
struct EpsilonSchedule {
  double start = 0.1;
  double end = 0.01;
  int total_episodes = 1;

  double value(int episode) const;
};

struct DqnConfig {
  std::vector<int> hidden{64, 64};
  double alpha = 1e-3;
  double gamma = 0.99;
  double tau = 1e-2;
  std::size_t batch_size = 64;
  std::size_t replay_capacity = 100000;
  std::size_t warmup = 1000;  // transitions stored before training starts
};

/// DQN learner: online network, softly tracking target network, uniform
/// replay, one Adam step per observed transition after warmup. Inputs are
/// normalized to [-1, 1] using the given state bounds.
class DqnAgent {
public:
  using Scalar = float;
  using Net = QNetwork<Scalar>;

  DqnAgent(int state_dim, int action_count, GroundState lower, GroundState upper,
           const DqnConfig& cfg, Rng& init_rng);

  int act(const GroundState& s, double epsilon, Rng& rng) const;
  Net::Vector q_values(const GroundState& s) const;

  /// Stores the transition with the reward the learner should see and trains.
  void observe(const Transition& t, double learner_reward, Rng& rng);

  std::int64_t updates() const { return updates_; }
  double last_loss() const { return last_loss_; }
  const Net& online() const { return online_; }
  const Net& target() const { return target_; }
  const ReplayBuffer<Scalar>& replay() const { return replay_; }

private:
  Net::Vector encode(const GroundState& s) const;

  DqnConfig cfg_;
  GroundState lower_;
  GroundState upper_;
  Net online_;
  Net target_;
  Adam<Scalar> opt_;
  ReplayBuffer<Scalar> replay_;
  std::int64_t updates_ = 0;
  double last_loss_ = 0.0;
};

}  // namespace asrl
