#include "asrl/environment.hpp"

#include <cmath>

namespace asrl {

GroundState Environment::reset(Rng& rng) {
  state_ = sample_start(rng);
  steps_ = 0;
  done_ = false;
  return state_;
}

Transition Environment::step(int action, Rng& rng) {
  if (done_) {
    throw UsageError(name() + ": step() called on a terminal or unstarted episode");
  }
  if (action < 0 || action >= action_count()) {
    throw UsageError(name() + ": action " + std::to_string(action) + " out of range");
  }
  Outcome out = advance(state_, action, rng);
  ++steps_;
  Transition t;
  t.state = state_;
  t.action = action;
  t.reward = out.reward;
  t.next_state = out.next;
  t.terminal = out.goal_terminal || steps_ >= step_cap();
  state_ = std::move(out.next);
  done_ = t.terminal;
  return t;
}

EpisodeLog run_episode(Environment& env, const ActionSelector& policy,
                       const std::vector<TransitionObserver>& observers,
                       Rng& rng) {
  const auto start = std::chrono::steady_clock::now();
  EpisodeLog log;
  GroundState s = env.reset(rng);
  while (true) {
    const int a = policy(s, rng);
    Transition t = env.step(a, rng);
    for (const auto& obs : observers) obs(t);
    log.total_reward += t.reward;
    s = t.next_state;
    const bool terminal = t.terminal;
    log.transitions.push_back(std::move(t));
    if (terminal) break;
  }
  log.steps = log.transitions.size();
  log.wall_time = std::chrono::steady_clock::now() - start;
  return log;
}

GroundState normalize_state(const GroundState& s, const GroundState& lower,
                            const GroundState& upper) {
  GroundState scaled = 2.0 * (s - lower).cwiseQuotient(upper - lower).array() - 1.0;
  return scaled.cwiseMax(-1.0).cwiseMin(1.0);
}

}  // namespace asrl
