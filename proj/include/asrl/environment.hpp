#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace asrl {

/// Explicit random source. Every stochastic component takes one of these by
/// reference; there is no global generator.
using Rng = std::mt19937_64;

using GroundState = Eigen::VectorXd;

/// Contract violation by the caller (stepping a finished episode, wrong
/// dimensionality, out-of-range action).
class UsageError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Invalid configuration values.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Transition {
  GroundState state;
  int action = 0;
  double reward = 0.0;
  GroundState next_state;
  bool terminal = false;
};

struct EpisodeLog {
  std::vector<Transition> transitions;
  double total_reward = 0.0;
  std::size_t steps = 0;
  std::chrono::duration<double> wall_time{0.0};
};

/// Ground MDP interface. Actions are indices 0..action_count()-1 and the step
/// cap is enforced inside step(): the transition that hits the cap is terminal.
class Environment {
public:
  virtual ~Environment() = default;

  virtual std::string name() const = 0;
  virtual int state_dim() const = 0;
  virtual int action_count() const = 0;
  virtual int step_cap() const = 0;

  /// Declared per-dimension bounds; also the default partition bounds.
  virtual GroundState lower_bounds() const = 0;
  virtual GroundState upper_bounds() const = 0;

  /// Task goal used to select abstract goal cells.
  virtual bool is_goal(const GroundState& s) const = 0;

  GroundState reset(Rng& rng);
  Transition step(int action, Rng& rng);

  const GroundState& state() const { return state_; }
  int steps_taken() const { return steps_; }
  bool done() const { return done_; }

protected:
  struct Outcome {
    GroundState next;
    double reward;
    bool goal_terminal;
  };

  virtual GroundState sample_start(Rng& rng) = 0;
  virtual Outcome advance(const GroundState& s, int action, Rng& rng) = 0;

private:
  GroundState state_;
  int steps_ = 0;
  bool done_ = true;
};

using ActionSelector = std::function<int(const GroundState&, Rng&)>;
using TransitionObserver = std::function<void(const Transition&)>;

EpisodeLog run_episode(Environment& env, const ActionSelector& policy,
                       const std::vector<TransitionObserver>& observers,
                       Rng& rng);

/// Maps a ground state into [-1, 1] per dimension given bounds; values outside
/// the bounds are clipped.
GroundState normalize_state(const GroundState& s, const GroundState& lower,
                            const GroundState& upper);

}  // namespace asrl
