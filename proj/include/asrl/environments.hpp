#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>

#include "asrl/environment.hpp"

namespace asrl {

// ---------------------------------------------------------------------------
// Mountain Car
// ---------------------------------------------------------------------------

struct MountainCarState {
  double x = -0.5;
  double v = 0.0;
};

template <typename State>
struct StepResult {
  State state;
  double reward = 0.0;
  bool goal = false;  // task termination, excluding the step cap
};

namespace mountain_car {
inline constexpr double kMinX = -1.2;
inline constexpr double kMaxX = 0.6;
inline constexpr double kMaxSpeed = 0.07;
inline constexpr double kGoalX = 0.5;
inline constexpr double kForce = 0.001;
inline constexpr double kGravity = 0.0025;
inline constexpr int kStepCap = 200;
}  // namespace mountain_car

/// Actions: 0 = left, 1 = neutral, 2 = right.
StepResult<MountainCarState> mountain_car_step(const MountainCarState& s, int action);

class MountainCar final : public Environment {
public:
  std::string name() const override { return "mountain_car"; }
  int state_dim() const override { return 2; }
  int action_count() const override { return 3; }
  int step_cap() const override { return mountain_car::kStepCap; }
  GroundState lower_bounds() const override;
  GroundState upper_bounds() const override;
  bool is_goal(const GroundState& s) const override;

protected:
  GroundState sample_start(Rng& rng) override;
  Outcome advance(const GroundState& s, int action, Rng& rng) override;
};

// ---------------------------------------------------------------------------
// Continuous Puddle World
// ---------------------------------------------------------------------------

struct PuddleWorldState {
  double x = 0.0;
  double y = 0.0;
};

namespace puddle_world {
inline constexpr double kStepSize = 0.05;
inline constexpr double kNoise = 0.01;
inline constexpr double kPuddleRadius = 0.1;
inline constexpr double kPuddleCoefficient = 400.0;
inline constexpr double kGoalSum = 1.9;
inline constexpr int kStepCap = 250;

struct Segment {
  double x0, y0, x1, y1;
};
inline constexpr std::array<Segment, 2> kPuddles{{
    {0.10, 0.75, 0.45, 0.75},
    {0.45, 0.40, 0.45, 0.80},
}};
}  // namespace puddle_world

/// Penalty (<= 0) for standing at `p`: -400 * sum of max(0, 0.1 - distance to
/// each puddle axis).
double puddle_penalty(const PuddleWorldState& p);

/// Actions: 0 = +x, 1 = -x, 2 = +y, 3 = -y, 4 = stay (noise on both axes).
StepResult<PuddleWorldState> puddle_world_step(const PuddleWorldState& s, int action, Rng& rng);

class PuddleWorld final : public Environment {
public:
  std::string name() const override { return "puddle_world"; }
  int state_dim() const override { return 2; }
  int action_count() const override { return 5; }
  int step_cap() const override { return puddle_world::kStepCap; }
  GroundState lower_bounds() const override;
  GroundState upper_bounds() const override;
  bool is_goal(const GroundState& s) const override;

protected:
  GroundState sample_start(Rng& rng) override;
  Outcome advance(const GroundState& s, int action, Rng& rng) override;
};

// ---------------------------------------------------------------------------
// Catcher
// ---------------------------------------------------------------------------

struct CatcherState {
  double paddle_x = 0.5;
  double paddle_v = 0.0;
  double fruit_x = 0.5;
  double fruit_y = 1.0;
  int misses = 0;  // not part of the observation
};

namespace catcher {
inline constexpr double kAccel = 0.03;
inline constexpr double kDamping = 0.9;
inline constexpr double kMaxSpeed = 0.15;
inline constexpr double kFallRate = 0.02;
inline constexpr double kCatchHalfWidth = 0.1;
inline constexpr double kGoalHeight = 0.1;
inline constexpr int kMaxMisses = 3;
inline constexpr int kStepCap = 500;
}  // namespace catcher

/// Actions: 0 = left, 1 = neutral, 2 = right.
StepResult<CatcherState> catcher_step(const CatcherState& s, int action, Rng& rng);

class Catcher final : public Environment {
public:
  std::string name() const override { return "catcher"; }
  int state_dim() const override { return 4; }
  int action_count() const override { return 3; }
  int step_cap() const override { return catcher::kStepCap; }
  GroundState lower_bounds() const override;
  GroundState upper_bounds() const override;
  bool is_goal(const GroundState& s) const override;

  int misses() const { return misses_; }

protected:
  GroundState sample_start(Rng& rng) override;
  Outcome advance(const GroundState& s, int action, Rng& rng) override;

private:
  int misses_ = 0;
};

/// "mountain_car", "puddle_world" or "catcher".
std::unique_ptr<Environment> make_environment(std::string_view name);

}  // namespace asrl
