#include "asrl/environments.hpp"

#include <algorithm>
#include <cmath>

namespace asrl {

namespace {

GroundState vec(std::initializer_list<double> values) {
  GroundState s(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) s[i++] = v;
  return s;
}

void check_action(int action, int count, const char* env) {
  if (action < 0 || action >= count) {
    throw UsageError(std::string(env) + ": action out of range");
  }
}

double segment_distance(double px, double py, const puddle_world::Segment& seg) {
  const double dx = seg.x1 - seg.x0;
  const double dy = seg.y1 - seg.y0;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - seg.x0) * dx + (py - seg.y0) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (seg.x0 + t * dx), py - (seg.y0 + t * dy));
}

}  // namespace

// Mountain Car -------------------------------------------------------------

StepResult<MountainCarState> mountain_car_step(const MountainCarState& s, int action) {
  using namespace mountain_car;
  check_action(action, 3, "mountain_car");
  MountainCarState n;
  n.v = s.v + kForce * (action - 1) - kGravity * std::cos(3.0 * s.x);
  n.v = std::clamp(n.v, -kMaxSpeed, kMaxSpeed);
  n.x = std::clamp(s.x + n.v, kMinX, kMaxX);
  // Inelastic left wall.
  if (n.x <= kMinX && n.v < 0.0) n.v = 0.0;
  return {n, -1.0, n.x >= kGoalX};
}

GroundState MountainCar::lower_bounds() const {
  return vec({mountain_car::kMinX, -mountain_car::kMaxSpeed});
}
GroundState MountainCar::upper_bounds() const {
  return vec({mountain_car::kMaxX, mountain_car::kMaxSpeed});
}
bool MountainCar::is_goal(const GroundState& s) const { return s[0] >= mountain_car::kGoalX; }

GroundState MountainCar::sample_start(Rng& rng) {
  std::uniform_real_distribution<double> start(-0.6, -0.4);
  return vec({start(rng), 0.0});
}

Environment::Outcome MountainCar::advance(const GroundState& s, int action, Rng&) {
  auto r = mountain_car_step({s[0], s[1]}, action);
  return {vec({r.state.x, r.state.v}), r.reward, r.goal};
}

// Puddle World -------------------------------------------------------------

double puddle_penalty(const PuddleWorldState& p) {
  using namespace puddle_world;
  double depth = 0.0;
  for (const auto& seg : kPuddles) {
    depth += std::max(0.0, kPuddleRadius - segment_distance(p.x, p.y, seg));
  }
  return -kPuddleCoefficient * depth;
}

StepResult<PuddleWorldState> puddle_world_step(const PuddleWorldState& s, int action, Rng& rng) {
  using namespace puddle_world;
  check_action(action, 5, "puddle_world");
  std::uniform_real_distribution<double> noise(-kNoise, kNoise);
  PuddleWorldState n = s;
  switch (action) {
    case 0: n.x += kStepSize + noise(rng); break;
    case 1: n.x -= kStepSize + noise(rng); break;
    case 2: n.y += kStepSize + noise(rng); break;
    case 3: n.y -= kStepSize + noise(rng); break;
    default:
      n.x += noise(rng);
      n.y += noise(rng);
      break;
  }
  n.x = std::clamp(n.x, 0.0, 1.0);
  n.y = std::clamp(n.y, 0.0, 1.0);
  return {n, -1.0 + puddle_penalty(n), n.x + n.y >= kGoalSum};
}

GroundState PuddleWorld::lower_bounds() const { return vec({0.0, 0.0}); }
GroundState PuddleWorld::upper_bounds() const { return vec({1.0, 1.0}); }
bool PuddleWorld::is_goal(const GroundState& s) const {
  return s[0] + s[1] >= puddle_world::kGoalSum;
}

GroundState PuddleWorld::sample_start(Rng& rng) {
  // Bottom-left quadrant, half-open so the start never sits on x or y = 0.5.
  std::uniform_real_distribution<double> start(0.0, 0.5);
  const double x = start(rng);
  const double y = start(rng);
  return vec({x, y});
}

Environment::Outcome PuddleWorld::advance(const GroundState& s, int action, Rng& rng) {
  auto r = puddle_world_step({s[0], s[1]}, action, rng);
  return {vec({r.state.x, r.state.y}), r.reward, r.goal};
}

// Catcher ------------------------------------------------------------------

StepResult<CatcherState> catcher_step(const CatcherState& s, int action, Rng& rng) {
  using namespace catcher;
  check_action(action, 3, "catcher");
  CatcherState n = s;
  n.paddle_v = std::clamp((s.paddle_v + kAccel * (action - 1)) * kDamping, -kMaxSpeed, kMaxSpeed);
  n.paddle_x = s.paddle_x + n.paddle_v;
  if (n.paddle_x <= 0.0 || n.paddle_x >= 1.0) {
    n.paddle_x = std::clamp(n.paddle_x, 0.0, 1.0);
    n.paddle_v = 0.0;
  }
  n.fruit_y = std::max(0.0, s.fruit_y - kFallRate);

  double reward = 0.0;
  // Tolerance absorbs the rounding in 1 - 50 * 0.02.
  if (n.fruit_y <= 1e-9) {
    if (std::abs(n.fruit_x - n.paddle_x) < kCatchHalfWidth) {
      reward = 1.0;
    } else {
      reward = -1.0;
      ++n.misses;
    }
    std::uniform_real_distribution<double> spawn(0.0, 1.0);
    n.fruit_x = spawn(rng);
    n.fruit_y = 1.0;
  }
  return {n, reward, n.misses >= kMaxMisses};
}

GroundState Catcher::lower_bounds() const { return vec({0.0, -catcher::kMaxSpeed, 0.0, 0.0}); }
GroundState Catcher::upper_bounds() const { return vec({1.0, catcher::kMaxSpeed, 1.0, 1.0}); }

bool Catcher::is_goal(const GroundState& s) const {
  return s[3] <= catcher::kGoalHeight && std::abs(s[2] - s[0]) < catcher::kCatchHalfWidth;
}

GroundState Catcher::sample_start(Rng& rng) {
  misses_ = 0;
  std::uniform_real_distribution<double> spawn(0.0, 1.0);
  return vec({0.5, 0.0, spawn(rng), 1.0});
}

Environment::Outcome Catcher::advance(const GroundState& s, int action, Rng& rng) {
  CatcherState cs{s[0], s[1], s[2], s[3], misses_};
  auto r = catcher_step(cs, action, rng);
  misses_ = r.state.misses;
  return {vec({r.state.paddle_x, r.state.paddle_v, r.state.fruit_x, r.state.fruit_y}), r.reward,
          r.goal};
}

std::unique_ptr<Environment> make_environment(std::string_view name) {
  if (name == "mountain_car") return std::make_unique<MountainCar>();
  if (name == "puddle_world") return std::make_unique<PuddleWorld>();
  if (name == "catcher") return std::make_unique<Catcher>();
  throw ConfigError("unknown environment '" + std::string(name) + "'");
}

}  // namespace asrl
