#include <gtest/gtest.h>

#include "asrl/shaping.hpp"
#include "scenarios.hpp"

using namespace asrl;

namespace {

GroundState v1(double x) { return (GroundState(1) << x).finished(); }

Transition tr(double x, double nx, double r = -1.0) {
  Transition t;
  t.state = v1(x);
  t.next_state = v1(nx);
  t.reward = r;
  return t;
}

// Ten cells on [0, 1) chained left to right, goal in cell 9.
struct Line {
  Partitioner z = make_partitioner({0}, {1}, {10});
  Amdp amdp;
  ValueFunction vf;

  explicit Line(double gamma = 0.9, std::set<int> withheld = {}) {
    ObservedGraph g;
    for (int i = 0; i < 9; ++i) {
      if (!withheld.count(i) && !withheld.count(i + 1)) g.add({{i}}, {{i + 1}}, -1.0);
    }
    amdp = build_amdp(g, RewardMode::StepPenalty, {CellIndex{{9}}});
    vf = value_iteration(amdp, gamma);
  }
};

}  // namespace

TEST(Potential, ScalesValueByOmega) {
  const ValueFunction vf({{CellIndex{{3}}, -12.0}}, 0.9);
  const auto z = make_partitioner({0}, {1}, {10});
  EXPECT_EQ(potential(vf, z, 1.0, v1(0.35)).value, -12.0);
  EXPECT_EQ(potential(vf, z, 0.5, v1(0.35)).value, -6.0);
  EXPECT_EQ(potential(vf, z, 0.0, v1(0.35)).value, 0.0);
  const auto miss = potential(vf, z, 1.0, v1(0.75));
  EXPECT_EQ(miss.value, 0.0);
  EXPECT_TRUE(miss.missing);
}

TEST(ShapingReward, Formula) {
  EXPECT_EQ(shaping_reward(-10.0, -9.0, true, 0.995), 0.0);
  EXPECT_NEAR(shaping_reward(-10.0, -9.0, false, 0.995), 1.045, 1e-12);
  EXPECT_EQ(shaping_reward(-4.0, -4.0, false, 1.0), 0.0);
}

TEST(ShapedTransition, WithinCellIsUnshaped) {
  Line line;
  const ShapingConfig cfg{1.0, 0.99, ShapingMode::PerTransition};
  const auto r = shaped_transition(tr(0.31, 0.35, -1.5), line.vf, line.z, cfg);
  EXPECT_EQ(r.shaping_reward, 0.0);
  EXPECT_EQ(r.total, -1.5);
  EXPECT_EQ(r.total, r.ground_reward + r.shaping_reward);
}

TEST(ShapedTransition, PerStepShapesWithinCell) {
  Line line(0.9);
  const ShapingConfig cfg{1.0, 0.9, ShapingMode::PerStep};
  const auto r = shaped_transition(tr(0.31, 0.35), line.vf, line.z, cfg);
  const double phi = line.vf.at({{3}});
  EXPECT_DOUBLE_EQ(r.shaping_reward, 0.9 * phi - phi);
}

TEST(ShapedTransition, MountainCarStepIntoGoalCellIsRewarded) {
  auto cfg = defaults_for("mountain_car");
  const auto z = make_partitioner(cfg.lower, cfg.upper, cfg.abstraction_bins);
  MountainCar env;
  Rng rng(1);
  const auto ex = run_exploration_phase(
      env, z, make_partitioner(cfg.lower, cfg.upper, cfg.exploration_bins), 500, 0.1, rng);
  const auto goals = cell_of_goal(z, [&](const GroundState& s) { return env.is_goal(s); });
  const auto vf = value_iteration(build_amdp(ex.graph, RewardMode::StepPenalty, goals), cfg.gamma);
  // Any observed edge into a goal cell, replayed as a ground step between the
  // two cell centers.
  bool found = false;
  for (const auto& [edge, st] : ex.graph.edges()) {
    if (goals.count(edge.second) && !goals.count(edge.first)) {
      Transition t;
      t.state = z.center(edge.first);
      t.next_state = z.center(edge.second);
      t.reward = -1.0;
      const auto r = shaped_transition(t, vf, z, {1.0, cfg.gamma, ShapingMode::PerTransition});
      EXPECT_GT(r.shaping_reward, 0.0);
      EXPECT_DOUBLE_EQ(r.shaping_reward, 1.0);  // -(-1) from a distance-1 cell
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(ShapedTransition, TelescopesWithUndiscountedShaping) {
  for (const char* env : {"mountain_car", "puddle_world", "catcher"}) {
    EXPECT_LT(scenario::telescoping_error(env, 10, 3), 1e-10) << env;
    EXPECT_LT(scenario::telescoping_error(env, 10, 4, ShapingMode::PerStep), 1e-10) << env;
  }
}

TEST(ShapedTransition, OmegaScalesEpisodeTotals) {
  Line line;
  const std::vector<Transition> path{tr(0.05, 0.15), tr(0.15, 0.18), tr(0.18, 0.41),
                                     tr(0.41, 0.33), tr(0.33, 0.95)};
  auto total = [&](double omega) {
    double sum = 0.0;
    for (const auto& t : path) {
      sum += shaped_transition(t, line.vf, line.z, {omega, 1.0, ShapingMode::PerTransition})
                 .shaping_reward;
    }
    return sum;
  };
  const double base = total(1.0);
  EXPECT_NE(base, 0.0);
  for (double omega : {0.0, 0.25, 2.0, 8.0}) EXPECT_EQ(total(omega), omega * base);
  EXPECT_NEAR(total(0.3), 0.3 * base, 1e-12);
}

TEST(GridInvariance, PerStepShapingKeepsGreedyActions) {
  for (double gamma : {0.9, 0.99}) {
    for (double omega : {1.0, 5.0}) {
      const auto rep = scenario::grid_invariance(gamma, omega);
      EXPECT_GT(rep.unique_states, 30);
      EXPECT_GT(rep.potential_range, 1.0);
      EXPECT_EQ(rep.mismatches, 0) << "gamma " << gamma << " omega " << omega;
    }
  }
}

TEST(GridInvariance, NonPotentialBonusChangesGreedyActions) {
  // A fixed bonus for entering one cell is not potential-based; the oracle
  // must notice.
  const auto g = scenario::invariance_grid();
  const auto rep = scenario::compare_greedy(g, 0.9, [](int, int, int nx, int ny) {
    return (nx == 0 && ny == 0) ? 5.0 : 0.0;
  });
  EXPECT_GT(rep.mismatches, 0);
}

TEST(AbstractShaper, ShapesOnlyOnCellChanges) {
  Line line(0.9);
  AbstractShaper shaper(line.z, line.amdp, line.vf, {1.0, 0.9, ShapingMode::PerTransition},
                        RewardMode::StepPenalty);
  EXPECT_EQ(shaper.shape(tr(0.31, 0.35)).shaping_reward, 0.0);
  const auto r = shaper.shape(tr(0.35, 0.45));
  EXPECT_DOUBLE_EQ(r.shaping_reward, 0.9 * line.vf.at({{4}}) - line.vf.at({{3}}));
  EXPECT_FALSE(shaper.end_episode());
  EXPECT_EQ(shaper.resolves(), 0);
}

TEST(AbstractShaper, MatchesShapedTransitionWhenNothingIsMissing) {
  Line line(0.95);
  for (auto mode : {ShapingMode::PerTransition, ShapingMode::PerStep}) {
    const ShapingConfig cfg{2.0, 0.95, mode};
    AbstractShaper shaper(line.z, line.amdp, line.vf, cfg, RewardMode::StepPenalty);
    for (const auto& t : {tr(0.02, 0.07), tr(0.07, 0.13), tr(0.13, 0.55), tr(0.55, 0.52)}) {
      EXPECT_EQ(shaper.shape(t).shaping_reward,
                shaped_transition(t, line.vf, line.z, cfg).shaping_reward);
    }
  }
}

TEST(AbstractShaper, MissingCellReadsZeroAndIsResolvedAtEpisodeEnd) {
  Line partial(0.9, {5});
  ASSERT_FALSE(partial.amdp.contains({{5}}));
  AbstractShaper shaper(partial.z, partial.amdp, partial.vf, {1.0, 0.9, ShapingMode::PerTransition},
                        RewardMode::StepPenalty);
  const auto into = shaper.shape(tr(0.45, 0.55));
  EXPECT_DOUBLE_EQ(into.shaping_reward, 0.9 * 0.0 - partial.vf.at({{4}}));
  EXPECT_EQ(shaper.pending().count({{5}}), 1u);
  shaper.shape(tr(0.55, 0.65));
  EXPECT_GE(shaper.missing_lookups(), 2);

  EXPECT_TRUE(shaper.end_episode());
  EXPECT_EQ(shaper.resolves(), 1);
  EXPECT_TRUE(shaper.pending().empty());
  EXPECT_TRUE(shaper.values().contains({{5}}));

  // The re-solve used the edges seen during the episode.
  ObservedGraph full;
  for (int i = 0; i < 9; ++i) {
    if (i != 4 && i != 5) full.add({{i}}, {{i + 1}}, -1.0);
  }
  full.add({{4}}, {{5}}, -1.0);
  full.add({{5}}, {{6}}, -1.0);
  const auto fresh = value_iteration(build_amdp(full, RewardMode::StepPenalty, {CellIndex{{9}}}), 0.9);
  EXPECT_EQ(shaper.values(), fresh);
}

TEST(ShapingModeText, RoundTrips) {
  for (auto m : {ShapingMode::PerTransition, ShapingMode::PerStep}) {
    EXPECT_EQ(parse_shaping_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_shaping_mode("sometimes"), ConfigError);
}
