#include <gtest/gtest.h>

#include <sstream>

#include "asrl/config.hpp"

using namespace asrl;

namespace {

ExperimentConfig parse(const std::string& text, std::optional<std::string> env = std::nullopt) {
  std::istringstream in(text);
  return parse_config(in, env);
}

}  // namespace

TEST(Defaults, MountainCar) {
  const auto c = defaults_for("mountain_car");
  EXPECT_EQ(c.alpha, 1e-3);
  EXPECT_EQ(c.gamma, 0.995);
  EXPECT_EQ(c.tau, 1e-2);
  EXPECT_EQ(c.omega, 1.0);
  EXPECT_EQ(c.epsilon_start, 0.1);
  EXPECT_EQ(c.epsilon_end, 0.01);
  EXPECT_EQ(c.abstraction_bins, (std::vector<int>{50, 50}));
  EXPECT_EQ(c.exploration_bins, (std::vector<int>{5, 5}));
  EXPECT_EQ(c.episodes, 500);
  EXPECT_EQ(c.exploration_episodes, 500);
  EXPECT_EQ(c.batch_size, 64);
  EXPECT_EQ(c.lower, (std::vector<double>{-1.2, -0.07}));
  EXPECT_EQ(c.upper, (std::vector<double>{0.6, 0.07}));
  EXPECT_EQ(c.reward_mode, RewardMode::StepPenalty);
  EXPECT_EQ(c.mrl_alpha, c.alpha);
  EXPECT_EQ(c.seeds.size(), 5u);
}

TEST(Defaults, PuddleWorld) {
  const auto c = defaults_for("puddle_world");
  EXPECT_EQ(c.alpha, 5e-4);
  EXPECT_EQ(c.gamma, 0.99);
  EXPECT_EQ(c.epsilon_start, 0.2);
  EXPECT_EQ(c.epsilon_end, 0.05);
  EXPECT_EQ(c.abstraction_bins, (std::vector<int>{50, 50}));
  EXPECT_EQ(c.exploration_bins, (std::vector<int>{5, 5}));
  EXPECT_EQ(c.episodes, 1000);
  EXPECT_EQ(c.exploration_episodes, 1000);
  EXPECT_EQ(c.batch_size, 64);
}

TEST(Defaults, Catcher) {
  const auto c = defaults_for("catcher");
  EXPECT_EQ(c.alpha, 1e-5);
  EXPECT_EQ(c.gamma, 0.95);
  EXPECT_EQ(c.epsilon_start, 0.1);
  EXPECT_EQ(c.epsilon_end, 0.01);
  EXPECT_EQ(c.abstraction_bins, (std::vector<int>{20, 10, 20, 10}));
  EXPECT_EQ(c.exploration_bins, (std::vector<int>{10, 5, 10, 5}));
  EXPECT_EQ(c.episodes, 1000);
  EXPECT_EQ(c.exploration_episodes, 500);
  EXPECT_EQ(c.batch_size, 16);
  EXPECT_NO_THROW(c.validate());
}

TEST(Defaults, UnknownEnvironment) { EXPECT_THROW(defaults_for("cartpole"), ConfigError); }

TEST(ParseConfig, EmptyTextGivesDefaults) {
  EXPECT_EQ(serialize(parse("")), serialize(defaults_for("mountain_car")));
  EXPECT_EQ(serialize(parse("", "catcher")), serialize(defaults_for("catcher")));
}

TEST(ParseConfig, SectionWinsOverGlobalAndOverrideSelectsSection) {
  const std::string text =
      "# comment\n"
      "env = puddle_world\n"
      "omega = 2   # trailing comment\n"
      "episodes = 10\n"
      "[puddle_world]\n"
      "episodes = 20\n"
      "[catcher]\n"
      "episodes = 30\n";
  const auto pw = parse(text);
  EXPECT_EQ(pw.env, "puddle_world");
  EXPECT_EQ(pw.omega, 2.0);
  EXPECT_EQ(pw.episodes, 20);
  const auto ca = parse(text, "catcher");
  EXPECT_EQ(ca.env, "catcher");
  EXPECT_EQ(ca.episodes, 30);
  EXPECT_EQ(ca.omega, 2.0);
  EXPECT_EQ(ca.alpha, 1e-5);
  EXPECT_EQ(parse(text, "mountain_car").episodes, 10);
}

TEST(ParseConfig, MrlAlphaFollowsAlphaUnlessSet) {
  EXPECT_EQ(parse("alpha = 0.002\n").mrl_alpha, 0.002);
  EXPECT_EQ(parse("alpha = 0.002\nmrl_alpha = 0.1\n").mrl_alpha, 0.1);
}

TEST(ParseConfig, ListsAndEnums) {
  const auto c = parse(
      "abstraction_bins = (10, 20)\nhidden = 32,32,16\nseeds = 7\nreward_mode = summed\n"
      "shaping_mode = per_step\nvariant = mrl\n");
  EXPECT_EQ(c.abstraction_bins, (std::vector<int>{10, 20}));
  EXPECT_EQ(c.hidden, (std::vector<int>{32, 32, 16}));
  EXPECT_EQ(c.seeds, (std::vector<std::int64_t>{7}));
  EXPECT_EQ(c.reward_mode, RewardMode::SummedGroundReward);
  EXPECT_EQ(c.shaping_mode, ShapingMode::PerStep);
  EXPECT_EQ(c.variant, Variant::Mrl);
}

TEST(ParseConfig, Errors) {
  EXPECT_THROW(parse("bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse("alpha\n"), ConfigError);
  EXPECT_THROW(parse("alpha = fast\n"), ConfigError);
  EXPECT_THROW(parse("alpha = -1\n"), ConfigError);
  EXPECT_THROW(parse("gamma = 1.5\n"), ConfigError);
  EXPECT_THROW(parse("gamma = 0\n"), ConfigError);
  EXPECT_THROW(parse("tau = 2\n"), ConfigError);
  EXPECT_THROW(parse("epsilon_start = 1.1\n"), ConfigError);
  EXPECT_THROW(parse("episodes = 0\n"), ConfigError);
  EXPECT_THROW(parse("batch_size = 0\n"), ConfigError);
  EXPECT_THROW(parse("abstraction_bins = 50\n"), ConfigError);
  EXPECT_THROW(parse("abstraction_bins = 50, 0\n"), ConfigError);
  EXPECT_THROW(parse("lower = 1, 0\nupper = 0, 1\n"), ConfigError);
  EXPECT_THROW(parse("[atari]\n"), ConfigError);
  EXPECT_THROW(parse("[catcher\n"), ConfigError);
  EXPECT_THROW(parse("variant = best\n"), ConfigError);
  EXPECT_THROW(parse("reward_mode = lots\n"), ConfigError);
  EXPECT_THROW(parse("env = atari\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/asrl.cfg"), ConfigError);
}

TEST(Serialize, RoundTripIsAFixedPoint) {
  for (const char* env : {"mountain_car", "puddle_world", "catcher"}) {
    auto c = defaults_for(env);
    c.variant = Variant::Vanilla;
    c.alpha = 1.0 / 3.0;
    c.omega = 0.1;
    c.seeds = {11, 12};
    c.output = "runs/x";
    const auto text = serialize(c);
    std::istringstream in(text);
    const auto back = parse_config(in);
    EXPECT_EQ(serialize(back), text) << env;
    EXPECT_EQ(back.alpha, c.alpha);
    EXPECT_EQ(back.env, env);
    EXPECT_EQ(config_hash(back), config_hash(c));
  }
}

TEST(ConfigHash, SixteenHexDigitsAndSensitive) {
  auto c = defaults_for("mountain_car");
  const auto h = config_hash(c);
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(h.find_first_not_of("0123456789abcdef"), std::string::npos);
  c.omega = 2.0;
  EXPECT_NE(config_hash(c), h);
}

TEST(VariantText, RoundTrips) {
  for (auto v : {Variant::Vanilla, Variant::Mrl, Variant::Shaped}) EXPECT_EQ(parse_variant(to_string(v)), v);
}
