// Command line front end: explore, solve, train, compare, curves.

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "asrl/config.hpp"
#include "asrl/curves.hpp"
#include "asrl/experiment.hpp"

namespace fs = std::filesystem;
using namespace asrl;

namespace {

struct Options {
  std::string env = "mountain_car";
  std::string config;
  std::string variant;
  std::string reward_mode;
  std::int64_t seed = 0;
  std::vector<std::int64_t> seeds;
  std::string out;
  std::string graph_cache;
  std::string values_cache;
  int episodes = 0;
  int exploration_episodes = 0;
  int window = kSmoothingWindow;
  bool episode_axis = false;
  std::vector<std::string> inputs;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--env", o.env, "mountain_car | puddle_world | catcher");
  cmd->add_option("--config", o.config, "key = value config file");
  cmd->add_option("--variant", o.variant, "vanilla | mrl | shaped");
  cmd->add_option("--reward-mode", o.reward_mode, "step_penalty | summed_ground_reward");
  cmd->add_option("--seed", o.seed, "run seed");
  cmd->add_option("--seeds", o.seeds, "seed list for compare")->delimiter(',');
  cmd->add_option("--out", o.out, "output file or directory");
  cmd->add_option("--graph-cache", o.graph_cache, "observed graph file");
  cmd->add_option("--values-cache", o.values_cache, "value function file");
  cmd->add_option("--episodes", o.episodes, "override training episodes");
  cmd->add_option("--exploration-episodes", o.exploration_episodes,
                  "override exploration episodes");
}

ExperimentConfig make_config(const Options& o) {
  ExperimentConfig cfg = o.config.empty() ? defaults_for(o.env) : load_config(o.config, o.env);
  if (!o.variant.empty()) cfg.variant = parse_variant(o.variant);
  if (!o.reward_mode.empty()) cfg.reward_mode = parse_reward_mode(o.reward_mode);
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (!o.out.empty()) cfg.output = o.out;
  if (o.episodes > 0) cfg.episodes = o.episodes;
  if (o.exploration_episodes > 0) cfg.exploration_episodes = o.exploration_episodes;
  cfg.validate();
  return cfg;
}

std::string or_default(const std::string& v, const std::string& fallback) {
  return v.empty() ? fallback : v;
}

void print_run(const RunLog& log) {
  const auto training = log.phase(Phase::Training);
  double tail = 0.0;
  const std::size_t n = std::min<std::size_t>(50, training.size());
  for (std::size_t i = training.size() - n; i < training.size(); ++i) tail += training[i].ground_reward;
  std::cout << log.env << ' ' << to_string(log.variant) << " seed " << log.seed << ": "
            << training.size() << " training episodes, last-" << n << " mean reward "
            << (n ? tail / static_cast<double>(n) : 0.0) << ", " << log.end_time_s() << " s";
  if (!log.ok()) std::cout << " [" << log.status << ']';
  std::cout << '\n';
}

void write_curves(const std::vector<RunLog>& logs, const fs::path& dir, int window,
                  bool episode_axis) {
  fs::create_directories(dir);
  // Group by environment, then variant; time curves truncate to the shortest
  // run in the environment.
  std::map<std::string, std::map<std::string, std::vector<RunLog>>> groups;
  for (const auto& log : logs) groups[log.env][to_string(log.variant)].push_back(log);
  for (const auto& [env, by_variant] : groups) {
    double end = std::numeric_limits<double>::infinity();
    for (const auto& [_, runs] : by_variant)
      for (const auto& r : runs) end = std::min(end, r.end_time_s());
    for (const auto& [variant, runs] : by_variant) {
      AggregateOptions opts;
      opts.window = window;
      opts.end_time = end;
      const auto path = dir / (env + "_" + variant + ".csv");
      emit(aggregate(runs, opts), path.string());
      std::cout << "wrote " << path.string() << '\n';
      if (episode_axis) {
        opts.axis = CurveAxis::Episode;
        const auto epath = dir / (env + "_" + variant + "_episodes.csv");
        emit(aggregate(runs, opts), epath.string());
        std::cout << "wrote " << epath.string() << '\n';
      }
    }
  }
}

int cmd_explore(const Options& o) {
  const auto cfg = make_config(o);
  const auto result = explore(cfg, o.seed);
  const auto path = or_default(o.graph_cache, or_default(o.out, "graph.txt"));
  result.graph.save(path);
  std::cout << "explored " << result.episodes.size() << " episodes in " << result.elapsed.count()
            << " s, " << result.graph.size() << " abstract transitions -> " << path << '\n';
  return 0;
}

int cmd_solve(const Options& o) {
  if (o.graph_cache.empty()) throw CLI::ValidationError("solve", "--graph-cache is required");
  const auto cfg = make_config(o);
  const auto graph = ObservedGraph::load(o.graph_cache);
  const auto vf = solve(cfg, graph);
  const auto path = or_default(o.values_cache, or_default(o.out, "values.txt"));
  vf.save(path);
  std::cout << "solved " << vf.values().size() << " cells in " << vf.sweeps << " sweeps ("
            << to_string(cfg.reward_mode) << ") -> " << path << '\n';
  return 0;
}

int cmd_train(const Options& o) {
  const auto cfg = make_config(o);
  PrecomputedAbstraction pre;
  if (!o.graph_cache.empty()) pre.graph = ObservedGraph::load(o.graph_cache);
  if (!o.values_cache.empty()) pre.values = ValueFunction::load(o.values_cache);
  const auto log = run_experiment(cfg, o.seed, pre);
  const auto path = or_default(o.out, "run.csv");
  log.save(path);
  print_run(log);
  std::cout << "run log -> " << path << '\n';
  return log.ok() ? 0 : 2;
}

int cmd_compare(const Options& o) {
  auto base = make_config(o);
  const fs::path dir = or_default(o.out, base.output);
  fs::create_directories(dir / "runs");
  std::vector<Job> jobs;
  for (Variant v : {Variant::Vanilla, Variant::Mrl, Variant::Shaped}) {
    for (auto seed : base.seeds) {
      ExperimentConfig cfg = base;
      cfg.variant = v;
      jobs.push_back({cfg, seed});
    }
  }
  const int threads = worker_count();
  std::cout << "running " << jobs.size() << " runs on " << threads << " worker(s)\n";
  const auto logs = run_jobs(jobs, threads);
  for (const auto& log : logs) {
    const auto path = dir / "runs" /
                      (log.env + "_" + to_string(log.variant) + "_seed" +
                       std::to_string(log.seed) + ".csv");
    log.save(path.string());
    print_run(log);
  }
  write_curves(logs, dir, o.window, true);
  return 0;
}

int cmd_curves(const Options& o) {
  std::vector<RunLog> logs;
  for (const auto& in : o.inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(in)) {
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) logs.push_back(RunLog::load(f.string()));
    } else {
      logs.push_back(RunLog::load(in));
    }
  }
  if (logs.empty()) throw CLI::ValidationError("curves", "no run logs found");
  write_curves(logs, or_default(o.out, "curves"), o.window, o.episode_axis);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform state abstraction for reward-shaped DQN"};
  app.require_subcommand(1);
  Options o;

  auto* explore_cmd = app.add_subcommand("explore", "run the exploration phase, write the graph");
  auto* solve_cmd = app.add_subcommand("solve", "observed graph -> value function file");
  auto* train_cmd = app.add_subcommand("train", "full pipeline (or from caches) for one seed");
  auto* compare_cmd = app.add_subcommand("compare", "vanilla, mrl and shaped over all seeds");
  auto* curves_cmd = app.add_subcommand("curves", "aggregate run logs into CSV curves");
  for (auto* cmd : {explore_cmd, solve_cmd, train_cmd, compare_cmd, curves_cmd}) add_common(cmd, o);
  compare_cmd->add_option("--window", o.window, "moving-average window");
  curves_cmd->add_option("--window", o.window, "moving-average window");
  curves_cmd->add_flag("--episode-axis", o.episode_axis,
                       "also emit curves against training episode");
  curves_cmd->add_option("inputs", o.inputs, "run log files or directories")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*explore_cmd) return cmd_explore(o);
    if (*solve_cmd) return cmd_solve(o);
    if (*train_cmd) return cmd_train(o);
    if (*compare_cmd) return cmd_compare(o);
    if (*curves_cmd) return cmd_curves(o);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
