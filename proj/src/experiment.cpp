#include "asrl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "asrl/dqn.hpp"
#include "asrl/environments.hpp"
#include "asrl/mrl.hpp"
#include "asrl/shaping.hpp"

namespace asrl {

std::string to_string(Phase p) { return p == Phase::Exploration ? "exploration" : "training"; }

namespace {

Phase parse_phase(const std::string& s) {
  if (s == "exploration") return Phase::Exploration;
  if (s == "training") return Phase::Training;
  throw ConfigError("runlog: unknown phase '" + s + "'");
}

enum Stream : std::uint64_t { kExploreStream = 1, kInitStream, kEnvStream, kActStream, kReplayStream };

Rng make_stream(std::int64_t seed, Stream stream) {
  const auto s = static_cast<std::uint64_t>(seed);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

GroundState to_state(const std::vector<double>& v) {
  return Eigen::Map<const GroundState>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

bool EpisodeRecord::same_outcome(const EpisodeRecord& o) const {
  return run_id == o.run_id && phase == o.phase && episode == o.episode && steps == o.steps &&
         ground_reward == o.ground_reward && shaping_reward == o.shaping_reward &&
         epsilon == o.epsilon;
}

std::vector<EpisodeRecord> RunLog::phase(Phase p) const {
  std::vector<EpisodeRecord> out;
  for (const auto& e : episodes) {
    if (e.phase == p) out.push_back(e);
  }
  return out;
}

bool RunLog::same_outcome(const RunLog& o) const {
  if (env != o.env || variant != o.variant || seed != o.seed || config_hash != o.config_hash ||
      status != o.status || exploration_updates != o.exploration_updates ||
      learner_updates != o.learner_updates || vi_solves != o.vi_solves ||
      resolves != o.resolves || missing_lookups != o.missing_lookups ||
      graph_edges != o.graph_edges || amdp_cells != o.amdp_cells ||
      episodes.size() != o.episodes.size()) {
    return false;
  }
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    if (!episodes[i].same_outcome(o.episodes[i])) return false;
  }
  return true;
}

void RunLog::write(std::ostream& out) const {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  std::string safe_status = status;
  std::replace(safe_status.begin(), safe_status.end(), ' ', '_');
  std::replace(safe_status.begin(), safe_status.end(), '\n', '_');
  out << "# env=" << env << " variant=" << to_string(variant) << " seed=" << seed
      << " config_hash=" << config_hash << " status=" << safe_status
      << " exploration_updates=" << exploration_updates << " learner_updates=" << learner_updates
      << " vi_solves=" << vi_solves << " resolves=" << resolves
      << " missing_lookups=" << missing_lookups << " graph_edges=" << graph_edges
      << " amdp_cells=" << amdp_cells << " exploration_time_s=" << exploration_time_s
      << " solve_time_s=" << solve_time_s << '\n';
  out << "run_id,phase,episode,steps,ground_reward,shaping_reward,wall_time_s,epsilon\n";
  for (const auto& e : episodes) {
    out << e.run_id << ',' << to_string(e.phase) << ',' << e.episode << ',' << e.steps << ','
        << e.ground_reward << ',' << e.shaping_reward << ',' << e.wall_time_s << ',' << e.epsilon
        << '\n';
  }
}

RunLog RunLog::read(std::istream& in) {
  RunLog log;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw ConfigError("runlog: missing metadata line");
  }
  std::map<std::string, std::string> meta;
  {
    std::istringstream ms(line.substr(2));
    std::string kv;
    while (ms >> kv) {
      const auto eq = kv.find('=');
      if (eq != std::string::npos) meta[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }
  auto get = [&](const char* key) -> std::string {
    auto it = meta.find(key);
    if (it == meta.end()) throw ConfigError(std::string("runlog: metadata lacks ") + key);
    return it->second;
  };
  log.env = get("env");
  log.variant = parse_variant(get("variant"));
  log.seed = std::stoll(get("seed"));
  log.config_hash = get("config_hash");
  log.status = get("status");
  if (log.status != "ok") std::replace(log.status.begin(), log.status.end(), '_', ' ');
  log.exploration_updates = std::stoll(get("exploration_updates"));
  log.learner_updates = std::stoll(get("learner_updates"));
  log.vi_solves = std::stoi(get("vi_solves"));
  log.resolves = std::stoi(get("resolves"));
  log.missing_lookups = std::stol(get("missing_lookups"));
  log.graph_edges = std::stoull(get("graph_edges"));
  log.amdp_cells = std::stoull(get("amdp_cells"));
  log.exploration_time_s = std::stod(get("exploration_time_s"));
  log.solve_time_s = std::stod(get("solve_time_s"));

  if (!std::getline(in, line) || line.rfind("run_id,", 0) != 0) {
    throw ConfigError("runlog: missing header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<std::string> f;
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw ConfigError("runlog: expected 8 fields in '" + line + "'");
    EpisodeRecord e;
    e.run_id = std::stoll(f[0]);
    e.phase = parse_phase(f[1]);
    e.episode = std::stoi(f[2]);
    e.steps = std::stoull(f[3]);
    e.ground_reward = std::stod(f[4]);
    e.shaping_reward = std::stod(f[5]);
    e.wall_time_s = std::stod(f[6]);
    e.epsilon = std::stod(f[7]);
    log.episodes.push_back(e);
  }
  return log;
}

void RunLog::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write(out);
}

RunLog RunLog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read(in);
}

Partitioner amdp_partitioner(const ExperimentConfig& cfg) {
  return Partitioner(to_state(cfg.lower), to_state(cfg.upper), cfg.abstraction_bins);
}

Partitioner exploration_partitioner(const ExperimentConfig& cfg) {
  return Partitioner(to_state(cfg.lower), to_state(cfg.upper), cfg.exploration_bins);
}

std::set<CellIndex> goal_cells(const ExperimentConfig& cfg, const Partitioner& amdp_z) {
  const auto env = make_environment(cfg.env);
  return cell_of_goal(amdp_z, [&](const GroundState& s) { return env->is_goal(s); });
}

ExplorationResult explore(const ExperimentConfig& cfg, std::int64_t seed) {
  auto env = make_environment(cfg.env);
  Rng rng = make_stream(seed, kExploreStream);
  return run_exploration_phase(*env, amdp_partitioner(cfg), exploration_partitioner(cfg),
                               cfg.exploration_episodes, cfg.exploration_epsilon, rng);
}

ValueFunction solve(const ExperimentConfig& cfg, const ObservedGraph& graph) {
  const auto z = amdp_partitioner(cfg);
  const Amdp amdp = build_amdp(graph, cfg.reward_mode, goal_cells(cfg, z));
  return value_iteration(amdp, cfg.gamma, cfg.vi_tolerance, cfg.vi_max_sweeps);
}

RunLog run_experiment(const ExperimentConfig& cfg, std::int64_t seed,
                      const PrecomputedAbstraction& pre) {
  cfg.validate();
  if (pre.values && !pre.graph) {
    throw ConfigError("run_experiment: a cached value function needs its observed graph");
  }
  const auto start = std::chrono::steady_clock::now();
  RunLog log;
  log.env = cfg.env;
  log.variant = cfg.variant;
  log.seed = seed;
  log.config_hash = config_hash(cfg);

  auto env = make_environment(cfg.env);
  const Partitioner amdp_z = amdp_partitioner(cfg);

  DqnConfig dcfg;
  dcfg.hidden = cfg.hidden;
  dcfg.alpha = cfg.alpha;
  dcfg.gamma = cfg.gamma;
  dcfg.tau = cfg.tau;
  dcfg.batch_size = static_cast<std::size_t>(cfg.batch_size);
  dcfg.replay_capacity = static_cast<std::size_t>(cfg.replay_capacity);
  dcfg.warmup = static_cast<std::size_t>(cfg.warmup);
  Rng init_rng = make_stream(seed, kInitStream);
  DqnAgent agent(env->state_dim(), env->action_count(), amdp_z.lower(), amdp_z.upper(), dcfg,
                 init_rng);

  std::unique_ptr<AbstractShaper> shaper;
  std::unique_ptr<MrlShaper> mrl;

  if (cfg.variant == Variant::Shaped) {
    ObservedGraph graph;
    if (pre.graph) {
      graph = *pre.graph;
    } else {
      ExplorationResult ex = explore(cfg, seed);
      for (std::size_t i = 0; i < ex.episodes.size(); ++i) {
        EpisodeRecord r;
        r.run_id = seed;
        r.phase = Phase::Exploration;
        r.episode = static_cast<int>(i);
        r.steps = ex.episodes[i].steps;
        r.ground_reward = ex.episodes[i].ground_reward;
        r.wall_time_s = ex.episodes[i].elapsed.count();
        r.epsilon = cfg.exploration_epsilon;
        log.episodes.push_back(r);
      }
      graph = std::move(ex.graph);
      log.exploration_time_s = ex.elapsed.count();
    }
    log.exploration_updates = agent.updates();
    log.graph_edges = graph.size();

    const auto solve_start = std::chrono::steady_clock::now();
    try {
      Amdp amdp = build_amdp(graph, cfg.reward_mode, goal_cells(cfg, amdp_z));
      ValueFunction vf = pre.values ? *pre.values
                                    : value_iteration(amdp, cfg.gamma, cfg.vi_tolerance,
                                                      cfg.vi_max_sweeps);
      if (!pre.values) ++log.vi_solves;
      log.amdp_cells = amdp.cells().size();
      shaper = std::make_unique<AbstractShaper>(
          amdp_z, std::move(amdp), std::move(vf),
          ShapingConfig{cfg.omega, cfg.gamma, cfg.shaping_mode}, cfg.reward_mode,
          cfg.vi_tolerance, cfg.vi_max_sweeps);
    } catch (const std::exception& e) {
      log.status = std::string("solve failed: ") + e.what();
      return log;
    }
    log.solve_time_s = seconds_since(solve_start);
  } else if (cfg.variant == Variant::Mrl) {
    mrl = std::make_unique<MrlShaper>(amdp_z, cfg.mrl_alpha, cfg.gamma, cfg.omega);
  }

  Rng env_rng = make_stream(seed, kEnvStream);
  Rng act_rng = make_stream(seed, kActStream);
  Rng replay_rng = make_stream(seed, kReplayStream);
  const EpsilonSchedule schedule{cfg.epsilon_start, cfg.epsilon_end, cfg.episodes};

  try {
    for (int ep = 0; ep < cfg.episodes; ++ep) {
      const double eps = schedule.value(ep);
      EpisodeRecord rec;
      rec.run_id = seed;
      rec.phase = Phase::Training;
      rec.episode = ep;
      rec.epsilon = eps;

      GroundState s = env->reset(env_rng);
      if (mrl) mrl->begin_episode(s);
      while (true) {
        const int a = agent.act(s, eps, act_rng);
        Transition t = env->step(a, env_rng);
        ShapedReward r{t.reward, 0.0, t.reward};
        if (shaper) r = shaper->shape(t);
        if (mrl) r = mrl->shape(t);
        agent.observe(t, r.total, replay_rng);
        rec.ground_reward += r.ground_reward;
        rec.shaping_reward += r.shaping_reward;
        ++rec.steps;
        if (t.terminal) break;
        s = std::move(t.next_state);
      }
      if (shaper && shaper->end_episode()) ++log.vi_solves;
      rec.wall_time_s = seconds_since(start);
      log.episodes.push_back(rec);
    }
  } catch (const std::exception& e) {
    log.status = std::string("training aborted: ") + e.what();
  }
  if (shaper) {
    log.resolves = shaper->resolves();
    log.missing_lookups = shaper->missing_lookups();
  }
  log.learner_updates = agent.updates();
  return log;
}

int worker_count() {
  if (const char* v = std::getenv("ASRL_THREADS")) {
    try {
      const int n = std::stoi(v);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunLog> run_jobs(const std::vector<Job>& jobs, int threads) {
  std::vector<RunLog> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = run_experiment(jobs[i].cfg, jobs[i].seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace asrl
