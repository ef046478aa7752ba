#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "asrl/amdp.hpp"
#include "asrl/config.hpp"
#include "asrl/environment.hpp"
#include "asrl/exploration.hpp"
#include "asrl/partition.hpp"

namespace asrl {

enum class Phase { Exploration, Training };

std::string to_string(Phase p);

struct EpisodeRecord {
  std::int64_t run_id = 0;
  Phase phase = Phase::Training;
  int episode = 0;  // contiguous from 0 within each phase
  std::size_t steps = 0;
  double ground_reward = 0.0;
  double shaping_reward = 0.0;  // logged separately, never part of the metric
  double wall_time_s = 0.0;     // cumulative since run start
  double epsilon = 0.0;

  bool same_outcome(const EpisodeRecord& o) const;
};

struct RunLog {
  std::string env;
  Variant variant = Variant::Shaped;
  std::int64_t seed = 0;
  std::string config_hash;
  std::string status = "ok";  // "ok" or a diagnostic for aborted runs

  std::int64_t exploration_updates = 0;  // learner updates during exploration
  std::int64_t learner_updates = 0;
  int vi_solves = 0;                     // value-iteration invocations
  int resolves = 0;                      // missing-cell re-solves
  long missing_lookups = 0;
  std::size_t graph_edges = 0;
  std::size_t amdp_cells = 0;
  double exploration_time_s = 0.0;
  double solve_time_s = 0.0;

  std::vector<EpisodeRecord> episodes;

  bool ok() const { return status == "ok"; }
  std::vector<EpisodeRecord> phase(Phase p) const;
  double end_time_s() const { return episodes.empty() ? 0.0 : episodes.back().wall_time_s; }

  /// Equality on everything except wall-clock timings.
  bool same_outcome(const RunLog& o) const;

  /// CSV with a `# key=value ...` metadata line, then
  /// run_id,phase,episode,steps,ground_reward,shaping_reward,wall_time_s,epsilon
  void write(std::ostream& out) const;
  static RunLog read(std::istream& in);
  void save(const std::string& path) const;
  static RunLog load(const std::string& path);
};

/// Abstraction inputs that can be supplied instead of recomputed.
struct PrecomputedAbstraction {
  std::optional<ObservedGraph> graph;
  std::optional<ValueFunction> values;
};

/// Goal cells of the AMDP partition for the configured environment.
std::set<CellIndex> goal_cells(const ExperimentConfig& cfg, const Partitioner& amdp_z);

Partitioner amdp_partitioner(const ExperimentConfig& cfg);
Partitioner exploration_partitioner(const ExperimentConfig& cfg);

/// Exploration only, using the seed's exploration stream.
ExplorationResult explore(const ExperimentConfig& cfg, std::int64_t seed);

/// Graph -> AMDP -> value iteration, with the configured reward mode.
ValueFunction solve(const ExperimentConfig& cfg, const ObservedGraph& graph);

/// Full pipeline for cfg.variant. Solver or training failures end the run
/// early with `status` set; they are not thrown.
RunLog run_experiment(const ExperimentConfig& cfg, std::int64_t seed,
                      const PrecomputedAbstraction& pre = {});

/// Runs every (config, seed) job on up to `threads` workers; results keep job
/// order.
struct Job {
  ExperimentConfig cfg;
  std::int64_t seed = 0;
};
std::vector<RunLog> run_jobs(const std::vector<Job>& jobs, int threads);

/// ASRL_THREADS if set and positive, else the hardware concurrency.
int worker_count();

}  // namespace asrl
