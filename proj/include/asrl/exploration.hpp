#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "asrl/environment.hpp"
#include "asrl/partition.hpp"

namespace asrl {

/// Per (exploration cell, action) visit counts; absent entries read as zero.
class VisitCounts {
public:
  std::int64_t count(const CellIndex& cell, int action) const;
  void increment(const CellIndex& cell, int action);

private:
  std::unordered_map<CellIndex, std::vector<std::int64_t>, CellIndexHash> counts_;
};

struct EdgeStats {
  double reward_sum = 0.0;  // summed ground reward over all observed segments
  std::int64_t count = 0;

  double mean_reward() const { return reward_sum / static_cast<double>(count); }
  bool operator==(const EdgeStats&) const = default;
};

using Edge = std::pair<CellIndex, CellIndex>;

/// Abstract transitions observed between AMDP cells. Self-edges are never
/// stored and every stored edge has count >= 1.
class ObservedGraph {
public:
  void add(const CellIndex& from, const CellIndex& to, double reward_sum);
  void merge(const ObservedGraph& other);

  bool empty() const { return edges_.empty(); }
  std::size_t size() const { return edges_.size(); }
  bool contains(const CellIndex& from, const CellIndex& to) const;
  const EdgeStats& stats(const CellIndex& from, const CellIndex& to) const;
  const std::map<Edge, EdgeStats>& edges() const { return edges_; }

  /// One edge per line: `t -> t' : reward_sum count`, indices comma separated.
  void write(std::ostream& out) const;
  static ObservedGraph read(std::istream& in);
  void save(const std::string& path) const;
  static ObservedGraph load(const std::string& path);

  bool operator==(const ObservedGraph&) const = default;

private:
  std::map<Edge, EdgeStats> edges_;
};

/// Least-visited action with probability 1 - epsilon (ties uniform), otherwise
/// a uniform action.
int select_exploration_action(const VisitCounts& counts, const CellIndex& exp_cell, int n_actions,
                              double epsilon, Rng& rng);

/// Records the segment's abstract transition, if its first state and last
/// next-state fall in different AMDP cells.
void record_abstract_transition(ObservedGraph& graph, const Partitioner& amdp_z,
                                std::span<const Transition> segment);

/// Streams transitions and reports each AMDP cell change along with the
/// ground reward summed since the previous cell was entered.
class AbstractTransitionTracker {
public:
  struct Crossing {
    CellIndex from;
    CellIndex to;
    double reward_sum;
  };

  explicit AbstractTransitionTracker(const Partitioner& z) : z_(&z) {}

  /// Call at episode start.
  void reset(const GroundState& s);
  std::optional<Crossing> observe(const Transition& t);

  const CellIndex& current() const { return current_; }

private:
  const Partitioner* z_;
  CellIndex current_;
  double segment_reward_ = 0.0;
};

struct EpisodeStats {
  std::size_t steps = 0;
  double ground_reward = 0.0;
  std::chrono::duration<double> elapsed{0.0};  // since phase start, at episode end
};

struct ExplorationResult {
  ObservedGraph graph;
  std::vector<EpisodeStats> episodes;
  std::chrono::duration<double> elapsed{0.0};
};

/// Pure exploration: no learner is involved. An action is chosen each time the
/// agent enters an exploration cell (and at episode start) and is held until
/// the exploration cell changes. Abstract transitions are recorded on the AMDP
/// partition.
ExplorationResult run_exploration_phase(Environment& env, const Partitioner& amdp_z,
                                        const Partitioner& exp_z, int episodes, double epsilon,
                                        Rng& rng);

}  // namespace asrl
