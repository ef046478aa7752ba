#include "asrl/exploration.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

namespace asrl {

std::int64_t VisitCounts::count(const CellIndex& cell, int action) const {
  auto it = counts_.find(cell);
  if (it == counts_.end() || action >= static_cast<int>(it->second.size())) return 0;
  return it->second[static_cast<std::size_t>(action)];
}

void VisitCounts::increment(const CellIndex& cell, int action) {
  auto& row = counts_[cell];
  if (action >= static_cast<int>(row.size())) row.resize(static_cast<std::size_t>(action) + 1, 0);
  ++row[static_cast<std::size_t>(action)];
}

void ObservedGraph::add(const CellIndex& from, const CellIndex& to, double reward_sum) {
  if (from == to) throw UsageError("observed graph: self-edge " + to_string(from));
  auto& e = edges_[{from, to}];
  e.reward_sum += reward_sum;
  ++e.count;
}

void ObservedGraph::merge(const ObservedGraph& other) {
  for (const auto& [edge, st] : other.edges_) {
    auto& e = edges_[edge];
    e.reward_sum += st.reward_sum;
    e.count += st.count;
  }
}

bool ObservedGraph::contains(const CellIndex& from, const CellIndex& to) const {
  return edges_.count({from, to}) != 0;
}

const EdgeStats& ObservedGraph::stats(const CellIndex& from, const CellIndex& to) const {
  auto it = edges_.find({from, to});
  if (it == edges_.end()) {
    throw UsageError("observed graph: no edge " + to_string(from) + " -> " + to_string(to));
  }
  return it->second;
}

void ObservedGraph::write(std::ostream& out) const {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& [edge, st] : edges_) {
    out << to_string(edge.first) << " -> " << to_string(edge.second) << " : " << st.reward_sum
        << ' ' << st.count << '\n';
  }
}

ObservedGraph ObservedGraph::read(std::istream& in) {
  ObservedGraph g;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto arrow = line.find("->");
    const auto colon = line.find(':');
    if (arrow == std::string::npos || colon == std::string::npos || colon < arrow) {
      throw ConfigError("graph line " + std::to_string(lineno) + ": expected 't -> t' : sum count'");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    CellIndex from = parse_cell(trim(line.substr(0, arrow)));
    CellIndex to = parse_cell(trim(line.substr(arrow + 2, colon - arrow - 2)));
    std::istringstream stats(line.substr(colon + 1));
    EdgeStats st;
    if (!(stats >> st.reward_sum >> st.count) || st.count < 1) {
      throw ConfigError("graph line " + std::to_string(lineno) + ": bad edge statistics");
    }
    if (from == to) throw ConfigError("graph line " + std::to_string(lineno) + ": self-edge");
    auto& e = g.edges_[{std::move(from), std::move(to)}];
    e.reward_sum += st.reward_sum;
    e.count += st.count;
  }
  return g;
}

void ObservedGraph::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write(out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

ObservedGraph ObservedGraph::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read(in);
}

int select_exploration_action(const VisitCounts& counts, const CellIndex& exp_cell, int n_actions,
                              double epsilon, Rng& rng) {
  if (n_actions < 1) throw UsageError("select_exploration_action: n_actions must be >= 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw UsageError("select_exploration_action: epsilon outside [0, 1]");
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    return std::uniform_int_distribution<int>(0, n_actions - 1)(rng);
  }
  std::vector<int> least;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (int a = 0; a < n_actions; ++a) {
    const auto c = counts.count(exp_cell, a);
    if (c < best) {
      best = c;
      least.assign(1, a);
    } else if (c == best) {
      least.push_back(a);
    }
  }
  if (least.size() == 1) return least.front();
  return least[std::uniform_int_distribution<std::size_t>(0, least.size() - 1)(rng)];
}

void record_abstract_transition(ObservedGraph& graph, const Partitioner& amdp_z,
                                std::span<const Transition> segment) {
  if (segment.empty()) return;
  const CellIndex from = amdp_z.cell(segment.front().state);
  const CellIndex to = amdp_z.cell(segment.back().next_state);
  if (from == to) return;
  double sum = 0.0;
  for (const auto& t : segment) sum += t.reward;
  graph.add(from, to, sum);
}

void AbstractTransitionTracker::reset(const GroundState& s) {
  current_ = z_->cell(s);
  segment_reward_ = 0.0;
}

std::optional<AbstractTransitionTracker::Crossing> AbstractTransitionTracker::observe(
    const Transition& t) {
  segment_reward_ += t.reward;
  CellIndex next = z_->cell(t.next_state);
  if (next == current_) return std::nullopt;
  Crossing c{std::move(current_), next, segment_reward_};
  current_ = std::move(next);
  segment_reward_ = 0.0;
  return c;
}

ExplorationResult run_exploration_phase(Environment& env, const Partitioner& amdp_z,
                                        const Partitioner& exp_z, int episodes, double epsilon,
                                        Rng& rng) {
  if (episodes < 1) throw UsageError("run_exploration_phase: episodes must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  ExplorationResult result;
  VisitCounts counts;
  const int n_actions = env.action_count();

  for (int ep = 0; ep < episodes; ++ep) {
    GroundState s = env.reset(rng);
    std::optional<CellIndex> held_cell;
    int held_action = 0;
    std::vector<Transition> segment;
    EpisodeStats stats;
    while (true) {
      CellIndex exp_cell = exp_z.cell(s);
      if (!held_cell || *held_cell != exp_cell) {
        held_action = select_exploration_action(counts, exp_cell, n_actions, epsilon, rng);
        counts.increment(exp_cell, held_action);
        held_cell = std::move(exp_cell);
      }
      Transition t = env.step(held_action, rng);
      stats.ground_reward += t.reward;
      ++stats.steps;
      const bool crossed = amdp_z.cell(t.state) != amdp_z.cell(t.next_state);
      s = t.next_state;
      const bool terminal = t.terminal;
      segment.push_back(std::move(t));
      if (crossed) {
        record_abstract_transition(result.graph, amdp_z, segment);
        segment.clear();
      }
      if (terminal) break;
    }
    stats.elapsed = std::chrono::steady_clock::now() - start;
    result.episodes.push_back(stats);
  }
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

}  // namespace asrl
