#include "asrl/amdp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

namespace asrl {

std::string to_string(RewardMode mode) {
  return mode == RewardMode::StepPenalty ? "step_penalty" : "summed_ground_reward";
}

RewardMode parse_reward_mode(const std::string& text) {
  if (text == "step_penalty") return RewardMode::StepPenalty;
  if (text == "summed_ground_reward" || text == "summed") return RewardMode::SummedGroundReward;
  throw ConfigError("unknown reward mode '" + text + "'");
}

void Amdp::add_action(const CellIndex& from, const CellIndex& to, double reward) {
  if (from == to) throw UsageError("amdp: self-transition " + to_string(from));
  cells_.insert(from);
  cells_.insert(to);
  actions_[from][to] = reward;
}

void Amdp::add_goal(const CellIndex& g) {
  goals_.insert(g);
  cells_.insert(g);
}

const std::map<CellIndex, double>& Amdp::actions(const CellIndex& c) const {
  static const std::map<CellIndex, double> kNone;
  auto it = actions_.find(c);
  return it == actions_.end() ? kNone : it->second;
}

std::size_t Amdp::action_count() const {
  std::size_t n = 0;
  for (const auto& [_, succ] : actions_) n += succ.size();
  return n;
}

double abstract_reward(const EdgeStats& stats, RewardMode mode) {
  return mode == RewardMode::StepPenalty ? -1.0 : stats.mean_reward();
}

Amdp build_amdp(const ObservedGraph& graph, RewardMode mode, const std::set<CellIndex>& goals) {
  if (goals.empty()) throw ConfigError("build_amdp: goal set is empty");
  Amdp amdp;
  for (const auto& g : goals) amdp.add_goal(g);
  for (const auto& [edge, st] : graph.edges()) {
    amdp.add_action(edge.first, edge.second, abstract_reward(st, mode));
  }
  return amdp;
}

double ValueFunction::at(const CellIndex& c) const {
  auto it = values_.find(c);
  if (it == values_.end()) throw UsageError("value function: unknown cell " + to_string(c));
  return it->second;
}

void ValueFunction::write(std::ostream& out) const {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "# gamma " << gamma_ << '\n';
  for (const auto& [cell, v] : values_) out << to_string(cell) << " : " << v << '\n';
}

ValueFunction ValueFunction::read(std::istream& in) {
  std::map<CellIndex, double> values;
  double gamma = 1.0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      double v = 0.0;
      if (hs >> key >> v && key == "gamma") gamma = v;
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("values line " + std::to_string(lineno) + ": expected 'indices : value'");
    }
    std::string cell = line.substr(0, colon);
    cell.erase(cell.find_last_not_of(" \t") + 1);
    std::istringstream vs(line.substr(colon + 1));
    double v = 0.0;
    if (!(vs >> v)) throw ConfigError("values line " + std::to_string(lineno) + ": bad value");
    values[parse_cell(cell)] = v;
  }
  return ValueFunction(std::move(values), gamma);
}

void ValueFunction::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write(out);
}

ValueFunction ValueFunction::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read(in);
}

ValueFunction value_iteration(const Amdp& amdp, double gamma, double tolerance, int max_sweeps) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("value_iteration: gamma outside (0, 1]");
  if (!(tolerance > 0.0)) throw ConfigError("value_iteration: tolerance must be positive");

  // Dense CSR layout over the sorted cell set.
  const std::vector<CellIndex> cells(amdp.cells().begin(), amdp.cells().end());
  const auto n = static_cast<Eigen::Index>(cells.size());
  std::map<CellIndex, Eigen::Index> id;
  for (Eigen::Index i = 0; i < n; ++i) id.emplace(cells[static_cast<std::size_t>(i)], i);

  enum class Kind { Goal, DeadEnd, Interior };
  std::vector<Kind> kind(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> offsets{0};
  std::vector<Eigen::Index> succ;
  std::vector<double> reward;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& c = cells[static_cast<std::size_t>(i)];
    const auto& acts = amdp.actions(c);
    if (amdp.is_goal(c)) {
      kind[static_cast<std::size_t>(i)] = Kind::Goal;
    } else if (acts.empty()) {
      kind[static_cast<std::size_t>(i)] = Kind::DeadEnd;
    } else {
      kind[static_cast<std::size_t>(i)] = Kind::Interior;
      for (const auto& [to, r] : acts) {
        succ.push_back(id.at(to));
        reward.push_back(r);
      }
    }
    offsets.push_back(static_cast<Eigen::Index>(succ.size()));
  }

  const bool has_dead_end = std::find(kind.begin(), kind.end(), Kind::DeadEnd) != kind.end();
  if (has_dead_end && gamma >= 1.0) {
    throw ConfigError("value_iteration: dead-end cells require gamma < 1");
  }
  const double dead_end_value = has_dead_end ? -1.0 / (1.0 - gamma) : 0.0;

  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (kind[static_cast<std::size_t>(i)] == Kind::DeadEnd) v[i] = dead_end_value;
  }
  Eigen::VectorXd next = v;

  double residual = std::numeric_limits<double>::infinity();
  int sweep = 0;
  while (sweep < max_sweeps) {
    ++sweep;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (kind[static_cast<std::size_t>(i)] != Kind::Interior) continue;
      double best = -std::numeric_limits<double>::infinity();
      for (Eigen::Index k = offsets[static_cast<std::size_t>(i)];
           k < offsets[static_cast<std::size_t>(i) + 1]; ++k) {
        best = std::max(best, reward[static_cast<std::size_t>(k)] +
                                  gamma * v[succ[static_cast<std::size_t>(k)]]);
      }
      next[i] = best;
    }
    residual = (next - v).cwiseAbs().maxCoeff();
    v.swap(next);
    if (!std::isfinite(residual)) break;
    if (residual < tolerance) break;
  }
  if (!(residual < tolerance)) {
    std::ostringstream msg;
    msg << "value_iteration: no convergence after " << sweep << " sweeps (residual " << residual
        << ")";
    throw NonConvergence(msg.str(), residual);
  }

  std::map<CellIndex, double> values;
  for (Eigen::Index i = 0; i < n; ++i) values.emplace_hint(values.end(), cells[static_cast<std::size_t>(i)], v[i]);
  ValueFunction vf(std::move(values), gamma);
  vf.sweeps = sweep;
  vf.residual = residual;
  return vf;
}

LookupResult lookup_value(const ValueFunction& vf, const CellIndex& cell, const Amdp& amdp) {
  if (amdp.is_goal(cell)) return {0.0, false};
  auto it = vf.values().find(cell);
  if (it != vf.values().end()) return {it->second, false};
  return {0.0, true};
}

ValueFunction resolve(Amdp& amdp, const std::set<CellIndex>& new_cells, double gamma,
                      double tolerance, int max_sweeps) {
  for (const auto& c : new_cells) amdp.add_cell(c);
  return value_iteration(amdp, gamma, tolerance, max_sweeps);
}

}  // namespace asrl
