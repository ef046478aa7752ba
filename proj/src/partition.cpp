#include "asrl/partition.hpp"

#include <cmath>
#include <sstream>

namespace asrl {

std::string to_string(const CellIndex& c) {
  std::string out;
  for (std::size_t i = 0; i < c.indices.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(c.indices[i]);
  }
  return out;
}

CellIndex parse_cell(const std::string& text) {
  CellIndex c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad cell index '" + text + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw ConfigError("bad cell index '" + text + "'");
    }
    c.indices.push_back(v);
  }
  if (c.indices.empty()) throw ConfigError("empty cell index");
  return c;
}

Partitioner::Partitioner(GroundState lower, GroundState upper, std::vector<int> bins)
    : lower_(std::move(lower)), upper_(std::move(upper)), bins_(std::move(bins)) {
  if (lower_.size() != upper_.size() || lower_.size() != static_cast<Eigen::Index>(bins_.size())) {
    throw ConfigError("partitioner: lower, upper and bins must have equal length");
  }
  if (bins_.empty()) throw ConfigError("partitioner: zero dimensions");
  for (int d = 0; d < dims(); ++d) {
    if (!(lower_[d] < upper_[d]) || !std::isfinite(lower_[d]) || !std::isfinite(upper_[d])) {
      throw ConfigError("partitioner: dimension " + std::to_string(d) + " needs lower < upper");
    }
    if (bins_[d] < 1) {
      throw ConfigError("partitioner: dimension " + std::to_string(d) + " needs bins >= 1");
    }
    cell_count_ *= bins_[d];
  }
}

CellIndex Partitioner::cell(const GroundState& s) const {
  if (s.size() != lower_.size()) {
    throw UsageError("partitioner: state has " + std::to_string(s.size()) + " dims, expected " +
                     std::to_string(lower_.size()));
  }
  CellIndex c;
  c.indices.resize(bins_.size());
  for (int d = 0; d < dims(); ++d) {
    const double u = (s[d] - lower_[d]) / (upper_[d] - lower_[d]);
    double idx = std::floor(u * bins_[d]);
    if (!(idx >= 0.0)) idx = 0.0;  // also catches NaN
    if (idx > bins_[d] - 1) idx = bins_[d] - 1;
    c.indices[d] = static_cast<int>(idx);
  }
  return c;
}

GroundState Partitioner::center(const CellIndex& c) const {
  GroundState s(dims());
  for (int d = 0; d < dims(); ++d) {
    const double width = (upper_[d] - lower_[d]) / bins_[d];
    s[d] = lower_[d] + (c.indices[d] + 0.5) * width;
  }
  return s;
}

std::int64_t Partitioner::flat(const CellIndex& c) const {
  std::int64_t index = 0;
  for (int d = 0; d < dims(); ++d) index = index * bins_[d] + c.indices[d];
  return index;
}

CellIndex Partitioner::unflat(std::int64_t index) const {
  CellIndex c;
  c.indices.resize(bins_.size());
  for (int d = dims() - 1; d >= 0; --d) {
    c.indices[d] = static_cast<int>(index % bins_[d]);
    index /= bins_[d];
  }
  return c;
}

Partitioner make_partitioner(const std::vector<double>& lower, const std::vector<double>& upper,
                             const std::vector<int>& bins) {
  if (lower.size() != upper.size()) {
    throw ConfigError("partitioner: lower and upper must have equal length");
  }
  GroundState lo = Eigen::Map<const GroundState>(lower.data(), static_cast<Eigen::Index>(lower.size()));
  GroundState hi = Eigen::Map<const GroundState>(upper.data(), static_cast<Eigen::Index>(upper.size()));
  return Partitioner(std::move(lo), std::move(hi), bins);
}

std::set<CellIndex> cell_of_goal(const Partitioner& p,
                                 const std::function<bool(const GroundState&)>& goal,
                                 int samples_per_cell) {
  std::set<CellIndex> goals;
  for (std::int64_t i = 0; i < p.cell_count(); ++i) {
    CellIndex c = p.unflat(i);
    bool hit = goal(p.center(c));
    if (!hit && samples_per_cell > 0) {
      // Regular sub-grid of samples_per_cell points per dimension.
      const int dims = p.dims();
      std::int64_t total = 1;
      for (int d = 0; d < dims; ++d) total *= samples_per_cell;
      GroundState s(dims);
      for (std::int64_t k = 0; k < total && !hit; ++k) {
        std::int64_t rem = k;
        for (int d = 0; d < dims; ++d) {
          const int j = static_cast<int>(rem % samples_per_cell);
          rem /= samples_per_cell;
          const double width = (p.upper()[d] - p.lower()[d]) / p.bins()[d];
          s[d] = p.lower()[d] + (c.indices[d] + (j + 0.5) / samples_per_cell) * width;
        }
        hit = goal(s);
      }
    }
    if (hit) goals.insert(std::move(c));
  }
  return goals;
}

}  // namespace asrl
