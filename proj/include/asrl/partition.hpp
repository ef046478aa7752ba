#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "asrl/environment.hpp"

namespace asrl {

/// Grid cell in a uniform partition, one bin index per state dimension.
struct CellIndex {
  std::vector<int> indices;

  auto operator<=>(const CellIndex&) const = default;
  bool operator==(const CellIndex&) const = default;
};

struct CellIndexHash {
  std::size_t operator()(const CellIndex& c) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int i : c.indices) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(i));
      h *= 1099511628211ull;
    }
    return h;
  }
};

/// "3,17" style text form used by the cache files.
std::string to_string(const CellIndex& c);
CellIndex parse_cell(const std::string& text);

/// Uniform per-dimension binning over a bounded box (the abstraction function).
/// Bins are half-open [low, high); values outside the box clamp to the
/// boundary cell.
class Partitioner {
public:
  Partitioner(GroundState lower, GroundState upper, std::vector<int> bins);

  int dims() const { return static_cast<int>(bins_.size()); }
  const GroundState& lower() const { return lower_; }
  const GroundState& upper() const { return upper_; }
  const std::vector<int>& bins() const { return bins_; }
  std::int64_t cell_count() const { return cell_count_; }

  CellIndex cell(const GroundState& s) const;
  GroundState center(const CellIndex& c) const;

  /// Row-major linear index, last dimension fastest.
  std::int64_t flat(const CellIndex& c) const;
  CellIndex unflat(std::int64_t index) const;

private:
  GroundState lower_;
  GroundState upper_;
  std::vector<int> bins_;
  std::int64_t cell_count_ = 1;
};

Partitioner make_partitioner(const std::vector<double>& lower, const std::vector<double>& upper,
                             const std::vector<int>& bins);

inline CellIndex abstract_state(const Partitioner& p, const GroundState& s) { return p.cell(s); }

/// Cells whose center satisfies the predicate. With samples_per_cell > 0 a cell
/// also qualifies if any of that many deterministic interior points per
/// dimension (a regular sub-grid) satisfies it.
std::set<CellIndex> cell_of_goal(const Partitioner& p,
                                 const std::function<bool(const GroundState&)>& goal,
                                 int samples_per_cell = 0);

}  // namespace asrl
