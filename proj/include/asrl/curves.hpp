#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "asrl/experiment.hpp"

namespace asrl {

inline constexpr int kSmoothingWindow = 50;

enum class CurveAxis {
  Time,     // elapsed seconds, exploration included
  Episode,  // training episode index, exploration episodes offset away
};

struct CurvePoint {
  double x = 0.0;
  double mean = 0.0;
  std::optional<double> ci_low;  // absent with fewer than two runs
  std::optional<double> ci_high;

  bool operator==(const CurvePoint&) const = default;
};

struct CurveData {
  CurveAxis axis = CurveAxis::Time;
  std::string variant;
  std::vector<CurvePoint> points;

  bool operator==(const CurveData&) const = default;
};

/// Entries before `window` are passed through; later entries are the mean of
/// the trailing `window` values.
std::vector<double> moving_average(const std::vector<double>& values, int window);

struct MeanCi {
  double mean;
  std::optional<double> low;
  std::optional<double> high;
};

/// Mean and normal-approximation 95% interval (mean +- 1.96 standard errors).
MeanCi mean_ci(const std::vector<double>& samples);

struct AggregateOptions {
  CurveAxis axis = CurveAxis::Time;
  int window = kSmoothingWindow;
  int grid_points = 200;
  /// Upper time limit (e.g. the shortest run across all variants). The
  /// shortest run among `logs` always applies.
  std::optional<double> end_time;
};

/// Smooths each run's ground reward, resamples onto a shared axis and reports
/// mean with 95% interval. All logs should share one variant.
CurveData aggregate(const std::vector<RunLog>& logs, const AggregateOptions& opts = {});

/// CSV: `time_s,mean_reward,ci_low,ci_high,variant` (first column `episode`
/// on the episode axis). Missing interval bounds are empty fields.
void emit(const CurveData& curve, std::ostream& out);
void emit(const CurveData& curve, const std::string& path);
CurveData parse_curve(std::istream& in);
CurveData load_curve(const std::string& path);

}  // namespace asrl
