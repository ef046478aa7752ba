#include "asrl/curves.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace asrl {

std::vector<double> moving_average(const std::vector<double>& values, int window) {
  if (window < 1) throw UsageError("moving_average: window must be >= 1");
  const auto w = static_cast<std::size_t>(window);
  std::vector<double> out(values);
  for (std::size_t i = w; i < values.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = i + 1 - w; k <= i; ++k) s += values[k];
    out[i] = s / static_cast<double>(w);
  }
  return out;
}

MeanCi mean_ci(const std::vector<double>& samples) {
  if (samples.empty()) throw UsageError("mean_ci: no samples");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= n;
  if (samples.size() < 2) return {mean, std::nullopt, std::nullopt};
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double half = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return {mean, mean - half, mean + half};
}

CurveData aggregate(const std::vector<RunLog>& logs, const AggregateOptions& opts) {
  if (opts.window < 1) throw UsageError("aggregate: window must be >= 1");
  CurveData curve;
  curve.axis = opts.axis;
  if (logs.empty()) return curve;
  curve.variant = to_string(logs.front().variant);

  if (opts.axis == CurveAxis::Episode) {
    std::vector<std::vector<double>> smoothed;
    std::size_t len = std::numeric_limits<std::size_t>::max();
    for (const auto& log : logs) {
      std::vector<double> rewards;
      for (const auto& e : log.episodes) {
        if (e.phase == Phase::Training) rewards.push_back(e.ground_reward);
      }
      smoothed.push_back(moving_average(rewards, opts.window));
      len = std::min(len, rewards.size());
    }
    for (std::size_t i = 0; i < len; ++i) {
      std::vector<double> at;
      for (const auto& s : smoothed) at.push_back(s[i]);
      const auto m = mean_ci(at);
      curve.points.push_back({static_cast<double>(i), m.mean, m.low, m.high});
    }
    return curve;
  }

  double end = std::numeric_limits<double>::infinity();
  for (const auto& log : logs) end = std::min(end, log.end_time_s());
  if (opts.end_time) end = std::min(end, *opts.end_time);
  if (!(end > 0.0) || opts.grid_points < 1) return curve;

  struct Series {
    std::vector<double> time;
    std::vector<double> value;
  };
  std::vector<Series> series;
  for (const auto& log : logs) {
    Series s;
    std::vector<double> rewards;
    for (const auto& e : log.episodes) {
      s.time.push_back(e.wall_time_s);
      rewards.push_back(e.ground_reward);
    }
    s.value = moving_average(rewards, opts.window);
    series.push_back(std::move(s));
  }
  for (int k = 1; k <= opts.grid_points; ++k) {
    const double t = end * static_cast<double>(k) / opts.grid_points;
    std::vector<double> at;
    for (const auto& s : series) {
      // Most recent episode finished at or before t.
      auto it = std::upper_bound(s.time.begin(), s.time.end(), t);
      if (it == s.time.begin()) break;
      at.push_back(s.value[static_cast<std::size_t>(std::distance(s.time.begin(), it) - 1)]);
    }
    if (at.size() != series.size()) continue;
    const auto m = mean_ci(at);
    curve.points.push_back({t, m.mean, m.low, m.high});
  }
  return curve;
}

void emit(const CurveData& curve, std::ostream& out) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << (curve.axis == CurveAxis::Time ? "time_s" : "episode")
      << ",mean_reward,ci_low,ci_high,variant\n";
  for (const auto& p : curve.points) {
    out << p.x << ',' << p.mean << ',';
    if (p.ci_low) out << *p.ci_low;
    out << ',';
    if (p.ci_high) out << *p.ci_high;
    out << ',' << curve.variant << '\n';
  }
}

void emit(const CurveData& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  emit(curve, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

CurveData parse_curve(std::istream& in) {
  CurveData curve;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("curve: empty file");
  if (line.rfind("time_s,", 0) == 0) {
    curve.axis = CurveAxis::Time;
  } else if (line.rfind("episode,", 0) == 0) {
    curve.axis = CurveAxis::Episode;
  } else {
    throw ConfigError("curve: unexpected header '" + line + "'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      f.push_back(line.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (f.size() != 5) throw ConfigError("curve: expected 5 fields in '" + line + "'");
    CurvePoint p;
    p.x = std::stod(f[0]);
    p.mean = std::stod(f[1]);
    if (!f[2].empty()) p.ci_low = std::stod(f[2]);
    if (!f[3].empty()) p.ci_high = std::stod(f[3]);
    curve.variant = f[4];
    curve.points.push_back(p);
  }
  return curve;
}

CurveData load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return parse_curve(in);
}

}  // namespace asrl
