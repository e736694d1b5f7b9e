#pragma once

#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sel/core/dataset.hpp"

namespace sel::core {

struct ColumnScale {
  double mean = 0.0;
  double sd = 1.0;
};

using ScaleTable = std::map<std::string, ColumnScale, std::less<>>;

inline double mean_of(std::span<const double> xs) noexcept {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

/// Sample standard deviation (n - 1 denominator).
inline double sample_sd(std::span<const double> xs, double mean) noexcept {
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// Centers and scales every column not in `exclude` to mean 0, sd 1.
inline std::pair<Dataset, ScaleTable> standardize(const Dataset& ds, const std::set<std::string>& exclude) {
  if (ds.n_rows() < 2) fail(ErrorCode::DegenerateVariance, "standardize needs at least 2 rows");
  std::vector<Column> out;
  ScaleTable scales;
  for (const auto& c : ds.columns()) {
    if (exclude.contains(c.name)) {
      out.push_back(c);
      continue;
    }
    const double mean = mean_of(c.values);
    const double sd = sample_sd(c.values, mean);
    if (!(sd > 0.0)) fail(ErrorCode::DegenerateVariance, "column '" + c.name + "' is constant");
    Column scaled{c.name, {}, c.level};
    scaled.values.reserve(c.values.size());
    for (double x : c.values) scaled.values.push_back((x - mean) / sd);
    out.push_back(std::move(scaled));
    scales.emplace(c.name, ColumnScale{mean, sd});
  }
  return {Dataset(std::move(out), ds.target()), std::move(scales)};
}

/// Inverse of standardize for the columns listed in `scales`.
inline Dataset unstandardize(const Dataset& ds, const ScaleTable& scales) {
  std::vector<Column> out;
  for (const auto& c : ds.columns()) {
    Column restored = c;
    if (const auto it = scales.find(c.name); it != scales.end())
      for (double& x : restored.values) x = x * it->second.sd + it->second.mean;
    out.push_back(std::move(restored));
  }
  return Dataset(std::move(out), ds.target());
}

}  // namespace sel::core
