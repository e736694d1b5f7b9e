#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "sel/core/error.hpp"

namespace sel::extract {

/// Quantile of already-sorted data by linear interpolation at h = (n - 1) p.
inline double sorted_quantile(std::span<const double> sorted, double prob) noexcept {
  const double h = static_cast<double>(sorted.size() - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline std::vector<double> quantiles(std::span<const double> xs, std::span<const double> probs) {
  if (xs.empty()) fail(ErrorCode::EmptyInput, "quantiles of an empty sample");
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0 && probs[i] <= 1.0))
      fail(ErrorCode::InvalidProbability, "probability outside [0, 1]");
    if (i > 0 && probs[i] < probs[i - 1]) fail(ErrorCode::InvalidProbability, "probabilities must be sorted");
  }
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(probs.size());
  for (double p : probs) out.push_back(sorted_quantile(sorted, p));
  return out;
}

inline double quantile(std::span<const double> xs, double prob) {
  const double p[] = {prob};
  return quantiles(xs, p).front();
}

}  // namespace sel::extract
