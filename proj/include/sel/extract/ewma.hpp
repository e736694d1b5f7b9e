#pragma once

#include <span>
#include <vector>

#include "sel/core/error.hpp"

namespace sel::extract {

/// Exponentially weighted moving average path, seeded with the first value.
inline std::vector<double> ewma(std::span<const double> xs, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorCode::InvalidAlpha, "alpha must lie in (0, 1]");
  if (xs.empty()) fail(ErrorCode::EmptyInput, "ewma of an empty series");
  std::vector<double> out;
  out.reserve(xs.size());
  double s = xs.front();
  out.push_back(s);
  for (std::size_t t = 1; t < xs.size(); ++t) {
    s = alpha * xs[t] + (1.0 - alpha) * s;
    out.push_back(s);
  }
  return out;
}

/// Span convention: a window of w periods maps to alpha = 2 / (w + 1).
inline double window_to_alpha(std::size_t window) {
  if (window < 1) fail(ErrorCode::InvalidArgument, "window must be at least 1");
  return 2.0 / (static_cast<double>(window) + 1.0);
}

}  // namespace sel::extract
