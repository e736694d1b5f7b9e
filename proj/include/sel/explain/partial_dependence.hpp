#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "sel/core/csv.hpp"
#include "sel/extract/quantiles.hpp"
#include "sel/learn/predict.hpp"

namespace sel::explain {

struct PdpCurve {
  std::string feature;
  std::vector<double> grid;    // strictly ascending
  std::vector<double> values;  // mean prediction at each grid point

  /// Index of the grid point closest to `x`.
  std::size_t nearest(double x) const noexcept {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (std::abs(grid[i] - x) < std::abs(grid[best] - x)) best = i;
    return best;
  }
};

/// Grid of empirical quantiles at `grid_size` equally spaced probabilities in
/// [0.01, 0.99]; repeated quantiles collapse so the grid stays strictly ascending.
inline std::vector<double> pdp_grid(std::span<const double> xs, std::size_t grid_size) {
  if (grid_size < 2) fail(ErrorCode::InvalidArgument, "grid_size must be at least 2");
  std::vector<double> probs(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i)
    probs[i] = 0.01 + 0.98 * static_cast<double>(i) / static_cast<double>(grid_size - 1);
  auto grid = extract::quantiles(xs, probs);
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

template <typename Model>
PdpCurve partial_dependence(const Model& model, const core::Dataset& ds, const std::string& feature,
                            std::size_t grid_size) {
  if (!ds.has_column(feature)) fail(ErrorCode::MissingFeature, "no column named '" + feature + "'");
  const auto xs = ds.values(feature);
  if (std::all_of(xs.begin(), xs.end(), [&](double v) { return v == xs.front(); }))
    fail(ErrorCode::DegenerateVariance, "feature '" + feature + "' is constant");

  PdpCurve curve;
  curve.feature = feature;
  curve.grid = pdp_grid(xs, grid_size);
  core::Dataset forced = ds;
  for (double g : curve.grid) {
    forced.set_values(feature, std::vector<double>(ds.n_rows(), g));
    const auto pred = learn::predict(model, forced);
    double mean = 0.0;
    for (double v : pred) mean += v;
    curve.values.push_back(mean / static_cast<double>(pred.size()));
  }
  return curve;
}

inline std::string pdp_to_csv(const PdpCurve& curve) {
  std::ostringstream os;
  os << "grid,value\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    os << core::format_double(curve.grid[i]) << ',' << core::format_double(curve.values[i]) << '\n';
  return os.str();
}

}  // namespace sel::explain
