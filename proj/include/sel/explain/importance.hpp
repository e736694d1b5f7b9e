#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "sel/core/csv.hpp"
#include "sel/core/rng.hpp"
#include "sel/learn/predict.hpp"

namespace sel::explain {

struct ImportanceEntry {
  std::string feature;
  double importance = 0.0;  // mean RMSE increase over shuffles
  double std_error = 0.0;   // standard error of that mean
};

struct ImportanceReport {
  std::vector<ImportanceEntry> entries;  // descending by importance
  std::size_t shuffles = 0;
  std::uint64_t seed = 0;

  /// 1-based rank of a feature, 0 if absent.
  std::size_t rank_of(const std::string& feature) const noexcept {
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (entries[i].feature == feature) return i + 1;
    return 0;
  }
};

/// Permutation importance on held-out data. Feature k of the model is
/// shuffled with stream (seed, k), so results depend on the model's feature
/// order only, never on the dataset's column order.
template <typename Model>
ImportanceReport permutation_importance(const Model& model, const core::Dataset& ds_test, std::size_t shuffles,
                                        std::uint64_t seed) {
  if (shuffles < 1) fail(ErrorCode::InvalidArgument, "shuffles must be at least 1");
  const auto& names = learn::feature_names(model);
  for (const auto& n : names)
    if (!ds_test.has_column(n)) fail(ErrorCode::MissingFeature, "test data lacks feature '" + n + "'");

  const auto y = ds_test.target_values();
  const double baseline = learn::rmse(y, learn::predict(model, ds_test));

  ImportanceReport report;
  report.shuffles = shuffles;
  report.seed = seed;
  for (std::size_t k = 0; k < names.size(); ++k) {
    core::RngStream rng(seed, k);
    const auto original = ds_test.values(names[k]);
    std::vector<double> increases;
    increases.reserve(shuffles);
    for (std::size_t s = 0; s < shuffles; ++s) {
      std::vector<double> permuted(original.begin(), original.end());
      core::shuffle(std::span<double>(permuted), rng);
      core::Dataset shuffled = ds_test;
      shuffled.set_values(names[k], std::move(permuted));
      increases.push_back(learn::rmse(y, learn::predict(model, shuffled)) - baseline);
    }
    double mean = 0.0;
    for (double d : increases) mean += d;
    mean /= static_cast<double>(shuffles);
    double se = 0.0;
    if (shuffles > 1) {
      double ss = 0.0;
      for (double d : increases) ss += (d - mean) * (d - mean);
      se = std::sqrt(ss / static_cast<double>(shuffles - 1) / static_cast<double>(shuffles));
    }
    report.entries.push_back({names[k], mean, se});
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const auto& a, const auto& b) { return a.importance > b.importance; });
  return report;
}

inline std::string importance_to_csv(const ImportanceReport& report) {
  std::ostringstream os;
  os << "feature,importance\n";
  for (const auto& e : report.entries) os << e.feature << ',' << core::format_double(e.importance) << '\n';
  return os.str();
}

}  // namespace sel::explain
