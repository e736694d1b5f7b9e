#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sel/learn/tree.hpp"

namespace sel::learn {

class ForestModel {
 public:
  ForestModel() = default;
  ForestModel(std::vector<std::string> feature_names, std::vector<RegressionTree> trees, std::size_t mtry,
              std::uint64_t bootstrap_seed)
      : feature_names_(std::move(feature_names)), trees_(std::move(trees)), mtry_(mtry), bootstrap_seed_(bootstrap_seed) {}

  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
  std::size_t mtry() const noexcept { return mtry_; }
  std::uint64_t bootstrap_seed() const noexcept { return bootstrap_seed_; }

  double predict_row(std::span<const double> x) const noexcept {
    double sum = 0.0;
    for (const auto& t : trees_) sum += t.predict_row(x);
    return sum / static_cast<double>(trees_.size());
  }

  friend bool operator==(const ForestModel&, const ForestModel&) = default;

 private:
  std::vector<std::string> feature_names_;
  std::vector<RegressionTree> trees_;
  std::size_t mtry_ = 1;
  std::uint64_t bootstrap_seed_ = 0;
};

struct ForestOptions {
  std::size_t min_leaf = 5;
  bool bootstrap = true;  // false only for testing the degenerate forest
};

inline std::size_t default_mtry(std::size_t n_features) noexcept {
  return std::max<std::size_t>(1, (n_features + 2) / 3);
}

/// Random forest: each tree grows on a bootstrap resample of size n and
/// draws `mtry` candidate features per split. Tree t uses stream (seed, t).
inline ForestModel fit_forest(const core::Dataset& ds, std::size_t n_trees, std::size_t mtry, std::size_t max_depth,
                              std::uint64_t seed, const ForestOptions& opt = {}) {
  const auto names = ds.feature_names();
  if (mtry < 1 || mtry > names.size())
    fail(ErrorCode::InvalidMtry, "mtry must lie in [1, " + std::to_string(names.size()) + "]");
  if (n_trees < 1) fail(ErrorCode::InvalidArgument, "forest needs at least one tree");
  if (ds.n_rows() < 2) fail(ErrorCode::TooFewRows, "forest needs at least 2 rows");

  const auto X = FeatureMatrix::from(ds, names);
  const auto y = ds.target_values();
  const auto index = detail::SortedIndex::build(X);
  const std::size_t n = ds.n_rows();

  std::vector<RegressionTree> trees;
  trees.reserve(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    core::RngStream rng(seed, t);
    std::vector<std::uint32_t> counts(n, opt.bootstrap ? 0 : 1);
    if (opt.bootstrap)
      for (std::size_t i = 0; i < n; ++i) ++counts[rng.below(n)];
    detail::TreeBuilder builder(X, y, {max_depth, opt.min_leaf, mtry}, &rng);
    trees.emplace_back(names, builder.build(opt.bootstrap ? index.expand(counts) : index.by_feature));
  }
  return ForestModel(names, std::move(trees), mtry, seed);
}

}  // namespace sel::learn
