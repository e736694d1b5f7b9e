#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sel/learn/tree.hpp"

namespace sel::learn {

/// Squared-loss gradient boosting: init_value + learning_rate * sum of trees.
class GbtModel {
 public:
  GbtModel() = default;
  GbtModel(std::vector<std::string> feature_names, double init_value, double learning_rate,
           std::vector<RegressionTree> trees, std::vector<double> train_loss = {})
      : feature_names_(std::move(feature_names)),
        init_value_(init_value),
        learning_rate_(learning_rate),
        trees_(std::move(trees)),
        train_loss_(std::move(train_loss)) {}

  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  double init_value() const noexcept { return init_value_; }
  double learning_rate() const noexcept { return learning_rate_; }
  const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
  /// Training MSE after initialisation (entry 0) and after each round.
  const std::vector<double>& train_loss() const noexcept { return train_loss_; }

  double predict_row(std::span<const double> x) const noexcept {
    double sum = 0.0;
    for (const auto& t : trees_) sum += t.predict_row(x);
    return init_value_ + learning_rate_ * sum;
  }

  friend bool operator==(const GbtModel& a, const GbtModel& b) {
    return a.feature_names_ == b.feature_names_ && a.init_value_ == b.init_value_ &&
           a.learning_rate_ == b.learning_rate_ && a.trees_ == b.trees_;
  }

 private:
  std::vector<std::string> feature_names_;
  double init_value_ = 0.0;
  double learning_rate_ = 0.1;
  std::vector<RegressionTree> trees_;
  std::vector<double> train_loss_;
};

struct GbtOptions {
  std::size_t min_leaf = 1;
};

inline GbtModel fit_gbt(const core::Dataset& ds, std::size_t n_trees, std::size_t max_depth, double learning_rate,
                        std::uint64_t seed, const GbtOptions& opt = {}) {
  (void)seed;  // boosting without row or column subsampling draws no randomness
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) fail(ErrorCode::InvalidRate, "learning rate must lie in (0, 1]");
  if (ds.n_rows() < 2) fail(ErrorCode::TooFewRows, "gbt needs at least 2 rows");
  const auto names = ds.feature_names();
  if (names.empty()) fail(ErrorCode::MissingFeature, "dataset has no feature columns");

  const auto X = FeatureMatrix::from(ds, names);
  const auto y = ds.target_values();
  const std::size_t n = ds.n_rows();
  double init = 0.0;
  for (double v : y) init += v;
  init /= static_cast<double>(n);

  std::vector<double> pred(n, init), residual(n);
  auto mse = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      residual[i] = y[i] - pred[i];
      s += residual[i] * residual[i];
    }
    return s / static_cast<double>(n);
  };
  std::vector<double> loss{mse()};

  const auto index = n_trees > 0 ? detail::SortedIndex::build(X) : detail::SortedIndex{};
  std::vector<RegressionTree> trees;
  trees.reserve(n_trees);
  std::vector<double> row;
  for (std::size_t t = 0; t < n_trees; ++t) {
    detail::TreeBuilder builder(X, residual, {max_depth, opt.min_leaf, 0}, nullptr);
    RegressionTree tree(names, builder.build(index.by_feature));
    for (std::size_t i = 0; i < n; ++i) {
      X.row(i, row);
      pred[i] += learning_rate * tree.predict_row(row);
    }
    trees.push_back(std::move(tree));
    loss.push_back(mse());
  }
  return GbtModel(names, init, learning_rate, std::move(trees), std::move(loss));
}

}  // namespace sel::learn
