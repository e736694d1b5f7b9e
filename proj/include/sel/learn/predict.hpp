#pragma once

#include <cmath>
#include <concepts>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sel/core/dataset.hpp"
#include "sel/learn/forest.hpp"
#include "sel/learn/gbt.hpp"
#include "sel/learn/lasso.hpp"
#include "sel/learn/tree.hpp"

namespace sel::learn {

/// Anything that predicts from a row laid out in its own feature order.
template <typename M>
concept RowModel = requires(const M& m, std::span<const double> x) {
  { m.feature_names() } -> std::convertible_to<const std::vector<std::string>&>;
  { m.predict_row(x) } -> std::convertible_to<double>;
};

using AnyModel = std::variant<RegressionTree, ForestModel, GbtModel, LassoModel>;

/// Predictions for every row; features are looked up by name, so column
/// order and extra columns in `ds` do not matter.
template <RowModel M>
std::vector<double> predict(const M& model, const core::Dataset& ds) {
  const auto X = FeatureMatrix::from(ds, model.feature_names());
  std::vector<double> out(ds.n_rows());
  std::vector<double> row;
  for (std::size_t i = 0; i < ds.n_rows(); ++i) {
    X.row(i, row);
    out[i] = model.predict_row(row);
  }
  return out;
}

inline std::vector<double> predict(const AnyModel& model, const core::Dataset& ds) {
  return std::visit([&](const auto& m) { return predict(m, ds); }, model);
}

template <RowModel M>
const std::vector<std::string>& feature_names(const M& model) {
  return model.feature_names();
}

inline const std::vector<std::string>& feature_names(const AnyModel& model) {
  return std::visit([](const auto& m) -> const std::vector<std::string>& { return m.feature_names(); }, model);
}

inline double rmse(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size()) fail(ErrorCode::LengthMismatch, "rmse inputs differ in length");
  if (y_true.empty()) fail(ErrorCode::EmptyInput, "rmse of empty vectors");
  double ss = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) ss += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
  return std::sqrt(ss / static_cast<double>(y_true.size()));
}

}  // namespace sel::learn
