#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sel/core/dataset.hpp"
#include "sel/core/error.hpp"
#include "sel/core/rng.hpp"

namespace sel::learn {

/// Flattened tree node. `feature < 0` marks a leaf; children index into the
/// owning tree's node array. Rows with x[feature] <= threshold go left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double value = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class RegressionTree {
 public:
  RegressionTree() = default;
  RegressionTree(std::vector<std::string> feature_names, std::vector<TreeNode> nodes)
      : feature_names_(std::move(feature_names)), nodes_(std::move(nodes)) {}

  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }

  double predict_row(std::span<const double> x) const noexcept {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf())
      i = x[static_cast<std::size_t>(nodes_[i].feature)] <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right;
    return nodes_[i].value;
  }

  std::size_t depth() const noexcept { return nodes_.empty() ? 0 : depth_from(0); }

  /// Features used by at least one split.
  std::vector<int> used_features() const {
    std::vector<int> used;
    for (const auto& n : nodes_)
      if (!n.is_leaf()) used.push_back(n.feature);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    return used;
  }

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;

 private:
  std::size_t depth_from(std::size_t i) const noexcept {
    if (nodes_[i].is_leaf()) return 0;
    return 1 + std::max(depth_from(nodes_[i].left), depth_from(nodes_[i].right));
  }

  std::vector<std::string> feature_names_;
  std::vector<TreeNode> nodes_;
};

/// Column-major feature block resolved from a dataset by name.
struct FeatureMatrix {
  std::vector<std::string> names;
  std::vector<std::span<const double>> columns;
  std::size_t n_rows = 0;

  static FeatureMatrix from(const core::Dataset& ds, const std::vector<std::string>& names) {
    FeatureMatrix m;
    m.names = names;
    m.n_rows = ds.n_rows();
    for (const auto& n : names) {
      if (!ds.has_column(n)) fail(ErrorCode::MissingFeature, "dataset lacks feature '" + n + "'");
      m.columns.push_back(ds.values(n));
    }
    return m;
  }

  void row(std::size_t r, std::vector<double>& out) const {
    out.resize(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) out[j] = columns[j][r];
  }
};

struct TreeParams {
  std::size_t max_depth = 3;
  std::size_t min_leaf = 1;
  std::size_t mtry = 0;  // 0: consider every feature at every split
};

namespace detail {

using RowList = std::vector<std::uint32_t>;

/// Rows sorted by each feature, ties kept in row order. Built once per
/// dataset and reused by every tree fitted on it.
struct SortedIndex {
  std::vector<RowList> by_feature;

  static SortedIndex build(const FeatureMatrix& X) {
    SortedIndex idx;
    idx.by_feature.resize(X.columns.size());
    for (std::size_t j = 0; j < X.columns.size(); ++j) {
      auto& order = idx.by_feature[j];
      order.resize(X.n_rows);
      std::iota(order.begin(), order.end(), std::uint32_t{0});
      const auto col = X.columns[j];
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return col[a] < col[b]; });
    }
    return idx;
  }

  /// Sorted lists for a multiset of rows given as per-row multiplicities.
  std::vector<RowList> expand(std::span<const std::uint32_t> counts) const {
    std::vector<RowList> out(by_feature.size());
    for (std::size_t j = 0; j < by_feature.size(); ++j)
      for (auto r : by_feature[j])
        for (std::uint32_t c = 0; c < counts[r]; ++c) out[j].push_back(r);
    return out;
  }
};

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Split candidates within this relative distance of the best gain count as ties.
inline constexpr double kTieTolerance = 1e-10;

/// Best exact split of one node; ties go to the lowest feature index, then
/// the lowest threshold.
inline SplitChoice best_split(const FeatureMatrix& X, std::span<const double> y,
                              const std::vector<RowList>& sorted, std::span<const std::size_t> features,
                              std::size_t min_leaf) {
  const auto& any = sorted.front();
  const std::size_t n = any.size();
  double mean = 0.0;
  for (auto r : any) mean += y[r];
  mean /= static_cast<double>(n);
  double sse = 0.0, scale = 0.0;
  for (auto r : any) {
    sse += (y[r] - mean) * (y[r] - mean);
    scale += y[r] * y[r];
  }

  SplitChoice best;
  if (n < 2 * min_leaf || !(sse > 1e-14 * scale)) return best;

  for (auto j : features) {
    const auto& rows = sorted[j];
    const auto col = X.columns[j];
    double left_sum = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      left_sum += y[rows[k]] - mean;
      const double a = col[rows[k]], b = col[rows[k + 1]];
      if (!(a < b)) continue;
      const std::size_t n_left = k + 1, n_right = n - n_left;
      if (n_left < min_leaf || n_right < min_leaf) continue;
      // with centred targets: gain = S_L^2 / n_L + S_R^2 / n_R, S_R = -S_L
      const double gain = left_sum * left_sum * (1.0 / static_cast<double>(n_left) + 1.0 / static_cast<double>(n_right));
      if (gain > best.gain * (1.0 + kTieTolerance) && gain > 1e-14 * scale) {
        double thr = a + (b - a) / 2.0;
        if (thr >= b) thr = a;
        best = {static_cast<int>(j), thr, gain};
      }
    }
  }
  return best;
}

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& X, std::span<const double> y, const TreeParams& params, core::RngStream* rng)
      : X_(X), y_(y), params_(params), rng_(rng) {
    all_features_.resize(X.columns.size());
    std::iota(all_features_.begin(), all_features_.end(), std::size_t{0});
  }

  std::vector<TreeNode> build(std::vector<RowList> sorted) {
    nodes_.clear();
    grow(std::move(sorted), 0);
    return std::move(nodes_);
  }

 private:
  std::vector<std::size_t> candidate_features() {
    const std::size_t p = all_features_.size();
    if (params_.mtry == 0 || params_.mtry >= p || rng_ == nullptr) return all_features_;
    std::vector<std::size_t> pool = all_features_;
    for (std::size_t i = 0; i < params_.mtry; ++i) std::swap(pool[i], pool[i + rng_->below(p - i)]);
    pool.resize(params_.mtry);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  std::uint32_t grow(std::vector<RowList> sorted, std::size_t depth) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    const auto& rows = sorted.front();
    double sum = 0.0;
    for (auto r : rows) sum += y_[r];
    nodes_[id].value = sum / static_cast<double>(rows.size());

    if (depth >= params_.max_depth) return id;
    const auto features = candidate_features();
    const auto split = best_split(X_, y_, sorted, features, params_.min_leaf);
    if (split.feature < 0) return id;

    const auto col = X_.columns[static_cast<std::size_t>(split.feature)];
    std::vector<RowList> left(sorted.size()), right(sorted.size());
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      for (auto r : sorted[j]) (col[r] <= split.threshold ? left[j] : right[j]).push_back(r);
      RowList().swap(sorted[j]);
    }
    const auto l = grow(std::move(left), depth + 1);
    const auto r = grow(std::move(right), depth + 1);
    auto& node = nodes_[id];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  const FeatureMatrix& X_;
  std::span<const double> y_;
  TreeParams params_;
  core::RngStream* rng_;
  std::vector<std::size_t> all_features_;
  std::vector<TreeNode> nodes_;
};

}  // namespace detail

/// Greedy exact-split CART regression tree minimising squared error, with
/// the mean target of each leaf as its value.
inline RegressionTree fit_tree(const core::Dataset& ds, std::size_t max_depth, std::size_t min_leaf = 1) {
  if (min_leaf < 1) fail(ErrorCode::InvalidArgument, "min_leaf must be at least 1");
  if (ds.n_rows() < 2 * min_leaf) fail(ErrorCode::TooFewRows, "fit_tree needs at least 2 * min_leaf rows");
  const auto names = ds.feature_names();
  if (names.empty()) fail(ErrorCode::MissingFeature, "dataset has no feature columns");
  const auto X = FeatureMatrix::from(ds, names);
  const auto y = ds.target_values();
  const auto index = detail::SortedIndex::build(X);
  detail::TreeBuilder builder(X, y, {max_depth, min_leaf, 0}, nullptr);
  return RegressionTree(names, builder.build(index.by_feature));
}

}  // namespace sel::learn
