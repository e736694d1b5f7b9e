#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "sel/core/dataset.hpp"
#include "sel/core/rng.hpp"

namespace sel::core {

struct SplitSpec {
  double train_fraction = 0.7;
  std::uint64_t shuffle_seed = 42;
};

struct RowPartition {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Shuffled row partition of sizes floor(f*n) and n - floor(f*n).
inline RowPartition partition_rows(std::size_t n, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    fail(ErrorCode::InvalidArgument, "train_fraction must lie in (0, 1)");
  const auto n_train = static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train >= n)
    fail(ErrorCode::DegenerateSplit, "split of " + std::to_string(n) + " rows leaves an empty side");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  RngStream rng(spec.shuffle_seed, 0);
  shuffle(std::span<std::size_t>(order), rng);
  RowPartition out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return out;
}

inline std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  const auto parts = partition_rows(ds.n_rows(), spec);
  return {ds.take_rows(parts.train), ds.take_rows(parts.test)};
}

}  // namespace sel::core
