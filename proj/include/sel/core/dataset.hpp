#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sel/core/error.hpp"

namespace sel::core {

/// Provenance of a column in the SEL taxonomy.
enum class SelLevel {
  Raw,          // observed directly
  Proxy,        // SEL 1
  Descriptive,  // SEL 2
  Estimated,    // SEL 3
};

constexpr std::string_view to_string(SelLevel level) noexcept {
  switch (level) {
    case SelLevel::Raw: return "raw";
    case SelLevel::Proxy: return "sel1";
    case SelLevel::Descriptive: return "sel2";
    case SelLevel::Estimated: return "sel3";
  }
  return "raw";
}

struct Column {
  std::string name;
  std::vector<double> values;
  SelLevel level = SelLevel::Raw;
};

/// Column-labelled numeric table with an optional designated target column.
///
/// Invariants, checked on every mutation: at least one row, equal column
/// lengths, unique names, finite entries, and a target (when set) that names
/// an existing column.
class Dataset {
 public:
  Dataset() = default;

  explicit Dataset(std::vector<Column> columns, std::optional<std::string> target = std::nullopt)
      : columns_(std::move(columns)), target_(std::move(target)) {
    validate();
  }

  std::size_t n_rows() const noexcept { return columns_.empty() ? 0 : columns_.front().values.size(); }
  std::size_t n_cols() const noexcept { return columns_.size(); }

  const std::vector<Column>& columns() const noexcept { return columns_; }
  const std::optional<std::string>& target() const noexcept { return target_; }

  bool has_column(std::string_view name) const noexcept { return find(name).has_value(); }

  std::optional<std::size_t> find(std::string_view name) const noexcept {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      if (columns_[i].name == name) return i;
    return std::nullopt;
  }

  const Column& column(std::string_view name) const {
    const auto idx = find(name);
    if (!idx) fail(ErrorCode::MissingFeature, "no column named '" + std::string(name) + "'");
    return columns_[*idx];
  }

  std::span<const double> values(std::string_view name) const { return column(name).values; }

  std::span<const double> target_values() const {
    if (!target_) fail(ErrorCode::MissingTarget, "dataset has no target column");
    return values(*target_);
  }

  /// All column names except the target, in table order.
  std::vector<std::string> feature_names() const {
    std::vector<std::string> names;
    for (const auto& c : columns_)
      if (!target_ || c.name != *target_) names.push_back(c.name);
    return names;
  }

  void set_target(std::string name) {
    if (!has_column(name)) fail(ErrorCode::MissingTarget, "target '" + name + "' is not a column");
    target_ = std::move(name);
  }

  void add_column(Column column) {
    if (!columns_.empty() && column.values.size() != n_rows())
      fail(ErrorCode::InvalidDataset, "column '" + column.name + "' has " +
                                          std::to_string(column.values.size()) + " rows, expected " +
                                          std::to_string(n_rows()));
    columns_.push_back(std::move(column));
    validate();
  }

  void set_values(std::string_view name, std::vector<double> values) {
    const auto idx = find(name);
    if (!idx) fail(ErrorCode::MissingFeature, "no column named '" + std::string(name) + "'");
    if (values.size() != n_rows()) fail(ErrorCode::InvalidDataset, "replacement column length mismatch");
    columns_[*idx].values = std::move(values);
    check_finite(columns_[*idx]);
  }

  /// Rows selected by index, in the given order; duplicates allowed.
  Dataset take_rows(std::span<const std::size_t> rows) const {
    std::vector<Column> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) {
      Column picked{c.name, {}, c.level};
      picked.values.reserve(rows.size());
      for (auto r : rows) picked.values.push_back(c.values.at(r));
      out.push_back(std::move(picked));
    }
    return Dataset(std::move(out), target_);
  }

  /// Subset of columns, in the given order. The target is kept if selected.
  Dataset select(std::span<const std::string> names) const {
    std::vector<Column> out;
    for (const auto& n : names) out.push_back(column(n));
    std::optional<std::string> target;
    if (target_ && std::find(names.begin(), names.end(), *target_) != names.end()) target = target_;
    return Dataset(std::move(out), target);
  }

 private:
  static void check_finite(const Column& c) {
    for (std::size_t r = 0; r < c.values.size(); ++r)
      if (!std::isfinite(c.values[r]))
        fail(ErrorCode::NonFiniteValue, "column '" + c.name + "' row " + std::to_string(r));
  }

  void validate() const {
    if (columns_.empty()) fail(ErrorCode::InvalidDataset, "dataset has no columns");
    const std::size_t rows = columns_.front().values.size();
    if (rows == 0) fail(ErrorCode::InvalidDataset, "dataset has no rows");
    std::unordered_set<std::string_view> seen;
    for (const auto& c : columns_) {
      if (c.values.size() != rows) fail(ErrorCode::InvalidDataset, "ragged column '" + c.name + "'");
      if (!seen.insert(c.name).second) fail(ErrorCode::InvalidDataset, "duplicate column '" + c.name + "'");
      check_finite(c);
    }
    if (target_ && !seen.contains(*target_))
      fail(ErrorCode::MissingTarget, "target '" + *target_ + "' is not a column");
  }

  std::vector<Column> columns_;
  std::optional<std::string> target_;
};

/// Per-individual latent sequence from which SEL features are extracted.
struct Process {
  std::size_t id = 0;
  std::vector<double> values;

  Process() = default;
  Process(std::size_t id_, std::vector<double> values_) : id(id_), values(std::move(values_)) {
    if (values.size() < 2) fail(ErrorCode::TooShort, "process needs at least 2 values");
    for (double v : values)
      if (!std::isfinite(v)) fail(ErrorCode::NonFiniteValue, "process " + std::to_string(id));
  }
};

}  // namespace sel::core
