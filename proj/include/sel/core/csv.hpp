#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sel/core/dataset.hpp"
#include "sel/core/error.hpp"

namespace sel::core {

/// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) fail(ErrorCode::IoError, "cannot format number");
  return std::string(buf, end);
}

inline std::vector<std::string_view> split_fields(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Parses a full cell as a decimal real; std::nullopt on any trailing garbage.
inline std::optional<double> parse_real(std::string_view cell) noexcept {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MissingFile, path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

/// Reads a header-first, comma-separated numeric table. An empty `target`
/// yields a dataset without a designated target (feature-only input).
inline Dataset read_csv(const std::filesystem::path& path, const std::string& target) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::MissingFile, path.string());
  const auto lines = read_lines(path);
  if (lines.empty() || trim(lines.front()).empty()) fail(ErrorCode::ParseError, "missing header row");

  std::vector<Column> columns;
  for (auto name : split_fields(lines.front())) columns.push_back({std::string(trim(name)), {}, SelLevel::Raw});
  if (!target.empty()) {
    bool found = false;
    for (const auto& c : columns) found = found || c.name == target;
    if (!found) fail(ErrorCode::MissingTarget, "header lacks target column '" + target + "'");
  }

  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const auto fields = split_fields(lines[li]);
    if (fields.size() != columns.size())
      throw ParseError(li, fields.size(), "expected " + std::to_string(columns.size()) + " fields");
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto value = parse_real(fields[c]);
      if (!value) throw ParseError(li, c, "not a decimal number: '" + std::string(fields[c]) + "'");
      if (!std::isfinite(*value))
        fail(ErrorCode::NonFiniteValue, "row " + std::to_string(li) + ", col " + std::to_string(c));
      columns[c].values.push_back(*value);
    }
  }
  if (columns.front().values.empty()) fail(ErrorCode::ParseError, "no data rows");
  return Dataset(std::move(columns), target.empty() ? std::nullopt : std::optional<std::string>(target));
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) fail(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

inline std::string to_csv(const Dataset& ds) {
  std::ostringstream os;
  const auto& cols = ds.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c].name;
  os << '\n';
  for (std::size_t r = 0; r < ds.n_rows(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << format_double(cols[c].values[r]);
    os << '\n';
  }
  return os.str();
}

inline void write_csv(const Dataset& ds, const std::filesystem::path& path) { write_text(path, to_csv(ds)); }

}  // namespace sel::core
