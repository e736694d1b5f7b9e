#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sel {

/// Failure categories raised across the library. Each maps to one contract
/// violation; callers switch on `Error::code()` rather than parsing messages.
enum class ErrorCode {
  MissingFile,
  IoError,
  ParseError,
  MissingTarget,
  NonFiniteValue,
  InvalidDataset,
  DegenerateSplit,
  DegenerateVariance,
  NonPositiveScale,
  TooShort,
  EmptyInput,
  InvalidProbability,
  InvalidAlpha,
  UnsupportedDepth,
  EmptyCorpus,
  FailedConvergence,
  FutureMatch,
  DisconnectedSchedule,
  UnknownTeam,
  RankDeficient,
  TooFewRows,
  InvalidMtry,
  InvalidRate,
  InvalidArgument,
  MissingFeature,
  LengthMismatch,
  UnsupportedFormat,
  MaxvalTooLarge,
  TruncatedPayload,
  UsageError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingTarget: return "MissingTarget";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::InvalidDataset: return "InvalidDataset";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::UnsupportedDepth: return "UnsupportedDepth";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::FailedConvergence: return "FailedConvergence";
    case ErrorCode::FutureMatch: return "FutureMatch";
    case ErrorCode::DisconnectedSchedule: return "DisconnectedSchedule";
    case ErrorCode::UnknownTeam: return "UnknownTeam";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::InvalidMtry: return "InvalidMtry";
    case ErrorCode::InvalidRate: return "InvalidRate";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingFeature: return "MissingFeature";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::MaxvalTooLarge: return "MaxvalTooLarge";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// CSV cell that failed to parse; row is 1-based over data lines, col 0-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t col, const std::string& what)
      : Error(ErrorCode::ParseError,
              "row " + std::to_string(row) + ", col " + std::to_string(col) + ": " + what),
        row_(row),
        col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace sel
