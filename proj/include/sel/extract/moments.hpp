#pragma once

#include <cmath>
#include <optional>
#include <span>

#include "sel/core/error.hpp"

namespace sel::extract {

/// First four moments of a sample.
///
/// `variance` uses the n - 1 denominator. Skewness (g1 = m3 / m2^1.5) and
/// excess kurtosis (g2 = m4 / m2^2 - 3) use population central moments and
/// are undefined for a constant sample; their accessors throw
/// DegenerateVariance in that case.
class MomentSummary {
 public:
  MomentSummary(double mean, double variance, std::optional<double> skewness,
                std::optional<double> excess_kurtosis)
      : mean_(mean), variance_(variance), skewness_(skewness), excess_kurtosis_(excess_kurtosis) {}

  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }
  double sd() const noexcept { return std::sqrt(variance_); }
  bool has_shape() const noexcept { return skewness_.has_value(); }

  double skewness() const {
    if (!skewness_) fail(ErrorCode::DegenerateVariance, "skewness undefined for zero variance");
    return *skewness_;
  }
  double excess_kurtosis() const {
    if (!excess_kurtosis_) fail(ErrorCode::DegenerateVariance, "kurtosis undefined for zero variance");
    return *excess_kurtosis_;
  }

 private:
  double mean_;
  double variance_;
  std::optional<double> skewness_;
  std::optional<double> excess_kurtosis_;
};

namespace detail {

// Two-pass moments over (value, weight) pairs; weights are frequency counts.
template <typename Visit>
MomentSummary weighted_moments(double total, Visit&& visit) {
  double sum = 0.0;
  visit([&](double x, double w) { sum += w * x; });
  const double mean = sum / total;
  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  visit([&](double x, double w) {
    const double d = x - mean;
    const double d2 = d * d;
    s2 += w * d2;
    s3 += w * d2 * d;
    s4 += w * d2 * d2;
  });
  const double variance = s2 / (total - 1.0);
  if (!(s2 > 0.0)) return MomentSummary(mean, 0.0, std::nullopt, std::nullopt);
  const double m2 = s2 / total;
  const double m3 = s3 / total;
  const double m4 = s4 / total;
  return MomentSummary(mean, variance, m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0);
}

}  // namespace detail

/// Moments of a sample of length >= 2. A constant sample yields a summary
/// whose shape accessors throw DegenerateVariance.
inline MomentSummary moments(std::span<const double> xs) {
  if (xs.size() < 2) fail(ErrorCode::TooShort, "moments need at least 2 values");
  return detail::weighted_moments(static_cast<double>(xs.size()), [&](auto&& f) {
    for (double x : xs) f(x, 1.0);
  });
}

/// Like moments() but also requires a non-degenerate sample.
inline MomentSummary moments_strict(std::span<const double> xs) {
  auto m = moments(xs);
  if (!m.has_shape()) fail(ErrorCode::DegenerateVariance, "sample is constant");
  return m;
}

}  // namespace sel::extract
