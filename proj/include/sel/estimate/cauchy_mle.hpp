#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "sel/core/error.hpp"
#include "sel/extract/quantiles.hpp"

namespace sel::estimate {

struct CauchyFit {
  double location = 0.0;
  double scale = 1.0;
  double log_likelihood = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// Euclidean norm of the log-likelihood gradient in (location, scale).
  double gradient_norm = 0.0;
};

struct CauchyMleOptions {
  std::size_t max_iterations = 200;
  double gradient_tolerance = 1e-8;
};

/// Log-likelihood of a Cauchy(location, scale) sample.
inline double cauchy_log_likelihood(std::span<const double> zs, double location, double scale) noexcept {
  double ll = 0.0;
  const double g2 = scale * scale;
  for (double z : zs) {
    const double d = z - location;
    ll -= std::log(g2 + d * d);
  }
  return ll + static_cast<double>(zs.size()) * (std::log(scale) - std::log(std::numbers::pi));
}

namespace detail {

struct CauchyDerivatives {
  double log_likelihood;
  double d_location;  // dl/dmu
  double d_log_scale;  // dl/dtheta, theta = log(gamma)
  double h_mm, h_mt, h_tt;  // Hessian in (mu, theta)
};

inline CauchyDerivatives cauchy_derivatives(std::span<const double> zs, double mu, double theta) noexcept {
  const double gamma = std::exp(theta);
  const double g2 = gamma * gamma;
  CauchyDerivatives out{0, 0, 0, 0, 0, 0};
  double inv_s_sum = 0.0;
  for (double z : zs) {
    const double d = z - mu;
    const double d2 = d * d;
    const double s = g2 + d2;
    const double inv_s = 1.0 / s;
    const double inv_s2 = inv_s * inv_s;
    out.log_likelihood -= std::log(s);
    out.d_location += 2.0 * d * inv_s;
    inv_s_sum += inv_s;
    out.h_mm += 2.0 * (d2 - g2) * inv_s2;
    out.h_mt -= 4.0 * d * g2 * inv_s2;
    out.h_tt -= 4.0 * g2 * d2 * inv_s2;
  }
  const double n = static_cast<double>(zs.size());
  out.log_likelihood += n * (theta - std::log(std::numbers::pi));
  out.d_log_scale = n - 2.0 * g2 * inv_s_sum;
  return out;
}

inline double gradient_norm(const CauchyDerivatives& d, double gamma) noexcept {
  return std::hypot(d.d_location, d.d_log_scale / gamma);
}

}  // namespace detail

/// Joint maximum-likelihood fit of Cauchy location and scale.
///
/// Newton-Raphson on (location, log scale) starting from the median and half
/// the interquartile range. When the Hessian is not negative definite the
/// step falls back to gradient ascent; any step that lowers the likelihood is
/// halved until it does not. A fit that stops on the iteration cap is
/// returned with `converged == false`.
inline CauchyFit cauchy_mle(std::span<const double> zs, const CauchyMleOptions& opt = {}) {
  if (zs.size() < 3) fail(ErrorCode::TooShort, "Cauchy MLE needs at least 3 observations");

  std::vector<double> sorted(zs.begin(), zs.end());
  std::sort(sorted.begin(), sorted.end());
  double mu = extract::sorted_quantile(sorted, 0.5);
  double gamma = 0.5 * (extract::sorted_quantile(sorted, 0.75) - extract::sorted_quantile(sorted, 0.25));
  if (!(gamma > 0.0)) gamma = 0.5 * (sorted.back() - sorted.front()) / static_cast<double>(sorted.size());
  if (!(gamma > 0.0)) gamma = 1e-3 * std::max(1.0, std::abs(mu));
  double theta = std::log(gamma);

  CauchyFit fit;
  auto d = detail::cauchy_derivatives(zs, mu, theta);
  for (;;) {
    fit.gradient_norm = detail::gradient_norm(d, std::exp(theta));
    if (fit.gradient_norm < opt.gradient_tolerance) {
      fit.converged = true;
      break;
    }
    if (fit.iterations >= opt.max_iterations) break;
    ++fit.iterations;

    double step_mu, step_theta;
    const double det = d.h_mm * d.h_tt - d.h_mt * d.h_mt;
    if (d.h_mm < 0.0 && det > 0.0) {
      step_mu = -(d.h_tt * d.d_location - d.h_mt * d.d_log_scale) / det;
      step_theta = -(-d.h_mt * d.d_location + d.h_mm * d.d_log_scale) / det;
    } else {
      const double n = static_cast<double>(zs.size());
      const double gamma_now = std::exp(theta);
      step_mu = d.d_location * gamma_now * gamma_now / n;
      step_theta = d.d_log_scale / n;
    }
    // keep the scale update within a factor e^4 per iteration
    const double limit = 4.0;
    if (std::abs(step_theta) > limit) {
      const double shrink = limit / std::abs(step_theta);
      step_mu *= shrink;
      step_theta *= shrink;
    }

    // changes below the rounding level of the summed likelihood are not decreases
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() *
                         (std::abs(d.log_likelihood) + static_cast<double>(zs.size()));
    double t = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      const auto trial = detail::cauchy_derivatives(zs, mu + t * step_mu, theta + t * step_theta);
      if (trial.log_likelihood >= d.log_likelihood - slack) {
        mu += t * step_mu;
        theta += t * step_theta;
        d = trial;
        improved = true;
        break;
      }
    }
    if (!improved) {
      fit.gradient_norm = detail::gradient_norm(d, std::exp(theta));
      fit.converged = fit.gradient_norm < opt.gradient_tolerance;
      break;
    }
  }

  fit.location = mu;
  fit.scale = std::exp(theta);
  fit.log_likelihood = d.log_likelihood;
  return fit;
}

/// Arithmetic mean over the full process: the SEL 2 counterpart of cauchy_mle.
inline double empirical_mean_feature(std::span<const double> zs) {
  if (zs.empty()) fail(ErrorCode::EmptyInput, "empirical mean of an empty process");
  double sum = 0.0;
  for (double z : zs) sum += z;
  return sum / static_cast<double>(zs.size());
}

}  // namespace sel::estimate
