#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "sel/core/dataset.hpp"
#include "sel/core/error.hpp"

namespace sel::learn {

inline double soft_threshold(double z, double lambda) noexcept {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

/// L1-penalised linear model fitted on standardised features.
///
/// Features are centred and divided by their population standard deviation
/// (1/n), so each standardised column has x'x / n = 1 and the penalty acts on
/// comparable scales. The intercept on the standardised scale is the
/// training target mean.
class LassoModel {
 public:
  LassoModel() = default;
  LassoModel(std::vector<std::string> feature_names, std::vector<double> coefficients, double intercept,
             double lambda, std::vector<double> means, std::vector<double> sds)
      : feature_names_(std::move(feature_names)),
        coefficients_(std::move(coefficients)),
        intercept_(intercept),
        lambda_(lambda),
        means_(std::move(means)),
        sds_(std::move(sds)) {}

  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  double intercept() const noexcept { return intercept_; }
  double lambda() const noexcept { return lambda_; }
  const std::vector<double>& means() const noexcept { return means_; }
  const std::vector<double>& sds() const noexcept { return sds_; }
  std::size_t iterations = 0;

  std::vector<double> original_coefficients() const {
    std::vector<double> out(coefficients_.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = coefficients_[j] / sds_[j];
    return out;
  }

  double original_intercept() const {
    double b = intercept_;
    for (std::size_t j = 0; j < coefficients_.size(); ++j) b -= coefficients_[j] * means_[j] / sds_[j];
    return b;
  }

  double predict_row(std::span<const double> x) const noexcept {
    double s = intercept_;
    for (std::size_t j = 0; j < coefficients_.size(); ++j) s += coefficients_[j] * (x[j] - means_[j]) / sds_[j];
    return s;
  }

  friend bool operator==(const LassoModel& a, const LassoModel& b) {
    return a.feature_names_ == b.feature_names_ && a.coefficients_ == b.coefficients_ &&
           a.intercept_ == b.intercept_ && a.lambda_ == b.lambda_ && a.means_ == b.means_ && a.sds_ == b.sds_;
  }

 private:
  std::vector<std::string> feature_names_;
  std::vector<double> coefficients_;
  double intercept_ = 0.0;
  double lambda_ = 0.0;
  std::vector<double> means_;
  std::vector<double> sds_;
};

struct LassoOptions {
  double tolerance = 1e-7;
  std::size_t max_sweeps = 100000;
};

/// Smallest lambda at which every coefficient is zero: max_j |x_j'(y - ybar)| / n.
inline double lasso_lambda_max(std::span<const std::vector<double>> standardized, std::span<const double> y) {
  const double n = static_cast<double>(y.size());
  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= n;
  double best = 0.0;
  for (const auto& x : standardized) {
    double dot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) dot += x[i] * (y[i] - ybar);
    best = std::max(best, std::abs(dot) / n);
  }
  return best;
}

/// Cyclic coordinate descent on (1/2n)||y - X b||^2 + lambda ||b||_1 over the
/// standardised design. Stops when no coefficient moves by more than the
/// tolerance during a full sweep.
inline LassoModel fit_lasso(const core::Dataset& ds, double lambda, const LassoOptions& opt = {}) {
  if (!(lambda >= 0.0)) fail(ErrorCode::InvalidArgument, "lambda must be non-negative");
  const auto names = ds.feature_names();
  if (names.empty()) fail(ErrorCode::MissingFeature, "dataset has no feature columns");
  const auto y = ds.target_values();
  const std::size_t n = ds.n_rows(), p = names.size();
  const double dn = static_cast<double>(n);

  std::vector<std::vector<double>> x(p);
  std::vector<double> means(p), sds(p), scale(p);
  for (std::size_t j = 0; j < p; ++j) {
    const auto col = ds.values(names[j]);
    double m = 0.0;
    for (double v : col) m += v;
    m /= dn;
    double ss = 0.0;
    for (double v : col) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / dn);
    if (!(sd > 0.0)) fail(ErrorCode::DegenerateVariance, "feature '" + names[j] + "' is constant");
    means[j] = m;
    sds[j] = sd;
    x[j].resize(n);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[j][i] = (col[i] - m) / sd;
      sq += x[j][i] * x[j][i];
    }
    scale[j] = sq / dn;
  }

  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= dn;
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - ybar;

  std::vector<double> beta(p, 0.0);
  std::size_t sweep = 0;
  for (; sweep < opt.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      double rho = 0.0;
      for (std::size_t i = 0; i < n; ++i) rho += x[j][i] * r[i];
      rho = rho / dn + scale[j] * beta[j];
      const double updated = soft_threshold(rho, lambda) / scale[j];
      const double delta = updated - beta[j];
      if (delta != 0.0) {
        for (std::size_t i = 0; i < n; ++i) r[i] -= delta * x[j][i];
        beta[j] = updated;
      }
      max_change = std::max(max_change, std::abs(delta));
    }
    if (max_change < opt.tolerance) break;
  }
  if (sweep == opt.max_sweeps) fail(ErrorCode::FailedConvergence, "coordinate descent hit the sweep limit");

  LassoModel model(names, std::move(beta), ybar, lambda, std::move(means), std::move(sds));
  model.iterations = sweep + 1;
  return model;
}

}  // namespace sel::learn
