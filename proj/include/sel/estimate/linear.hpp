#pragma once

#include <Eigen/Dense>

#include <string>

#include "sel/core/dataset.hpp"
#include "sel/core/error.hpp"

namespace sel::estimate {

struct LinearFit {
  Eigen::VectorXd coefficients;  // intercept first, then one per predictor column
  double residual_variance = 0.0;

  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const {
    return (X * coefficients.tail(coefficients.size() - 1)).array() + coefficients(0);
  }
};

inline Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd A(X.rows(), X.cols() + 1);
  A.col(0).setOnes();
  A.rightCols(X.cols()) = X;
  return A;
}

/// Least squares with an intercept, via column-pivoted Householder QR.
inline LinearFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const auto n = X.rows();
  const auto p = X.cols();
  if (y.size() != n) fail(ErrorCode::LengthMismatch, "ols: X and y row counts differ");
  if (n <= p + 1) fail(ErrorCode::TooFewRows, "ols needs more rows than coefficients");

  const Eigen::MatrixXd A = with_intercept(X);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < A.cols())
    fail(ErrorCode::RankDeficient, "design has rank " + std::to_string(qr.rank()) + " < " + std::to_string(A.cols()));

  LinearFit fit;
  fit.coefficients = qr.solve(y);
  const Eigen::VectorXd resid = y - A * fit.coefficients;
  fit.residual_variance = resid.squaredNorm() / static_cast<double>(n - p - 1);
  return fit;
}

struct TwoStageFit {
  LinearFit first_stage;   // Z on W
  LinearFit second_stage;  // y on [X, Z_hat]; last coefficient belongs to Z_hat
  Eigen::VectorXd z_hat;
};

/// Instrumental-variable regression: Z is replaced by its fit on W before
/// regressing y on [X, Z_hat]. X may have zero columns.
inline TwoStageFit two_stage_least_squares(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                                           const Eigen::VectorXd& Z, const Eigen::MatrixXd& W) {
  if (X.rows() != y.size() || Z.size() != y.size() || W.rows() != y.size())
    fail(ErrorCode::LengthMismatch, "2SLS inputs have different row counts");
  TwoStageFit out;
  out.first_stage = ols(W, Z);
  out.z_hat = out.first_stage.predict(W);
  Eigen::MatrixXd design(X.rows(), X.cols() + 1);
  design.leftCols(X.cols()) = X;
  design.col(X.cols()) = out.z_hat;
  out.second_stage = ols(design, y);
  return out;
}

/// Appends Z_hat to a dataset as an Estimated (SEL 3) column.
inline void append_estimated(core::Dataset& ds, std::string name, const Eigen::VectorXd& values) {
  ds.add_column({std::move(name), std::vector<double>(values.data(), values.data() + values.size()),
                 core::SelLevel::Estimated});
}

}  // namespace sel::estimate
