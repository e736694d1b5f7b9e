#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sel/core/dataset.hpp"
#include "sel/core/error.hpp"
#include "sel/core/rng.hpp"
#include "sel/estimate/cauchy_mle.hpp"

namespace sel::simbench {

struct LearnerConfig {
  std::size_t n_trees = 200;
  std::size_t max_depth = 3;
  double learning_rate = 0.1;
  std::size_t min_leaf = 1;
};

struct SimConfig {
  std::size_t n = 1500;
  std::size_t m = 400;
  std::vector<std::size_t> p_values{2, 5, 10, 20, 30};
  std::size_t reps = 200;
  std::uint64_t master_seed = 42;
  std::pair<double, double> beta_range{-2.0, 5.0};
  std::pair<double, double> beta_mu_range{1.0, 5.0};
  double cauchy_scale = 1.0;
  double train_fraction = 0.7;
  LearnerConfig learner;
  std::size_t threads = 1;

  void validate() const {
    if (n < 10) fail(ErrorCode::InvalidArgument, "n must be at least 10");
    if (m < 10) fail(ErrorCode::InvalidArgument, "m must be at least 10");
    if (reps < 1) fail(ErrorCode::InvalidArgument, "reps must be at least 1");
    if (p_values.empty()) fail(ErrorCode::InvalidArgument, "p_values is empty");
    for (auto p : p_values)
      if (p < 1) fail(ErrorCode::InvalidArgument, "every p must be at least 1");
    if (beta_range.first > beta_range.second || beta_mu_range.first > beta_mu_range.second)
      fail(ErrorCode::InvalidArgument, "coefficient ranges must be ordered");
    if (!(cauchy_scale > 0.0)) fail(ErrorCode::NonPositiveScale, "cauchy_scale must be positive");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
      fail(ErrorCode::InvalidArgument, "train_fraction must lie in (0, 1)");
  }
};

/// Fixed coefficients for one draw of the regression function.
struct Coefficients {
  std::vector<double> beta;
  double beta_mu = 0.0;
};

/// The published single-iteration example with p = 10.
inline Coefficients published_fixture() {
  return {{-1.04, -1.32, 4.50, -1.69, 0.53, 1.34, 3.35, 4.10, -0.99, 0.98}, 4.50};
}

/// One simulated data set: y = X beta + beta_mu * mu^2 + eps, with mu only
/// observable through a Cauchy(mu, scale) process of length m per individual.
struct SimInstance {
  std::vector<std::vector<double>> X;  // p columns of length n
  std::vector<core::Process> processes;
  std::vector<double> mu_true;
  std::vector<double> beta;
  double beta_mu = 0.0;
  std::vector<double> eps;
  std::vector<double> y;

  std::size_t n() const noexcept { return y.size(); }
  std::size_t p() const noexcept { return X.size(); }
};

/// Draw order: coefficients (unless fixed), X row by row, mu, the processes,
/// then eps. Everything comes from `rng`.
inline SimInstance generate_instance(const SimConfig& cfg, std::size_t p, core::RngStream& rng,
                                     const std::optional<Coefficients>& fixed = std::nullopt) {
  cfg.validate();
  if (p < 1) fail(ErrorCode::InvalidArgument, "p must be at least 1");
  SimInstance inst;
  if (fixed) {
    if (fixed->beta.size() != p) fail(ErrorCode::InvalidArgument, "fixed beta has the wrong length");
    inst.beta = fixed->beta;
    inst.beta_mu = fixed->beta_mu;
  } else {
    inst.beta.resize(p);
    for (auto& b : inst.beta) b = rng.uniform(cfg.beta_range.first, cfg.beta_range.second);
    inst.beta_mu = rng.uniform(cfg.beta_mu_range.first, cfg.beta_mu_range.second);
  }

  const std::size_t n = cfg.n;
  inst.X.assign(p, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) inst.X[j][i] = rng.normal();
  inst.mu_true = core::sample_normal(rng, n, 0.0, 1.0);
  inst.processes.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    inst.processes.emplace_back(i, core::sample_cauchy(rng, cfg.m, inst.mu_true[i], cfg.cauchy_scale));
  inst.eps = core::sample_normal(rng, n, 0.0, 1.0);

  inst.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < p; ++j) v += inst.beta[j] * inst.X[j][i];
    inst.y[i] = v + inst.beta_mu * inst.mu_true[i] * inst.mu_true[i] + inst.eps[i];
  }
  return inst;
}

/// Per-individual SEL features extracted from the processes.
struct SelFeatures {
  std::vector<double> empirical_mean;  // SEL 2
  std::vector<double> mle_location;    // SEL 3
};

inline SelFeatures extract_sel_features(const SimInstance& inst) {
  SelFeatures f;
  f.empirical_mean.reserve(inst.n());
  f.mle_location.reserve(inst.n());
  for (const auto& proc : inst.processes) {
    f.empirical_mean.push_back(estimate::empirical_mean_feature(proc.values));
    f.mle_location.push_back(estimate::cauchy_mle(proc.values).location);
  }
  return f;
}

enum class ModelKind { Baseline, SelMoments, SelMle };

inline constexpr std::array<ModelKind, 3> kAllModels{ModelKind::Baseline, ModelKind::SelMoments, ModelKind::SelMle};

constexpr std::string_view to_string(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::Baseline: return "baseline";
    case ModelKind::SelMoments: return "sel_moments";
    case ModelKind::SelMle: return "sel_mle";
  }
  return "baseline";
}

inline constexpr const char* kSelMeanColumn = "sel_mean";
inline constexpr const char* kSelMleColumn = "sel_mle";
inline constexpr const char* kTargetColumn = "y";

inline std::string covariate_name(std::size_t j) { return "X" + std::to_string(j); }

/// Table with X0..X{p-1}, the target `y`, and the SEL column the model uses.
inline core::Dataset instance_dataset(const SimInstance& inst, const SelFeatures& sel, ModelKind kind) {
  std::vector<core::Column> cols;
  for (std::size_t j = 0; j < inst.p(); ++j) cols.push_back({covariate_name(j), inst.X[j], core::SelLevel::Raw});
  if (kind == ModelKind::SelMoments)
    cols.push_back({kSelMeanColumn, sel.empirical_mean, core::SelLevel::Descriptive});
  if (kind == ModelKind::SelMle) cols.push_back({kSelMleColumn, sel.mle_location, core::SelLevel::Estimated});
  cols.push_back({kTargetColumn, inst.y, core::SelLevel::Raw});
  return core::Dataset(std::move(cols), std::string(kTargetColumn));
}

}  // namespace sel::simbench
