#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "sel/core/rng.hpp"
#include "sel/estimate/cauchy_mle.hpp"
#include "sel/estimate/linear.hpp"
#include "sel/estimate/strength.hpp"
#include "sel/extract/moments.hpp"
#include "test_util.hpp"

using namespace sel;
using namespace sel::estimate;
using sel::test::expect_code;

namespace {

std::vector<double> cauchy_draws(std::uint64_t seed, std::uint64_t stream, std::size_t m, double loc, double scale) {
  core::RngStream r(seed, stream);
  return core::sample_cauchy(r, m, loc, scale);
}

double variance_of(const std::vector<double>& xs) {
  const double m = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

Date d(int y, unsigned m, unsigned day) { return Date::from_ymd(y, m, day); }

}  // namespace

// ---- Cauchy MLE ----

TEST(CauchyMle, SymmetricSample) {
  const std::vector<double> zs{-1, 0, 1};
  const auto fit = cauchy_mle(zs);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.location, 0.0, 1e-12);
  EXPECT_GT(fit.scale, 0.0);
}

TEST(CauchyMle, TooShort) {
  const std::vector<double> zs{1, 2};
  expect_code([&] { cauchy_mle(zs); }, ErrorCode::TooShort);
}

TEST(CauchyMle, AffineEquivariance) {
  std::mt19937_64 gen(20);
  std::uniform_real_distribution<double> ua(0.2, 5.0), ub(-10.0, 10.0);
  for (std::uint64_t t = 0; t < 30; ++t) {
    const auto zs = cauchy_draws(20, t, 400, 0.5, 1.0);
    const double a = (t % 2 ? -1.0 : 1.0) * ua(gen), b = ub(gen);
    std::vector<double> w(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) w[i] = a * zs[i] + b;
    const auto f = cauchy_mle(zs), g = cauchy_mle(w);
    ASSERT_TRUE(f.converged && g.converged);
    EXPECT_NEAR(g.location, a * f.location + b, 1e-8 * std::max(1.0, std::abs(b)));
    EXPECT_NEAR(g.scale, std::abs(a) * f.scale, 1e-8 * std::abs(a));
  }
}

TEST(CauchyMle, GradientSmallWhenConverged) {
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto zs = cauchy_draws(21, t, 400, 0.0, 1.0);
    const auto fit = cauchy_mle(zs);
    ASSERT_TRUE(fit.converged);
    EXPECT_LT(fit.gradient_norm, 1e-6);
    EXPECT_NEAR(fit.log_likelihood, cauchy_log_likelihood(zs, fit.location, fit.scale), 1e-9 * std::abs(fit.log_likelihood));
  }
}

TEST(CauchyMle, MatchesGridOracle) {
  const auto zs = cauchy_draws(42, 7, 400, 3.0, 1.0);
  const auto fit = cauchy_mle(zs);
  const auto grid = oracle::cauchy_grid_search(zs);
  EXPECT_NEAR(fit.location, grid.location, 1e-3);
  EXPECT_NEAR(fit.scale, grid.scale, 1e-3);
  EXPECT_GE(fit.log_likelihood, oracle::cauchy_ll(zs, grid.location, grid.scale) - 1e-9);
}

TEST(CauchyMle, NonConvergedFitIsReturned) {
  const auto zs = cauchy_draws(1, 1, 50, 0.0, 1.0);
  const auto fit = cauchy_mle(zs, {0, 1e-8});
  EXPECT_FALSE(fit.converged);
  EXPECT_EQ(fit.iterations, 0u);
}

TEST(EmpiricalMean, Examples) {
  EXPECT_EQ(empirical_mean_feature(std::vector<double>{1, 2, 3}), 2.0);
  EXPECT_EQ(empirical_mean_feature(std::vector<double>{7.25, 7.25, 7.25}), 7.25);
  expect_code([] { empirical_mean_feature(std::vector<double>{}); }, ErrorCode::EmptyInput);
}

TEST(EmpiricalMean, VarianceExceedsMleByFactorTen) {
  std::vector<double> means, mles;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const auto zs = cauchy_draws(5, rep, 400, 0.0, 1.0);
    means.push_back(empirical_mean_feature(zs));
    mles.push_back(cauchy_mle(zs).location);
  }
  EXPECT_GT(variance_of(means), 10.0 * variance_of(mles));
}

// ---- calendar and weights ----

TEST(Date, ParseAndFormat) {
  EXPECT_EQ(Date::parse("1970-01-01").days(), 0);
  EXPECT_EQ(Date::parse("2024-02-29").to_string(), "2024-02-29");
  EXPECT_EQ(Date::parse("2000-03-01") - Date::parse("2000-02-28"), 2);
  for (const char* bad : {"2023-02-29", "2024-13-01", "24-01-01", "2024/01/01", "2024-01-0x"})
    expect_code([&] { Date::parse(bad); }, ErrorCode::ParseError);
}

TEST(Date, RoundTripOverManyDays) {
  for (std::int64_t k = -800000; k < 800000; k += 997) {
    const Date x(k);
    EXPECT_EQ(Date::parse(x.to_string()), x);
  }
}

TEST(RecencyWeight, HalfLifeExamples) {
  const auto ref = d(2024, 1, 1);
  EXPECT_EQ(recency_weight(ref, ref, 500), 1.0);
  EXPECT_DOUBLE_EQ(recency_weight(ref.plus_days(-500), ref, 500), 0.5);
  EXPECT_DOUBLE_EQ(recency_weight(ref.plus_days(-1000), ref, 500), 0.25);
  expect_code([&] { recency_weight(ref.plus_days(1), ref, 500); }, ErrorCode::FutureMatch);
}

// ---- strengths ----

TEST(Strengths, SymmetricRecords) {
  std::vector<MatchRecord> ms;
  const std::vector<std::string> teams{"A", "B", "C"};
  for (const auto& h : teams)
    for (const auto& a : teams)
      if (h != a) ms.push_back({d(2023, 5, 1), h, a, 2, 1});
  const auto t = fit_strengths(ms, d(2023, 6, 1), 500);
  for (const auto& [team, r] : t.strengths) EXPECT_NEAR(r, 0.0, 1e-10);
  EXPECT_NEAR(t.intercept, 0.0, 1e-8);
  EXPECT_NEAR(t.home_effect, std::log(2.0), 1e-8);
}

TEST(Strengths, RecoversKnownParameters) {
  const auto lg = oracle::simulate_league(20, 500, 0.2, 0.3, 99);
  const auto t = fit_strengths(lg.matches, lg.reference, 500);
  std::vector<double> est;
  for (const auto& team : lg.teams) est.push_back(t.strength(team));
  EXPECT_GE(oracle::spearman(est, lg.strengths), 0.9);
  EXPECT_LT(std::abs(t.home_effect - 0.3), 0.1);
  EXPECT_NEAR(std::accumulate(est.begin(), est.end(), 0.0), 0.0, 1e-10);
  double g2 = 0.0;
  for (double g : oracle::strength_score(lg.matches, t)) g2 += g * g;
  EXPECT_LT(std::sqrt(g2), 1e-6);
}

TEST(Strengths, DuplicationAndDateShiftInvariance) {
  const auto lg = oracle::simulate_league(8, 120, 0.1, 0.25, 3);
  const auto base = fit_strengths(lg.matches, lg.reference, 300);
  auto doubled = lg.matches;
  doubled.insert(doubled.end(), lg.matches.begin(), lg.matches.end());
  auto shifted = lg.matches;
  for (auto& m : shifted) m.date = m.date.plus_days(4000);
  const auto a = fit_strengths(doubled, lg.reference, 300);
  const auto b = fit_strengths(shifted, lg.reference.plus_days(4000), 300);
  for (const auto& [team, r] : base.strengths) {
    EXPECT_NEAR(a.strength(team), r, 1e-8);
    EXPECT_NEAR(b.strength(team), r, 1e-8);
  }
  EXPECT_NEAR(a.home_effect, base.home_effect, 1e-8);
  EXPECT_NEAR(b.intercept, base.intercept, 1e-8);
}

TEST(Strengths, Errors) {
  std::vector<MatchRecord> ms{{d(2023, 1, 1), "A", "B", 1, 0}, {d(2023, 1, 2), "C", "D", 2, 2}};
  expect_code([&] { fit_strengths(ms, d(2023, 2, 1), 500); }, ErrorCode::DisconnectedSchedule);
  const std::vector<MatchRecord> pair{{d(2023, 1, 1), "A", "B", 1, 0}, {d(2023, 1, 2), "B", "A", 2, 1}};
  expect_code([&] { fit_strengths(pair, d(2022, 2, 1), 500); }, ErrorCode::FutureMatch);
  const auto t = fit_strengths(pair, d(2023, 2, 1), 500);
  expect_code([&] { (void)t.strength("Z"); }, ErrorCode::UnknownTeam);
}

TEST(MeanGoals, Examples) {
  std::vector<MatchRecord> ms{{d(2023, 1, 1), "A", "B", 30, 20},
                              {d(2023, 1, 2), "C", "A", 25, 28},
                              {d(2023, 1, 3), "A", "C", 32, 31}};
  EXPECT_EQ(mean_goals_strength(ms, "A"), 30.0);
  EXPECT_EQ(mean_goals_strength(ms, "B"), 20.0);
  expect_code([&] { mean_goals_strength(ms, "Z"); }, ErrorCode::UnknownTeam);
  for (const auto& team : {"A", "C"})
    EXPECT_EQ(mean_goals_strength(ms, team), extract::moments(goals_scored(ms, team)).mean());
}

TEST(MatchesCsv, RoundTripAndErrors) {
  test::TempDir dir;
  const auto lg = oracle::simulate_league(4, 10, 0.0, 0.2, 1);
  write_matches_csv(lg.matches, dir / "m.csv");
  const auto back = read_matches_csv(dir / "m.csv");
  ASSERT_EQ(back.size(), lg.matches.size());
  EXPECT_EQ(back[3].date, lg.matches[3].date);
  EXPECT_EQ(back[3].home_goals, lg.matches[3].home_goals);
  expect_code([&] { read_matches_csv(dir.write("a.csv", "date,home,away,hg,ag\n")); }, ErrorCode::ParseError);
  expect_code([&] { read_matches_csv(dir.write("b.csv", "date,home_team,away_team,home_goals,away_goals\n2023-01-01,A,A,1,1\n")); },
              ErrorCode::ParseError);
  expect_code([&] { read_matches_csv(dir.write("c.csv", "date,home_team,away_team,home_goals,away_goals\n2023-01-01,A,B,-1,1\n")); },
              ErrorCode::ParseError);
}

// ---- linear models ----

TEST(Ols, ExactLine) {
  Eigen::MatrixXd X(5, 1);
  X << 0, 1, 2, 3, 4;
  const Eigen::VectorXd y = (2.0 * X.col(0)).array() + 1.0;
  const auto fit = ols(X, y);
  EXPECT_NEAR(fit.coefficients(0), 1.0, 1e-10);
  EXPECT_NEAR(fit.coefficients(1), 2.0, 1e-10);
  EXPECT_NEAR(fit.residual_variance, 0.0, 1e-20);
}

TEST(Ols, Errors) {
  Eigen::MatrixXd X(6, 2);
  X << 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6;
  Eigen::VectorXd y(6);
  y << 1, 2, 3, 4, 5, 7;
  expect_code([&] { ols(X, y); }, ErrorCode::RankDeficient);
  expect_code([&] { ols(X.topRows(3), y.head(3)); }, ErrorCode::TooFewRows);
  expect_code([&] { ols(X, y.head(5)); }, ErrorCode::LengthMismatch);
}

TEST(Ols, ResidualsOrthogonalToColumns) {
  std::mt19937_64 gen(30);
  std::normal_distribution<double> z;
  for (int t = 0; t < 20; ++t) {
    const int n = 50 + t * 5, p = 1 + t % 5;
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) X(i, j) = z(gen);
      y(i) = z(gen) + X(i, 0);
    }
    const auto fit = ols(X, y);
    const Eigen::VectorXd r = y - fit.predict(X);
    EXPECT_LT(std::abs(r.sum()), 1e-8);
    for (int j = 0; j < p; ++j) EXPECT_LT(std::abs(X.col(j).dot(r)), 1e-8);
    EXPECT_NEAR(fit.residual_variance, r.squaredNorm() / (n - p - 1), 1e-12);
  }
}

TEST(TwoStage, PerfectInstrumentEqualsOls) {
  std::mt19937_64 gen(31);
  std::normal_distribution<double> z;
  const int n = 200;
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd Z(n), y(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = z(gen);
    X(i, 1) = z(gen);
    Z(i) = z(gen);
    y(i) = 1.0 + X(i, 0) - X(i, 1) + 2.0 * Z(i) + z(gen);
  }
  const auto iv = two_stage_least_squares(y, X, Z, Z);
  Eigen::MatrixXd XZ(n, 3);
  XZ << X, Z;
  const auto direct = ols(XZ, y);
  EXPECT_LT((iv.z_hat - Z).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((iv.second_stage.coefficients - direct.coefficients).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(TwoStage, NoiselessExactRecovery) {
  std::mt19937_64 gen(32);
  std::normal_distribution<double> z;
  const int n = 100;
  Eigen::MatrixXd X(n, 1), W(n, 2);
  Eigen::VectorXd Z(n), y(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = z(gen);
    W(i, 0) = z(gen);
    W(i, 1) = z(gen);
    Z(i) = 0.5 + W(i, 0) - 2.0 * W(i, 1);
    y(i) = -1.0 + 3.0 * X(i, 0) + 1.5 * Z(i);
  }
  const auto iv = two_stage_least_squares(y, X, Z, W);
  EXPECT_NEAR(iv.second_stage.coefficients(0), -1.0, 1e-8);
  EXPECT_NEAR(iv.second_stage.coefficients(1), 3.0, 1e-8);
  EXPECT_NEAR(iv.second_stage.coefficients(2), 1.5, 1e-8);
}

TEST(TwoStage, BeatsOlsUnderEndogeneity) {
  std::mt19937_64 gen(33);
  std::normal_distribution<double> z;
  const int n = 10000;
  const double beta_z = 1.0;
  Eigen::MatrixXd X(n, 1), W(n, 1);
  Eigen::VectorXd Z(n), y(n);
  for (int i = 0; i < n; ++i) {
    const double u = z(gen);
    X(i, 0) = z(gen);
    W(i, 0) = z(gen);
    Z(i) = W(i, 0) + u + 0.5 * z(gen);
    y(i) = 2.0 * X(i, 0) + beta_z * Z(i) + u + 0.5 * z(gen);
  }
  const auto iv = two_stage_least_squares(y, X, Z, W);
  Eigen::MatrixXd XZ(n, 2);
  XZ << X, Z;
  const auto naive = ols(XZ, y);
  EXPECT_LT(std::abs(iv.second_stage.coefficients(2) - beta_z), std::abs(naive.coefficients(2) - beta_z));
}

TEST(TwoStage, AppendEstimatedColumn) {
  core::Dataset ds({{"a", {1, 2, 3}}});
  Eigen::VectorXd v(3);
  v << 0.5, 0.25, 0.125;
  append_estimated(ds, "z_hat", v);
  EXPECT_EQ(ds.column("z_hat").level, core::SelLevel::Estimated);
  EXPECT_EQ(ds.values("z_hat")[2], 0.125);
}
