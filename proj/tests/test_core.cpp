#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "sel/core/csv.hpp"
#include "sel/core/dataset.hpp"
#include "sel/core/rng.hpp"
#include "sel/core/split.hpp"
#include "sel/core/standardize.hpp"
#include "test_util.hpp"

using namespace sel;
using namespace sel::core;
using sel::test::expect_code;
using sel::test::TempDir;

namespace {

double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const auto n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double variance_of(const std::vector<double>& xs) {
  const double m = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

Dataset random_dataset(std::mt19937_64& gen, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> mag(-12.0, 12.0);
  std::normal_distribution<double> z;
  std::vector<Column> out;
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<double> v(rows);
    for (auto& x : v) x = z(gen) * std::pow(10.0, mag(gen));
    out.push_back({"c" + std::to_string(c), v});
  }
  return Dataset(std::move(out), std::string("c0"));
}

}  // namespace

TEST(Dataset, RejectsBrokenInvariants) {
  expect_code([] { Dataset({{"a", {1, 2}}, {"b", {1}}}); }, ErrorCode::InvalidDataset);
  expect_code([] { Dataset({{"a", {1}}, {"a", {2}}}); }, ErrorCode::InvalidDataset);
  expect_code([] { Dataset({{"a", {1}}}, std::string("z")); }, ErrorCode::MissingTarget);
  expect_code([] { Dataset({{"a", {NAN}}}); }, ErrorCode::NonFiniteValue);
  expect_code([] { Dataset(std::vector<Column>{Column{"a", {}, SelLevel::Raw}}); }, ErrorCode::InvalidDataset);
}

TEST(Dataset, FeatureNamesSkipTarget) {
  Dataset ds({{"x", {1, 2}}, {"y", {3, 4}}, {"z", {5, 6}}}, std::string("y"));
  EXPECT_EQ(ds.feature_names(), (std::vector<std::string>{"x", "z"}));
  EXPECT_EQ(ds.target_values()[1], 4.0);
}

TEST(Process, RequiresTwoFiniteValues) {
  expect_code([] { Process(0, {1.0}); }, ErrorCode::TooShort);
  expect_code([] { Process(0, {1.0, INFINITY}); }, ErrorCode::NonFiniteValue);
  EXPECT_EQ(Process(3, {1.0, 2.0}).values.size(), 2u);
}

TEST(Csv, ReadsWellFormedFile) {
  TempDir dir;
  const auto p = dir.write("a.csv", "x,y\n1,2\n3.5,-4\n1e3,0\n");
  const auto ds = read_csv(p, "y");
  EXPECT_EQ(ds.n_rows(), 3u);
  EXPECT_EQ(ds.n_cols(), 2u);
  EXPECT_EQ(ds.values("x")[2], 1000.0);
  for (const auto& c : ds.columns()) EXPECT_EQ(c.level, SelLevel::Raw);
}

TEST(Csv, ErrorPaths) {
  TempDir dir;
  try {
    read_csv(dir.write("bad.csv", "x,y\n1,abc\n"), "y");
    FAIL() << "no throw";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.col(), 1u);
  }
  expect_code([&] { read_csv(dir.write("t.csv", "x,y\n1,2\n"), "z"); }, ErrorCode::MissingTarget);
  expect_code([&] { read_csv(dir / "nope.csv", "y"); }, ErrorCode::MissingFile);
  expect_code([&] { read_csv(dir.write("r.csv", "x,y\n1,2,3\n"), "y"); }, ErrorCode::ParseError);
  expect_code([&] { read_csv(dir.write("n.csv", "x,y\n1,inf\n"), "y"); }, ErrorCode::NonFiniteValue);
  expect_code([&] { read_csv(dir.write("m.csv", "x,y\n1,nan\n"), "y"); }, ErrorCode::NonFiniteValue);
}

TEST(Csv, WriteOneRowAndMissingDirectory) {
  TempDir dir;
  Dataset ds({{"a", {1.5}}, {"b", {2}}});
  write_csv(ds, dir / "one.csv");
  EXPECT_EQ(sel::test::slurp(dir / "one.csv"), "a,b\n1.5,2\n");
  expect_code([&] { write_csv(ds, dir / "missing" / "x.csv"); }, ErrorCode::IoError);
}

TEST(Csv, RoundTripProperty) {
  TempDir dir;
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ds = random_dataset(gen, 1 + gen() % 20, 1 + gen() % 5);
    write_csv(ds, dir / "rt.csv");
    const auto back = read_csv(dir / "rt.csv", "c0");
    ASSERT_EQ(back.n_rows(), ds.n_rows());
    for (std::size_t c = 0; c < ds.n_cols(); ++c)
      for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        const double a = ds.columns()[c].values[r], b = back.columns()[c].values[r];
        EXPECT_LE(std::abs(a - b), 1e-15 * std::abs(a));
      }
  }
}

TEST(Split, SizesAndDeterminism) {
  std::vector<double> v(10);
  std::iota(v.begin(), v.end(), 0.0);
  Dataset ds({{"v", v}});
  const auto [tr, te] = split(ds, {0.7, 5});
  EXPECT_EQ(tr.n_rows(), 7u);
  EXPECT_EQ(te.n_rows(), 3u);
  const auto a = partition_rows(10, {0.7, 5}), b = partition_rows(10, {0.7, 5});
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  expect_code([] { split(Dataset({{"v", {1.0}}}), {}); }, ErrorCode::DegenerateSplit);
}

TEST(Split, PartitionProperty) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 300;
    const double f = std::uniform_real_distribution<double>(0.05, 0.95)(gen);
    const std::uint64_t seed = gen();
    const auto n_train = static_cast<std::size_t>(std::floor(f * static_cast<double>(n)));
    if (n_train == 0 || n_train == n) {
      expect_code([&] { partition_rows(n, {f, seed}); }, ErrorCode::DegenerateSplit);
      continue;
    }
    const auto p = partition_rows(n, {f, seed});
    EXPECT_EQ(p.train.size(), n_train);
    std::set<std::size_t> all(p.train.begin(), p.train.end());
    all.insert(p.test.begin(), p.test.end());
    EXPECT_EQ(all.size(), n);
    EXPECT_EQ(*all.rbegin(), n - 1);
    EXPECT_EQ(partition_rows(n, {f, seed}).train, p.train);
  }
}

TEST(Standardize, HandExample) {
  Dataset ds({{"a", {1, 2, 3}}, {"y", {5, 5, 5}}}, std::string("y"));
  const auto [z, scales] = standardize(ds, {"y"});
  EXPECT_NEAR(z.values("a")[0], -1.0, 1e-15);
  EXPECT_NEAR(z.values("a")[1], 0.0, 1e-15);
  EXPECT_NEAR(z.values("a")[2], 1.0, 1e-15);
  EXPECT_EQ(z.values("y")[0], 5.0);
  EXPECT_EQ(scales.at("a").sd, 1.0);
  expect_code([&] { standardize(ds, {}); }, ErrorCode::DegenerateVariance);
}

TEST(Standardize, RoundTripProperty) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + gen() % 40;
    std::vector<Column> cols;
    for (int c = 0; c < 3; ++c) {
      std::vector<double> v(n);
      const double scale = std::exp(3.0 * z(gen)), shift = 10.0 * z(gen);
      for (auto& x : v) x = shift + scale * z(gen);
      cols.push_back({"c" + std::to_string(c), v});
    }
    Dataset ds(cols);
    const auto [s, table] = standardize(ds, {});
    for (const auto& c : s.columns()) {
      EXPECT_NEAR(mean_of(c.values), 0.0, 1e-10);
      EXPECT_NEAR(sample_sd(c.values, 0.0), 1.0, 1e-10);
    }
    const auto back = unstandardize(s, table);
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t r = 0; r < n; ++r) {
        const double a = ds.columns()[c].values[r];
        EXPECT_NEAR(back.columns()[c].values[r], a, 1e-12 * std::max(1.0, std::abs(a)));
      }
  }
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  RngStream a(7, 1), b(7, 1), c(7, 2);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs = differs || x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformAndBelowRanges) {
  RngStream r(1, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(r.below(7), 7u);
  }
}

TEST(Rng, NormalDegenerateAndDeterministic) {
  RngStream r(1, 0);
  for (double x : sample_normal(r, 50, 2.5, 0.0)) EXPECT_EQ(x, 2.5);
  RngStream a(9, 3), b(9, 3);
  EXPECT_EQ(sample_normal(a, 100, 0, 1), sample_normal(b, 100, 0, 1));
  expect_code([&] { sample_normal(r, 3, 0.0, -1.0); }, ErrorCode::InvalidArgument);
}

TEST(Rng, NormalLawOfLargeNumbers) {
  RngStream r(42, 0);
  const auto xs = sample_normal(r, 100000, 0.0, 1.0);
  const double m = std::accumulate(xs.begin(), xs.end(), 0.0) / 1e5;
  EXPECT_LT(std::abs(m), 0.02);
  EXPECT_LT(std::abs(std::sqrt(variance_of(xs)) - 1.0), 0.02);
}

TEST(Rng, CauchyExamples) {
  EXPECT_EQ(cauchy_quantile(0.5, 3.25, 2.0), 3.25);
  RngStream r(42, 1);
  EXPECT_LT(std::abs(median_of(sample_cauchy(r, 100000, 3.0, 1.0)) - 3.0), 0.05);
  expect_code([&] { sample_cauchy(r, 5, 0.0, 0.0); }, ErrorCode::NonPositiveScale);
  RngStream a(5, 5), b(5, 5);
  EXPECT_EQ(sample_cauchy(a, 20, 1, 2), sample_cauchy(b, 20, 1, 2));
}

TEST(Rng, CauchyMeanDoesNotStabilize) {
  std::vector<double> means, medians;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    RngStream r(11, rep);
    const auto xs = sample_cauchy(r, 400, 0.0, 1.0);
    means.push_back(std::accumulate(xs.begin(), xs.end(), 0.0) / 400.0);
    medians.push_back(median_of(xs));
  }
  EXPECT_GT(variance_of(means), 10.0 * variance_of(medians));
}

TEST(Rng, ShuffleIsPermutation) {
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  RngStream r(3, 3);
  auto w = v;
  shuffle(std::span<int>(w), r);
  EXPECT_NE(w, v);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(w, v);
}
