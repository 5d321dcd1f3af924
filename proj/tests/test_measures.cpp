#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "pcopula/error.hpp"
#include "pcopula/measures.hpp"
#include "pcopula/numerics.hpp"
#include "pcopula/rng.hpp"
#include "pcopula/sampler.hpp"

using namespace pcop;

namespace {

std::pair<std::vector<double>, std::vector<double>> random_pair(std::uint64_t seed, std::size_t n,
                                                                bool ties) {
  const CounterRng rng(seed);
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.uniform(i, 0);
    b[i] = 0.3 * a[i] + rng.uniform(i, 1);
    if (ties) {
      a[i] = std::round(a[i] * 6.0);
      b[i] = std::round(b[i] * 4.0);
    }
  }
  return {a, b};
}

}  // namespace

TEST(Ranks, AverageTies) {
  const std::vector<double> a{3.0, 1.0, 3.0, 2.0, 3.0};
  EXPECT_EQ(average_ranks(a), (std::vector<double>{4.0, 1.0, 4.0, 2.0, 4.0}));
  EXPECT_EQ(average_ranks(a), oracle::ranks(a));
}

TEST(Spearman, HandExamples) {
  const std::vector<double> a{1, 2, 3, 4}, b{1, 3, 2, 4};
  EXPECT_NEAR(spearman_emp(a, b), 0.8, 1e-12);
  EXPECT_NEAR(spearman_emp(a, a), 1.0, 1e-15);
  std::vector<double> r(a.rbegin(), a.rend());
  EXPECT_NEAR(spearman_emp(a, r), -1.0, 1e-15);
  EXPECT_THROW(spearman_emp(std::vector<double>{1, 2}, std::vector<double>{1, 2}),
               UndefinedStatistic);
  EXPECT_THROW(spearman_emp(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}),
               UndefinedStatistic);
}

TEST(Kendall, HandExamples) {
  const std::vector<double> a{1, 2, 3, 4}, b{1, 3, 2, 4};
  EXPECT_NEAR(kendall_emp(a, b), 4.0 / 6.0, 1e-15);
  EXPECT_EQ(kendall_emp(a, a), 1.0);
  EXPECT_THROW(kendall_emp(std::vector<double>{2, 2}, std::vector<double>{1, 2}),
               UndefinedStatistic);
}

TEST(Kendall, FastEqualsAllPairsExactly) {
  for (std::uint64_t inst = 0; inst < 50; ++inst) {
    const std::size_t n = 2 + (inst * 37) % 199;
    auto [a, b] = random_pair(inst, n, inst % 2 == 0);
    if (std::all_of(a.begin(), a.end(), [&](double v) { return v == a[0]; })) continue;
    if (std::all_of(b.begin(), b.end(), [&](double v) { return v == b[0]; })) continue;
    ASSERT_EQ(kendall_emp(a, b), oracle::kendall_pairs(a, b)) << "instance " << inst;
  }
}

TEST(RankStatistics, InvariantUnderIncreasingTransforms) {
  auto [a, b] = random_pair(3, 500, false);
  std::vector<double> ea(a.size()), cb(b.size());
  std::transform(a.begin(), a.end(), ea.begin(), [](double x) { return std::exp(5 * x); });
  std::transform(b.begin(), b.end(), cb.begin(), [](double x) { return x * x * x; });
  EXPECT_NEAR(spearman_emp(ea, cb), spearman_emp(a, b), 1e-12);
  EXPECT_NEAR(kendall_emp(ea, cb), kendall_emp(a, b), 1e-12);
  EXPECT_EQ(kdd_emp(ea, cb), kdd_emp(a, b));
  EXPECT_EQ(kendall_emp(a, b), kendall_emp(b, a));
  EXPECT_NEAR(spearman_emp(a, b), spearman_emp(b, a), 1e-15);
  std::vector<double> na(a.size());
  std::transform(a.begin(), a.end(), na.begin(), [](double x) { return -x; });
  EXPECT_EQ(kendall_emp(na, b), -kendall_emp(a, b));
  EXPECT_NEAR(spearman_emp(na, b), -spearman_emp(a, b), 1e-15);
}

TEST(EmpiricalKdd, MatchesLatticeOracle) {
  for (std::uint64_t inst = 0; inst < 50; ++inst) {
    const std::size_t n = 3 + (inst * 13) % 48;
    auto [a, b] = random_pair(100 + inst, n, inst % 3 == 0);
    if (std::all_of(a.begin(), a.end(), [&](double v) { return v == a[0]; })) continue;
    if (std::all_of(b.begin(), b.end(), [&](double v) { return v == b[0]; })) continue;
    const double ref = oracle::kdd_lattice(a, b);
    ASSERT_EQ(serial::kdd_emp_full(a, b), ref) << inst;
    ASSERT_EQ(parallel::kdd_emp_full(a, b), ref) << inst;
    ASSERT_EQ(kdd_emp_restricted(a, b), ref) << inst;
    ASSERT_EQ(kdd_emp(a, b), ref) << inst;
  }
}

TEST(EmpiricalKdd, ComonotoneAndIndependent) {
  std::vector<double> a(100);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<double>(i);
  const double same = kdd_emp(a, a);
  EXPECT_EQ(same, oracle::kdd_lattice(a, a));
  EXPECT_GT(same, 0.9);

  const CounterRng rng(42);
  std::vector<double> x(5000), y(5000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.uniform(i, 0);
    y[i] = rng.uniform(i, 1);
  }
  const double k = kdd_emp(x, y);
  EXPECT_GE(k, 0.0);
  EXPECT_LE(k, 0.08);
}

TEST(EmpiricalKdd, RestrictedRouteStaysCloseAboveThreshold) {
  const auto s = sample_cvine(scenario_table()[0].model, 2500, 5);
  const double full = serial::kdd_emp_full(s.x, s.y);
  const double fast = kdd_emp(s.x, s.y);
  EXPECT_LE(fast, full);
  EXPECT_NEAR(fast, full, 4.0 * 2.0 / 200.0);  // one quantile cell in each direction
  EXPECT_EQ(parallel::kdd_emp_full(s.x, s.y), full);
}

TEST(PartialCorrelation, GaussianIdentity) {
  // (0.6, 0.6, 0.6) trivariate normal: (0.6 - 0.36) / (1 - 0.36) = 0.375.
  const CounterRng rng(11);
  const std::size_t n = 5000;
  std::vector<double> x(n), y(n), z(n);
  const double a = 0.6, c = std::sqrt(1 - a * a);
  const double b2 = (0.6 - a * a) / c, b3 = std::sqrt(1 - a * a - b2 * b2);
  for (std::size_t i = 0; i < n; ++i) {
    const double e0 = std_normal_quantile(rng.uniform(i, 0));
    const double e1 = std_normal_quantile(rng.uniform(i, 1));
    const double e2 = std_normal_quantile(rng.uniform(i, 2));
    z[i] = e0;
    x[i] = a * e0 + c * e1;
    y[i] = a * e0 + b2 * e1 + b3 * e2;
  }
  EXPECT_NEAR(partial_correlation(x, y, z), 0.375, 0.04);
  const auto fit = partial_correlation_fit(x, y, z);
  EXPECT_NEAR(fit.beta, 0.6, 0.05);
  EXPECT_NEAR(fit.alpha, 0.0, 0.05);
}

TEST(PartialCorrelation, ResidualsOfIndependentNoise) {
  const CounterRng rng(12);
  const std::size_t n = 5000;
  std::vector<double> x(n), y(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = rng.uniform(i, 0);
    x[i] = z[i] + 1e-3 * (rng.uniform(i, 1) - 0.5);
    y[i] = z[i] + (rng.uniform(i, 2) - 0.5);
  }
  EXPECT_NEAR(partial_correlation(x, y, z), 0.0, 0.05);
  std::vector<double> flat(n, 1.0);
  EXPECT_THROW(partial_correlation(x, y, flat), UndefinedStatistic);
  EXPECT_THROW(partial_correlation(z, y, z), UndefinedStatistic);
}

TEST(Summary, CsvRow) {
  const std::vector<double> a{1, 2, 3, 4}, b{1, 3, 2, 4};
  const auto s = summarize("marginal", a, b);
  EXPECT_EQ(DependenceSummary::csv_header(), "pair,spearman,kendall,kdd,n");
  EXPECT_EQ(s.csv_row().substr(0, 29), "marginal,0.80000000000000004,");
  EXPECT_EQ(s.n, 4u);
  EXPECT_GE(s.kdd, 0.0);
  EXPECT_LE(s.kdd, 1.0);
}
