#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pcopula/error.hpp"
#include "pcopula/numerics.hpp"

using namespace pcop;

TEST(NormalCdf, MatchesDensityQuadrature) {
  for (double x : {-8.0, -3.5, -1.0, 0.0, 0.3, 1.959963985, 4.0, 7.5})
    EXPECT_NEAR(std_normal_cdf(x), oracle::normal_cdf(x), 1e-12) << x;
  EXPECT_NEAR(std_normal_cdf(1.959963985), 0.975, 1e-9);
  EXPECT_EQ(std_normal_cdf(0.0), 0.5);
  EXPECT_NEAR(std_normal_cdf(40.0), 1.0, 1e-15);
}

TEST(NormalCdf, SymmetricAndMonotone) {
  double prev = 0.0;
  for (int k = -400; k <= 400; ++k) {
    const double x = k / 40.0;
    EXPECT_NEAR(std_normal_cdf(x) + std_normal_cdf(-x), 1.0, 1e-13);
    EXPECT_GE(std_normal_cdf(x), prev);
    prev = std_normal_cdf(x);
  }
  EXPECT_THROW(std_normal_cdf(NAN), DomainError);
  EXPECT_THROW(std_normal_cdf(INFINITY), DomainError);
}

TEST(NormalQuantile, InvertsCdfOn999Points) {
  double prev = -INFINITY;
  for (int k = 1; k <= 999; ++k) {
    const double p = k / 1000.0;
    const double x = std_normal_quantile(p);
    EXPECT_LE(std::abs(std_normal_cdf(x) - p), 1e-12) << p;
    EXPECT_GT(x, prev);
    prev = x;
    EXPECT_NEAR(x + std_normal_quantile(1.0 - p), 0.0, 1e-12);
  }
}

TEST(NormalQuantile, AgreesWithBisection) {
  for (double p : {1e-10, 1e-4, 0.025, 0.3, 0.975, 0.9999}) {
    const double ref = oracle::bisect(oracle::normal_cdf, p, -12.0, 12.0);
    EXPECT_NEAR(std_normal_quantile(p), ref, 1e-8 * std::max(1.0, std::abs(ref))) << p;
  }
  EXPECT_NEAR(std_normal_quantile(0.975), 1.959963985, 1e-8);
  EXPECT_EQ(std_normal_quantile(0.5), 0.0);
  EXPECT_THROW(std_normal_quantile(0.0), DomainError);
  EXPECT_THROW(std_normal_quantile(1.0), DomainError);
}

TEST(Bvn, OrthantIdentity) {
  for (double r : {-0.95, -0.5, 0.0, 0.3, 0.9, 0.9999})
    EXPECT_NEAR(bvn_cdf(0.0, 0.0, r), 0.25 + std::asin(r) / (2.0 * std::numbers::pi), 1e-12) << r;
}

TEST(Bvn, MatchesTwoDimensionalQuadrature) {
  const double pts[][3] = {{-1.0, 0.5, 0.7}, {1.2, -0.3, -0.6}, {2.0, 2.5, 0.95},
                           {-2.5, -2.0, 0.9}, {0.4, 0.1, -0.95}, {-3.0, 3.0, 0.2}};
  for (const auto& p : pts)
    EXPECT_NEAR(bvn_cdf(p[0], p[1], p[2]), oracle::bvn_2d(p[0], p[1], p[2]), 1e-10)
        << p[0] << "," << p[1] << "," << p[2];
}

TEST(Bvn, IndependenceAndMonotonicityOnGrid) {
  for (double r : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    for (int i = 0; i <= 40; ++i) {
      double prev_b = 0.0;
      for (int j = 0; j <= 40; ++j) {
        const double a = -4.0 + 0.2 * i, b = -4.0 + 0.2 * j;
        const double v = bvn_cdf(a, b, r);
        EXPECT_GE(v, prev_b - 1e-15);
        prev_b = v;
        if (i > 0) EXPECT_GE(v, bvn_cdf(a - 0.2, b, r) - 1e-15);
        if (r == 0.0) EXPECT_NEAR(v, std_normal_cdf(a) * std_normal_cdf(b), 1e-10);
      }
    }
  }
}

TEST(Bvn, MarginalLimitsAndDomain) {
  for (double r : {-0.7, 0.0, 0.8}) {
    EXPECT_NEAR(bvn_cdf(0.7, INFINITY, r), std_normal_cdf(0.7), 1e-10);
    EXPECT_NEAR(bvn_cdf(40.0, -1.1, r), std_normal_cdf(-1.1), 1e-10);
    EXPECT_EQ(bvn_cdf(-INFINITY, 0.2, r), 0.0);
  }
  EXPECT_THROW(bvn_cdf(0.0, 0.0, 1.0), DomainError);
  EXPECT_THROW(bvn_cdf(0.0, 0.0, -1.5), DomainError);
}

TEST(Quadrature, RuleShape) {
  for (int order : {16, 32, 48, 64, 128}) {
    const auto& r = QuadratureRule::gauss_legendre(order);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.nodes().size(); ++i) {
      EXPECT_GT(r.weights()[i], 0.0);
      EXPECT_GT(r.nodes()[i], 0.0);
      EXPECT_LT(r.nodes()[i], 1.0);
      if (i) EXPECT_GT(r.nodes()[i], r.nodes()[i - 1]);
      sum += r.weights()[i];
    }
    EXPECT_NEAR(sum, 1.0, 1e-14);
    // exact up to degree 2 * order - 1
    for (int k : {0, 1, 7, 2 * order - 1}) {
      const double got = r.apply([k](double x) { return (k + 1) * std::pow(x, k); });
      EXPECT_NEAR(got, 1.0, 1e-13) << order << " " << k;
    }
  }
}

TEST(Quadrature, Moments) {
  for (int k = 0; k <= 10; ++k)
    EXPECT_NEAR(integrate_01([k](double z) { return std::pow(z, k); }), 1.0 / (k + 1), 1e-12);
}

TEST(Quadrature, PiecewiseSmoothAndErrors) {
  EXPECT_NEAR(integrate_01([](double z) { return std::abs(z - 0.3); }), 0.29, 1e-10);
  EXPECT_NEAR(integrate_01([](double z) { return std::sqrt(z); }), 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(integrate([](double x) { return std::exp(x); }, -1.0, 2.0),
              std::exp(2.0) - std::exp(-1.0), 1e-10);
  EXPECT_THROW(integrate_01([](double z) { return z > 0.5 ? NAN : 1.0; }), EvaluationError);
}

TEST(RootFinding, AgreesWithBisection) {
  const auto f = [](double x) { return std::tanh(3.0 * x) - 0.2 + 0.1 * x; };
  const double root = find_root(f, RootBracket::make(f, -2.0, 2.0, 1e-14));
  const double ref = oracle::bisect([](double x) { return std::tanh(3.0 * x) + 0.1 * x; }, 0.2,
                                    -2.0, 2.0);
  EXPECT_NEAR(root, ref, 1e-13);
}

TEST(RootFinding, HandlesFlatAndSteepFunctions) {
  const auto steep = [](double x) { return std::pow(x, 9.0) - 1e-9; };
  EXPECT_NEAR(find_root(steep, RootBracket::make(steep, 0.0, 1.0, 1e-15)), 0.1, 1e-12);
  const auto endpoint = [](double x) { return x - 1.0; };
  EXPECT_EQ(find_root(endpoint, RootBracket::make(endpoint, 0.0, 1.0, 1e-15)), 1.0);
  EXPECT_THROW(RootBracket::make([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12),
               BracketError);
}

TEST(Probability, Clamp) {
  EXPECT_EQ(clamp_probability(0.0), kProbFloor);
  EXPECT_EQ(clamp_probability(1.0), 1.0 - kProbFloor);
  EXPECT_EQ(clamp_probability(0.25), 0.25);
}
