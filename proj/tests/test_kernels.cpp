#include <gtest/gtest.h>

#include <omp.h>

#include <cmath>

#include "pcopula/kernels.hpp"
#include "pcopula/partial.hpp"

using namespace pcop;

// Serial references and OpenMP kernels must agree bit for bit, whatever
// the team size.
class KernelParity : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(GetParam());
  }
  void TearDown() override { omp_set_num_threads(saved_); }
  int saved_ = 1;
};

TEST_P(KernelParity, ScanDeviation) {
  const PairCopulaSpec s(Family::gumbel, 2.5, Rotation::r90);
  const BivariateFn c = [&](double u, double v) { return cdf(s, u, v); };
  const auto g = linspace(0.0, 1.0, 73);
  const auto a = serial::scan_deviation(c, g, g);
  const auto b = parallel::scan_deviation(c, g, g);
  EXPECT_EQ(a.min_dev, b.min_dev);
  EXPECT_EQ(a.max_dev, b.max_dev);
  EXPECT_EQ(a.max_abs, b.max_abs);
  EXPECT_EQ(a.argmax_u, b.argmax_u);
  EXPECT_EQ(a.argmax_v, b.argmax_v);
  EXPECT_LT(a.min_dev, 0.0);
}

TEST_P(KernelParity, TensorQuadrature) {
  const BivariateFn f = [](double u, double v) { return std::sin(3 * u) * std::exp(v) + u * v; };
  const double a = serial::tensor_quadrature(f);
  EXPECT_EQ(a, parallel::tensor_quadrature(f));
  const double exact = (1 - std::cos(3.0)) / 3.0 * (std::exp(1.0) - 1.0) + 0.25;
  EXPECT_NEAR(a, exact, 1e-13);
}

TEST_P(KernelParity, MapIndex) {
  const auto f = [](std::size_t i) { return std::sqrt(static_cast<double>(i)) * 1.5; };
  EXPECT_EQ(serial::map_index(1000, f), parallel::map_index(1000, f));
}

TEST_P(KernelParity, PartialFunctionalsAreScheduleIndependent) {
  const ConditionalFamily cond(Family::frank, ThetaFunction::exp_z());
  const double tau = partial_tau(cond);
  const double rho2 = partial_rho_from_cdf(cond);
  omp_set_num_threads(1);
  EXPECT_EQ(partial_tau(cond), tau);
  EXPECT_EQ(partial_rho_from_cdf(cond), rho2);
}

INSTANTIATE_TEST_SUITE_P(Teams, KernelParity, ::testing::Values(1, 2, 4));

TEST(Kernels, LinspaceEndpointsExact) {
  const auto g = linspace(0.0, 1.0, 201);
  ASSERT_EQ(g.size(), 201u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_EQ(g[100], 0.5);
}

TEST(Kernels, KddOfCdfZoomNeverLowersTheCoarseMax) {
  const PairCopulaSpec s(Family::clayton, 4.0);
  const BivariateFn c = [&](double u, double v) { return cdf(s, u, v); };
  const auto g = linspace(0.0, 1.0, 201);
  const double coarse = 4.0 * serial::scan_deviation(c, g, g).max_abs;
  EXPECT_GE(kdd_of_cdf(c, GridSpec{}), coarse);
  EXPECT_LE(kdd_of_cdf(c, GridSpec{}), 1.0);
}

TEST(Kernels, QuadrantFlags) {
  const auto flags = quadrant_of_cdf([](double u, double v) { return u * v; }, GridSpec{});
  EXPECT_TRUE(flags.qpd);
  EXPECT_TRUE(flags.qnd);
  EXPECT_EQ(flags.classify(), QuadrantClass::qpd);
}
