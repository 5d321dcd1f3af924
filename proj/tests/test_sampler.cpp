#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "pcopula/app.hpp"
#include "pcopula/error.hpp"
#include "pcopula/measures.hpp"
#include "pcopula/numerics.hpp"
#include "pcopula/rng.hpp"
#include "pcopula/sampler.hpp"

using namespace pcop;

namespace {

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

ScenarioConfig find(const std::string& id) {
  for (const auto& c : scenario_table())
    if (c.id() == id) return c;
  throw std::runtime_error("no config " + id);
}

}  // namespace

TEST(CounterRng, DeterministicAndUniform) {
  const CounterRng a(42), b(42), c(43);
  EXPECT_EQ(a.bits(5, 1), b.bits(5, 1));
  EXPECT_NE(a.bits(5, 1), c.bits(5, 1));
  EXPECT_NE(a.bits(5, 1), a.bits(5, 2));
  EXPECT_NE(a.bits(5, 1), a.bits(6, 1));
  std::vector<double> u;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    u.push_back(a.uniform(i, 0));
    ASSERT_GT(u.back(), 0.0);
    ASSERT_LT(u.back(), 1.0);
  }
  EXPECT_NEAR(mean(u), 0.5, 0.01);
  EXPECT_NEAR(variance(u), 1.0 / 12.0, 0.005);
}

TEST(Sampler, IndependentModelGivesIndependentColumns) {
  const auto s = sample_cvine(VineModel{}, 5000, 42);
  const CounterRng rng(42);
  for (std::size_t i = 0; i < s.size(); i += 997) {
    EXPECT_EQ(s.z[i], rng.uniform(i, 0));
    EXPECT_EQ(s.x[i], rng.uniform(i, 1));
    EXPECT_EQ(s.y[i], rng.uniform(i, 2));
  }
  EXPECT_LE(std::abs(spearman_emp(s.x, s.y)), 0.03);
  EXPECT_LE(std::abs(spearman_emp(s.x, s.z)), 0.03);
  EXPECT_LE(std::abs(spearman_emp(s.y, s.z)), 0.03);
}

TEST(Sampler, DeterministicAndScheduleIndependent) {
  const auto cfg = find("11c_gaussian");
  const auto a = serial::sample_cvine(cfg.model, 4000, 9);
  const auto b = parallel::sample_cvine(cfg.model, 4000, 9);
  const auto c = sample_cvine(cfg.model, 4000, 9);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.z, b.z);
  EXPECT_EQ(a.u_y, b.u_y);
  EXPECT_EQ(b.x, c.x);
  EXPECT_NE(a.x, sample_cvine(cfg.model, 4000, 10).x);
  EXPECT_THROW(sample_cvine(cfg.model, 0, 1), InputError);
}

TEST(Sampler, PseudoObservationsRecoverInternalDraws) {
  for (const auto& cfg : scenario_table(2000)) {
    const auto s = sample_cvine(cfg.model, cfg.n, cfg.seed);
    const auto p = pseudo_observations(s, cfg.model.c_xz, cfg.model.c_yz);
    for (std::size_t i = 0; i < s.size(); ++i) {
      ASSERT_NEAR(p.u_x[i], s.w_x[i], 1e-8) << cfg.id();
      ASSERT_NEAR(p.u_y[i], s.u_y[i], 1e-8) << cfg.id();
    }
  }
}

TEST(Sampler, MarginsAreUniformForEveryScenario) {
  for (const auto& cfg : scenario_table()) {
    const auto s = sample_cvine(cfg.model, cfg.n, cfg.seed);
    for (const auto* col : {&s.x, &s.y, &s.z}) {
      EXPECT_NEAR(mean(*col), 0.5, 0.02) << cfg.id();
      EXPECT_NEAR(variance(*col), 1.0 / 12.0, 0.01) << cfg.id();
      for (double v : *col) ASSERT_TRUE(v >= 0.0 && v <= 1.0);
    }
  }
}

TEST(ScenarioTable, ShapeAndSigns) {
  const auto t = scenario_table();
  ASSERT_EQ(t.size(), 43u);
  std::set<std::string> ids;
  for (const auto& c : t) {
    EXPECT_TRUE(c.signs_match()) << c.id();
    EXPECT_EQ(c.n, 5000u);
    EXPECT_EQ(c.seed, 42u);
    ids.insert(c.id());
  }
  EXPECT_EQ(ids.size(), t.size());
  EXPECT_EQ(find("1_gaussian").params(), "gaussian(0.6)|gaussian(0.6)|gaussian[const:0.6]");
  EXPECT_EQ(find("7_gaussian").params(), "gaussian(-0.7)|gaussian(-0.7)|gaussian[const:-0.3]");
  EXPECT_EQ(find("4_clayton").params(), "clayton(2)|clayton(2)@90|indep");
  EXPECT_EQ(find("10_frank").params(), "indep|indep|frank[const:5]");
  EXPECT_EQ(find("11c_gaussian").params(), "gaussian(0.6)|gaussian(0.6)|gaussian[one-minus-2z]");
  EXPECT_EQ(find("11b_frank").signs[2], -1);
  EXPECT_EQ(find("11c_gaussian").signs[2], 2);
  EXPECT_EQ(scenario_signs(6), (std::array<int, 3>{-1, -1, 1}));
}

TEST(ScenarioTable, ConditionalIndependenceAtScenarioTwo) {
  const auto run = run_scenario(find("2_gaussian"));
  EXPECT_GE(run.marginal.spearman, 0.2);
  EXPECT_LE(std::abs(run.partial.spearman), 0.035);
  EXPECT_LE(std::abs(pearson(run.pseudo.u_x, run.pseudo.u_y)), 0.03);
}

TEST(ScenarioTable, SimpsonOracleForScenarioSeven) {
  // Trivariate normal: corr(X, Y) = r_xz r_yz + r_c sqrt((1 - r_xz^2)(1 - r_yz^2)).
  const double oracle = 0.49 - 0.3 * 0.51;
  EXPECT_NEAR(oracle, 0.337, 1e-12);
  const auto run = run_scenario(find("7_gaussian"));
  std::vector<double> nx, ny;
  for (std::size_t i = 0; i < run.samples.size(); ++i) {
    nx.push_back(std_normal_quantile(run.samples.x[i]));
    ny.push_back(std_normal_quantile(run.samples.y[i]));
  }
  EXPECT_NEAR(pearson(nx, ny), oracle, 0.04);
  EXPECT_LT(run.partial.spearman, -0.05);
}

TEST(ScenarioTable, AnalyticConsistency) {
  for (const auto& cfg : scenario_table()) {
    const auto run = run_scenario(cfg);
    EXPECT_NEAR(run.partial.spearman, partial_rho(cfg.model.cond), 0.045) << cfg.id();
    if (cfg.scenario == 10)
      EXPECT_NEAR(run.marginal.spearman, run.partial.spearman, 0.045) << cfg.id();
  }
}

TEST(Pitfall, ConstructionAndLimits) {
  const auto p = sample_pitfall(0.5, 5000, 42);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_NEAR(p.u_x[i], std_normal_cdf((p.x[i] - p.z[i] * p.z[i]) / 0.5), 1e-12);
  }
  EXPECT_NEAR(partial_correlation(p.x, p.y, p.z), 2.0 / 2.25, 0.03);
  EXPECT_LE(std::abs(spearman_emp(p.u_x, p.u_y)), 0.035);
  const auto wide = sample_pitfall(100.0, 5000, 42);
  EXPECT_NEAR(pearson(wide.x, wide.y), 2.0 / (2.0 + 1e4), 0.05);
  EXPECT_THROW(sample_pitfall(0.0, 10, 1), DomainError);
}

TEST(DependenceSign, Families) {
  EXPECT_EQ(dependence_sign(PairCopulaSpec()), 0);
  EXPECT_EQ(dependence_sign(PairCopulaSpec(Family::clayton, 2.0, Rotation::r90)), -1);
  EXPECT_EQ(dependence_sign(PairCopulaSpec(Family::clayton, 2.0, Rotation::r180)), 1);
  EXPECT_EQ(dependence_sign(PairCopulaSpec(Family::gumbel, 1.0)), 0);
  EXPECT_EQ(dependence_sign(PairCopulaSpec(Family::frank, -5.0)), -1);
  EXPECT_EQ(dependence_sign(ConditionalFamily(Family::gaussian, ThetaFunction::one_minus_2z())), 2);
}
