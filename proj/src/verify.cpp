#include <cmath>
#include <cstdio>
#include <ostream>

#include "pcopula/app.hpp"
#include "pcopula/csv.hpp"
#include "pcopula/kernels.hpp"
#include "pcopula/measures.hpp"
#include "pcopula/numerics.hpp"
#include "pcopula/rng.hpp"

namespace pcop {

std::vector<std::pair<std::string, ConditionalFamily>> verify_configs() {
  struct Entry {
    Family family;
    const char* theta;
    Rotation rotation;
  };
  const Entry entries[] = {
      {Family::independence, "const:0", Rotation::r0},
      {Family::gaussian, "const:0.6", Rotation::r0},
      {Family::gaussian, "const:-0.5", Rotation::r0},
      {Family::gaussian, "one-minus-2z", Rotation::r0},
      {Family::frank, "const:5", Rotation::r0},
      {Family::frank, "const:-5", Rotation::r0},
      {Family::frank, "exp", Rotation::r0},
      {Family::frank, "negexp", Rotation::r0},
      {Family::frank, "table:0:-4,1:-1", Rotation::r0},
      {Family::clayton, "const:2", Rotation::r0},
      {Family::clayton, "exp", Rotation::r0},
      {Family::clayton, "const:2", Rotation::r90},
      {Family::clayton, "table:0:0.5,0.5:3,1:1", Rotation::r0},
      {Family::clayton, "const:3", Rotation::r180},
      {Family::gumbel, "const:2", Rotation::r0},
      {Family::gumbel, "exp", Rotation::r0},
      {Family::gumbel, "const:2", Rotation::r270},
      {Family::gumbel, "table:0:1,1:3", Rotation::r0},
      {Family::fgm, "const:1", Rotation::r0},
      {Family::fgm, "const:-0.5", Rotation::r0},
      {Family::fgm, "one-minus-2z", Rotation::r0},
      {Family::fgm, "table:0:-1,1:1", Rotation::r0},
      {Family::fgm, "table:0:0.2,1:0.9", Rotation::r0},
  };
  std::vector<std::pair<std::string, ConditionalFamily>> out;
  for (const auto& e : entries) {
    ConditionalFamily c(e.family, ThetaFunction::parse(e.theta), e.rotation);
    out.emplace_back(c.describe(), c);
  }
  return out;
}

std::string format_check(const CheckResult& c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "measured=%.3e tol=%.3e", c.measured, c.tolerance);
  std::string s = std::string(c.passed ? "PASS " : "FAIL ") + c.name + " " + buf;
  if (!c.detail.empty()) s += " " + c.detail;
  return s;
}

namespace {

class Suite {
 public:
  Suite(const VerifyOptions& opts, std::ostream* progress) : opts_(opts), progress_(progress) {}

  bool wants(const std::string& name) const {
    return opts_.only.empty() || name.rfind(opts_.only, 0) == 0;
  }
  // Whether any check under this name prefix can be selected.
  bool wants_group(const std::string& prefix) const {
    return wants(prefix) || opts_.only.rfind(prefix, 0) == 0;
  }

  // measured <= tolerance passes; NaN fails.
  void record(const std::string& name, double measured, double tol, std::string detail = {}) {
    CheckResult r{name, measured <= tol, measured, tol, std::move(detail)};
    if (progress_) *progress_ << format_check(r) << '\n' << std::flush;
    results_.push_back(std::move(r));
  }

  template <typename F>
  void check(const std::string& name, double tol, F&& measure) {
    if (!wants(name)) return;
    try {
      record(name, measure(), tol);
    } catch (const std::exception& e) {
      CheckResult r{name, false, std::nan(""), tol, std::string("error: ") + e.what()};
      if (progress_) *progress_ << format_check(r) << '\n' << std::flush;
      results_.push_back(std::move(r));
    }
  }

  std::vector<CheckResult> take() { return std::move(results_); }
  const VerifyOptions& opts() const { return opts_; }

 private:
  VerifyOptions opts_;
  std::ostream* progress_;
  std::vector<CheckResult> results_;
};

std::vector<PairCopulaSpec> pair_specs() {
  std::vector<PairCopulaSpec> s{PairCopulaSpec::independence(),
                                {Family::gaussian, 0.6},
                                {Family::gaussian, -0.5},
                                {Family::frank, 5.0},
                                {Family::frank, -5.0},
                                {Family::fgm, 0.7},
                                {Family::fgm, -0.7}};
  for (Rotation r : {Rotation::r0, Rotation::r90, Rotation::r180, Rotation::r270}) {
    s.emplace_back(Family::clayton, 2.0, r);
    s.emplace_back(Family::gumbel, 2.0, r);
  }
  return s;
}

double axiom_violation(const BivariateFn& c) {
  const auto g = linspace(0.0, 1.0, 51);
  double worst = 0.0;
  for (double t : g) {
    worst = std::max({worst, std::abs(c(t, 0.0)), std::abs(c(0.0, t)), std::abs(c(t, 1.0) - t),
                      std::abs(c(1.0, t) - t)});
  }
  std::vector<double> vals(g.size() * g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) vals[i * g.size() + j] = c(g[i], g[j]);
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
      const double vol = vals[(i + 1) * g.size() + j + 1] - vals[i * g.size() + j + 1] -
                         vals[(i + 1) * g.size() + j] + vals[i * g.size() + j];
      worst = std::max(worst, -vol);
    }
  return worst;
}

std::vector<double> interior_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 19; ++k) g.push_back(k / 20.0);
  return g;
}

double h_roundtrip(const PairCopulaSpec& s) {
  double worst = 0.0;
  for (double w : interior_grid())
    for (double v : interior_grid()) {
      worst = std::max(worst, std::abs(h2(s, h2_inv(s, w, v), v) - w));
      worst = std::max(worst, std::abs(h1(s, v, h1_inv(s, w, v)) - w));
    }
  return worst;
}

double h2_finite_difference(const PairCopulaSpec& s) {
  constexpr double e = 1e-5;
  double worst = 0.0;
  for (double u : interior_grid())
    for (double v : interior_grid()) {
      const double fd = (cdf(s, u, v + e) - cdf(s, u, v - e)) / (2.0 * e);
      worst = std::max(worst, std::abs(h2(s, u, v) - fd));
    }
  return worst;
}

double kendall_brute(std::span<const double> a, std::span<const double> b) {
  KendallCounts c;
  const std::size_t n = a.size();
  c.pairs = static_cast<long long>(n) * static_cast<long long>(n - 1) / 2;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = a[i] - a[j], db = b[i] - b[j];
      if (da == 0.0) ++c.ties_a;
      if (db == 0.0) ++c.ties_b;
      c.numerator += (da * db > 0.0) - (da * db < 0.0);
    }
  return tau_b(c);
}

// Random columns; every third instance is drawn on a coarse lattice so ties occur.
std::pair<std::vector<double>, std::vector<double>> random_columns(const CounterRng& rng,
                                                                   std::size_t inst,
                                                                   std::size_t n) {
  std::vector<double> a(n), b(n);
  const bool coarse = inst % 3 == 0;
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.uniform(inst * 1000 + i, 0);
    b[i] = 0.5 * a[i] + rng.uniform(inst * 1000 + i, 1);
    if (coarse) {
      a[i] = std::floor(a[i] * 7.0);
      b[i] = std::floor(b[i] * 5.0);
    }
  }
  return {a, b};
}

void numerics_checks(Suite& s) {
  s.check("numerics.normal_quantile_roundtrip", 1e-12, [] {
    double worst = 0.0;
    for (int k = 1; k <= 999; ++k) {
      const double p = k / 1000.0;
      worst = std::max(worst, std::abs(std_normal_cdf(std_normal_quantile(p)) - p));
    }
    return worst;
  });
  s.check("numerics.bvn_independence", 1e-10, [] {
    double worst = 0.0;
    for (double a : linspace(-4.0, 4.0, 41))
      for (double b : linspace(-4.0, 4.0, 41))
        worst = std::max(worst, std::abs(bvn_cdf(a, b, 0.0) - std_normal_cdf(a) * std_normal_cdf(b)));
    return worst;
  });
  s.check("numerics.quadrature_moments", 1e-12, [] {
    double worst = 0.0;
    for (int k = 0; k <= 10; ++k)
      worst = std::max(worst, std::abs(integrate_01([k](double z) { return std::pow(z, k); }) -
                                       1.0 / (k + 1)));
    return worst;
  });
}

void copula_checks(Suite& s) {
  for (const auto& spec : pair_specs()) {
    const std::string id = spec.describe();
    s.check("copula.axioms." + id, 1e-8, [&] {
      return axiom_violation([&](double u, double v) { return cdf(spec, u, v); });
    });
    s.check("copula.h_roundtrip." + id, 1e-8, [&] { return h_roundtrip(spec); });
    s.check("copula.h2_finite_difference." + id, 1e-6, [&] { return h2_finite_difference(spec); });
  }
}

void partial_checks(Suite& s) {
  const auto grid21 = linspace(0.0, 1.0, 21);
  for (const auto& [id, cond] : verify_configs()) {
    if (cond.theta().kind() == ThetaFunction::Kind::constant) {
      s.check("partial.constant_equivalence." + id, 1e-8, [&] {
        const PairCopulaSpec spec = cond.at(0.5);
        double worst = 0.0;
        for (double u : grid21)
          for (double v : grid21)
            worst = std::max(worst, std::abs(partial_cdf(cond, u, v) - cdf(spec, u, v)));
        return worst;
      });
    }
    s.check("partial.expected_rho_identity." + id, 1e-6,
            [&] { return std::abs(partial_rho(cond) - partial_rho_from_cdf(cond)); });
    {
      s.check("partial.certificate." + id, kCertificateTol, [&] {
        const BoundCertificate c = certify_bounds(cond, id, s.opts().grid);
        // Largest bound overshoot; a quadrant failure counts as +inf.
        double over = std::max({c.kdd_partial - c.k,
                                std::abs(c.rho_partial) - std::min(1.0, 3.0 * c.k),
                                std::abs(c.tau_partial) - std::min(1.0, 2.0 * c.k)});
        if (!c.qpd_ok) over = INFINITY;
        return over;
      });
    }
    if (cond.family() == Family::fgm && cond.theta().kind() == ThetaFunction::Kind::constant) {
      s.check("partial.fgm_rho_band." + id, 0.75, [&] { return std::abs(partial_rho(cond)); });
    }
  }

  const ConditionalFamily fgm(Family::fgm, ThetaFunction::table({{0.0, -1.0}, {1.0, 1.0}}));
  s.check("partial.fgm_cancellation.cdf_is_uv", 1e-8, [&] {
    double worst = 0.0;
    for (double u : grid21)
      for (double v : grid21) worst = std::max(worst, std::abs(partial_cdf(fgm, u, v) - u * v));
    return worst;
  });
  s.check("partial.fgm_cancellation.endpoint_kdd", 1e-3, [&] {
    return std::max(std::abs(kdd_analytic(fgm.at(0.0)) - 0.25),
                    std::abs(kdd_analytic(fgm.at(1.0)) - 0.25));
  });
  for (const char* theta : {"exp", "table:0:0.5,0.5:3,1:1"}) {
    const ConditionalFamily c(theta[0] == 'e' ? Family::frank : Family::clayton,
                              ThetaFunction::parse(theta));
    s.check("partial.copula_axioms." + c.describe(), 1e-8, [&] {
      return axiom_violation([&](double u, double v) { return partial_cdf(c, u, v); });
    });
  }
  s.check("partial.copula_axioms." + fgm.describe(), 1e-8, [&] {
    return axiom_violation([&](double u, double v) { return partial_cdf(fgm, u, v); });
  });
}

double moment_mean_dev(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  return std::abs(m / static_cast<double>(x.size()) - 0.5);
}

double moment_var_dev(const std::vector<double>& x) {
  double m = 0.0, q = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  for (double v : x) q += (v - m) * (v - m);
  return std::abs(q / static_cast<double>(x.size()) - 1.0 / 12.0);
}

void sampler_checks(Suite& s) {
  if (!s.wants_group("sampler.")) return;
  for (const auto& cfg : scenario_table(s.opts().n, s.opts().seed)) {
    const std::string id = cfg.id();
    if (!s.wants_group("sampler.") || (!s.wants("sampler.") && !s.opts().only.empty() &&
                                       s.opts().only.find(id) == std::string::npos))
      continue;
    ScenarioRun run;
    try {
      run = run_scenario(cfg);
    } catch (const std::exception& e) {
      s.record("sampler.run." + id, INFINITY, 0.0, std::string("error: ") + e.what());
      continue;
    }
    s.check("sampler.signs." + id, 0.0, [&] { return cfg.signs_match() ? 0.0 : 1.0; });
    s.check("sampler.roundtrip." + id, 1e-8, [&] {
      double worst = 0.0;
      for (std::size_t i = 0; i < run.samples.size(); ++i)
        worst = std::max(worst, std::abs(run.pseudo.u_x[i] - run.samples.w_x[i]));
      return worst;
    });
    s.check("sampler.uniform_mean." + id, 0.02, [&] {
      return std::max({moment_mean_dev(run.samples.x), moment_mean_dev(run.samples.y),
                       moment_mean_dev(run.samples.z), moment_mean_dev(run.pseudo.u_x),
                       moment_mean_dev(run.pseudo.u_y)});
    });
    s.check("sampler.uniform_variance." + id, 0.01, [&] {
      return std::max({moment_var_dev(run.samples.x), moment_var_dev(run.samples.y),
                       moment_var_dev(run.samples.z), moment_var_dev(run.pseudo.u_x),
                       moment_var_dev(run.pseudo.u_y)});
    });
    s.check("sampler.analytic_consistency." + id, 0.045,
            [&] { return std::abs(run.partial.spearman - partial_rho(cfg.model.cond)); });
    if (cfg.scenario == 10)
      s.check("sampler.no_confounding." + id, 0.045,
              [&] { return std::abs(run.marginal.spearman - run.partial.spearman); });
  }
}

void measures_checks(Suite& s) {
  const CounterRng rng(s.opts().seed);
  s.check("measures.kendall_fast_vs_brute", 0.0, [&] {
    int mismatches = 0;
    for (std::size_t inst = 0; inst < 50; ++inst) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng.bits(inst, 99) % 199);
      auto [a, b] = random_columns(rng, inst, n);
      try {
        if (kendall_emp(a, b) != kendall_brute(a, b)) ++mismatches;
      } catch (const UndefinedStatistic&) {
        // constant column: both routes must refuse
        try {
          (void)kendall_emp(a, b);
          ++mismatches;
        } catch (const UndefinedStatistic&) {
        }
      }
    }
    return static_cast<double>(mismatches);
  });
  s.check("measures.kdd_fast_vs_brute", 0.0, [&] {
    int mismatches = 0;
    for (std::size_t inst = 0; inst < 50; ++inst) {
      const std::size_t n = 3 + static_cast<std::size_t>(rng.bits(inst, 98) % 48);
      auto [a, b] = random_columns(rng, inst + 100, n);
      try {
        const double brute = serial::kdd_emp_full(a, b);
        if (kdd_emp_restricted(a, b) != brute || parallel::kdd_emp_full(a, b) != brute)
          ++mismatches;
      } catch (const UndefinedStatistic&) {
      }
    }
    return static_cast<double>(mismatches);
  });
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& opts, std::ostream* progress) {
  Suite s(opts, progress);
  numerics_checks(s);
  copula_checks(s);
  measures_checks(s);
  sampler_checks(s);
  partial_checks(s);
  return s.take();
}

}  // namespace pcop
