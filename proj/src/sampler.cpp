#include "pcopula/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "parallel_for.hpp"
#include "pcopula/error.hpp"
#include "pcopula/kernels.hpp"
#include "pcopula/numerics.hpp"
#include "pcopula/rng.hpp"

namespace pcop {

namespace {

SampleTriples allocate(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InputError("sample size must be at least 1");
  SampleTriples s;
  s.x.resize(n);
  s.y.resize(n);
  s.z.resize(n);
  s.w_x.resize(n);
  s.u_y.resize(n);
  s.seed = seed;
  return s;
}

void draw_row(const VineModel& m, const CounterRng& rng, std::size_t i, SampleTriples& s) {
  const double z = clamp_probability(rng.uniform(i, 0));
  const double u_x = clamp_probability(rng.uniform(i, 1));
  const double w_y = clamp_probability(rng.uniform(i, 2));
  try {
    const double u_y = clamp_probability(h1_inv(m.cond.at(z), w_y, u_x));
    s.z[i] = z;
    s.w_x[i] = u_x;
    s.u_y[i] = u_y;
    s.x[i] = h2_inv(m.c_xz, u_x, z);
    s.y[i] = h2_inv(m.c_yz, u_y, z);
  } catch (const std::exception& e) {
    throw InversionError("sampling row " + std::to_string(i) + ": " + e.what());
  }
}

}  // namespace

namespace serial {
SampleTriples sample_cvine(const VineModel& model, std::size_t n, std::uint64_t seed) {
  SampleTriples s = allocate(n, seed);
  const CounterRng rng(seed);
  for (std::size_t i = 0; i < n; ++i) draw_row(model, rng, i, s);
  return s;
}
}  // namespace serial

namespace parallel {
SampleTriples sample_cvine(const VineModel& model, std::size_t n, std::uint64_t seed) {
  SampleTriples s = allocate(n, seed);
  const CounterRng rng(seed);
  constexpr std::size_t kBlock = 128;
  detail::parallel_for((n + kBlock - 1) / kBlock, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) draw_row(model, rng, i, s);
  });
  return s;
}
}  // namespace parallel

SampleTriples sample_cvine(const VineModel& model, std::size_t n, std::uint64_t seed) {
  return parallel::sample_cvine(model, n, seed);
}

int dependence_sign(const PairCopulaSpec& spec) {
  int base = 0;
  switch (spec.family()) {
    case Family::independence: base = 0; break;
    case Family::gaussian:
    case Family::frank:
    case Family::fgm: base = (spec.theta() > 0) - (spec.theta() < 0); break;
    case Family::clayton: base = 1; break;
    case Family::gumbel: base = spec.theta() > 1.0 ? 1 : 0; break;
  }
  const bool flips = spec.rotation() == Rotation::r90 || spec.rotation() == Rotation::r270;
  return flips ? -base : base;
}

int dependence_sign(const ConditionalFamily& cond) {
  if (cond.family() == Family::independence) return 0;
  int sign = 0;
  bool first = true;
  for (double z : linspace(0.0, 1.0, GridSpec{}.z_points)) {
    const int s = dependence_sign(cond.at(z));
    if (first) {
      sign = s;
      first = false;
    } else if (s != sign) {
      return 2;
    }
  }
  return sign;
}

std::array<int, 3> scenario_signs(int scenario) {
  static constexpr std::array<std::array<int, 3>, 10> kSigns{{
      {+1, +1, +1},
      {+1, +1, 0},
      {-1, -1, 0},
      {+1, -1, 0},
      {+1, +1, -1},
      {-1, -1, +1},
      {-1, -1, -1},
      {+1, -1, +1},
      {+1, -1, -1},
      {0, 0, +1},
  }};
  if (scenario < 1 || scenario > 10)
    throw InputError("scenario " + std::to_string(scenario) + " has no fixed sign triplet");
  return kSigns[static_cast<std::size_t>(scenario - 1)];
}

namespace {

// Default-magnitude member of a family with the requested dependence sign.
PairCopulaSpec signed_spec(Family family, int sign) {
  if (sign == 0) return {};
  switch (family) {
    case Family::gaussian: return {family, 0.6 * sign};
    case Family::frank: return {family, 5.0 * sign};
    case Family::clayton:
    case Family::gumbel: return {family, 2.0, sign > 0 ? Rotation::r0 : Rotation::r90};
    default: break;
  }
  throw InputError("no scenario defaults for " + std::string(family_name(family)));
}

}  // namespace

std::vector<ScenarioConfig> scenario_table(std::size_t n, std::uint64_t seed) {
  std::vector<ScenarioConfig> out;
  const Family families[] = {Family::frank, Family::gumbel, Family::clayton, Family::gaussian};
  for (int sc = 1; sc <= 10; ++sc) {
    const auto signs = scenario_signs(sc);
    for (Family f : families) {
      ScenarioConfig c;
      c.scenario = sc;
      c.family = f;
      c.signs = signs;
      c.n = n;
      c.seed = seed;
      const bool simpson = f == Family::gaussian && (sc == 5 || sc == 7 || sc == 8);
      if (simpson) {
        // Margins strong enough that the marginal sign opposes the conditional one.
        c.model.c_xz = PairCopulaSpec(f, 0.7 * signs[0]);
        c.model.c_yz = PairCopulaSpec(f, 0.7 * signs[1]);
        c.model.cond = ConditionalFamily::constant(PairCopulaSpec(f, 0.3 * signs[2]));
      } else {
        c.model.c_xz = signed_spec(f, signs[0]);
        c.model.c_yz = signed_spec(f, signs[1]);
        c.model.cond = ConditionalFamily::constant(signed_spec(f, signs[2]));
      }
      out.push_back(std::move(c));
    }
  }
  const PairCopulaSpec margin(Family::gaussian, 0.6);
  const struct {
    char sub;
    Family family;
    ThetaFunction theta;
  } varying[] = {
      {'a', Family::frank, ThetaFunction::exp_z()},
      {'b', Family::frank, ThetaFunction::neg_exp_z()},
      {'c', Family::gaussian, ThetaFunction::one_minus_2z()},
  };
  for (const auto& v : varying) {
    ScenarioConfig c;
    c.scenario = 11;
    c.sub_case = v.sub;
    c.family = v.family;
    c.model = {margin, margin, ConditionalFamily(v.family, v.theta)};
    c.signs = {1, 1, dependence_sign(c.model.cond)};
    c.n = n;
    c.seed = seed;
    out.push_back(std::move(c));
  }
  return out;
}

std::string ScenarioConfig::id() const {
  std::string s = std::to_string(scenario);
  if (sub_case) s += sub_case;
  return s + "_" + std::string(family_name(family));
}

std::string ScenarioConfig::params() const {
  return model.c_xz.describe() + "|" + model.c_yz.describe() + "|" + model.cond.describe();
}

bool ScenarioConfig::signs_match() const {
  return dependence_sign(model.c_xz) == signs[0] && dependence_sign(model.c_yz) == signs[1] &&
         dependence_sign(model.cond) == signs[2];
}

PitfallSample sample_pitfall(double sigma, std::size_t n, std::uint64_t seed) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  if (n < 1) throw InputError("sample size must be at least 1");
  PitfallSample p;
  p.sigma = sigma;
  p.x.resize(n);
  p.y.resize(n);
  p.z.resize(n);
  p.u_x.resize(n);
  p.u_y.resize(n);
  const CounterRng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = std_normal_quantile(rng.uniform(i, 0));
    const double e1 = std_normal_quantile(rng.uniform(i, 1));
    const double e2 = std_normal_quantile(rng.uniform(i, 2));
    p.z[i] = z;
    p.x[i] = z * z + sigma * e1;
    p.y[i] = z * z + sigma * e2;
    p.u_x[i] = std_normal_cdf(e1);
    p.u_y[i] = std_normal_cdf(e2);
  }
  return p;
}

}  // namespace pcop
