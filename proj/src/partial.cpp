#include "pcopula/partial.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "parallel_for.hpp"
#include "pcopula/csv.hpp"
#include "pcopula/error.hpp"
#include "pcopula/kernels.hpp"
#include "pcopula/numerics.hpp"
#include "pcopula/sampler.hpp"

namespace pcop {

namespace {

double parse_number(std::string_view text, const std::string& context) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v))
    throw InputError("bad number '" + std::string(text) + "' in " + context);
  return v;
}

std::vector<double> z_grid(const GridSpec& grid) { return linspace(0.0, 1.0, grid.z_points); }

// Distinct conditional specs on the z-grid, in grid order. Constant and
// piecewise-constant theta functions collapse to a handful of entries.
std::vector<PairCopulaSpec> distinct_conditionals(const ConditionalFamily& cond,
                                                  const GridSpec& grid) {
  std::vector<PairCopulaSpec> specs;
  for (double z : z_grid(grid)) {
    PairCopulaSpec s = cond.at(z);
    if (std::find(specs.begin(), specs.end(), s) == specs.end()) specs.push_back(s);
  }
  return specs;
}

}  // namespace

// ---- ThetaFunction ---------------------------------------------------------

ThetaFunction ThetaFunction::constant(double value) {
  if (!std::isfinite(value)) throw DomainError("constant theta must be finite");
  return ThetaFunction(Kind::constant, value);
}
ThetaFunction ThetaFunction::exp_z() { return ThetaFunction(Kind::exp_z, 0.0); }
ThetaFunction ThetaFunction::neg_exp_z() { return ThetaFunction(Kind::neg_exp_z, 0.0); }
ThetaFunction ThetaFunction::one_minus_2z() { return ThetaFunction(Kind::one_minus_2z, 0.0); }

ThetaFunction ThetaFunction::table(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw DomainError("theta table needs at least two knots");
  if (knots.front().first != 0.0 || knots.back().first != 1.0)
    throw DomainError("theta table must cover [0,1] exactly");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].second)) throw DomainError("theta table value not finite");
    if (i > 0 && !(knots[i].first > knots[i - 1].first))
      throw DomainError("theta table knots must be strictly increasing in z");
  }
  ThetaFunction f(Kind::table, 0.0);
  f.knots_ = std::move(knots);
  return f;
}

ThetaFunction ThetaFunction::parse(const std::string& text) {
  if (text == "exp") return exp_z();
  if (text == "negexp") return neg_exp_z();
  if (text == "one-minus-2z") return one_minus_2z();
  if (text.rfind("const:", 0) == 0) return constant(parse_number(text.substr(6), text));
  if (text.rfind("table:", 0) == 0) {
    std::vector<std::pair<double, double>> knots;
    std::stringstream ss(text.substr(6));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw InputError("table knot '" + item + "' is not z:theta");
      knots.emplace_back(parse_number(std::string_view(item).substr(0, colon), text),
                         parse_number(std::string_view(item).substr(colon + 1), text));
    }
    return table(std::move(knots));
  }
  throw InputError("unknown theta function '" + text +
                   "' (expected const:v, exp, negexp, one-minus-2z or table:z:t,...)");
}

double ThetaFunction::operator()(double z) const {
  switch (kind_) {
    case Kind::constant: return value_;
    case Kind::exp_z: return std::exp(z);
    case Kind::neg_exp_z: return -std::exp(z);
    case Kind::one_minus_2z: return 1.0 - 2.0 * z;
    case Kind::table: {
      if (z <= knots_.front().first) return knots_.front().second;
      if (z >= knots_.back().first) return knots_.back().second;
      const auto hi = std::upper_bound(knots_.begin(), knots_.end(), z,
                                       [](double x, const auto& k) { return x < k.first; });
      const auto lo = hi - 1;
      const double t = (z - lo->first) / (hi->first - lo->first);
      return lo->second + t * (hi->second - lo->second);
    }
  }
  return value_;
}

std::string ThetaFunction::describe() const {
  switch (kind_) {
    case Kind::constant: return "const:" + format_short(value_);
    case Kind::exp_z: return "exp";
    case Kind::neg_exp_z: return "negexp";
    case Kind::one_minus_2z: return "one-minus-2z";
    case Kind::table: {
      std::string s = "table:";
      for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (i) s += ',';
        s += format_short(knots_[i].first) + ":" + format_short(knots_[i].second);
      }
      return s;
    }
  }
  return "?";
}

// ---- ConditionalFamily -----------------------------------------------------

ConditionalFamily::ConditionalFamily(Family family, ThetaFunction theta, Rotation rotation)
    : family_(family), theta_(std::move(theta)), rotation_(rotation) {
  if (family_ == Family::independence) {
    theta_ = ThetaFunction::constant(0.0);
    rotation_ = Rotation::r0;
    return;
  }
  std::vector<double> zs = z_grid(GridSpec{});
  for (const auto& k : theta_.knots()) zs.push_back(k.first);
  for (double z : zs) {
    try {
      (void)at(z);
    } catch (const DomainError& e) {
      throw DomainError(std::string(family_name(family_)) + " with theta(z) = " +
                        theta_.describe() + " leaves the parameter domain at z = " +
                        format_short(z) + ": " + e.what());
    }
  }
}

ConditionalFamily ConditionalFamily::constant(const PairCopulaSpec& spec) {
  return ConditionalFamily(spec.family(), ThetaFunction::constant(spec.theta()), spec.rotation());
}

PairCopulaSpec ConditionalFamily::at(double z) const {
  if (family_ == Family::independence) return {};
  double theta = theta_(z);
  if (family_ == Family::gaussian) theta = std::clamp(theta, -kGaussianMaxRho, kGaussianMaxRho);
  return PairCopulaSpec(family_, theta, rotation_);
}

std::vector<double> ConditionalFamily::breakpoints() const {
  std::vector<double> zs{0.0, 1.0};
  if (family_ == Family::independence) return zs;
  for (const auto& k : theta_.knots()) zs.push_back(k.first);
  if (family_ == Family::gaussian) {
    // Saturation points: theta is linear between consecutive breakpoints
    // for the table and 1 - 2z kinds.
    std::vector<double> base = zs;
    std::sort(base.begin(), base.end());
    for (std::size_t i = 0; i + 1 < base.size(); ++i) {
      const double z0 = base[i], z1 = base[i + 1];
      const double t0 = theta_(z0), t1 = theta_(z1);
      if (theta_.kind() != ThetaFunction::Kind::table &&
          theta_.kind() != ThetaFunction::Kind::one_minus_2z)
        break;
      for (double level : {-kGaussianMaxRho, kGaussianMaxRho}) {
        if ((t0 - level) * (t1 - level) < 0.0) zs.push_back(z0 + (level - t0) / (t1 - t0) * (z1 - z0));
      }
    }
  }
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
  return zs;
}

double ConditionalFamily::integrate_z(const std::function<double(double)>& g, double tol) const {
  const auto zs = breakpoints();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
    const double a = zs[i], w = zs[i + 1] - zs[i];
    // z = a + w t^2 (3 - 2t): removes sqrt-type behaviour at piece ends.
    total += integrate_01(
        [&](double t) { return g(a + w * t * t * (3.0 - 2.0 * t)) * w * 6.0 * t * (1.0 - t); },
        tol * std::max(w, 1e-3));
  }
  return total;
}

std::string ConditionalFamily::describe() const {
  std::string s = std::string(family_name(family_));
  if (family_ == Family::independence) return s;
  s += "[" + theta_.describe() + "]";
  if (rotation_ != Rotation::r0) s += "@" + std::to_string(static_cast<int>(rotation_));
  return s;
}

// ---- pseudo-observations ---------------------------------------------------

namespace {

void check_lengths(const SampleTriples& s) {
  if (s.x.size() != s.z.size() || s.y.size() != s.z.size())
    throw InputError("sample columns differ in length: x=" + std::to_string(s.x.size()) +
                     " y=" + std::to_string(s.y.size()) + " z=" + std::to_string(s.z.size()));
}

void pseudo_row(const SampleTriples& s, const PairCopulaSpec& c_xz, const PairCopulaSpec& c_yz,
                std::size_t i, PseudoPairs& out) {
  const double z = clamp_probability(s.z[i]);
  out.u_x[i] = clamp_probability(h2(c_xz, s.x[i], z));
  out.u_y[i] = clamp_probability(h2(c_yz, s.y[i], z));
}

}  // namespace

namespace serial {
PseudoPairs pseudo_observations(const SampleTriples& samples, const PairCopulaSpec& c_xz,
                                const PairCopulaSpec& c_yz) {
  check_lengths(samples);
  PseudoPairs out{std::vector<double>(samples.size()), std::vector<double>(samples.size())};
  for (std::size_t i = 0; i < samples.size(); ++i) pseudo_row(samples, c_xz, c_yz, i, out);
  return out;
}
}  // namespace serial

namespace parallel {
PseudoPairs pseudo_observations(const SampleTriples& samples, const PairCopulaSpec& c_xz,
                                const PairCopulaSpec& c_yz) {
  check_lengths(samples);
  PseudoPairs out{std::vector<double>(samples.size()), std::vector<double>(samples.size())};
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (samples.size() + kBlock - 1) / kBlock;
  detail::parallel_for(blocks, [&](std::size_t b) {
    const std::size_t end = std::min(samples.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) pseudo_row(samples, c_xz, c_yz, i, out);
  });
  return out;
}
}  // namespace parallel

PseudoPairs pseudo_observations(const SampleTriples& samples, const PairCopulaSpec& c_xz,
                                const PairCopulaSpec& c_yz) {
  return parallel::pseudo_observations(samples, c_xz, c_yz);
}

// ---- analytic functionals --------------------------------------------------

double partial_cdf(const ConditionalFamily& cond, double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
    throw DomainError("partial_cdf arguments must lie in [0,1]");
  if (u == 0.0 || v == 0.0) return 0.0;
  if (u == 1.0) return v;
  if (v == 1.0) return u;
  if (cond.family() == Family::independence) return u * v;
  return cond.integrate_z([&](double z) { return cdf(cond.at(z), u, v); });
}

double partial_h1(const ConditionalFamily& cond, double u, double v) {
  if (cond.family() == Family::independence) return v;
  return cond.integrate_z([&](double z) { return h1(cond.at(z), u, v); });
}

double partial_h2(const ConditionalFamily& cond, double u, double v) {
  if (cond.family() == Family::independence) return u;
  return cond.integrate_z([&](double z) { return h2(cond.at(z), u, v); });
}

double partial_rho(const ConditionalFamily& cond) {
  if (cond.family() == Family::independence) return 0.0;
  std::map<double, double> memo;  // rho_s by theta: flat stretches of a table repeat
  return cond.integrate_z(
      [&](double z) {
        const PairCopulaSpec s = cond.at(z);
        auto it = memo.find(s.theta());
        if (it == memo.end()) it = memo.emplace(s.theta(), rho_s_analytic(s)).first;
        return it->second;
      },
      1e-7);
}

double partial_rho_from_cdf(const ConditionalFamily& cond) {
  if (cond.family() == Family::independence) return 0.0;
  return 12.0 * parallel::tensor_quadrature(
                    [&](double u, double v) { return partial_cdf(cond, u, v); }) -
         3.0;
}

double partial_tau(const ConditionalFamily& cond) {
  if (cond.family() == Family::independence) return 0.0;
  return 1.0 - 4.0 * parallel::tensor_quadrature([&](double u, double v) {
           return partial_h1(cond, u, v) * partial_h2(cond, u, v);
         });
}

double conditional_kdd_sup(const ConditionalFamily& cond, const GridSpec& grid) {
  if (cond.family() == Family::independence) return 0.0;
  double k = 0.0;
  for (const auto& s : distinct_conditionals(cond, grid)) k = std::max(k, kdd_analytic(s, grid));
  return k;
}

double partial_kdd(const ConditionalFamily& cond, const GridSpec& grid) {
  if (cond.family() == Family::independence) return 0.0;
  return kdd_of_cdf([&](double u, double v) { return partial_cdf(cond, u, v); }, grid);
}

namespace {

QuadrantFlags partial_flags(const ConditionalFamily& cond, const GridSpec& grid) {
  if (cond.family() == Family::independence) return {true, true};
  return quadrant_of_cdf([&](double u, double v) { return partial_cdf(cond, u, v); }, grid);
}

QuadrantFlags conditional_flags(const ConditionalFamily& cond, const GridSpec& grid) {
  QuadrantFlags all{true, true};
  if (cond.family() == Family::independence) return all;
  for (const auto& s : distinct_conditionals(cond, grid)) {
    const QuadrantFlags f = quadrant_of_cdf([&](double u, double v) { return cdf(s, u, v); }, grid);
    all.qpd = all.qpd && f.qpd;
    all.qnd = all.qnd && f.qnd;
    if (!all.qpd && !all.qnd) break;
  }
  return all;
}

}  // namespace

QuadrantClass partial_quadrant(const ConditionalFamily& cond, const GridSpec& grid) {
  return partial_flags(cond, grid).classify();
}

QuadrantClass conditional_quadrant(const ConditionalFamily& cond, const GridSpec& grid) {
  return conditional_flags(cond, grid).classify();
}

// ---- certificates ----------------------------------------------------------

std::string BoundCertificate::csv_header() {
  return "config_id,k,rho_partial,tau_partial,kdd_partial,qpd_class,pass_kdd,pass_rho,pass_tau,"
         "pass_qpd";
}

std::string BoundCertificate::csv_row() const {
  auto flag = [](bool b) { return std::string(b ? "1" : "0"); };
  return csv_line({config_id, format_g17(k), format_g17(rho_partial), format_g17(tau_partial),
                   format_g17(kdd_partial), std::string(quadrant_name(partial_class)),
                   flag(kdd_ok), flag(rho_ok), flag(tau_ok), flag(qpd_ok)});
}

BoundCertificate certify_bounds(const ConditionalFamily& cond, std::string config_id,
                                const GridSpec& grid) {
  BoundCertificate c;
  c.config_id = config_id.empty() ? cond.describe() : std::move(config_id);
  c.k = conditional_kdd_sup(cond, grid);
  c.rho_partial = partial_rho(cond);
  c.tau_partial = partial_tau(cond);
  c.kdd_partial = partial_kdd(cond, grid);
  const QuadrantFlags cf = conditional_flags(cond, grid);
  const QuadrantFlags pf = partial_flags(cond, grid);
  c.conditional_class = cf.classify();
  c.partial_class = pf.classify();
  c.kdd_ok = c.kdd_partial <= c.k + kCertificateTol;
  c.rho_ok = std::abs(c.rho_partial) <= std::min(1.0, 3.0 * c.k) + kCertificateTol;
  c.tau_ok = std::abs(c.tau_partial) <= std::min(1.0, 2.0 * c.k) + kCertificateTol;
  c.qpd_ok = (!cf.qpd || pf.qpd) && (!cf.qnd || pf.qnd);
  return c;
}

}  // namespace pcop
