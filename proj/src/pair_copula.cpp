#include "pcopula/pair_copula.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pcopula/error.hpp"
#include "pcopula/kernels.hpp"
#include "pcopula/numerics.hpp"

namespace pcop {

namespace {

std::atomic<dev::Mutation> g_mutation{dev::Mutation::none};

// 1 - x, kept strictly below 1 so a conditioning argument stays interior.
double reflect_interior(double x) { return std::min(1.0 - x, 1.0 - 0x1p-53); }

void require_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream msg;
    msg << what << " must lie in [0,1], got " << x;
    throw DomainError(msg.str());
  }
}

void require_open_unit(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) {
    std::ostringstream msg;
    msg << what << " must lie in (0,1), got " << x;
    throw DomainError(msg.str());
  }
}

// ---- unrotated families, interior arguments ---------------------------------

double gaussian_cdf(double rho, double u, double v) {
  return bvn_cdf(std_normal_quantile(u), std_normal_quantile(v), rho);
}

double frank_cdf(double theta, double u, double v) {
  return -std::log1p(std::expm1(-theta * u) * std::expm1(-theta * v) / std::expm1(-theta)) /
         theta;
}

double clayton_cdf(double theta, double u, double v) {
  const double s = std::pow(u, -theta) + std::expm1(-theta * std::log(v));
  return std::pow(s, -1.0 / theta);
}

double gumbel_cdf(double theta, double u, double v) {
  const double s = std::pow(-std::log(u), theta) + std::pow(-std::log(v), theta);
  return std::exp(-std::pow(s, 1.0 / theta));
}

double base_cdf(Family f, double theta, double u, double v) {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0) return std::min(v, 1.0);
  if (v >= 1.0) return u;
  switch (f) {
    case Family::independence: return u * v;
    case Family::gaussian: return gaussian_cdf(theta, u, v);
    case Family::frank: return frank_cdf(theta, u, v);
    case Family::clayton: return clayton_cdf(theta, u, v);
    case Family::gumbel: return gumbel_cdf(theta, u, v);
    case Family::fgm: return u * v * (1.0 + theta * (1.0 - u) * (1.0 - v));
  }
  return 0.0;
}

// dC/dv at (u,v); v interior.
double base_h2(Family f, double theta, double u, double v) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double h = 0.0;
  switch (f) {
    case Family::independence: h = u; break;
    case Family::gaussian: {
      const double s = std::sqrt((1.0 - theta) * (1.0 + theta));
      h = std_normal_cdf((std_normal_quantile(u) - theta * std_normal_quantile(v)) / s);
      break;
    }
    case Family::frank: {
      const double a = std::expm1(-theta * u);
      const double b = std::expm1(-theta * v);
      h = std::exp(-theta * v) * a / (std::expm1(-theta) + a * b);
      break;
    }
    case Family::clayton: {
      const double s = std::pow(u, -theta) + std::expm1(-theta * std::log(v));
      h = std::exp((-theta - 1.0) * std::log(v) + (-1.0 / theta - 1.0) * std::log(s));
      break;
    }
    case Family::gumbel: {
      const double x = -std::log(u);
      const double y = -std::log(v);
      const double s = std::pow(x, theta) + std::pow(y, theta);
      h = std::exp(-std::pow(s, 1.0 / theta) + (theta - 1.0) * std::log(y) + y +
                   (1.0 / theta - 1.0) * std::log(s));
      if (g_mutation.load(std::memory_order_relaxed) == dev::Mutation::gumbel_h2) h *= 1.001;
      break;
    }
    case Family::fgm: h = u + theta * u * (1.0 - u) * (1.0 - 2.0 * v); break;
  }
  return std::clamp(h, 0.0, 1.0);
}

// u with base_h2(u, v) = w; v interior.
double base_h2_inv(Family f, double theta, double w, double v) {
  if (w <= 0.0) return 0.0;
  if (w >= 1.0) return 1.0;
  double u = 0.0;
  switch (f) {
    case Family::independence: u = w; break;
    case Family::gaussian: {
      const double s = std::sqrt((1.0 - theta) * (1.0 + theta));
      u = std_normal_cdf(s * std_normal_quantile(w) + theta * std_normal_quantile(v));
      break;
    }
    case Family::frank: {
      const double a = w * std::expm1(-theta) / (w + (1.0 - w) * std::exp(-theta * v));
      u = -std::log1p(a) / theta;
      break;
    }
    case Family::clayton: {
      const double t =
          std::exp(-theta * std::log(v)) * std::expm1(-theta / (1.0 + theta) * std::log(w)) + 1.0;
      u = std::pow(t, -1.0 / theta);
      break;
    }
    case Family::gumbel: {
      const auto residual = [theta, v, w](double x) {
        return base_h2(Family::gumbel, theta, x, v) - w;
      };
      try {
        u = find_root(residual, RootBracket::make(residual, 0.0, 1.0, 1e-15));
      } catch (const BracketError& e) {
        throw InversionError(std::string("gumbel h2 inversion: ") + e.what());
      }
      break;
    }
    case Family::fgm: {
      const double a = theta * (1.0 - 2.0 * v);
      u = 2.0 * w / ((1.0 + a) + std::sqrt((1.0 + a) * (1.0 + a) - 4.0 * a * w));
      break;
    }
  }
  if (!std::isfinite(u)) throw InversionError("h2 inversion produced a non-finite value");
  return std::clamp(u, 0.0, 1.0);
}

}  // namespace

namespace dev {
void set_mutation(Mutation m) { g_mutation.store(m); }
Mutation mutation() { return g_mutation.load(); }
}  // namespace dev

std::string_view family_name(Family family) {
  switch (family) {
    case Family::independence: return "indep";
    case Family::gaussian: return "gaussian";
    case Family::frank: return "frank";
    case Family::clayton: return "clayton";
    case Family::gumbel: return "gumbel";
    case Family::fgm: return "fgm";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::independence, Family::gaussian, Family::frank, Family::clayton,
                   Family::gumbel, Family::fgm}) {
    if (name == family_name(f)) return f;
  }
  if (name == "independence") return Family::independence;
  throw InputError("unknown copula family '" + std::string(name) +
                    "' (valid: indep, gaussian, frank, clayton, gumbel, fgm)");
}

Rotation parse_rotation(int degrees) {
  switch (degrees) {
    case 0: return Rotation::r0;
    case 90: return Rotation::r90;
    case 180: return Rotation::r180;
    case 270: return Rotation::r270;
    default: throw InputError("rotation must be one of 0, 90, 180, 270");
  }
}

std::string_view quadrant_name(QuadrantClass q) {
  switch (q) {
    case QuadrantClass::qpd: return "QPD";
    case QuadrantClass::qnd: return "QND";
    case QuadrantClass::neither: return "neither";
  }
  return "?";
}

PairCopulaSpec::PairCopulaSpec(Family family, double theta, Rotation rotation)
    : family_(family), theta_(theta), rotation_(rotation) {
  std::ostringstream msg;
  msg << family_name(family) << ": ";
  if (!std::isfinite(theta)) {
    msg << "parameter must be finite";
    throw DomainError(msg.str());
  }
  switch (family) {
    case Family::independence:
      if (rotation != Rotation::r0) {
        msg << "independence admits only rotation 0";
        throw DomainError(msg.str());
      }
      theta_ = 0.0;
      return;
    case Family::gaussian:
      if (std::fabs(theta) > kGaussianMaxRho) msg << "|rho| must be <= " << kGaussianMaxRho;
      else return;
      break;
    case Family::frank:
      if (std::fabs(theta) < kFrankMinAbsTheta)
        msg << "|theta| must be >= " << kFrankMinAbsTheta << " (use indep)";
      else if (std::fabs(theta) > kFrankMaxAbsTheta)
        msg << "|theta| must be <= " << kFrankMaxAbsTheta;
      else
        return;
      break;
    case Family::clayton:
      if (!(theta > 0.0 && theta <= 100.0))
        msg << "theta must lie in (0, 100]; negative dependence via rotation";
      else
        return;
      break;
    case Family::gumbel:
      if (!(theta >= 1.0 && theta <= 100.0))
        msg << "theta must lie in [1, 100]; negative dependence via rotation";
      else
        return;
      break;
    case Family::fgm:
      if (std::fabs(theta) > 1.0) msg << "theta must lie in [-1, 1]";
      else return;
      break;
  }
  msg << ", got " << theta;
  throw DomainError(msg.str());
}

std::string PairCopulaSpec::describe() const {
  std::ostringstream out;
  out << family_name(family_);
  if (family_ != Family::independence) out << '(' << theta_ << ')';
  if (rotation_ != Rotation::r0) out << '@' << static_cast<int>(rotation_);
  return out.str();
}

double cdf(const PairCopulaSpec& spec, double u, double v) {
  require_unit(u, "cdf: u");
  require_unit(v, "cdf: v");
  if (u == 0.0 || v == 0.0) return 0.0;
  if (u == 1.0) return v;
  if (v == 1.0) return u;
  const Family f = spec.family();
  const double t = spec.theta();
  double c = 0.0;
  switch (spec.rotation()) {
    case Rotation::r0: c = base_cdf(f, t, u, v); break;
    case Rotation::r90: c = v - base_cdf(f, t, 1.0 - u, v); break;
    case Rotation::r180: c = u + v - 1.0 + base_cdf(f, t, 1.0 - u, 1.0 - v); break;
    case Rotation::r270: c = u - base_cdf(f, t, u, 1.0 - v); break;
  }
  // Frechet-Hoeffding bounds absorb rounding.
  return std::clamp(c, std::max(0.0, u + v - 1.0), std::min(u, v));
}

double h2(const PairCopulaSpec& spec, double u, double v) {
  require_unit(u, "h2: u");
  require_open_unit(v, "h2: v");
  const Family f = spec.family();
  const double t = spec.theta();
  switch (spec.rotation()) {
    case Rotation::r0: return base_h2(f, t, u, v);
    case Rotation::r90: return 1.0 - base_h2(f, t, 1.0 - u, v);
    case Rotation::r180: return 1.0 - base_h2(f, t, 1.0 - u, reflect_interior(v));
    case Rotation::r270: return base_h2(f, t, u, reflect_interior(v));
  }
  return 0.0;
}

double h1(const PairCopulaSpec& spec, double u, double v) {
  require_open_unit(u, "h1: u");
  require_unit(v, "h1: v");
  // Every base family is exchangeable: dC/du (u,v) = base_h2(v, u).
  const Family f = spec.family();
  const double t = spec.theta();
  switch (spec.rotation()) {
    case Rotation::r0: return base_h2(f, t, v, u);
    case Rotation::r90: return base_h2(f, t, v, reflect_interior(u));
    case Rotation::r180: return 1.0 - base_h2(f, t, 1.0 - v, reflect_interior(u));
    case Rotation::r270: return 1.0 - base_h2(f, t, 1.0 - v, u);
  }
  return 0.0;
}

double h2_inv(const PairCopulaSpec& spec, double w, double v) {
  require_unit(w, "h2_inv: w");
  require_open_unit(v, "h2_inv: v");
  const Family f = spec.family();
  const double t = spec.theta();
  switch (spec.rotation()) {
    case Rotation::r0: return base_h2_inv(f, t, w, v);
    case Rotation::r90: return 1.0 - base_h2_inv(f, t, 1.0 - w, v);
    case Rotation::r180: return 1.0 - base_h2_inv(f, t, 1.0 - w, reflect_interior(v));
    case Rotation::r270: return base_h2_inv(f, t, w, reflect_interior(v));
  }
  return 0.0;
}

double h1_inv(const PairCopulaSpec& spec, double w, double u) {
  require_unit(w, "h1_inv: w");
  require_open_unit(u, "h1_inv: u");
  const Family f = spec.family();
  const double t = spec.theta();
  switch (spec.rotation()) {
    case Rotation::r0: return base_h2_inv(f, t, w, u);
    case Rotation::r90: return base_h2_inv(f, t, w, reflect_interior(u));
    case Rotation::r180: return 1.0 - base_h2_inv(f, t, 1.0 - w, reflect_interior(u));
    case Rotation::r270: return 1.0 - base_h2_inv(f, t, 1.0 - w, u);
  }
  return 0.0;
}

double rho_s_analytic(const PairCopulaSpec& spec) {
  if (spec.family() == Family::independence) return 0.0;
  return 12.0 * parallel::tensor_quadrature([&spec](double u, double v) {
           return cdf(spec, u, v);
         }) -
         3.0;
}

double tau_analytic(const PairCopulaSpec& spec) {
  const double t = spec.theta();
  double tau = 0.0;
  switch (spec.family()) {
    case Family::independence: return 0.0;
    case Family::gaussian: tau = 2.0 / std::numbers::pi * std::asin(t); break;
    case Family::clayton: tau = t / (t + 2.0); break;
    case Family::gumbel: tau = 1.0 - 1.0 / t; break;
    case Family::fgm: tau = 2.0 * t / 9.0; break;
    case Family::frank: {
      // 1 - 4/t (1 - D1(t)), odd in t.
      const double a = std::abs(t);
      if (a < 1e-12) return 0.0;
      const double d1 = integrate_01([a](double x) {
                          const double s = a * x;
                          return s < 1e-8 ? 1.0 - s / 2.0 : s / std::expm1(s);
                        }, 1e-13);
      tau = 1.0 - 4.0 / a * (1.0 - d1);
      if (t < 0) tau = -tau;
      break;
    }
  }
  const bool flips = spec.rotation() == Rotation::r90 || spec.rotation() == Rotation::r270;
  return flips ? -tau : tau;
}

double kdd_analytic(const PairCopulaSpec& spec, const GridSpec& grid) {
  return kdd_of_cdf([&spec](double u, double v) { return cdf(spec, u, v); }, grid);
}

QuadrantClass qpd_check(const PairCopulaSpec& spec, const GridSpec& grid) {
  return quadrant_of_cdf([&spec](double u, double v) { return cdf(spec, u, v); }, grid)
      .classify();
}

}  // namespace pcop
