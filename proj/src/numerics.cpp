#include "pcopula/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "pcopula/error.hpp"

namespace pcop {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Conditional factor Phi(t) is within 1e-17 of 0 or 1 beyond |t| = 8.5.
constexpr double kTailCut = 8.5;

// Upper tail Q(x) = 1 - Phi(x), accurate for large positive x.
double std_normal_sf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

// Wichura's AS241 (PPND16), ~1e-16 relative accuracy.
double as241(double p) {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852545925 + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                0.24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) * r + 0.14810397642748007459) * r +
              0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) * r + 0.026532189526576123093) * r +
              0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  return q < 0 ? -val : val;
}

double adaptive_panel(const std::function<double(double)>& f, double lo, double hi, double tol,
                      int depth) {
  constexpr int kMaxDepth = 40;
  auto checked = [&f](double x) {
    const double y = f(x);
    if (!std::isfinite(y)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "integrand is not finite at node " << x;
      throw EvaluationError(msg.str());
    }
    return y;
  };
  const double coarse = QuadratureRule::gauss_legendre(32).apply(checked, lo, hi);
  const double fine = QuadratureRule::gauss_legendre(64).apply(checked, lo, hi);
  if (std::fabs(fine - coarse) <= tol || depth >= kMaxDepth) return fine;
  const double mid = 0.5 * (lo + hi);
  return adaptive_panel(f, lo, mid, 0.5 * tol, depth + 1) +
         adaptive_panel(f, mid, hi, 0.5 * tol, depth + 1);
}

}  // namespace

double clamp_probability(double p) { return std::clamp(p, kProbFloor, 1.0 - kProbFloor); }

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) {
  if (!std::isfinite(x)) throw DomainError("std_normal_cdf: argument must be finite");
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("std_normal_quantile: p must lie in (0,1)");
  double x = as241(p);
  // One Newton step, residual taken in whichever tail is exact (1 - p is
  // exact for p >= 1/2).
  const double dens = std_normal_pdf(x);
  if (dens > 0.0) {
    if (p < 0.5)
      x -= (0.5 * std::erfc(-x * kInvSqrt2) - p) / dens;
    else
      x += (std_normal_sf(x) - (1.0 - p)) / dens;
  }
  return x;
}

double bvn_cdf(double a, double b, double rho) {
  if (std::isnan(a) || std::isnan(b) || std::isnan(rho))
    throw DomainError("bvn_cdf: NaN argument");
  if (!(std::fabs(rho) < 1.0)) throw DomainError("bvn_cdf: |rho| must be < 1");

  constexpr double inf = std::numeric_limits<double>::infinity();
  if (a == -inf || b == -inf) return 0.0;
  if (a == inf && b == inf) return 1.0;
  if (b == inf) return std_normal_cdf(a);
  if (a == inf) return std_normal_cdf(b);
  if (rho == 0.0) return std_normal_cdf(a) * std_normal_cdf(b);
  if (a < -kTailCut) return 0.0;

  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  const double centre = b / rho;
  const double half_width = kTailCut * s / std::fabs(rho);
  const double lo_window = centre - half_width;
  const double hi_window = centre + half_width;
  const double upper = std::min(a, kTailCut);

  double closed = 0.0;
  if (rho > 0.0) {
    // Factor is ~1 below the window, ~0 above it.
    const double m = std::min(a, lo_window);
    if (m > -kTailCut) closed = std_normal_cdf(m);
  } else {
    // Factor is ~0 below the window, ~1 above it.
    if (a > hi_window) closed = std_normal_cdf(a) - std_normal_cdf(std::max(hi_window, -40.0));
  }

  const double lo = std::max(-kTailCut, lo_window);
  const double hi = std::min(upper, hi_window);
  double window = 0.0;
  if (hi > lo) {
    const auto integrand = [b, rho, s](double x) {
      return std_normal_pdf(x) * 0.5 * std::erfc(-(b - rho * x) / s * kInvSqrt2);
    };
    window = QuadratureRule::gauss_legendre(48).apply(integrand, lo, hi);
  }
  return std::clamp(closed + window, 0.0, 1.0);
}

QuadratureRule::QuadratureRule(int order) : order_(order), nodes_(order), weights_(order) {
  if (order < 1) throw DomainError("QuadratureRule: order must be positive");
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // x is the i-th largest root; mirror pairs onto [0,1].
    nodes_[n - 1 - i] = 0.5 * (1.0 + x);
    nodes_[i] = 0.5 * (1.0 - x);
    weights_[n - 1 - i] = 0.5 * w;
    weights_[i] = 0.5 * w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.5;
}

const QuadratureRule& QuadratureRule::gauss_legendre(int order) {
  static const std::map<int, QuadratureRule> rules = [] {
    std::map<int, QuadratureRule> m;
    for (int o : {16, 32, 48, 64, 128}) m.emplace(o, QuadratureRule(o));
    return m;
  }();
  const auto it = rules.find(order);
  if (it == rules.end()) throw DomainError("QuadratureRule: shared rules exist for 16/32/48/64/128");
  return it->second;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw DomainError("integrate: tol must be positive");
  if (!(hi > lo)) return 0.0;
  return adaptive_panel(f, lo, hi, tol, 0);
}

RootBracket RootBracket::make(const std::function<double(double)>& f, double lo, double hi,
                              double tol) {
  if (!(lo < hi)) throw BracketError("root bracket requires lo < hi");
  RootBracket b{lo, hi, f(lo), f(hi), tol};
  if (b.f_lo * b.f_hi > 0.0) {
    std::ostringstream msg;
    msg << "no sign change on [" << lo << ", " << hi << "]";
    throw BracketError(msg.str());
  }
  return b;
}

double find_root(const std::function<double(double)>& f, const RootBracket& bracket) {
  double lo = bracket.lo;
  double hi = bracket.hi;
  double f_lo = bracket.f_lo;
  double f_hi = bracket.f_hi;
  if (!(lo < hi)) throw BracketError("root bracket requires lo < hi");
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (f_lo * f_hi > 0.0) throw BracketError("root bracket has no sign change");
  // Orient so that f(lo) < 0 < f(hi).
  const double sign = f_lo < 0.0 ? 1.0 : -1.0;
  f_lo *= sign;
  f_hi *= sign;

  // Regula falsi start, then secant-slope Newton.
  double x_prev = lo;
  double f_prev = f_lo;
  double x = lo - f_lo * (hi - lo) / (f_hi - f_lo);
  double width_before = hi - lo;
  for (int iter = 0; iter < kMaxRootIterations; ++iter) {
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = sign * f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
    if (hi - lo <= bracket.tol) return std::fabs(f_lo) < std::fabs(f_hi) ? lo : hi;

    double next = 0.5 * (lo + hi);
    const double slope = (fx - f_prev) / (x - x_prev);
    if (std::isfinite(slope) && slope > 0.0) {
      const double newton = x - fx / slope;
      if (std::fabs(newton - x) <= 0.25 * bracket.tol) return std::clamp(newton, lo, hi);
      if (newton > lo && newton < hi) next = newton;
    }
    // Force a bisection whenever two steps have not halved the bracket.
    if (hi - lo > 0.5 * width_before) next = 0.5 * (lo + hi);
    if (iter % 2 == 1) width_before = hi - lo;

    x_prev = x;
    f_prev = fx;
    x = next;
  }
  return std::fabs(f_lo) < std::fabs(f_hi) ? lo : hi;
}

}  // namespace pcop
