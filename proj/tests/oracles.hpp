#pragma once

// Independent reference computations for the tests. Deliberately naive:
// nothing here calls into the library's numerics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// Composite Gauss-Legendre (8 nodes per panel) on [lo, hi].
inline double gl8(const std::function<double(double)>& f, double lo, double hi, int panels) {
  static const double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                              0.9602898564975363};
  static const double w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                              0.1012285362903763};
  const double h = (hi - lo) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = lo + (p + 0.5) * h, r = 0.5 * h;
    for (int k = 0; k < 4; ++k) s += w[k] * r * (f(c - r * x[k]) + f(c + r * x[k]));
  }
  return s;
}

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Phi(x) by quadrature of the density from -12.
inline double normal_cdf(double x) {
  if (x < -12.0) return 0.0;
  return gl8(normal_pdf, -12.0, x, 400);
}

// Bisection on a monotone increasing g for g(x) = target.
inline double bisect(const std::function<double(double)>& g, double target, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Bivariate normal CDF by 2D quadrature of the joint density.
inline double bvn_2d(double a, double b, double rho) {
  const double s = std::sqrt(1.0 - rho * rho);
  const double lo = -10.0;
  a = std::min(a, 10.0);
  b = std::min(b, 10.0);
  return gl8(
      [&](double x) {
        return gl8(
            [&](double y) {
              const double q = (x * x - 2.0 * rho * x * y + y * y) / (s * s);
              return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * s);
            },
            lo, b, 120);
      },
      lo, a, 120);
}

// Debye function D_k(x) = k / x^k * int_0^x t^k / (e^t - 1) dt.
inline double debye(int k, double x) {
  const double ax = std::abs(x);
  double integral = gl8(
      [k](double t) { return t == 0.0 ? (k == 1 ? 1.0 : 0.0) : std::pow(t, k) / std::expm1(t); },
      0.0, ax, 200);
  double d = k * integral / std::pow(ax, k);
  // D_k(-x) = D_k(x) + k x / (k + 1)
  if (x < 0) d += k * ax / (k + 1.0);
  return d;
}

inline double frank_tau(double theta) { return 1.0 - 4.0 / theta * (1.0 - debye(1, theta)); }
inline double frank_rho(double theta) {
  return 1.0 - 12.0 / theta * (debye(1, theta) - debye(2, theta));
}

inline double gaussian_rho_s(double r) { return 6.0 / std::numbers::pi * std::asin(r / 2.0); }
inline double gaussian_tau(double r) { return 2.0 / std::numbers::pi * std::asin(r); }

// Tau-b from all pairs.
inline double kendall_pairs(const std::vector<double>& a, const std::vector<double>& b) {
  long long conc = 0, disc = 0, ta = 0, tb = 0;
  const long long n = static_cast<long long>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double da = a[i] - a[j], db = b[i] - b[j];
      if (da == 0.0) ++ta;
      if (db == 0.0) ++tb;
      if (da * db > 0.0) ++conc;
      if (da * db < 0.0) ++disc;
    }
  const long long n0 = n * (n - 1) / 2;
  return static_cast<double>(conc - disc) /
         std::sqrt(static_cast<double>(n0 - ta) * static_cast<double>(n0 - tb));
}

// Average ranks by counting: rank = #less + (#equal + 1) / 2.
inline std::vector<double> ranks(const std::vector<double>& a) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    double less = 0, eq = 0;
    for (double v : a) {
      less += v < a[i];
      eq += v == a[i];
    }
    r[i] = less + (eq + 1.0) / 2.0;
  }
  return r;
}

// Empirical KDD by direct counting at every lattice point, O(n^3).
inline double kdd_lattice(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size()), d = n + 1.0;
  double best = 0.0;
  for (double p : ra)
    for (double q : rb) {
      long long c = 0;
      for (std::size_t i = 0; i < a.size(); ++i) c += (ra[i] <= p && rb[i] <= q);
      best = std::max(best, std::abs(static_cast<double>(c) / n - (p / d) * (q / d)));
    }
  return std::min(1.0, 4.0 * best);
}

}  // namespace oracle
