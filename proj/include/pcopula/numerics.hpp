#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace pcop {

/// Probabilities are clamped into [kProbFloor, 1 - kProbFloor] before any
/// logarithm or quantile transform.
inline constexpr double kProbFloor = 1e-12;

double clamp_probability(double p);

double std_normal_pdf(double x);

/// Phi(x). Throws DomainError for non-finite x.
double std_normal_cdf(double x);

/// Phi^{-1}(p) for p in (0,1): AS241 initializer polished by a Newton step.
double std_normal_quantile(double p);

/// P(A <= a, B <= b) for a standard bivariate normal with correlation rho.
///
/// Conditional reduction: integrates phi(x) * Phi((b - rho x) / sqrt(1 - rho^2))
/// over (-inf, a]. The region where the conditional factor is saturated at
/// 0 or 1 is handled in closed form; the remaining window is truncated to
/// |x| <= 8.5 and integrated by 48-point Gauss-Legendre. a and b may be
/// +/-infinity. |rho| >= 1 throws DomainError.
double bvn_cdf(double a, double b, double rho);

/// Gauss-Legendre rule mapped onto [0,1].
class QuadratureRule {
 public:
  explicit QuadratureRule(int order);

  /// Rules for orders 16, 32, 48, 64 and 128 are built once and shared.
  static const QuadratureRule& gauss_legendre(int order);

  int order() const { return order_; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  /// Sum of w_i f(lo + (hi - lo) x_i) * (hi - lo).
  template <typename F>
  double apply(F&& f, double lo = 0.0, double hi = 1.0) const {
    const double width = hi - lo;
    double sum = 0.0;
    for (int i = 0; i < order_; ++i) sum += weights_[i] * f(lo + width * nodes_[i]);
    return sum * width;
  }

 private:
  int order_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline constexpr double kDefaultIntegrationTol = 1e-9;

/// Integral of f over [lo, hi]. Compares 32- and 64-point Gauss-Legendre on
/// each panel and bisects when they disagree by more than the panel's share
/// of tol. A non-finite f value raises EvaluationError naming the node.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol = kDefaultIntegrationTol);

inline double integrate_01(const std::function<double(double)>& f,
                           double tol = kDefaultIntegrationTol) {
  return integrate(f, 0.0, 1.0, tol);
}

struct RootBracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;
  double tol;

  /// Evaluates f at both ends; throws BracketError without a sign change.
  static RootBracket make(const std::function<double(double)>& f, double lo, double hi,
                          double tol);
};

inline constexpr int kMaxRootIterations = 200;

/// Root of a monotone function inside the bracket. Newton steps use the
/// secant slope of the last two iterates and fall back to bisection whenever
/// a step leaves the bracket or fails to halve it.
double find_root(const std::function<double(double)>& f, const RootBracket& bracket);

}  // namespace pcop
