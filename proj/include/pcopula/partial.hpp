#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pcopula/pair_copula.hpp"

namespace pcop {

struct SampleTriples;

/// z -> parameter of the conditional copula C_{X,Y|Z=z}, z in [0,1].
class ThetaFunction {
 public:
  enum class Kind { constant, exp_z, neg_exp_z, one_minus_2z, table };

  static ThetaFunction constant(double value);
  static ThetaFunction exp_z();
  static ThetaFunction neg_exp_z();
  static ThetaFunction one_minus_2z();
  /// Piecewise-linear through (z, theta) knots; z strictly increasing from
  /// 0 to 1.
  static ThetaFunction table(std::vector<std::pair<double, double>> knots);

  /// "const:2", "exp", "negexp", "one-minus-2z", "table:0:-1,1:1".
  static ThetaFunction parse(const std::string& text);

  double operator()(double z) const;
  Kind kind() const { return kind_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  std::string describe() const;

 private:
  ThetaFunction(Kind kind, double value) : kind_(kind), value_(value) {}

  Kind kind_ = Kind::constant;
  double value_ = 0.0;
  std::vector<std::pair<double, double>> knots_;
};

/// Conditional copula family with a z-dependent parameter. Gaussian
/// correlations saturate at +/-kGaussianMaxRho so that 1 - 2z is usable at
/// the ends of [0,1]; every other family must stay inside its domain on
/// the whole z-grid, otherwise construction throws DomainError naming z.
class ConditionalFamily {
 public:
  ConditionalFamily() = default;
  ConditionalFamily(Family family, ThetaFunction theta, Rotation rotation = Rotation::r0);

  static ConditionalFamily constant(const PairCopulaSpec& spec);

  Family family() const { return family_; }
  Rotation rotation() const { return rotation_; }
  const ThetaFunction& theta() const { return theta_; }

  /// C_{X,Y|Z=z}.
  PairCopulaSpec at(double z) const;

  /// 0, the z where theta(z) is not smooth (table knots, Gaussian
  /// saturation), 1. z-integrals are split there.
  std::vector<double> breakpoints() const;

  /// Integral over [0,1] of g(z), piecewise between breakpoints with graded
  /// nodes at both ends of every piece.
  double integrate_z(const std::function<double(double)>& g, double tol = 1e-9) const;

  std::string describe() const;

 private:
  Family family_ = Family::independence;
  ThetaFunction theta_ = ThetaFunction::constant(0.0);
  Rotation rotation_ = Rotation::r0;
};

/// Rosenblatt-transformed pairs (U_X, U_Y).
struct PseudoPairs {
  std::vector<double> u_x;
  std::vector<double> u_y;
  std::size_t size() const { return u_x.size(); }
};

/// u_x = h2(c_xz, x, z), u_y = h2(c_yz, y, z), clamped into
/// [kProbFloor, 1 - kProbFloor]. Throws InputError on length mismatch.
PseudoPairs pseudo_observations(const SampleTriples& samples, const PairCopulaSpec& c_xz,
                                const PairCopulaSpec& c_yz);

namespace serial {
PseudoPairs pseudo_observations(const SampleTriples& samples, const PairCopulaSpec& c_xz,
                                const PairCopulaSpec& c_yz);
}
namespace parallel {
PseudoPairs pseudo_observations(const SampleTriples& samples, const PairCopulaSpec& c_xz,
                                const PairCopulaSpec& c_yz);
}

/// Partial copula C_{X,Y;Z}(u,v): the z-average of the conditional copula
/// under uniform f_Z.
double partial_cdf(const ConditionalFamily& cond, double u, double v);
/// dC_{X,Y;Z}/du and dC_{X,Y;Z}/dv, z-averages of h1 and h2.
double partial_h1(const ConditionalFamily& cond, double u, double v);
double partial_h2(const ConditionalFamily& cond, double u, double v);

/// Spearman's rho of the partial copula as the expected conditional rho.
double partial_rho(const ConditionalFamily& cond);
/// Same quantity by the second route, 12 * integral of partial_cdf - 3.
double partial_rho_from_cdf(const ConditionalFamily& cond);

/// Kendall's tau of the partial copula, 1 - 4 * integral of D1 * D2.
double partial_tau(const ConditionalFamily& cond);

/// k: max over the z-grid of the conditional copula's KDD.
double conditional_kdd_sup(const ConditionalFamily& cond, const GridSpec& grid = {});

/// KDD of the partial copula, same grid scheme as kdd_analytic.
double partial_kdd(const ConditionalFamily& cond, const GridSpec& grid = {});

/// QPD/QND flags of the partial copula on the QPD grid.
QuadrantClass partial_quadrant(const ConditionalFamily& cond, const GridSpec& grid = {});

/// QPD if every z-grid conditional is QPD, QND if every one is QND (QPD
/// wins a tie), else neither.
QuadrantClass conditional_quadrant(const ConditionalFamily& cond, const GridSpec& grid = {});

inline constexpr double kCertificateTol = 1e-6;

/// Outcome of checking the KDD, Spearman, Kendall and quadrant-dependence
/// bounds for one conditional family. Violations are recorded, not thrown.
struct BoundCertificate {
  std::string config_id;
  double k = 0.0;
  double rho_partial = 0.0;
  double tau_partial = 0.0;
  double kdd_partial = 0.0;
  QuadrantClass conditional_class = QuadrantClass::neither;
  QuadrantClass partial_class = QuadrantClass::neither;
  bool kdd_ok = false;
  bool rho_ok = false;
  bool tau_ok = false;
  bool qpd_ok = false;

  bool passed() const { return kdd_ok && rho_ok && tau_ok && qpd_ok; }

  static std::string csv_header();
  std::string csv_row() const;
};

BoundCertificate certify_bounds(const ConditionalFamily& cond, std::string config_id = {},
                                const GridSpec& grid = {});

}  // namespace pcop
