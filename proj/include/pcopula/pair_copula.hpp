#pragma once

#include <string>
#include <string_view>

namespace pcop {

enum class Family { independence, gaussian, frank, clayton, gumbel, fgm };

enum class Rotation { r0 = 0, r90 = 90, r180 = 180, r270 = 270 };

std::string_view family_name(Family family);
/// Accepts indep, gaussian, frank, clayton, gumbel, fgm.
Family parse_family(std::string_view name);
/// Both parsers throw InputError on unknown values.
Rotation parse_rotation(int degrees);

/// Parameter limits.
inline constexpr double kGaussianMaxRho = 0.9999;
inline constexpr double kFrankMinAbsTheta = 1e-5;
inline constexpr double kFrankMaxAbsTheta = 700.0;

/// A bivariate copula family, its parameter and a rotation. Validated at
/// construction; immutable afterwards.
class PairCopulaSpec {
 public:
  /// Independence copula.
  PairCopulaSpec() = default;
  /// Throws DomainError when theta or the rotation is inadmissible.
  PairCopulaSpec(Family family, double theta, Rotation rotation = Rotation::r0);

  static PairCopulaSpec independence() { return {}; }

  Family family() const { return family_; }
  double theta() const { return theta_; }
  Rotation rotation() const { return rotation_; }

  /// "gaussian(0.6)", "clayton(2)@90", "indep".
  std::string describe() const;

  friend bool operator==(const PairCopulaSpec&, const PairCopulaSpec&) = default;

 private:
  Family family_ = Family::independence;
  double theta_ = 0.0;
  Rotation rotation_ = Rotation::r0;
};

/// C(u,v) for u, v in [0,1].
double cdf(const PairCopulaSpec& spec, double u, double v);

/// dC/dv at (u,v): the conditional CDF of U given V = v. Requires v in (0,1).
double h2(const PairCopulaSpec& spec, double u, double v);
/// dC/du at (u,v): the conditional CDF of V given U = u. Requires u in (0,1).
double h1(const PairCopulaSpec& spec, double u, double v);

/// u such that h2(spec, u, v) = w.
double h2_inv(const PairCopulaSpec& spec, double w, double v);
/// v such that h1(spec, u, v) = w.
double h1_inv(const PairCopulaSpec& spec, double w, double u);

/// Grid resolutions behind the grid-defined functionals. The defaults are
/// the published definitions; overrides exist for exploration only.
struct GridSpec {
  int kdd_points = 201;  // uniform grid per axis, including 0 and 1
  int zoom_points = 21;  // local refinement around the argmax
  int qpd_points = 101;
  int z_points = 257;    // z-grid for conditional suprema
};

/// Spearman's rho, 12 * integral of C - 3 (64x64 Gauss-Legendre).
double rho_s_analytic(const PairCopulaSpec& spec);

/// Kendall's tau, 1 - 4 * integral of h1 * h2 (64x64 Gauss-Legendre).
double tau_analytic(const PairCopulaSpec& spec);

/// 4 * max |C(u,v) - uv| over the KDD grid plus one zoom around its argmax.
double kdd_analytic(const PairCopulaSpec& spec, const GridSpec& grid = {});

enum class QuadrantClass { qpd, qnd, neither };

std::string_view quadrant_name(QuadrantClass q);

/// Sign of C - uv on the QPD grid; QPD wins a tie (Independence).
QuadrantClass qpd_check(const PairCopulaSpec& spec, const GridSpec& grid = {});

namespace dev {

/// Mutation hooks used by `verify --mutate` to prove the suite detects
/// corrupted h-functions. Never enabled outside that path.
enum class Mutation { none, gumbel_h2 };
void set_mutation(Mutation m);
Mutation mutation();

}  // namespace dev

}  // namespace pcop
