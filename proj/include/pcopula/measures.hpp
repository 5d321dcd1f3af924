#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pcop {

/// 1-based ranks; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> a);

/// Throws UndefinedStatistic for n < 2 or a constant column.
double pearson(std::span<const double> a, std::span<const double> b);

/// Pearson correlation of average ranks. Requires n >= 3.
double spearman_emp(std::span<const double> a, std::span<const double> b);

/// Kendall's tau-b in O(n log n) (merge-sort inversion count). Requires n >= 2.
double kendall_emp(std::span<const double> a, std::span<const double> b);

/// Pair counts behind tau-b. numerator = concordant - discordant, exact.
struct KendallCounts {
  long long pairs = 0;     // n (n - 1) / 2
  long long ties_a = 0;    // pairs tied in a
  long long ties_b = 0;    // pairs tied in b
  long long numerator = 0;
};
KendallCounts kendall_counts(std::span<const double> a, std::span<const double> b);
/// tau-b from counts; the single formula shared by every Kendall route.
double tau_b(const KendallCounts& c);

/// Above this size kdd_emp switches to the restricted lattice.
inline constexpr std::size_t kKddFullLatticeMax = 2000;
inline constexpr int kKddQuantilePoints = 201;

/// 4 * max |C_n - uv| over the pseudo-rank lattice (denominator n + 1).
/// For n > kKddFullLatticeMax the lattice is restricted to a quantile grid
/// of kKddQuantilePoints rank levels per axis plus every sample point.
double kdd_emp(std::span<const double> a, std::span<const double> b);

/// Restricted-lattice route, callable at any n. When a column has at most
/// kKddQuantilePoints distinct values the grid covers its whole lattice.
double kdd_emp_restricted(std::span<const double> a, std::span<const double> b);

namespace serial {
/// Full-lattice route, incremental sweep over a-levels.
double kdd_emp_full(std::span<const double> a, std::span<const double> b);
}
namespace parallel {
/// Full-lattice route, one independent histogram per a-level.
double kdd_emp_full(std::span<const double> a, std::span<const double> b);
}

/// OLS of x and y on (1, z) and the residual correlation.
struct ResidualFit {
  double alpha = 0.0;  // intercept, x on z
  double beta = 0.0;   // slope, x on z
  double gamma = 0.0;  // intercept, y on z
  double theta = 0.0;  // slope, y on z
  double correlation = 0.0;
};

/// Requires n >= 4 and non-constant z.
ResidualFit partial_correlation_fit(std::span<const double> x, std::span<const double> y,
                                    std::span<const double> z);
double partial_correlation(std::span<const double> x, std::span<const double> y,
                           std::span<const double> z);

struct DependenceSummary {
  std::string pair;  // "marginal" | "partial"
  double spearman = 0.0;
  double kendall = 0.0;
  double kdd = 0.0;
  std::size_t n = 0;

  static std::string csv_header();
  std::string csv_row() const;
};

DependenceSummary summarize(std::string pair, std::span<const double> a,
                            std::span<const double> b);

}  // namespace pcop
