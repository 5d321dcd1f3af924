#pragma once

// Data-parallel kernels. Each kernel has a serial reference in
// pcop::serial and an OpenMP version in pcop::parallel; both produce
// bit-identical results (row-keyed work, fixed-order reductions).

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pcopula/pair_copula.hpp"

namespace pcop {

using BivariateFn = std::function<double(double, double)>;

/// Extrema of C(u,v) - uv over a tensor grid. Ties resolve to the first
/// point in row-major order.
struct DeviationScan {
  double min_dev = 0.0;
  double max_dev = 0.0;
  double max_abs = 0.0;
  double argmax_u = 0.0;
  double argmax_v = 0.0;
};

/// points >= 2 equally spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int points);

/// Tolerance on C - uv for quadrant classification.
inline constexpr double kQuadrantTol = 1e-12;

struct QuadrantFlags {
  bool qpd = false;
  bool qnd = false;
  QuadrantClass classify() const {
    return qpd ? QuadrantClass::qpd : (qnd ? QuadrantClass::qnd : QuadrantClass::neither);
  }
};

namespace serial {

DeviationScan scan_deviation(const BivariateFn& c, std::span<const double> us,
                             std::span<const double> vs);

/// Integral of f over [0,1]^2: tensor 64-point Gauss-Legendre in graded
/// coordinates u = t^2 (3 - 2t), which concentrate nodes near the edges.
double tensor_quadrature(const BivariateFn& f);

/// Evaluates f(i) for i in [0, n) into a vector.
std::vector<double> map_index(std::size_t n, const std::function<double(std::size_t)>& f);

}  // namespace serial

namespace parallel {

DeviationScan scan_deviation(const BivariateFn& c, std::span<const double> us,
                             std::span<const double> vs);
double tensor_quadrature(const BivariateFn& f);
std::vector<double> map_index(std::size_t n, const std::function<double(std::size_t)>& f);

}  // namespace parallel

/// 4 * max |C - uv| over the KDD grid, refined once around the argmax.
double kdd_of_cdf(const BivariateFn& c, const GridSpec& grid);

QuadrantFlags quadrant_of_cdf(const BivariateFn& c, const GridSpec& grid);

}  // namespace pcop
