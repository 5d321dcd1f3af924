#include "pcopula/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "pcopula/error.hpp"
#include "pcopula/numerics.hpp"
#include "parallel_for.hpp"

namespace pcop {

namespace {

struct RowScan {
  double min_dev = std::numeric_limits<double>::infinity();
  double max_dev = -std::numeric_limits<double>::infinity();
  double max_abs = -1.0;
  std::size_t argmax_col = 0;
};

RowScan scan_row(const BivariateFn& c, double u, std::span<const double> vs) {
  RowScan row;
  for (std::size_t j = 0; j < vs.size(); ++j) {
    const double dev = c(u, vs[j]) - u * vs[j];
    row.min_dev = std::min(row.min_dev, dev);
    row.max_dev = std::max(row.max_dev, dev);
    if (std::fabs(dev) > row.max_abs) {
      row.max_abs = std::fabs(dev);
      row.argmax_col = j;
    }
  }
  return row;
}

DeviationScan reduce_rows(const std::vector<RowScan>& rows, std::span<const double> us,
                          std::span<const double> vs) {
  DeviationScan out;
  out.min_dev = std::numeric_limits<double>::infinity();
  out.max_dev = -std::numeric_limits<double>::infinity();
  out.max_abs = -1.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.min_dev = std::min(out.min_dev, rows[i].min_dev);
    out.max_dev = std::max(out.max_dev, rows[i].max_dev);
    if (rows[i].max_abs > out.max_abs) {
      out.max_abs = rows[i].max_abs;
      out.argmax_u = us[i];
      out.argmax_v = vs[rows[i].argmax_col];
    }
  }
  return out;
}

// 64-point Gauss-Legendre in the coordinate t with u = t^2 (3 - 2t). The
// grading clusters nodes at 0 and 1, where h-function products of
// tail-dependent copulas jump.
struct GradedRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GradedRule& graded_rule() {
  static const GradedRule rule = [] {
    const auto& gl = QuadratureRule::gauss_legendre(64);
    GradedRule r;
    for (int i = 0; i < gl.order(); ++i) {
      const double t = gl.nodes()[i];
      r.nodes.push_back(t * t * (3.0 - 2.0 * t));
      r.weights.push_back(gl.weights()[i] * 6.0 * t * (1.0 - t));
    }
    return r;
  }();
  return rule;
}

double row_quadrature(const BivariateFn& f, double x) {
  const auto& rule = graded_rule();
  double sum = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) sum += rule.weights[j] * f(x, rule.nodes[j]);
  return sum;
}

double sum_rows(std::span<const double> row_sums) {
  const auto& rule = graded_rule();
  double sum = 0.0;
  for (std::size_t i = 0; i < row_sums.size(); ++i) sum += rule.weights[i] * row_sums[i];
  return sum;
}

}  // namespace

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) throw DomainError("linspace: need at least two points");
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) out[i] = lo + (hi - lo) * i / (points - 1);
  out.back() = hi;
  return out;
}

namespace serial {

DeviationScan scan_deviation(const BivariateFn& c, std::span<const double> us,
                             std::span<const double> vs) {
  std::vector<RowScan> rows(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) rows[i] = scan_row(c, us[i], vs);
  return reduce_rows(rows, us, vs);
}

double tensor_quadrature(const BivariateFn& f) {
  const auto& nodes = graded_rule().nodes;
  std::vector<double> row_sums(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) row_sums[i] = row_quadrature(f, nodes[i]);
  return sum_rows(row_sums);
}

std::vector<double> map_index(std::size_t n, const std::function<double(std::size_t)>& f) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
  return out;
}

}  // namespace serial

namespace parallel {

DeviationScan scan_deviation(const BivariateFn& c, std::span<const double> us,
                             std::span<const double> vs) {
  std::vector<RowScan> rows(us.size());
  detail::parallel_for(us.size(), [&](std::size_t i) { rows[i] = scan_row(c, us[i], vs); });
  return reduce_rows(rows, us, vs);
}

double tensor_quadrature(const BivariateFn& f) {
  const auto& nodes = graded_rule().nodes;
  std::vector<double> row_sums(nodes.size());
  detail::parallel_for(nodes.size(),
                       [&](std::size_t i) { row_sums[i] = row_quadrature(f, nodes[i]); });
  return sum_rows(row_sums);
}

std::vector<double> map_index(std::size_t n, const std::function<double(std::size_t)>& f) {
  std::vector<double> out(n);
  detail::parallel_for(n, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

}  // namespace parallel

double kdd_of_cdf(const BivariateFn& c, const GridSpec& grid) {
  const auto axis = linspace(0.0, 1.0, grid.kdd_points);
  const DeviationScan coarse = parallel::scan_deviation(c, axis, axis);
  const double step = 1.0 / (grid.kdd_points - 1);
  const auto zu = linspace(std::max(0.0, coarse.argmax_u - step),
                           std::min(1.0, coarse.argmax_u + step), grid.zoom_points);
  const auto zv = linspace(std::max(0.0, coarse.argmax_v - step),
                           std::min(1.0, coarse.argmax_v + step), grid.zoom_points);
  const DeviationScan zoom = parallel::scan_deviation(c, zu, zv);
  return std::min(1.0, 4.0 * std::max(coarse.max_abs, zoom.max_abs));
}

QuadrantFlags quadrant_of_cdf(const BivariateFn& c, const GridSpec& grid) {
  const auto axis = linspace(0.0, 1.0, grid.qpd_points);
  const DeviationScan scan = parallel::scan_deviation(c, axis, axis);
  return {scan.min_dev >= -kQuadrantTol, scan.max_dev <= kQuadrantTol};
}

}  // namespace pcop
