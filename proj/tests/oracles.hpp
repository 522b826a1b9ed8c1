// Test-only oracles, independent of the library's closed forms: brute-force
// grid search for box projections and direct lp arithmetic on raw arrays.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracles {

// (sum |v_i|^p)^(1/p) computed directly, no scaling tricks.
inline double direct_lp_norm(const Eigen::VectorXd& v, double p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), p);
  return std::pow(s, 1.0 / p);
}

// Minimum of ||x - g||_p over every point g of the axis-aligned grid of
// [lo, hi] with the given step (hi appended when the step does not land on
// it). Enumerates the full product grid; intended for dims <= 3.
inline double grid_min_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                                const Eigen::VectorXd& hi, double p, double step) {
  const int dim = static_cast<int>(x.size());
  std::vector<std::vector<double>> axis_pow(dim);
  for (int i = 0; i < dim; ++i) {
    for (double g = lo[i]; g < hi[i] + 0.5 * step; g += step)
      axis_pow[i].push_back(std::pow(std::abs(x[i] - std::min(g, hi[i])), p));
    if (axis_pow[i].empty() || std::abs(lo[i] + step * static_cast<double>(axis_pow[i].size() - 1) - hi[i]) > 1e-12)
      axis_pow[i].push_back(std::pow(std::abs(x[i] - hi[i]), p));
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(dim, 0);
  while (true) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += axis_pow[i][idx[i]];
    if (s < best) best = s;
    int i = 0;
    for (; i < dim; ++i) {
      if (++idx[i] < axis_pow[i].size()) break;
      idx[i] = 0;
    }
    if (i == dim) break;
  }
  return std::pow(best, 1.0 / p);
}

// Minimum of the fixed-point residual ||y - P_C(y - B(y))||_2 over a grid of
// the box, where the projection is a plain per-coordinate clamp written out
// here. Used to locate VI solutions without the solver.
template <typename MapFn>
Eigen::VectorXd grid_min_residual_point(MapFn&& B, const Eigen::VectorXd& lo,
                                        const Eigen::VectorXd& hi, double step) {
  const int dim = static_cast<int>(lo.size());
  std::vector<std::vector<double>> axes(dim);
  for (int i = 0; i < dim; ++i) {
    for (double g = lo[i]; g < hi[i] + 0.5 * step; g += step) axes[i].push_back(std::min(g, hi[i]));
  }
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_point = lo;
  std::vector<std::size_t> idx(dim, 0);
  Eigen::VectorXd y(dim);
  while (true) {
    for (int i = 0; i < dim; ++i) y[i] = axes[i][idx[i]];
    const Eigen::VectorXd z = y - B(y);
    double r2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double zi = std::min(std::max(z[i], lo[i]), hi[i]);
      r2 += (y[i] - zi) * (y[i] - zi);
    }
    if (r2 < best) {
      best = r2;
      best_point = y;
    }
    int i = 0;
    for (; i < dim; ++i) {
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
    }
    if (i == dim) break;
  }
  return best_point;
}

}  // namespace oracles
