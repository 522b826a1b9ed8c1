#include "vilab/sampling.hpp"

#include <cmath>

namespace vilab {

Eigen::VectorXd gaussian_vector(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = gauss(rng);
  return v;
}

Eigen::VectorXd sample_in_set(const ConvexSet& C, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (const Box* b = C.get_if<Box>()) {
    Eigen::VectorXd v(b->lo.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v[i] = b->lo[i] + unit(rng) * (b->hi[i] - b->lo[i]);
    return v;
  }
  if (const Ball* b = C.get_if<Ball>()) {
    // Uniform in the ball: gaussian direction, radius ~ r U^(1/d).
    Eigen::VectorXd dir = gaussian_vector(C.dim(), rng);
    const double n = dir.norm();
    if (n == 0.0) return b->center;
    const double r = b->radius * std::pow(unit(rng), 1.0 / static_cast<double>(C.dim()));
    return b->center + (r / n) * dir;
  }
  if (const Halfspace* h = C.get_if<Halfspace>()) {
    const Eigen::VectorXd anchor = (h->offset / h->normal.squaredNorm()) * h->normal;
    return clip_to_set(C, anchor + gaussian_vector(C.dim(), rng));
  }
  // Simplex: normalized exponentials are uniform (Dirichlet(1,...,1)).
  std::exponential_distribution<double> expd(1.0);
  Eigen::VectorXd v(C.dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = expd(rng);
  const double s = v.sum();
  if (s == 0.0) return Eigen::VectorXd::Constant(C.dim(), 1.0 / static_cast<double>(C.dim()));
  return v / s;
}

Eigen::VectorXd sample_outside_set(const ConvexSet& C, Rng& rng) {
  if (const Halfspace* h = C.get_if<Halfspace>()) {
    // Step out along the normal from a boundary point, plus tangential noise.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Eigen::VectorXd anchor = (h->offset / h->normal.squaredNorm()) * h->normal;
    const Eigen::VectorXd noise = gaussian_vector(C.dim(), rng);
    return anchor + (0.1 + unit(rng)) * h->normal / h->normal.norm() +
           (noise - noise.dot(h->normal) / h->normal.squaredNorm() * h->normal);
  }
  const Box bb = bounding_box(C);
  const Eigen::VectorXd mid = 0.5 * (bb.lo + bb.hi);
  const Eigen::VectorXd half = 0.5 * (bb.hi - bb.lo);
  std::uniform_real_distribution<double> wide(-2.5, 2.5);
  for (int attempt = 0; attempt < 256; ++attempt) {
    Eigen::VectorXd v(C.dim());
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v[i] = mid[i] + wide(rng) * (half[i] + 0.5);
    if (!contains(C, v)) return v;
  }
  // Fall back to an inflated corner; every catalog set is bounded away from it.
  return bb.hi + Eigen::VectorXd::Constant(C.dim(), 1.0 + (bb.hi - bb.lo).norm());
}

}  // namespace vilab
