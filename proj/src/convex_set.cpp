#include "vilab/convex_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vilab/sampling.hpp"

namespace vilab {

ConvexSet::ConvexSet(Box b) : desc_(std::move(b)), dim_(0) {
  const Box& box = *get_if<Box>();
  if (box.lo.size() < 1 || box.lo.size() != box.hi.size())
    throw Error("Box: lo and hi must be nonempty and of equal dimension");
  if (!box.lo.allFinite() || !box.hi.allFinite()) throw Error("Box: bounds must be finite");
  if ((box.lo.array() > box.hi.array()).any()) throw Error("Box: requires lo <= hi coordinatewise");
  dim_ = box.lo.size();
}

ConvexSet::ConvexSet(Ball b) : desc_(std::move(b)), dim_(0) {
  const Ball& ball = *get_if<Ball>();
  if (ball.center.size() < 1 || !ball.center.allFinite()) throw Error("Ball: center must be finite");
  if (!(ball.radius > 0.0) || !std::isfinite(ball.radius)) throw Error("Ball: radius must be positive");
  dim_ = ball.center.size();
}

ConvexSet::ConvexSet(Halfspace h) : desc_(std::move(h)), dim_(0) {
  const Halfspace& hs = *get_if<Halfspace>();
  if (hs.normal.size() < 1 || !hs.normal.allFinite() || !std::isfinite(hs.offset))
    throw Error("Halfspace: normal and offset must be finite");
  if (hs.normal.norm() == 0.0) throw Error("Halfspace: normal must be nonzero");
  dim_ = hs.normal.size();
}

ConvexSet::ConvexSet(Simplex s) : desc_(s), dim_(s.dim) {
  if (s.dim < 1) throw Error("Simplex: dimension must be >= 1");
}

const char* ConvexSet::variant_name() const {
  switch (desc_.index()) {
    case 0: return "box";
    case 1: return "ball";
    case 2: return "halfspace";
    default: return "simplex";
  }
}

namespace {

void require_dim(const ConvexSet& C, Eigen::Index d) {
  if (C.dim() != d) throw DimensionMismatch("convex set and point dimensions differ");
}

Eigen::VectorXd project_box(const Box& b, const Eigen::VectorXd& x) {
  return x.cwiseMax(b.lo).cwiseMin(b.hi);
}

Eigen::VectorXd project_ball(const Ball& b, const Eigen::VectorXd& x) {
  const Eigen::VectorXd d = x - b.center;
  const double n = d.norm();
  if (n <= b.radius) return x;
  return b.center + (b.radius / n) * d;
}

Eigen::VectorXd project_halfspace(const Halfspace& h, const Eigen::VectorXd& x) {
  const double s = h.normal.dot(x) - h.offset;
  if (s <= 0.0) return x;
  return x - (s / h.normal.squaredNorm()) * h.normal;
}

// Sorting-based Euclidean projection onto the standard simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  std::vector<double> u(x.data(), x.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[static_cast<std::size_t>(j)];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - t > 0.0) theta = t;
  }
  return (x.array() - theta).max(0.0).matrix();
}

}  // namespace

bool contains(const ConvexSet& C, const Eigen::VectorXd& x, double tol) {
  require_dim(C, x.size());
  if (const Box* b = C.get_if<Box>())
    return (x.array() >= b->lo.array() - tol).all() && (x.array() <= b->hi.array() + tol).all();
  if (const Ball* b = C.get_if<Ball>()) return (x - b->center).norm() <= b->radius + tol;
  if (const Halfspace* h = C.get_if<Halfspace>())
    return (h->normal.dot(x) - h->offset) / h->normal.norm() <= tol;
  return x.minCoeff() >= -tol && std::abs(x.sum() - 1.0) <= tol;
}

bool contains(const ConvexSet& C, const SpacePoint& x, double tol) {
  return contains(C, x.coords(), tol);
}

Eigen::VectorXd clip_to_set(const ConvexSet& C, const Eigen::VectorXd& v) {
  require_dim(C, v.size());
  if (const Box* b = C.get_if<Box>()) return project_box(*b, v);
  if (const Ball* b = C.get_if<Ball>()) return project_ball(*b, v);
  if (const Halfspace* h = C.get_if<Halfspace>()) return project_halfspace(*h, v);
  return project_simplex(v);
}

ProjectionResult metric_projection(const SpacePoint& x, const ConvexSet& C) {
  require_dim(C, x.dim());
  const double p = x.exponent();
  Eigen::VectorXd y;
  if (const Box* b = C.get_if<Box>()) {
    y = project_box(*b, x.coords());
  } else if (p != 2.0) {
    throw UnsupportedCombination(std::string(C.variant_name()) +
                                 " projection is exact only for p = 2; use a box or switch p");
  } else {
    y = clip_to_set(C, x.coords());
  }
  SpacePoint point(y, p);
  return ProjectionResult{point, lp_norm(x.coords() - y, p), ProjectionResult::Method::ClosedForm};
}

double distance(const SpacePoint& x, const ConvexSet& C) {
  return metric_projection(x, C).distance;
}

Box bounding_box(const ConvexSet& C) {
  if (const Box* b = C.get_if<Box>()) return *b;
  if (const Ball* b = C.get_if<Ball>())
    return Box{(b->center.array() - b->radius).matrix(), (b->center.array() + b->radius).matrix()};
  if (const Halfspace* h = C.get_if<Halfspace>()) {
    // Representative patch around the boundary point nearest the origin.
    const Eigen::VectorXd anchor = (h->offset / h->normal.squaredNorm()) * h->normal;
    const double r = 1.0 + anchor.cwiseAbs().maxCoeff();
    return Box{(anchor.array() - r).matrix(), (anchor.array() + r).matrix()};
  }
  const Simplex* s = C.get_if<Simplex>();
  return Box{Eigen::VectorXd::Zero(s->dim), Eigen::VectorXd::Ones(s->dim)};
}

std::vector<Eigen::VectorXd> enumerable_vertices(const ConvexSet& C) {
  std::vector<Eigen::VectorXd> out;
  if (const Box* b = C.get_if<Box>()) {
    const Eigen::Index d = b->lo.size();
    if (d <= 12) {  // 2^12 vertex cap
      const std::uint64_t count = std::uint64_t{1} << d;
      out.reserve(count);
      for (std::uint64_t mask = 0; mask < count; ++mask) {
        Eigen::VectorXd v(d);
        for (Eigen::Index i = 0; i < d; ++i)
          v[i] = (mask >> i) & 1u ? b->hi[i] : b->lo[i];
        out.push_back(std::move(v));
      }
    }
  } else if (const Simplex* s = C.get_if<Simplex>()) {
    if (static_cast<std::uint64_t>(s->dim) <= kMaxEnumeratedVertices) {
      for (Eigen::Index i = 0; i < s->dim; ++i)
        out.push_back(Eigen::VectorXd::Unit(s->dim, i));
    }
  }
  return out;
}

CertificateReport best_approx_certificate(const SpacePoint& x, const SpacePoint& y,
                                          const ConvexSet& C, const GaugeFunction& g,
                                          int n_samples, std::uint64_t seed, double tol) {
  if (!x.compatible_with(y)) throw DimensionMismatch("certificate: x and y disagree");
  require_dim(C, x.dim());
  if (!contains(C, y)) throw Error("certificate: y is not a member of C");

  const DualFunctional j = gauge_duality_map(x - y, g);
  std::vector<Eigen::VectorXd> zs = enumerable_vertices(C);
  Rng rng(seed);
  for (int k = 0; k < n_samples; ++k) zs.push_back(sample_in_set(C, rng));
  if (zs.empty()) throw Error("certificate: empty sample set");

  double min_margin = std::numeric_limits<double>::infinity();
  Eigen::VectorXd worst = zs.front();
  for (const Eigen::VectorXd& z : zs) {
    const double m = pairing(SpacePoint(y.coords() - z, x.exponent()), j);
    if (m < min_margin) {
      min_margin = m;
      worst = z;
    }
  }
  if (min_margin == 0.0) min_margin = 0.0;  // normalize -0
  return CertificateReport{min_margin >= -tol, min_margin, worst, static_cast<int>(zs.size())};
}

namespace {

// 1-D minimizer of t -> |c - t|^p over [lo, hi] by bisection on the sign of
// the derivative; independent of the clamp formula used by the projector.
double minimize_axis(double c, double lo, double hi, double p) {
  auto deriv = [&](double t) {
    const double d = t - c;
    if (d == 0.0) return 0.0;
    const double s = d > 0.0 ? 1.0 : -1.0;
    return p * s * std::pow(std::abs(d), p - 1.0);
  };
  if (deriv(lo) >= 0.0) return lo;
  if (deriv(hi) <= 0.0) return hi;
  double a = lo, b = hi;
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
    const double mid = 0.5 * (a + b);
    (deriv(mid) < 0.0 ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

// Numeric minimizer of y -> ||x - y||_p over C from a given start.
// Box: per-axis derivative bisection (the objective separates).
// Other variants (p = 2 by precondition): projected gradient descent with a
// conservative step, so the limit is reached along a nontrivial path.
Eigen::VectorXd minimize_distance(const ConvexSet& C, const Eigen::VectorXd& x, double p,
                                  Eigen::VectorXd y0, Rng& rng) {
  if (const Box* b = C.get_if<Box>()) {
    Eigen::VectorXd y = std::move(y0);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(y.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index i : order) y[i] = minimize_axis(x[i], b->lo[i], b->hi[i], p);
    return y;
  }
  Eigen::VectorXd y = std::move(y0);
  for (int it = 0; it < 80; ++it) {
    const Eigen::VectorXd grad = 2.0 * (y - x);
    y = clip_to_set(C, y - 0.2 * grad);
  }
  return y;
}

}  // namespace

ChebyshevReport chebyshev_probe(const ConvexSet& C, double p, int trials, std::uint64_t seed) {
  if (!valid_exponent(p)) throw Error("chebyshev_probe: invalid exponent");
  if (!C.get_if<Box>() && p != 2.0)
    throw UnsupportedCombination("chebyshev_probe: variant supported only at p = 2");
  if (trials < 1) throw Error("chebyshev_probe: trials must be >= 1");

  constexpr int kRestarts = 6;
  Rng rng(seed);
  double max_spread = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd x = sample_outside_set(C, rng);
    std::vector<Eigen::VectorXd> minimizers;
    minimizers.reserve(kRestarts);
    for (int r = 0; r < kRestarts; ++r)
      minimizers.push_back(minimize_distance(C, x, p, sample_in_set(C, rng), rng));
    for (std::size_t i = 0; i < minimizers.size(); ++i)
      for (std::size_t k = i + 1; k < minimizers.size(); ++k)
        max_spread = std::max(max_spread, lp_norm(minimizers[i] - minimizers[k], p));
  }
  return ChebyshevReport{max_spread, max_spread <= 1e-6, trials};
}

}  // namespace vilab
