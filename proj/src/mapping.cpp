#include "vilab/mapping.hpp"

#include <cmath>
#include <limits>

#include "vilab/sampling.hpp"

namespace vilab {

Mapping::Mapping(AffineMap m) : desc_(std::move(m)) {
  const AffineMap& a = *get_if<AffineMap>();
  if (a.A.rows() != a.A.cols()) throw Error("AffineMap: matrix must be square");
  if (a.A.rows() != a.b.size()) throw Error("AffineMap: matrix and offset dimensions differ");
  if (!a.A.allFinite() || !a.b.allFinite()) throw Error("AffineMap: entries must be finite");
}

Mapping::Mapping(ScaledIdentity m) : desc_(m) {
  if (!std::isfinite(m.scale)) throw Error("ScaledIdentity: scale must be finite");
}

Mapping::Mapping(ResidualOfContraction m) : desc_(std::move(m)) {
  const ResidualOfContraction& r = *get_if<ResidualOfContraction>();
  if (!r.inner) throw Error("ResidualOfContraction: missing inner mapping");
  if (!(r.declared_alpha >= 0.0 && r.declared_alpha < 1.0))
    throw Error("ResidualOfContraction: declared_alpha must lie in [0, 1)");
}

Mapping::Mapping(OracleMap m) : desc_(std::move(m)) {
  if (!get_if<OracleMap>()->fn) throw Error("OracleMap: missing evaluator");
}

Mapping Mapping::residual_of(Mapping T, double declared_alpha) {
  return Mapping(ResidualOfContraction{std::make_shared<Mapping>(std::move(T)), declared_alpha});
}

Mapping Mapping::constant(const Eigen::VectorXd& value) {
  return Mapping(AffineMap{Eigen::MatrixXd::Zero(value.size(), value.size()), value});
}

const char* Mapping::variant_name() const {
  switch (desc_.index()) {
    case 0: return "affine";
    case 1: return "scaled_identity";
    case 2: return "residual_of_contraction";
    default: return "oracle";
  }
}

Eigen::VectorXd evaluate(const Mapping& B, const Eigen::VectorXd& x) {
  if (const AffineMap* a = B.get_if<AffineMap>()) {
    if (a->A.cols() != x.size()) throw DimensionMismatch("evaluate: affine map dimension mismatch");
    return a->A * x + a->b;
  }
  if (const ScaledIdentity* s = B.get_if<ScaledIdentity>()) return s->scale * x;
  if (const ResidualOfContraction* r = B.get_if<ResidualOfContraction>())
    return x - evaluate(*r->inner, x);
  const OracleMap* o = B.get_if<OracleMap>();
  Eigen::VectorXd y = o->fn(x);
  if (y.size() != x.size()) throw Error("evaluate: oracle changed the dimension");
  if (!y.allFinite()) throw NonFiniteIterate("evaluate: oracle returned non-finite values");
  return y;
}

SpacePoint evaluate(const Mapping& B, const SpacePoint& x) {
  return SpacePoint(evaluate(B, x.coords()), x.exponent());
}

std::optional<Eigen::MatrixXd> linear_part(const Mapping& B, Eigen::Index dim) {
  if (const AffineMap* a = B.get_if<AffineMap>()) {
    if (a->A.cols() != dim) throw DimensionMismatch("linear_part: dimension mismatch");
    return a->A;
  }
  if (const ScaledIdentity* s = B.get_if<ScaledIdentity>())
    return Eigen::MatrixXd(s->scale * Eigen::MatrixXd::Identity(dim, dim));
  if (const ResidualOfContraction* r = B.get_if<ResidualOfContraction>()) {
    auto inner = linear_part(*r->inner, dim);
    if (!inner) return std::nullopt;
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(dim, dim) - *inner);
  }
  return std::nullopt;
}

double operator_norm_power_iteration(const Eigen::MatrixXd& M) {
  const Eigen::Index n = M.cols();
  if (n == 0) return 0.0;
  const Eigen::MatrixXd G = M.transpose() * M;
  // Deterministic start with a small ramp to avoid landing in an invariant
  // subspace of structured matrices.
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * static_cast<double>(i);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 1000; ++it) {
    Eigen::VectorXd w = G * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    const double next = w.dot(G * w);
    const bool settled = std::abs(next - lambda) <= 1e-14 * std::max(1.0, std::abs(next));
    v = std::move(w);
    lambda = next;
    if (settled && it > 4) break;
  }
  return std::sqrt(std::max(0.0, lambda));
}

double estimate_lipschitz(const Mapping& B, const ConvexSet& domain, double p, int n,
                          std::uint64_t seed) {
  if (n < 2) throw Error("estimate_lipschitz: n must be >= 2");
  double worst = 0.0;
  for_each_domain_pair(domain, n, seed, [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double ratio = lp_norm(evaluate(B, x) - evaluate(B, y), p) / lp_norm(x - y, p);
    worst = std::max(worst, ratio);
  });
  return worst;
}

double estimate_strong_monotonicity(const Mapping& B, const ConvexSet& domain, double p, int n,
                                    std::uint64_t seed) {
  if (n < 2) throw Error("estimate_strong_monotonicity: n must be >= 2");
  double worst = std::numeric_limits<double>::infinity();
  for_each_domain_pair(domain, n, seed, [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const Eigen::VectorXd dx = x - y;
    const double value = (evaluate(B, x) - evaluate(B, y)).dot(duality_coords(dx, p));
    worst = std::min(worst, value / (lp_norm(dx, p) * lp_norm(dx, p)));
  });
  return worst;
}

ConstantsEstimate estimate_constants(const Mapping& B, const ConvexSet& domain, double p, int n,
                                     std::uint64_t seed) {
  ConstantsEstimate est{};
  est.lipschitz_hat = estimate_lipschitz(B, domain, p, n, seed);
  est.strong_monotone_hat = estimate_strong_monotonicity(B, domain, p, n, seed);
  est.sample_count = n;
  est.seed = seed;
  if (p == 2.0) {
    if (auto M = linear_part(B, domain.dim())) est.lipschitz_exact = operator_norm_power_iteration(*M);
  }
  return est;
}

double max_certifiable_v(const Mapping& B, double u, const ConvexSet& domain, double p, int n,
                         std::uint64_t seed) {
  if (!(u > 0.0)) throw Error("max_certifiable_v: u must be positive");
  if (n < 2) throw Error("max_certifiable_v: n must be >= 2");
  double worst = std::numeric_limits<double>::infinity();
  for_each_domain_pair(domain, n, seed, [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const Eigen::VectorXd dx = x - y;
    const Eigen::VectorXd db = evaluate(B, x) - evaluate(B, y);
    const double nx2 = lp_norm(dx, p) * lp_norm(dx, p);
    const double nb = lp_norm(db, p);
    const double value = (db.dot(duality_coords(dx, p)) + u * nb * nb) / nx2;
    worst = std::min(worst, value);
  });
  return worst;
}

CocoercivityReport certify_cocoercive(const Mapping& B, double u, double v,
                                      const ConvexSet& domain, double p, int n,
                                      std::uint64_t seed, double tol) {
  if (!(u > 0.0) || !(v > 0.0)) throw Error("certify_cocoercive: u and v must be positive");
  if (n < 2) throw Error("certify_cocoercive: n must be >= 2");
  CocoercivityReport report{};
  report.worst_margin = std::numeric_limits<double>::infinity();
  report.pairs = for_each_domain_pair(
      domain, n, seed, [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        const Eigen::VectorXd dx = x - y;
        const Eigen::VectorXd db = evaluate(B, x) - evaluate(B, y);
        const double nx2 = lp_norm(dx, p) * lp_norm(dx, p);
        const double nb = lp_norm(db, p);
        const double margin = (db.dot(duality_coords(dx, p)) + u * nb * nb - v * nx2) / nx2;
        if (margin < report.worst_margin) {
          report.worst_margin = margin;
          report.witness_x = x;
          report.witness_y = y;
        }
      });
  report.pass = report.worst_margin >= -tol;
  return report;
}

NonexpansiveReport check_pc_nonexpansive(const Mapping& B, const ConvexSet& C, double lambda,
                                         double p, int n, std::uint64_t seed, double tol) {
  if (!(lambda > 0.0)) throw Error("check_pc_nonexpansive: lambda must be positive");
  if (n < 2) throw Error("check_pc_nonexpansive: n must be >= 2");
  double worst = -std::numeric_limits<double>::infinity();
  const int pairs = for_each_domain_pair(
      C, n, seed, [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        const Eigen::VectorXd gx = x - lambda * evaluate(B, x);
        const Eigen::VectorXd gy = y - lambda * evaluate(B, y);
        const Eigen::VectorXd px = metric_projection(SpacePoint(gx, p), C).point.coords();
        const Eigen::VectorXd py = metric_projection(SpacePoint(gy, p), C).point.coords();
        worst = std::max(worst, lp_norm(px - py, p) - lp_norm(gx - gy, p));
      });
  return NonexpansiveReport{worst <= tol, worst, pairs};
}

FeasibilityVerdict feasibility_analysis(double u, double v, double mu) {
  if (!(u > 0.0) || !(v > 0.0) || !(mu > 0.0))
    throw Error("feasibility_analysis: u, v, mu must all be positive");
  FeasibilityVerdict verdict{};
  verdict.t_min = (std::sqrt(1.0 + 4.0 * u * v) - 1.0) / (2.0 * u);
  verdict.t_max = mu;
  verdict.max_admissible_v = mu + u * mu * mu;
  verdict.feasible = v <= verdict.max_admissible_v;
  verdict.window_min_v = u * mu * mu + 5.0 * mu;
  verdict.v_meets_window_floor = v > verdict.window_min_v;
  verdict.window_floor_attainable = verdict.window_min_v < verdict.max_admissible_v;
  return verdict;
}

}  // namespace vilab
