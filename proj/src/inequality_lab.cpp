#include "vilab/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vilab/sampling.hpp"

namespace vilab {

namespace {

bool leq_rel(double lhs, double rhs, double rel_tol) {
  return lhs <= rhs + rel_tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

bool eq_rel(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

const char* to_string(LineStatus s) {
  switch (s) {
    case LineStatus::Pass: return "pass";
    case LineStatus::Fail: return "fail";
    default: return "conditional";
  }
}

PairingInequalityCheck check_pairing_inequality(const SpacePoint& x, const SpacePoint& y) {
  if (!x.compatible_with(y)) throw DimensionMismatch("check_pairing_inequality: x and y disagree");
  const SpacePoint d = x - y;
  const DualFunctional jd = normalized_duality_map(d);
  const Eigen::VectorXd jdiff =
      normalized_duality_map(x).coords() - normalized_duality_map(y).coords();
  PairingInequalityCheck out{};
  out.lhs = pairing(d, jd);
  out.rhs = pairing(d, DualFunctional(jdiff, jd.exponent())) + 4.0 * x.norm() * y.norm();
  out.holds = out.lhs <= out.rhs + kLabRelTol * std::max(1.0, out.rhs);
  return out;
}

PairingInequalityBatch pairing_inequality_batch(
    double p, int max_dim, long n_pairs, std::uint64_t seed, double rel_tol,
    std::vector<PairingInequalityRecord>* records) {
  if (!valid_exponent(p)) throw Error("pairing_inequality_batch: invalid exponent");
  if (max_dim < 1) throw Error("pairing_inequality_batch: max_dim must be >= 1");
  if (n_pairs < 1) throw Error("pairing_inequality_batch: n_pairs must be >= 1");

  Rng rng(seed);
  std::uniform_real_distribution<double> log_scale(-2.0, 2.0);
  PairingInequalityBatch batch{n_pairs, 0, -std::numeric_limits<double>::infinity()};
  for (long i = 0; i < n_pairs; ++i) {
    const int dim = 1 + static_cast<int>(i % max_dim);
    Eigen::VectorXd xv = std::pow(10.0, log_scale(rng)) * gaussian_vector(dim, rng);
    Eigen::VectorXd yv;
    if (i % 97 == 96) yv = xv;            // x = y edge
    else if (i % 101 == 100) yv = -xv;    // antipodal edge
    else yv = std::pow(10.0, log_scale(rng)) * gaussian_vector(dim, rng);

    const SpacePoint x(xv, p), y(yv, p);
    const PairingInequalityCheck c = check_pairing_inequality(x, y);
    const double slack = (c.lhs - c.rhs) / std::max(1.0, c.rhs);
    batch.worst_rel_slack = std::max(batch.worst_rel_slack, slack);
    if (slack > rel_tol) ++batch.violations;
    if (records) records->push_back({i, dim, c.lhs, c.rhs, slack <= rel_tol});
  }
  return batch;
}

ProofChainReport verify_proof_chain(const SpacePoint& x, const SpacePoint& y, const Mapping& B,
                                    const ConvexSet& C, double u, double v, double mu,
                                    double lambda) {
  if (!x.compatible_with(y)) throw DimensionMismatch("verify_proof_chain: x and y disagree");
  if (!(u > 0.0) || !(v > 0.0) || !(mu > 0.0) || !(lambda > 0.0))
    throw Error("verify_proof_chain: u, v, mu, lambda must be positive");
  if (!contains(C, x) || !contains(C, y))
    throw Error("verify_proof_chain: x and y must be members of C");

  const double p = x.exponent();
  const Eigen::VectorXd dx = x.coords() - y.coords();
  const Eigen::VectorXd dB = evaluate(B, x.coords()) - evaluate(B, y.coords());

  const Eigen::VectorXd px =
      metric_projection(SpacePoint(x.coords() - lambda * evaluate(B, x.coords()), p), C)
          .point.coords();
  const Eigen::VectorXd py =
      metric_projection(SpacePoint(y.coords() - lambda * evaluate(B, y.coords()), p), C)
          .point.coords();

  const Eigen::VectorXd w = dx - lambda * dB;
  const double norm_dx = lp_norm(dx, p);
  const double norm_dB = lp_norm(dB, p);
  const double norm_w = lp_norm(w, p);
  const double norm_pdiff = lp_norm(px - py, p);

  const Eigen::VectorXd j_w = duality_coords(w, p);
  const Eigen::VectorXd j_dx = duality_coords(dx, p);
  const Eigen::VectorXd j_dB = duality_coords(dB, p);

  ProofChainReport rep{};
  rep.lines[0] = norm_pdiff * norm_pdiff;
  rep.lines[1] = norm_w * norm_w;
  rep.lines[2] = w.dot(j_w);
  rep.lines[3] = w.dot(j_dx - lambda * j_dB) + 4.0 * lambda * norm_dx * norm_dB;
  rep.lines[4] = dx.dot(j_dx) - lambda * dB.dot(j_dx) + lambda * (-dx).dot(j_dB) +
                 lambda * lambda * dB.dot(j_dB) + 4.0 * lambda * norm_dx * norm_dB;
  rep.lines[5] =
      (1.0 + lambda * u * mu * mu - lambda * v + lambda * lambda * mu * mu + 5.0 * lambda * mu) *
      norm_dx * norm_dx;
  const double c = (v - u * mu * mu - 5.0 * mu) / (mu * mu);
  rep.factor_l7 = 1.0 - lambda * mu * mu * (c - lambda);
  rep.lines[6] = rep.factor_l7 * norm_dx * norm_dx;

  const double scale2 = std::max(1.0, norm_dx * norm_dx);
  rep.pair_cocoercive =
      dB.dot(j_dx) + u * norm_dB * norm_dB - v * norm_dx * norm_dx >= -kLabRelTol * scale2;
  rep.pair_lipschitz = norm_dB <= mu * norm_dx + kLabRelTol * std::max(1.0, norm_dx);

  auto ineq = [&](const char* label, double lhs, double rhs, bool guaranteed) {
    LineStatus s;
    if (leq_rel(lhs, rhs, kLabRelTol)) s = LineStatus::Pass;
    else s = guaranteed ? LineStatus::Fail : LineStatus::Conditional;
    rep.steps.push_back({label, lhs, rhs, s});
  };
  auto ident = [&](const char* label, double lhs, double rhs) {
    rep.steps.push_back(
        {label, lhs, rhs, eq_rel(lhs, rhs, kLabRelTol) ? LineStatus::Pass : LineStatus::Fail});
  };

  // L1 <= L2 is the P_C-nonexpansiveness of I - lambda B: guaranteed in
  // Hilbert space, a hypothesis elsewhere.
  ineq("L1<=L2", rep.lines[0], rep.lines[1], p == 2.0);
  ident("L2==L3", rep.lines[1], rep.lines[2]);
  ineq("L3<=L4", rep.lines[2], rep.lines[3], true);  // the pairing inequality, always valid
  ident("L4==L5", rep.lines[3], rep.lines[4]);
  ineq("L5<=L6", rep.lines[4], rep.lines[5], rep.pair_cocoercive && rep.pair_lipschitz);
  ident("L6==L7", rep.lines[5], rep.lines[6]);

  rep.all_ordered = true;
  for (const ChainStep& s : rep.steps)
    if (s.status == LineStatus::Fail) rep.all_ordered = false;
  return rep;
}

double earlier_bound_factor(double r, double gamma, double mu, double s) {
  if (mu == 0.0) throw Error("earlier_bound_factor: mu must be nonzero");
  return 1.0 - s * mu * mu * (2.0 * (r - gamma * mu * mu) / (mu * mu) - s);
}

}  // namespace vilab
