#include "vilab/solver.hpp"

#include <cmath>
#include <limits>

#include "vilab/sampling.hpp"

namespace vilab {

StepSizeWindow step_size_window(double u, double v, double mu, double safety_eps) {
  if (!(safety_eps > 0.0 && safety_eps < 1.0))
    throw Error("step_size_window: safety_eps must lie in (0, 1)");
  const FeasibilityVerdict verdict = feasibility_analysis(u, v, mu);
  if (!(v > u * mu * mu + 5.0 * mu))
    throw HypothesisViolated("step_size_window: requires v > u mu^2 + 5 mu", verdict);

  StepSizeWindow w{};
  w.c = (v - u * mu * mu - 5.0 * mu) / (mu * mu);
  w.lambda_lo = 0.0;
  w.lambda_hi = w.c;
  const double half = 0.5 * w.c;
  if (half * mu * mu * half <= 1.0 - safety_eps) {
    w.chosen_lambda = half;  // maximizes lambda (c - lambda), minimizing q
  } else {
    w.chosen_lambda = half - std::sqrt(half * half - (1.0 - safety_eps) / (mu * mu));
  }
  const double radicand = 1.0 - w.chosen_lambda * mu * mu * (w.c - w.chosen_lambda);
  w.certified_q = std::sqrt(std::max(0.0, radicand));
  return w;
}

double contraction_factor(double u, double v, double mu, double lambda) {
  if (!(u > 0.0) || !(v > 0.0) || !(mu > 0.0) || !(lambda > 0.0))
    throw Error("contraction_factor: all arguments must be positive");
  const double c = (v - u * mu * mu - 5.0 * mu) / (mu * mu);
  return std::sqrt(std::max(0.0, 1.0 - lambda * mu * mu * (c - lambda)));
}

bool has_certificate(double u, double v, double mu, double lambda) {
  if (!(v > u * mu * mu + 5.0 * mu)) return false;
  const double c = (v - u * mu * mu - 5.0 * mu) / (mu * mu);
  if (!(lambda > 0.0 && lambda < c)) return false;
  const double product = lambda * mu * mu * (c - lambda);
  return product > 0.0 && product < 1.0;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIter: return "max_iter";
    default: return "hypothesis_infeasible_ran_empirical";
  }
}

namespace {

struct IterationPlan {
  double lambda;
  std::optional<double> q;  // present in certified runs
  SolveStatus infeasible_tag;  // Converged normally; the fallback tag otherwise
  std::optional<StepSizeWindow> window;
};

IterationPlan make_plan(const SolverConfig& cfg) {
  IterationPlan plan{1.0, std::nullopt, SolveStatus::Converged, std::nullopt};
  if (cfg.mode == SolveMode::Empirical) {
    plan.lambda = cfg.lambda.value_or(1.0);
    if (!(plan.lambda > 0.0)) throw Error("solve_vi: lambda must be positive");
    return plan;
  }
  if (!cfg.constants) throw Error("solve_vi: certified mode requires declared constants");
  const DeclaredConstants& k = *cfg.constants;
  try {
    const StepSizeWindow w = step_size_window(k.u, k.v, k.mu, cfg.safety_eps);
    plan.window = w;
    if (cfg.lambda) {
      if (!has_certificate(k.u, k.v, k.mu, *cfg.lambda))
        throw Error("solve_vi: lambda lies outside the admissible window");
      plan.lambda = *cfg.lambda;
      plan.q = contraction_factor(k.u, k.v, k.mu, *cfg.lambda);
    } else {
      plan.lambda = w.chosen_lambda;
      plan.q = w.certified_q;
    }
  } catch (const HypothesisViolated&) {
    if (!cfg.empirical_fallback) throw;
    plan.lambda = cfg.lambda.value_or(1.0);
    if (!(plan.lambda > 0.0)) throw Error("solve_vi: lambda must be positive");
    plan.infeasible_tag = SolveStatus::HypothesisInfeasibleRanEmpirical;
  }
  return plan;
}

}  // namespace

SolveReport solve_vi(const Mapping& B, const ConvexSet& C, double p, const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw Error("solve_vi: tol must be positive");
  if (cfg.max_iter < 1) throw Error("solve_vi: max_iter must be >= 1");
  if (!C.get_if<Box>() && p != 2.0)
    throw UnsupportedCombination(std::string("solve_vi: ") + C.variant_name() +
                                 " projection is exact only for p = 2");
  // clip_to_set below coincides with the metric projection on every
  // supported (variant, p) combination.
  const IterationPlan plan = make_plan(cfg);
  const bool empirical_run = !plan.q.has_value();

  Eigen::VectorXd x = cfg.x0 ? *cfg.x0
                             : metric_projection(SpacePoint::zero(C.dim(), p), C).point.coords();
  if (x.size() != C.dim()) throw DimensionMismatch("solve_vi: x0 dimension mismatch");
  if (!contains(C, x)) x = clip_to_set(C, x);

  SolveReport report{SpacePoint(x, p), 0, {}, 0.0, plan.q, std::nullopt,
                     SolveStatus::MaxIter, plan.lambda, plan.window, {}};
  if (cfg.record_iterates) report.iterates.push_back(x);

  bool converged = false;
  double last_step = std::numeric_limits<double>::infinity();
  for (long k = 0; k < cfg.max_iter; ++k) {
    const Eigen::VectorXd bx = evaluate(B, x);
    if (!bx.allFinite()) throw NonFiniteIterate("solve_vi: mapping returned non-finite values");
    const Eigen::VectorXd next = clip_to_set(C, x - plan.lambda * bx);
    if (!next.allFinite()) throw NonFiniteIterate("solve_vi: non-finite iterate");
    last_step = lp_norm(next - x, p);
    report.step_norms.push_back(last_step);
    x = next;
    ++report.iterations;
    if (cfg.record_iterates) report.iterates.push_back(x);
    const double gauge = empirical_run ? last_step : (*plan.q / (1.0 - *plan.q)) * last_step;
    if (gauge <= cfg.tol) {
      converged = true;
      break;
    }
  }

  report.solution = SpacePoint(x, p);
  report.fixed_point_residual = lp_norm(x - clip_to_set(C, x - plan.lambda * evaluate(B, x)), p);
  if (plan.q) report.a_posteriori_bound = (*plan.q / (1.0 - *plan.q)) * last_step;
  report.status = converged ? (plan.infeasible_tag == SolveStatus::Converged
                                   ? SolveStatus::Converged
                                   : SolveStatus::HypothesisInfeasibleRanEmpirical)
                            : SolveStatus::MaxIter;
  return report;
}

ViCertificate certify_vi_solution(const SpacePoint& u_cand, const Mapping& B, const ConvexSet& C,
                                  int n_samples, std::uint64_t seed, double tol) {
  if (C.dim() != u_cand.dim()) throw DimensionMismatch("certify_vi_solution: dimension mismatch");
  if (!contains(C, u_cand, std::max(kMembershipTol, tol)))
    throw Error("certify_vi_solution: candidate is not a member of C");

  const double p = u_cand.exponent();
  const DualFunctional j = normalized_duality_map(evaluate(B, u_cand));

  // Same sampling scheme as the best-approximation certificate: margins over
  // vertices (when enumerable) plus uniform random members.
  Rng rng(seed);
  std::vector<Eigen::VectorXd> zs = enumerable_vertices(C);
  for (int k = 0; k < n_samples; ++k) zs.push_back(sample_in_set(C, rng));
  if (zs.empty()) throw Error("certify_vi_solution: empty sample set");

  ViCertificate cert{};
  cert.min_margin = std::numeric_limits<double>::infinity();
  cert.witness = zs.front();
  for (const Eigen::VectorXd& z : zs) {
    const double m = pairing(SpacePoint(z - u_cand.coords(), p), j);
    if (m < cert.min_margin) {
      cert.min_margin = m;
      cert.witness = z;
    }
  }
  cert.pass = cert.min_margin >= -tol;
  if (cert.min_margin == 0.0) cert.min_margin = 0.0;  // normalize -0
  if (C.get_if<Box>() || p == 2.0) {
    cert.fixed_point_residual =
        lp_norm(u_cand.coords() - clip_to_set(C, u_cand.coords() - evaluate(B, u_cand.coords())), p);
  } else {
    cert.fixed_point_residual = std::numeric_limits<double>::quiet_NaN();  // no exact P_C here
  }
  cert.samples_evaluated = static_cast<int>(zs.size());
  return cert;
}

UniquenessReport uniqueness_probe(const Mapping& B, const ConvexSet& C, double p,
                                  const SolverConfig& cfg, int n_starts, std::uint64_t seed) {
  if (n_starts < 1) throw Error("uniqueness_probe: n_starts must be >= 1");
  Rng rng(seed);
  UniquenessReport report{0.0, 0, {}};
  std::vector<Eigen::VectorXd> solutions;
  for (int s = 0; s < n_starts; ++s) {
    SolverConfig one = cfg;
    one.x0 = sample_in_set(C, rng);
    StartOutcome outcome{SolveStatus::MaxIter, std::nullopt, ""};
    try {
      const SolveReport r = solve_vi(B, C, p, one);
      outcome.status = r.status;
      if (r.status != SolveStatus::MaxIter) {
        outcome.solution = r.solution.coords();
        solutions.push_back(r.solution.coords());
        ++report.converged;
      }
    } catch (const Error& e) {
      outcome.error = e.what();
    }
    report.starts.push_back(std::move(outcome));
  }
  for (std::size_t i = 0; i < solutions.size(); ++i)
    for (std::size_t k = i + 1; k < solutions.size(); ++k)
      report.diameter = std::max(report.diameter, lp_norm(solutions[i] - solutions[k], p));
  return report;
}

}  // namespace vilab
