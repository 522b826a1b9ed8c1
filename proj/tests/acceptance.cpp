// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and runtime caps are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "vilab/convex_set.hpp"
#include "vilab/inequality_lab.hpp"
#include "vilab/mapping.hpp"
#include "vilab/sampling.hpp"
#include "vilab/solver.hpp"
#include "oracles.hpp"

using namespace vilab;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

struct Check {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      detail = msg;
    }
  }
};

// The seeded sample set shared by criteria 2 and 3: 10^4 pairs per exponent,
// dims cycling 1..16, coordinate scales spanning 10^-2..10^2.
std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> sample_pairs(double p, int n) {
  std::mt19937_64 rng(7000 + static_cast<std::uint64_t>(10 * p));
  std::uniform_real_distribution<double> log_scale(-2.0, 2.0);
  std::normal_distribution<double> gauss;
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Eigen::Index dim = 1 + i % 16;
    Eigen::VectorXd x(dim), y(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      x[k] = gauss(rng);
      y[k] = gauss(rng);
    }
    x *= std::pow(10.0, log_scale(rng));
    if (i % 97 == 96) y = x;
    else if (i % 101 == 100) y = -x;
    else y *= std::pow(10.0, log_scale(rng));
    pairs.emplace_back(std::move(x), std::move(y));
  }
  return pairs;
}

// Certified-mode test problems: declared constants pass the step window with
// lambda = 0.4 and q = sqrt(0.84), and each iteration map is an actual
// contraction with a factor below q, so the certificates are honest.
struct CertifiedProblem {
  std::string name;
  Mapping B;
  ConvexSet C;
};

std::vector<CertifiedProblem> certified_catalog() {
  std::vector<CertifiedProblem> out;
  out.push_back({"constant-target box",
                 Mapping::residual_of(Mapping::constant(vec({2, 0.5})), 0.0),
                 ConvexSet(Box{vec({0, 0}), vec({1, 1})})});
  out.push_back({"scaled residual on a shifted box",
                 Mapping::residual_of(Mapping(ScaledIdentity{0.3}), 0.3),
                 ConvexSet(Box{vec({1, 1}), vec({2, 2})})});
  Eigen::MatrixXd A(2, 2);
  A << 1, -0.5, 0.5, 1;
  out.push_back({"affine rotation on a ball", Mapping(AffineMap{A, vec({-1.2, -0.3})}),
                 ConvexSet(Ball{vec({0.5, 0.5}), 1.5})});
  return out;
}

SolverConfig certified_cfg() {
  SolverConfig cfg;
  cfg.mode = SolveMode::Certified;
  cfg.constants = DeclaredConstants{1.0, 6.8, 1.0};
  cfg.tol = 1e-8;
  return cfg;
}

Check criterion1() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const double factor = earlier_bound_factor(1.0, 1.0, 0.1, 1.0);
  const auto t1 = std::chrono::steady_clock::now();
  c.require(std::abs(factor - (-0.97)) <= 1e-12,
            "factor " + std::to_string(factor) + " is not -0.97");
  c.require(std::chrono::duration<double, std::milli>(t1 - t0).count() < 1.0, "slower than 1 ms");
  return c;
}

Check criterion2() {
  Check c;
  for (double p : {1.5, 2.0, 3.0}) {
    long violations = 0;
    for (const auto& [xv, yv] : sample_pairs(p, 10000)) {
      const PairingInequalityCheck t = check_pairing_inequality(SpacePoint(xv, p), SpacePoint(yv, p));
      if (t.lhs > t.rhs + 1e-9 * std::max(1.0, t.rhs)) ++violations;
    }
    c.require(violations == 0,
              std::to_string(violations) + " violations at p = " + std::to_string(p));
  }
  return c;
}

Check criterion3() {
  Check c;
  const GaugeFunction gauges[2] = {GaugeFunction::identity(), GaugeFunction::power(2.0)};
  for (double p : {1.5, 2.0, 3.0}) {
    for (const auto& [xv, yv] : sample_pairs(p, 10000)) {
      for (const Eigen::VectorXd* v : {&xv, &yv}) {
        const SpacePoint x(*v, p);
        const double n = x.norm();
        const double scale2 = std::max(1.0, n * n);
        const DualFunctional j = normalized_duality_map(x);
        c.require(std::abs(pairing(x, j) - n * n) <= 1e-9 * scale2, "pairing identity failed");
        c.require(std::abs(j.norm() - n) <= 1e-9 * scale2, "norm identity failed");
        for (const GaugeFunction& g : gauges) {
          const DualFunctional jg = gauge_duality_map(x, g);
          const double target = g(n);
          const double scale_g = std::max(1.0, n * target);
          c.require(std::abs(jg.norm() - target) <= 1e-9 * scale_g, "gauge norm identity failed");
          c.require(std::abs(pairing(x, jg) - n * target) <= 1e-9 * scale_g,
                    "gauge pairing identity failed");
        }
        if (!c.ok) return c;
      }
    }
  }
  return c;
}

Check criterion4() {
  Check c;
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double ps[3] = {1.5, 2.0, 3.0};
  for (int t = 0; t < 100; ++t) {
    const int dim = 1 + t % 3;
    const double p = ps[(t / 3) % 3];
    const double edge = dim == 3 ? 0.1 : dim == 2 ? 0.4 : 1.5;
    Eigen::VectorXd lo(dim), hi(dim), xv(dim);
    for (int i = 0; i < dim; ++i) {
      lo[i] = -1.0 + 2.0 * unit(rng);
      hi[i] = lo[i] + edge * (0.2 + 0.8 * unit(rng));
      xv[i] = lo[i] - 1.2 + 3.0 * unit(rng);
    }
    const ConvexSet C{Box{lo, hi}};
    const SpacePoint x(xv, p);
    const ProjectionResult proj = metric_projection(x, C);
    const double grid = oracles::grid_min_distance(xv, lo, hi, p, 1e-3);
    c.require(std::abs(proj.distance - grid) <= 2e-3, "grid oracle disagrees at instance " +
                                                          std::to_string(t));
    const CertificateReport cert = best_approx_certificate(
        x, proj.point, C, GaugeFunction::identity(), 256, 9000 + static_cast<std::uint64_t>(t));
    c.require(cert.pass && cert.min_margin >= -1e-9,
              "certificate failed at instance " + std::to_string(t));
    if (!c.ok) break;
  }
  return c;
}

Check criterion5() {
  Check c;
  // Exterior target: the solution is P_C(a) = (1, 0.5).
  const Mapping B = Mapping::residual_of(Mapping::constant(vec({2, 0.5})), 0.0);
  const ConvexSet C(Box{vec({0, 0}), vec({1, 1})});
  const SolveReport r = solve_vi(B, C, 2.0, certified_cfg());
  c.require(r.status == SolveStatus::Converged, "exterior-target run did not converge");
  c.require(r.iterations <= 10000, "more than 1e4 iterations");
  c.require(lp_norm(r.solution.coords() - vec({1, 0.5}), 2.0) <= 1e-8,
            "solution differs from P_C(a)");

  // Interior target: the solver returns the target and the VI margin is 0.
  const Eigen::VectorXd a = vec({0.3, 0.7});
  const Mapping Bi = Mapping::residual_of(Mapping::constant(a), 0.0);
  SolverConfig cfg;
  cfg.mode = SolveMode::Empirical;
  cfg.lambda = 1.0;
  const SolveReport ri = solve_vi(Bi, C, 2.0, cfg);
  c.require(ri.status == SolveStatus::Converged, "interior-target run did not converge");
  c.require(lp_norm(ri.solution.coords() - a, 2.0) <= 1e-10, "interior solution is off target");
  const ViCertificate cert = certify_vi_solution(ri.solution, Bi, C, 256, 5, 1e-12);
  c.require(cert.pass && cert.min_margin == 0.0, "interior VI margin is not zero");
  return c;
}

Check criterion6() {
  Check c;
  for (const CertifiedProblem& prob : certified_catalog()) {
    const UniquenessReport rep = uniqueness_probe(prob.B, prob.C, 2.0, certified_cfg(), 100, 606);
    c.require(rep.converged == 100, prob.name + ": not every start converged");
    c.require(rep.diameter <= 1e-6,
              prob.name + ": diameter " + std::to_string(rep.diameter));
  }
  return c;
}

Check criterion7() {
  Check c;
  SolverConfig cfg = certified_cfg();
  cfg.record_iterates = true;
  Rng rng(707);
  for (const CertifiedProblem& prob : certified_catalog()) {
    for (int start = 0; start < 10; ++start) {
      cfg.x0 = sample_in_set(prob.C, rng);
      const SolveReport r = solve_vi(prob.B, prob.C, 2.0, cfg);
      c.require(r.status == SolveStatus::Converged, prob.name + ": run did not converge");
      if (!c.ok) return c;
      const double q = *r.certified_q;
      const double first_step = r.step_norms.front();
      const Eigen::VectorXd& star = r.iterates.back();
      for (std::size_t k = 0; k < r.iterates.size(); ++k) {
        const double bound = std::pow(q, static_cast<double>(k)) / (1.0 - q) * first_step;
        const double err = lp_norm(r.iterates[k] - star, 2.0);
        c.require(bound - err >= -1e-9, prob.name + ": a-priori bound violated at k = " +
                                            std::to_string(k));
      }
      if (!c.ok) return c;
    }
  }
  return c;
}

Check criterion8() {
  Check c;
  const ConvexSet C(Box{vec({-1, -1}), vec({1, 1})});
  for (double alpha : {0.0, 0.3, 0.9}) {
    const Mapping B = Mapping::residual_of(Mapping(ScaledIdentity{alpha}), alpha);
    const double v_hat = estimate_strong_monotonicity(B, C, 2.0, 2048, 808);
    c.require(std::abs(v_hat - (1.0 - alpha)) <= 1e-9,
              "strong monotonicity of I - " + std::to_string(alpha) + " I is off");
    for (double u : {0.1, 1.0, 10.0}) {
      const CocoercivityReport rep = certify_cocoercive(B, u, 1.0 - alpha, C, 2.0, 2048, 808);
      c.require(rep.pass, "cocoercivity failed at alpha = " + std::to_string(alpha) +
                              ", u = " + std::to_string(u));
    }
  }
  return c;
}

Check criterion9() {
  Check c;
  const FeasibilityVerdict verdict = feasibility_analysis(1.0, 0.6, 0.1);
  c.require(!verdict.feasible, "verdict should be infeasible");
  c.require(std::abs(verdict.max_admissible_v - 0.11) <= 1e-12, "max admissible v is not 0.11");

  const ConvexSet C(Box{vec({-1, -1}), vec({1, 1})});
  Eigen::MatrixXd R(2, 2), D(2, 2);
  R << 1, -0.5, 0.5, 1;
  D << 1, 0, 0, 3;
  const std::vector<std::pair<std::string, Mapping>> catalog{
      {"0.5 I", Mapping(ScaledIdentity{0.5})},
      {"I - 0.3 I", Mapping::residual_of(Mapping(ScaledIdentity{0.3}), 0.3)},
      {"I - const", Mapping::residual_of(Mapping::constant(vec({2, 0.5})), 0.0)},
      {"rotated affine", Mapping(AffineMap{R, vec({-1.2, -0.3})})},
      {"diag(1,3) affine", Mapping(AffineMap{D, vec({0.5, -1})})},
  };
  for (const auto& [name, B] : catalog) {
    const double mu_hat = estimate_lipschitz(B, C, 2.0, 4096, 909);
    c.require(mu_hat > 0.0, name + ": zero Lipschitz estimate");
    for (double u : {0.1, 1.0, 10.0}) {
      const double ceiling = max_certifiable_v(B, u, C, 2.0, 4096, 909);
      c.require(ceiling <= mu_hat * (1.0 + u * mu_hat) + 1e-6,
                name + ": sampled ceiling beats the Cauchy-Schwarz bound");
      // The certified window's floor is out of reach for any such mapping.
      c.require(u * mu_hat * mu_hat + 5.0 * mu_hat > ceiling,
                name + ": window floor unexpectedly attainable");
      c.require(!feasibility_analysis(u, u * mu_hat * mu_hat + 5.0 * mu_hat, mu_hat).feasible,
                name + ": verdict contradicts the ceiling");
    }
  }
  return c;
}

struct Criterion {
  int id;
  std::string name;
  double time_cap_ms;  // 0: no cap
  std::function<Check()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "flawed-factor value reproduction (-0.97 exactly)", 0.0, criterion1},
      {2, "pairing inequality, 1e4 pairs per p in {1.5, 2, 3}", 10000.0, criterion2},
      {3, "duality-mapping identities on the same samples", 5000.0, criterion3},
      {4, "box projection vs grid oracle + certificate, 100 instances", 30000.0, criterion4},
      {5, "solver closed-form instances", 1000.0, criterion5},
      {6, "singleton probe, 100 starts per certified problem", 30000.0, criterion6},
      {7, "a-priori Banach bound dominates the error", 0.0, criterion7},
      {8, "contraction-residual chain, alpha in {0, 0.3, 0.9}", 0.0, criterion8},
      {9, "feasibility ledger and sampled cocoercivity ceiling", 0.0, criterion9},
  };

  int failures = 0;
  for (const Criterion& crit : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c = crit.run();
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (crit.time_cap_ms > 0.0 && ms >= crit.time_cap_ms)
      c.require(false, "exceeded the " + std::to_string(crit.time_cap_ms) + " ms budget");
    std::printf("[%s] criterion %d: %s (%.1f ms)%s%s\n", c.ok ? "PASS" : "FAIL", crit.id,
                crit.name.c_str(), ms, c.ok ? "" : " -- ", c.ok ? "" : c.detail.c_str());
    if (!c.ok) ++failures;
  }
  return failures;
}
