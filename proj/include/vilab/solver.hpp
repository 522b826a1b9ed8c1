#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vilab/convex_set.hpp"
#include "vilab/mapping.hpp"

namespace vilab {

/// Admissible step-size window for the projected iteration, with the
/// certified contraction factor of the chosen step:
///   0 < lambda < c,   lambda mu^2 (c - lambda) < 1,
///   c = (v - u mu^2 - 5 mu) / mu^2,   q = sqrt(1 - lambda mu^2 (c - lambda)).
struct StepSizeWindow {
  double c;
  double lambda_lo;  // open lower end of the first clause, 0
  double lambda_hi;  // open upper end, c
  double chosen_lambda;
  double certified_q;
};

/// The declared constants fail v > u mu^2 + 5 mu; carries the feasibility
/// verdict so callers can report why.
struct HypothesisViolated : Error {
  HypothesisViolated(std::string msg, FeasibilityVerdict v)
      : Error(std::move(msg)), verdict(v) {}
  FeasibilityVerdict verdict;
};

/// Picks the step: c/2 (which minimizes q) when admissible at the safety
/// margin, otherwise the smaller root of lambda mu^2 (c - lambda) = 1 - eps.
/// Throws HypothesisViolated when v <= u mu^2 + 5 mu.
StepSizeWindow step_size_window(double u, double v, double mu, double safety_eps = 1e-6);

/// q = sqrt(max(0, 1 - lambda mu^2 (c - lambda))). A value < 1 certifies the
/// iteration map as a q-contraction only when lambda lies in the window and
/// the radicand is positive; use has_certificate for that check.
double contraction_factor(double u, double v, double mu, double lambda);

/// True iff lambda satisfies both window clauses strictly.
bool has_certificate(double u, double v, double mu, double lambda);

enum class SolveMode { Certified, Empirical };

enum class SolveStatus { Converged, MaxIter, HypothesisInfeasibleRanEmpirical };

const char* to_string(SolveStatus s);

struct DeclaredConstants {
  double u, v, mu;
};

struct SolverConfig {
  SolveMode mode = SolveMode::Certified;
  std::optional<double> lambda;            // nullopt: auto
  double tol = 1e-8;
  long max_iter = 1000000;
  std::optional<Eigen::VectorXd> x0;       // nullopt: P_C(0)
  std::optional<DeclaredConstants> constants;  // required in certified mode
  double safety_eps = 1e-6;
  bool empirical_fallback = false;  // on HypothesisViolated, run empirical
  bool record_iterates = false;
};

struct SolveReport {
  SpacePoint solution;
  long iterations;
  std::vector<double> step_norms;          // ||x_k - x_{k-1}||, k = 1..iterations
  double fixed_point_residual;             // ||sol - P_C(sol - lambda B sol)||
  std::optional<double> certified_q;
  std::optional<double> a_posteriori_bound;  // q/(1-q) * last step norm
  SolveStatus status;
  double lambda_used;
  std::optional<StepSizeWindow> window;
  std::vector<Eigen::VectorXd> iterates;   // x_0..x_N when record_iterates
};

/// Projected fixed-point iteration x_{k+1} = P_C(x_k - lambda B x_k).
/// Certified mode stops on the a-posteriori Banach bound
/// q/(1-q) ||x_{k+1} - x_k|| <= tol; empirical mode stops on the raw
/// fixed-point residual.
SolveReport solve_vi(const Mapping& B, const ConvexSet& C, double p, const SolverConfig& cfg);

struct ViCertificate {
  bool pass;
  double min_margin;
  Eigen::VectorXd witness;
  double fixed_point_residual;  // ||u - P_C(u - B u)||, the lambda = 1 cross-check
  int samples_evaluated;
};

/// Checks <J(B u), z - u> >= -tol over sampled z in C (vertices plus random
/// members). Requires the candidate to be a member of C.
ViCertificate certify_vi_solution(const SpacePoint& u_cand, const Mapping& B, const ConvexSet& C,
                                  int n_samples, std::uint64_t seed, double tol = 1e-9);

struct StartOutcome {
  SolveStatus status;
  std::optional<Eigen::VectorXd> solution;
  std::string error;  // nonempty when the start failed outright
};

struct UniquenessReport {
  double diameter;  // max pairwise lp distance between converged solutions
  int converged;
  std::vector<StartOutcome> starts;
};

/// Solves from n_starts random members of C and measures the diameter of the
/// solutions found. A singleton VI(C, B) shows up as a near-zero diameter.
UniquenessReport uniqueness_probe(const Mapping& B, const ConvexSet& C, double p,
                                  const SolverConfig& cfg, int n_starts, std::uint64_t seed);

}  // namespace vilab
