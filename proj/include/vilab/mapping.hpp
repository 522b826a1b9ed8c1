#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "vilab/convex_set.hpp"
#include "vilab/lp_space.hpp"

namespace vilab {

/// Default estimator sample count and tolerance.
inline constexpr int kDefaultSampleCount = 4096;
inline constexpr double kEstimatorTol = 1e-9;

class Mapping;

/// x -> A x + b.
struct AffineMap {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

/// x -> scale * x.
struct ScaledIdentity {
  double scale;
};

/// B = I - T for an inner mapping T claimed to be a declared_alpha-contraction.
struct ResidualOfContraction {
  std::shared_ptr<const Mapping> inner;
  double declared_alpha;  // claimed contraction modulus of T, in [0, 1)
};

/// Black-box evaluator.
struct OracleMap {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn;
  std::string name = "oracle";
};

/// Symbolic description of the operator B in VI(C, B).
class Mapping {
 public:
  using Descriptor = std::variant<AffineMap, ScaledIdentity, ResidualOfContraction, OracleMap>;

  explicit Mapping(AffineMap m);
  explicit Mapping(ScaledIdentity m);
  explicit Mapping(ResidualOfContraction m);
  explicit Mapping(OracleMap m);

  /// Convenience: B = I - T.
  static Mapping residual_of(Mapping T, double declared_alpha);
  /// Convenience: the constant map x -> value, as a zero-matrix affine map.
  static Mapping constant(const Eigen::VectorXd& value);

  const Descriptor& descriptor() const { return desc_; }

  template <typename T>
  const T* get_if() const { return std::get_if<T>(&desc_); }

  const char* variant_name() const;

 private:
  Descriptor desc_;
};

/// Applies B to raw coordinates.
Eigen::VectorXd evaluate(const Mapping& B, const Eigen::VectorXd& x);

/// Applies B, preserving the space exponent.
SpacePoint evaluate(const Mapping& B, const SpacePoint& x);

/// The matrix of B's linear part when B is (recursively) affine; nullopt for
/// oracles. The Lipschitz constant of B at p = 2 is this matrix's largest
/// singular value.
std::optional<Eigen::MatrixXd> linear_part(const Mapping& B, Eigen::Index dim);

/// Largest singular value of M by power iteration on M^T M.
double operator_norm_power_iteration(const Eigen::MatrixXd& M);

/// Sample-extremum estimates of B's analytic constants over a domain.
/// lipschitz_hat is a lower bound on the true Lipschitz constant;
/// strong_monotone_hat is an upper bound on the best admissible v.
struct ConstantsEstimate {
  double lipschitz_hat;
  std::optional<double> lipschitz_exact;  // power iteration, affine B at p = 2
  double strong_monotone_hat;
  int sample_count;
  std::uint64_t seed;
};

/// max over sampled pairs of ||Bx - By||_p / ||x - y||_p.
double estimate_lipschitz(const Mapping& B, const ConvexSet& domain, double p, int n,
                          std::uint64_t seed);

/// min over sampled pairs of <Bx - By, J(x - y)> / ||x - y||^2.
double estimate_strong_monotonicity(const Mapping& B, const ConvexSet& domain, double p, int n,
                                    std::uint64_t seed);

/// Both estimates from one pass, plus the exact p = 2 operator norm when
/// B is affine.
ConstantsEstimate estimate_constants(const Mapping& B, const ConvexSet& domain, double p,
                                     int n = kDefaultSampleCount, std::uint64_t seed = 1);

struct CocoercivityReport {
  bool pass;
  double worst_margin;  // min over pairs of [<dB, J(dx)> + u||dB||^2 - v||dx||^2] / ||dx||^2
  Eigen::VectorXd witness_x, witness_y;
  int pairs;
};

/// Sampled check of the relaxed (u, v)-cocoercivity inequality:
/// <Bx - By, J(x - y)> >= -u||Bx - By||^2 + v||x - y||^2. Passes iff the
/// worst normalized margin is >= -tol; a failing pair is the witness.
CocoercivityReport certify_cocoercive(const Mapping& B, double u, double v,
                                      const ConvexSet& domain, double p, int n,
                                      std::uint64_t seed, double tol = kEstimatorTol);

/// Largest v for which certify_cocoercive would pass (at tol = 0) on the
/// same sample stream: min over pairs of [<dB, J(dx)> + u||dB||^2] / ||dx||^2.
double max_certifiable_v(const Mapping& B, double u, const ConvexSet& domain, double p, int n,
                         std::uint64_t seed);

struct NonexpansiveReport {
  bool pass;
  double worst_slack;  // max of ||P_C Gx - P_C Gy|| - ||Gx - Gy||, G = I - lambda B
  int pairs;
};

/// Sampled check that G = I - lambda B is P_C-nonexpansive. Guaranteed at
/// p = 2 (Hilbert projections are nonexpansive); an empirical report
/// elsewhere.
NonexpansiveReport check_pc_nonexpansive(const Mapping& B, const ConvexSet& C, double lambda,
                                         double p, int n, std::uint64_t seed,
                                         double tol = kEstimatorTol);

/// Compatibility analysis of the hypothesis triple (u, v, mu). Cocoercivity
/// plus |<Bx-By, j(x-y)>| <= ||Bx-By|| ||x-y|| force every pair ratio
/// t = ||Bx-By||/||x-y|| to satisfy u t^2 + t - v >= 0, i.e. t >= t_min;
/// a mu-Lipschitz mapping with a non-constant pair therefore requires
/// v <= mu + u mu^2.
struct FeasibilityVerdict {
  bool feasible;               // v <= max_admissible_v, i.e. t_min <= mu
  double t_min;                // (sqrt(1 + 4uv) - 1) / (2u)
  double t_max;                // mu, the Lipschitz ceiling on pair ratios
  double max_admissible_v;     // mu + u mu^2
  double window_min_v;        // u mu^2 + 5 mu, the certified window's floor
  bool v_meets_window_floor;  // v > window_min_v
  bool window_floor_attainable;  // window_min_v < max_admissible_v (false for mu > 0)
};

FeasibilityVerdict feasibility_analysis(double u, double v, double mu);

}  // namespace vilab
