#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <variant>
#include <vector>

#include "vilab/lp_space.hpp"

namespace vilab {

/// Absolute membership tolerance.
inline constexpr double kMembershipTol = 1e-10;
/// Tolerance for the best-approximation certificate margins.
inline constexpr double kCertificateTol = 1e-9;
/// Boxes with more vertices than this are sampled, not enumerated.
inline constexpr std::uint64_t kMaxEnumeratedVertices = 1u << 12;

/// Axis-aligned box {lo <= x <= hi}. Exactly projectable for every p in
/// (1, inf) because sum |x_i - y_i|^p separates per coordinate.
struct Box {
  Eigen::VectorXd lo, hi;
};

/// Euclidean ball {||x - center||_2 <= radius}. Projection supported at
/// p = 2 only.
struct Ball {
  Eigen::VectorXd center;
  double radius;
};

/// Halfspace {<normal, x> <= offset}. Projection supported at p = 2 only.
struct Halfspace {
  Eigen::VectorXd normal;
  double offset;
};

/// Standard simplex {x >= 0, sum x_i = 1} in the given dimension.
/// Projection supported at p = 2 only.
struct Simplex {
  Eigen::Index dim;
};

/// Validated descriptor of a nonempty closed convex set.
class ConvexSet {
 public:
  using Descriptor = std::variant<Box, Ball, Halfspace, Simplex>;

  explicit ConvexSet(Box b);
  explicit ConvexSet(Ball b);
  explicit ConvexSet(Halfspace h);
  explicit ConvexSet(Simplex s);

  const Descriptor& descriptor() const { return desc_; }
  Eigen::Index dim() const { return dim_; }

  template <typename T>
  const T* get_if() const { return std::get_if<T>(&desc_); }

  const char* variant_name() const;

 private:
  Descriptor desc_;
  Eigen::Index dim_;
};

/// True iff x satisfies the set's defining constraints within tol.
bool contains(const ConvexSet& C, const Eigen::VectorXd& x, double tol = kMembershipTol);
bool contains(const ConvexSet& C, const SpacePoint& x, double tol = kMembershipTol);

struct ProjectionResult {
  SpacePoint point;
  double distance;
  enum class Method { ClosedForm, Numeric } method;
};

/// Metric projection of x onto C in the lp norm carried by x.
/// Box: coordinatewise clamp (any p). Ball/Halfspace/Simplex: exact
/// Euclidean formulas, p = 2 only; any other p throws
/// UnsupportedCombination rather than returning a wrong point.
ProjectionResult metric_projection(const SpacePoint& x, const ConvexSet& C);

/// d(x, C) = ||x - P_C(x)||_p.
double distance(const SpacePoint& x, const ConvexSet& C);

/// Euclidean feasibility clip used by samplers: returns a member of C
/// close to v. Not tied to the ambient p.
Eigen::VectorXd clip_to_set(const ConvexSet& C, const Eigen::VectorXd& v);

/// A box enclosing C (enclosing a representative patch for halfspaces,
/// which are unbounded). Used by samplers and probes.
Box bounding_box(const ConvexSet& C);

/// Extreme points when they are enumerable: box corners up to the vertex
/// cap, the simplex's unit coordinates. Empty for balls, halfspaces and
/// oversized boxes.
std::vector<Eigen::VectorXd> enumerable_vertices(const ConvexSet& C);

struct CertificateReport {
  bool pass;
  double min_margin;
  Eigen::VectorXd worst_point;
  int samples_evaluated;
};

/// Best-approximation certificate: evaluates m(z) = <y - z, J_mu(x - y)>
/// over box vertices (when enumerable) plus n_samples random members of C.
/// The true projection satisfies m(z) >= 0 for every z in C, so the report
/// passes iff min m(z) >= -tol. Requires y in C.
CertificateReport best_approx_certificate(const SpacePoint& x, const SpacePoint& y,
                                          const ConvexSet& C, const GaugeFunction& g,
                                          int n_samples, std::uint64_t seed,
                                          double tol = kCertificateTol);

struct ChebyshevReport {
  double max_spread;
  bool consistent;  // spread <= 1e-6: consistent with C being Chebyshev
  int trials;
};

/// Sampling evidence that P_C is single-valued: restarts a numeric
/// minimizer of y -> ||x - y||_p over C from random starts and reports the
/// worst spread between the minimizers found. Evidence, not proof.
ChebyshevReport chebyshev_probe(const ConvexSet& C, double p, int trials, std::uint64_t seed);

}  // namespace vilab
