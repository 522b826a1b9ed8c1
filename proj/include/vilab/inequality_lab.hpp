#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "vilab/convex_set.hpp"
#include "vilab/mapping.hpp"

namespace vilab {

/// Relative tolerance for the lab's orderings and identities.
inline constexpr double kLabRelTol = 1e-9;

struct PairingInequalityCheck {
  double lhs;  // <x - y, J(x - y)> = ||x - y||^2
  double rhs;  // <x - y, J(x) - J(y)> + 4 ||x|| ||y||
  bool holds;  // lhs <= rhs + tol * max(1, rhs)
};

/// The pairing inequality <x-y, j(x-y)> <= <x-y, x* - y*> + 4||x|| ||y||
/// on a concrete pair.
PairingInequalityCheck check_pairing_inequality(const SpacePoint& x, const SpacePoint& y);

struct PairingInequalityBatch {
  long pairs;
  long violations;
  double worst_rel_slack;  // max of (lhs - rhs) / max(1, rhs)
};

struct PairingInequalityRecord {
  long id;
  int dim;
  double lhs, rhs;
  bool holds;
};

/// Seeded batch over random pairs with coordinate scales spanning
/// 10^-2..10^2, dims cycling 1..max_dim. Records are emitted in order when
/// a sink is given (used for the CSV export).
PairingInequalityBatch pairing_inequality_batch(
    double p, int max_dim, long n_pairs, std::uint64_t seed, double rel_tol = kLabRelTol,
    std::vector<PairingInequalityRecord>* records = nullptr);

enum class LineStatus { Pass, Fail, Conditional };

const char* to_string(LineStatus s);

struct ChainStep {
  std::string label;   // e.g. "L1<=L2"
  double lhs, rhs;
  LineStatus status;
};

/// Every line of the contraction bound's derivation evaluated on one pair:
///   L1 projected distance^2, L2 unprojected distance^2, L3 its pairing
///   form, L4 the pairing-inequality relaxation, L5 the term expansion,
///   L6 the (u, v, mu) bound, L7 the factored form.
struct ProofChainReport {
  std::array<double, 7> lines;
  std::vector<ChainStep> steps;
  bool pair_cocoercive;  // the declared (u, v) hold on this pair
  bool pair_lipschitz;   // the declared mu holds on this pair
  double factor_l7;      // 1 - lambda mu^2 (c - lambda)
  bool all_ordered;      // no step failed
};

/// Checks each consecutive ordering of the chain on a concrete pair
/// x, y in C. Steps that need the declared constants report Conditional
/// instead of Fail when the pair itself violates them.
ProofChainReport verify_proof_chain(const SpacePoint& x, const SpacePoint& y, const Mapping& B,
                                    const ConvexSet& C, double u, double v, double mu,
                                    double lambda);

/// The contraction factor 1 - s mu^2 [2(r - gamma mu^2)/mu^2 - s] claimed
/// by an earlier published bound; negative values exhibit its flaw.
double earlier_bound_factor(double r, double gamma, double mu, double s);

}  // namespace vilab
