#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "vilab/convex_set.hpp"

namespace vilab {

using Rng = std::mt19937_64;

/// Standard gaussian vector.
Eigen::VectorXd gaussian_vector(Eigen::Index dim, Rng& rng);

/// Random member of C. Box/Ball/Simplex are sampled uniformly; a halfspace
/// is unbounded, so samples are gaussians around its anchor point clipped
/// into the set.
Eigen::VectorXd sample_in_set(const ConvexSet& C, Rng& rng);

/// Random point outside C (best effort; used to pose projection problems).
Eigen::VectorXd sample_outside_set(const ConvexSet& C, Rng& rng);

/// Deterministic stream of distinct point pairs in C: every fourth pair is
/// independent, the rest perturb x at scales {1e-3, 1e-1, 1} to catch local
/// Lipschitz spikes. Calls f(x, y) for each pair; the first n pairs are a
/// prefix of any longer stream with the same seed. Returns the number of
/// pairs used; throws on a degenerate (single-point) domain.
template <typename F>
int for_each_domain_pair(const ConvexSet& domain, int n, std::uint64_t seed, F&& f) {
  static constexpr double kScales[3] = {1e-3, 1e-1, 1.0};
  Rng rng(seed);
  int used = 0;
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd x = sample_in_set(domain, rng);
    Eigen::VectorXd y;
    if (k % 4 == 0) {
      y = sample_in_set(domain, rng);
    } else {
      y = clip_to_set(domain, x + kScales[k % 4 - 1] * gaussian_vector(x.size(), rng));
    }
    if ((x - y).cwiseAbs().maxCoeff() == 0.0) continue;
    f(x, y);
    ++used;
  }
  if (used == 0) throw Error("degenerate domain: no distinct sample pairs");
  return used;
}

}  // namespace vilab
