#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "vilab/errors.hpp"

namespace vilab {

/// Relative tolerance used by the duality-identity checks.
inline constexpr double kIdentityRelTol = 1e-9;

/// True iff p is a usable space exponent: 1 < p < inf. Outside this range
/// the duality mapping is set-valued and the space is not smooth.
inline bool valid_exponent(double p) {
  return std::isfinite(p) && p > 1.0;
}

/// Dual exponent q with 1/p + 1/q = 1.
inline double dual_exponent(double p) { return p / (p - 1.0); }

/// lp norm (sum |v_i|^p)^(1/p) for runtime p. Scales by the largest
/// coordinate so p-th powers cannot overflow.
template <typename Derived>
double lp_norm(const Eigen::MatrixBase<Derived>& v, double p) {
  using std::pow;
  if (v.size() == 0) return 0.0;
  const double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0 || !std::isfinite(m)) return m;
  const double s = ((v.derived().cwiseAbs() / m).array().pow(p)).sum();
  return m * pow(s, 1.0 / p);
}

/// Coordinates of the normalized duality map J(x) in lp:
///   f_i = ||x||^(2-p) sign(x_i) |x_i|^(p-1),
/// evaluated as ||x|| * sign(x_i) * (|x_i|/||x||)^(p-1) so that large
/// coordinates stay in range. sign(0)*0^(p-1) is taken as 0. J(0) = 0.
template <typename Derived>
Eigen::VectorXd duality_coords(const Eigen::MatrixBase<Derived>& v, double p) {
  Eigen::VectorXd x = v;
  if (p == 2.0) return x;  // Hilbert case: J is the identity
  const double n = lp_norm(x, p);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(x.size());
  if (n == 0.0) return f;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]);
    if (a == 0.0) continue;
    const double s = x[i] > 0.0 ? 1.0 : -1.0;
    f[i] = n * s * std::pow(a / n, p - 1.0);
  }
  return f;
}

/// A vector of a finite-dimensional lp space together with its exponent.
/// Construction rejects non-finite coordinates and exponents outside (1,inf).
class SpacePoint {
 public:
  SpacePoint(Eigen::VectorXd coords, double p) : coords_(std::move(coords)), p_(p) {
    if (coords_.size() < 1) throw Error("SpacePoint: dimension must be >= 1");
    if (!coords_.allFinite()) throw Error("SpacePoint: coordinates must be finite");
    if (!valid_exponent(p_)) throw Error("SpacePoint: exponent p must satisfy 1 < p < inf");
  }

  static SpacePoint zero(Eigen::Index dim, double p) {
    return SpacePoint(Eigen::VectorXd::Zero(dim), p);
  }

  const Eigen::VectorXd& coords() const { return coords_; }
  double exponent() const { return p_; }
  Eigen::Index dim() const { return coords_.size(); }
  double norm() const { return lp_norm(coords_, p_); }

  bool compatible_with(const SpacePoint& other) const {
    return dim() == other.dim() && p_ == other.p_;
  }

 private:
  Eigen::VectorXd coords_;
  double p_;
};

inline SpacePoint operator-(const SpacePoint& a, const SpacePoint& b) {
  if (!a.compatible_with(b)) throw DimensionMismatch("SpacePoint difference: dimension or p mismatch");
  return SpacePoint(a.coords() - b.coords(), a.exponent());
}

inline SpacePoint operator+(const SpacePoint& a, const SpacePoint& b) {
  if (!a.compatible_with(b)) throw DimensionMismatch("SpacePoint sum: dimension or p mismatch");
  return SpacePoint(a.coords() + b.coords(), a.exponent());
}

inline SpacePoint operator*(double s, const SpacePoint& a) {
  return SpacePoint(s * a.coords(), a.exponent());
}

/// An element of the dual space lq, 1/p + 1/q = 1.
class DualFunctional {
 public:
  DualFunctional(Eigen::VectorXd coords, double q) : coords_(std::move(coords)), q_(q) {
    if (coords_.size() < 1) throw Error("DualFunctional: dimension must be >= 1");
    if (!coords_.allFinite()) throw Error("DualFunctional: coordinates must be finite");
    if (!valid_exponent(q_)) throw Error("DualFunctional: exponent q must satisfy 1 < q < inf");
  }

  static DualFunctional zero(Eigen::Index dim, double q) {
    return DualFunctional(Eigen::VectorXd::Zero(dim), q);
  }

  const Eigen::VectorXd& coords() const { return coords_; }
  double exponent() const { return q_; }
  Eigen::Index dim() const { return coords_.size(); }
  double norm() const { return lp_norm(coords_, q_); }

 private:
  Eigen::VectorXd coords_;
  double q_;
};

/// p-norm of x.
inline double p_norm(const SpacePoint& x) { return x.norm(); }

/// Dual pairing <x, f> = sum x_i f_i. Requires matching dimension and
/// dual exponents.
inline double pairing(const SpacePoint& x, const DualFunctional& f) {
  if (x.dim() != f.dim()) throw DimensionMismatch("pairing: dimension mismatch");
  if (std::abs(1.0 / x.exponent() + 1.0 / f.exponent() - 1.0) > 1e-12)
    throw DimensionMismatch("pairing: exponents are not dual");
  return x.coords().dot(f.coords());
}

/// Scalar gauge t -> mu(t): continuous, strictly increasing, mu(0) = 0.
/// Identity and power(a) gauges are symbolic; user-supplied gauges are
/// screened by sampling a 64-point log grid (evidence, not proof).
class GaugeFunction {
 public:
  enum class Kind { Identity, Power, Custom };

  static GaugeFunction identity() { return GaugeFunction(Kind::Identity, 1.0, {}, "identity"); }

  static GaugeFunction power(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw Error("GaugeFunction::power: exponent must be positive");
    return GaugeFunction(Kind::Power, a, {}, "t^" + std::to_string(a));
  }

  static GaugeFunction custom(std::function<double(double)> fn, std::string name = "custom") {
    GaugeFunction g(Kind::Custom, 0.0, std::move(fn), std::move(name));
    g.validate_by_sampling();
    return g;
  }

  double operator()(double t) const {
    switch (kind_) {
      case Kind::Identity: return t;
      case Kind::Power: return std::pow(t, a_);
      case Kind::Custom: return fn_(t);
    }
    return t;
  }

  Kind kind() const { return kind_; }
  bool is_identity() const { return kind_ == Kind::Identity; }
  const std::string& name() const { return name_; }

 private:
  GaugeFunction(Kind k, double a, std::function<double(double)> fn, std::string name)
      : kind_(k), a_(a), fn_(std::move(fn)), name_(std::move(name)) {}

  void validate_by_sampling() const {
    if (fn_(0.0) != 0.0) throw Error("GaugeFunction: mu(0) must be 0");
    double prev = 0.0;
    for (int k = 0; k < 64; ++k) {
      const double t = std::pow(10.0, -6.0 + 12.0 * k / 63.0);
      const double m = fn_(t);
      if (!std::isfinite(m) || m <= prev)
        throw Error("GaugeFunction: sampled gauge is not strictly increasing");
      prev = m;
    }
  }

  Kind kind_;
  double a_;
  std::function<double(double)> fn_;
  std::string name_;
};

/// Normalized duality map J. Single-valued on smooth lp, 1 < p < inf:
/// <x, Jx> = ||x||^2 and ||Jx||_q = ||x||.
inline DualFunctional normalized_duality_map(const SpacePoint& x) {
  return DualFunctional(duality_coords(x.coords(), x.exponent()), dual_exponent(x.exponent()));
}

/// Duality map with gauge mu: (mu(||x||)/||x||) J(x), and 0 at x = 0.
/// The identity gauge routes through normalized_duality_map so both agree
/// bitwise.
inline DualFunctional gauge_duality_map(const SpacePoint& x, const GaugeFunction& g) {
  if (g.is_identity()) return normalized_duality_map(x);
  const double n = x.norm();
  if (n == 0.0) return DualFunctional::zero(x.dim(), dual_exponent(x.exponent()));
  const double scale = g(n) / n;
  DualFunctional j = normalized_duality_map(x);
  return DualFunctional(scale * j.coords(), j.exponent());
}

}  // namespace vilab
