#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace conic_shubin {

/// Integer weights (l1, l2, l3) of the covariables (zeta, sigma, tau).
///
/// All anisotropic homogeneities in the library are measured against one of
/// these. On the global manifold only l1 == l2 occurs; `require_global()`
/// enforces that.
class AnisotropyVector {
public:
  AnisotropyVector(int l1, int l2, int l3);

  int l1() const { return w_[0]; }
  int l2() const { return w_[1]; }
  int l3() const { return w_[2]; }
  int operator[](std::size_t i) const { return w_[i]; }

  /// l1*l2*l3
  std::int64_t product() const;
  /// l1+l2+l3
  int sum() const { return w_[0] + w_[1] + w_[2]; }

  /// Weighted degree l1*alpha + l2*j + l3*k of the monomial zeta^alpha sigma^j tau^k.
  int weight(int alpha, int j, int k) const { return w_[0] * alpha + w_[1] * j + w_[2] * k; }

  bool is_global() const { return w_[0] == w_[1]; }
  /// Throws std::invalid_argument unless l1 == l2.
  const AnisotropyVector& require_global() const;

  friend bool operator==(const AnisotropyVector&, const AnisotropyVector&) = default;

private:
  std::array<int, 3> w_;
};

/// Point (zeta, sigma, tau) of the extended cotangent fibre; tau >= 0.
class CovarPoint {
public:
  CovarPoint() = default;
  CovarPoint(double zeta, double sigma, double tau);

  double zeta() const { return zeta_; }
  double sigma() const { return sigma_; }
  double tau() const { return tau_; }

  /// (rho^l1 zeta, rho^l2 sigma, rho^l3 tau)
  CovarPoint scaled(double rho, const AnisotropyVector& l) const;

  friend CovarPoint operator+(const CovarPoint& a, const CovarPoint& b) {
    return {a.zeta_ + b.zeta_, a.sigma_ + b.sigma_, a.tau_ + b.tau_};
  }
  friend bool operator==(const CovarPoint&, const CovarPoint&) = default;

private:
  double zeta_ = 0.0;
  double sigma_ = 0.0;
  double tau_ = 0.0;
};

/// Anisotropic norm (|zeta|^{2 l2 l3} + |sigma|^{2 l1 l3} + |tau|^{2 l1 l2})^{1/(2 l1 l2 l3)}.
///
/// Evaluated as M * (sum_j (w_j / M)^{2 l1 l2 l3})^{1/(2 l1 l2 l3)} with
/// w_j = |y_j|^{1/l_j} and M = max w_j, so no intermediate power overflows.
double aniso_abs(const CovarPoint& p, const AnisotropyVector& l);

/// Anisotropic Japanese bracket (1 + sum_j |y_j|^{2 prod_{k!=j} l_k})^{1/(2 l1 l2 l3)}.
double aniso_bracket(const CovarPoint& p, const AnisotropyVector& l);

/// Bracket on an arbitrary real triple (used for order reductions where the
/// third slot carries a real parameter rather than tau >= 0).
double aniso_bracket(double y1, double y2, double y3, const AnisotropyVector& l);

/// Standard (isotropic) Japanese bracket (1 + |y|^2)^{1/2}.
double japanese_bracket(const CovarPoint& p);

/// Points on the hemisphere aniso_abs(p) == 1, tau >= 0.
///
/// Latitude-longitude scheme on the Euclidean unit hemisphere pulled back by
/// y_j = sign(w_j)|w_j|^{1/prod_{k!=j} l_k}. Latitude 0 is the equator ring
/// tau = 0; the pole (0,0,1) is always present. Returns O(n^2) points.
std::vector<CovarPoint> hemisphere_sample(const AnisotropyVector& l, int n);

/// Constants c, C with c<p>^{1/(l1+l2+l3)} <= <p>_l <= C<p>^{l1+l2+l3} over a sample.
struct SandwichConstants {
  double lower = 0.0;  ///< c
  double upper = 0.0;  ///< C
};

/// Extremal ratios of the sandwich inequality over `sample`, refined by a
/// coarse coordinate search started from the best sample points.
SandwichConstants sandwich_constants(const AnisotropyVector& l, const std::vector<CovarPoint>& sample);

/// Closed-form constants that provably satisfy the sandwich inequality:
/// c = 2^{-1/(l1+l2+l3)}, C = 4^{1/(2 l1 l2 l3)}.
SandwichConstants sandwich_constants_bound(const AnisotropyVector& l);

}  // namespace conic_shubin
