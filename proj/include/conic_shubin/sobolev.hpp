#pragma once

#include <vector>

#include "conic_shubin/aniso.hpp"
#include "conic_shubin/grid.hpp"

namespace conic_shubin {

/// Regularity s and weight exponent alpha of x^alpha H^{s;l}.
struct SobolevParams {
  double s = 0.0;
  double alpha = 0.0;
};

/// Frequency multiplier r(zeta, sigma) = <(zeta, sigma, lambda0)>^s with weights (l1, l2, l1).
class OrderReduction {
public:
  /// Throws std::invalid_argument for lambda0 <= 0.
  OrderReduction(double s, int l1, int l2, double lambda0 = 10.0);
  /// Uses l.l1(), l.l2().
  OrderReduction(double s, const AnisotropyVector& l, double lambda0 = 10.0);

  double s() const { return s_; }
  double lambda0() const { return lambda0_; }
  double multiplier(double sigma, double zeta) const;
  /// Lower bound <(0,0,lambda0)>^s > 0 of the multiplier when s >= 0.
  double floor_value() const { return multiplier(0.0, 0.0); }

  GridFunction apply(const GridFunction& u) const;
  GridFunction apply_inverse(const GridFunction& u) const;
  /// The multiplier as an operator (t-independent symbol).
  GridOperator as_operator(const GridSpec& g) const;

private:
  double s_;
  AnisotropyVector w_;
  double lambda0_;
};

/// || op(r_s) (e^{-alpha t} u) ||.
double sobolev_norm(const GridFunction& u, const SobolevParams& p, const AnisotropyVector& l, double lambda0 = 10.0);
/// Isotropic b-Sobolev norm of order s (weights (1,1,1)), weight exponent alpha.
double isotropic_sobolev_norm(const GridFunction& u, double s, double alpha = 0.0, double lambda0 = 10.0);

/// Two-sided inclusion constants between the isotropic scale and H^{s;l}.
///
/// With a = max(s(l1+l2), s/(l1+l2)) and b = min(...):
///   ||u||_{s;l} <= C_upper ||u||_{iso,a},   ||u||_{iso,b} <= C_lower ||u||_{s;l}.
struct EmbeddingReport {
  double s = 0.0;
  double empirical_upper = 0.0;  ///< max over trials of ||u||_{s;l} / ||u||_{iso,a}
  double empirical_lower = 0.0;  ///< max over trials of ||u||_{iso,b} / ||u||_{s;l}
  double lattice_upper = 0.0;    ///< sup of the multiplier ratio over the grid lattice
  double lattice_lower = 0.0;
  double continuum_upper = 0.0;  ///< sup of the multiplier ratio over a wide log-spaced plane sample
  double continuum_lower = 0.0;
  double sigma_exponent = 0.0;   ///< growth exponent of ||.||_{s;l} along a pure-sigma mode
  double zeta_exponent = 0.0;    ///< growth exponent along a pure-zeta mode
  int trials = 0;
  bool holds = false;            ///< empirical <= lattice <= continuum (finite)
};

/// Random band-limited functions on g (seeded); used for embedding checks.
std::vector<GridFunction> random_band_limited(const GridSpec& g, int count, unsigned long seed);

EmbeddingReport embedding_check(const AnisotropyVector& l, double s, const GridSpec& g, int trials,
                                unsigned long seed = 1, double lambda0 = 10.0);

/// Power-iteration estimate of ||A|| from x^alpha H^{s;l} to x^{alpha+gamma} H^{s-mu;l}:
/// the spectral norm of R_{s-mu} e^{-(alpha+gamma)t} A e^{alpha t} R_s^{-1}.
double mapping_bound(const GridOperator& A, double mu, double gamma, const SobolevParams& p,
                     const AnisotropyVector& l, double lambda0 = 10.0, int max_iterations = 300,
                     double rel_tol = 1e-9);

/// Singular values, descending, of the embedding H^{s;l} -> H^{s2;l} (s > s2) on g.
std::vector<double> embedding_singular_values(const GridSpec& g, double s, double s2, const AnisotropyVector& l,
                                              double lambda0 = 10.0);

}  // namespace conic_shubin
