#pragma once

#include <functional>
#include <map>

#include "conic_shubin/formal_symbol.hpp"
#include "conic_shubin/grid.hpp"

namespace conic_shubin {

/// Samples a(t, z, sigma, k, tau = e^t) of a symbol on a grid's lattice.
///
/// The z-dependence is stored through its Fourier modes: the symbol is
/// sum_s a_s(t, sigma, k) e^{i s z}, and `shift(s)` samples a_s. A table with
/// only s = 0 is z-independent. Samples are produced on demand.
class SymbolTable {
public:
  /// a_s(t, sigma, k); tau = e^t is implied by t.
  using Sampler = std::function<cplx(double t, double sigma, double k)>;

  explicit SymbolTable(const GridSpec& g) : grid_(g) {}

  /// z-independent table from a function of (t, sigma, k).
  static SymbolTable from_function(const GridSpec& g, Sampler f);
  /// Table from a function of (t, z, sigma, k), split into z-modes with an
  /// nz-point DFT at every sample.
  static SymbolTable from_function_z(const GridSpec& g, std::function<cplx(double, double, double, double)> f);
  /// Exact samples of a formal symbol with tau = e^t.
  static SymbolTable from_symbol(const FormalSymbol& a, const GridSpec& g);

  const GridSpec& grid() const { return grid_; }
  const std::map<int, Sampler>& shifts() const { return parts_; }
  bool z_independent() const;
  void add_shift(int s, Sampler f);

  /// Sample of a_s at node n, lattice slot m, z-slot q.
  cplx sample(int s, int n, int m, int q) const;
  /// All samples of a_s for z-slot q (nt x lattice_size), Nyquist-symmetrised.
  Eigen::MatrixXcd samples(int s, int q) const;

private:
  GridSpec grid_;
  std::map<int, Sampler> parts_;
};

/// Unitary t- and z-DFT of u: sum |u_hat|^2 = u.norm()^2. Periodic in t for both closures.
Eigen::MatrixXcd mellin_forward(const GridFunction& u);
/// Inverse of mellin_forward.
GridFunction mellin_inverse(const GridSpec& g, const Eigen::MatrixXcd& u_hat);

/// Left quantisation: (Au)(t_n) = sum over lattice of a(t_n, sigma) e^{i sigma (t_n - t')} u(t').
///
/// Realised per output node as the inverse lattice DFT of the samples, read
/// at circular node differences (and folded for the reflection closure).
/// Nyquist samples are averaged with their mirror so real symmetric symbols
/// give Hermitian operators.
GridOperator op_quantize(const SymbolTable& a);
/// op_quantize(SymbolTable::from_symbol(a, g)).
GridOperator quantize_symbol(const FormalSymbol& a, const GridSpec& g);

/// Applies the t-independent multiplier f(sigma, k) with FFTs (both closures).
GridFunction fourier_multiplier(const GridFunction& u, const std::function<cplx(double sigma, double k)>& f);

/// Matrix-free op(a)u: sum over terms of c(x,z) x^k applied after the multiplier k^alpha sigma^j.
GridFunction apply_symbol(const FormalSymbol& a, const GridFunction& u);

/// Conjugate transpose in L^2(dt dz).
GridOperator numeric_adjoint(const GridOperator& A);
/// diag(e^{-beta t}) A diag(e^{beta t}).
GridOperator conjugate_weight_numeric(const GridOperator& A, double beta);

/// Decay of |K(t, t')| in rho = e^t + e^{t'} over the upper half of the log-rho range.
struct DecayReport {
  double fitted_exponent = 0.0;  ///< slope of log max|K| against log rho
  double tail_magnitude = 0.0;   ///< max |K| over the upper quarter of log rho
  double peak_magnitude = 0.0;   ///< max |K| overall
  bool residual_like = false;    ///< decay beats rho^{-r} for every r <= 8
  int points_fitted = 0;
};

DecayReport residual_decay_report(const GridOperator& A);

}  // namespace conic_shubin
