#pragma once

#include <optional>
#include <vector>

#include "conic_shubin/formal_symbol.hpp"
#include "conic_shubin/grid.hpp"
#include "conic_shubin/sobolev.hpp"

namespace conic_shubin {

enum class ModelKind { Harmonic, Anharmonic, Custom };

/// Model operator on the cone over S^1 (d = 2).
///
/// Harmonic is Anharmonic with m = n = 1. For Custom the geometric operator is
/// x^{-2} op(symbol).
struct ModelOperatorSpec {
  ModelKind kind = ModelKind::Harmonic;
  int m = 1;
  int n = 1;
  std::optional<FormalSymbol> custom;
  GridSpec grid;
};

/// Calculus symbol A with geometric operator x^{-2m} op(A).
struct ModelOperator {
  FormalSymbol symbol;
  int m = 1;
  int n = 1;
  GridOperator A;  ///< op(symbol) on the grid

  int prefactor_power() const { return -2 * m; }
};

/// sigma^2 - i(d-2)sigma + zeta^2 + tau^4 with d = 2, l = (2,2,1).
FormalSymbol harmonic_symbol();
/// B(sigma + 2(m-1)i) # ... # B(sigma + 2i) # B + tau^{2(m+n)} with B = sigma^2 + zeta^2,
/// l = (m+n, m+n, m): the symbol of x^{2m}((x^{-2} op(B))^m + x^{2n}).
/// Throws std::invalid_argument unless m, n >= 1.
FormalSymbol anharmonic_symbol(int m, int n);

ModelOperator make_harmonic(const GridSpec& grid);
ModelOperator make_anharmonic(int m, int n, const GridSpec& grid);
ModelOperator make_model(const ModelOperatorSpec& spec);

/// x^{-2m} op(A) as a grid operator.
GridOperator geometric_operator(const ModelOperator& model);

/// Fit of log|psi| against x on the outer quarter of the window for the ground state.
struct GroundStateDecay {
  double linear_rate = 0.0;     ///< c in log|psi| ~ a - c x
  double quadratic_rate = 0.0;  ///< q in log|psi| ~ a + b x - q x^2
  int points = 0;
  bool decays = false;          ///< c > 0
};

struct SpectrumResult {
  std::vector<double> eigenvalues;  ///< ascending
  std::vector<int> modes;           ///< angular mode of each eigenvalue
  GroundStateDecay decay;
  bool converged = true;
};

/// Lowest `count` eigenvalues of the geometric operator.
///
/// Harmonic/anharmonic: per angular mode k the Hermitian form
/// K^m + X^{2n}, K = X^{-1}(op(sigma^2) + k^2)X^{-1}, X = diag(e^t), which is
/// similar to the geometric operator through X. Custom: X^{-1} op(a) X^{-1},
/// averaged with its adjoint.
SpectrumResult spectrum(const ModelOperatorSpec& spec, int count);

/// One row of a mapping-shift study.
struct MappingRow {
  int nt = 0;
  double s = 0.0;
  double alpha = 0.0;
  double s_shift = 0.0;
  double weight_shift = 0.0;
  double norm = 0.0;       ///< operator restricted to the interior taper on both sides
  double full_norm = 0.0;  ///< whole window, including end effects
};

/// Norms of the geometric operator x^alpha H^{s;l} -> x^{alpha + weight_shift} H^{s - s_shift;l}
/// for every nt in `nts`, every (s, alpha) and every s_shift in `s_shifts`.
/// weight_shift is the model's -2m. The full-window norm is computed only when `with_full` is set.
std::vector<MappingRow> mapping_shift_study(const ModelOperatorSpec& spec, const std::vector<double>& s_list,
                                            const std::vector<double>& alpha_list, const std::vector<int>& nts,
                                            const std::vector<double>& s_shifts, bool with_full = true);

}  // namespace conic_shubin
