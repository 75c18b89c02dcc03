#pragma once

#include <stdexcept>
#include <vector>

#include "conic_shubin/formal_symbol.hpp"
#include "conic_shubin/grid.hpp"
#include "conic_shubin/sobolev.hpp"

namespace conic_shubin {

/// Minimum of |sym_e| over hemisphere x z-samples x u = 1/x samples.
struct EllipticityReport {
  bool fully_elliptic = false;
  double min_modulus = 0.0;
  CovarPoint witness;
  double witness_x = 0.0;  ///< +infinity for the x -> infinity limit
  double witness_z = 0.0;
  std::size_t samples_used = 0;
  int hemisphere_resolution = 0;
  int x_samples = 0;  ///< number of u = 1/x values, including u = 0
};

/// Thrown when a construction needs a fully elliptic symbol and does not get one.
class EllipticityError : public std::runtime_error {
public:
  EllipticityError(const std::string& what, EllipticityReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const EllipticityReport& report() const { return report_; }

private:
  EllipticityReport report_;
};

/// Samples x in [R, infinity) through u = 1/x in {0} and a log grid from 1e-6 to 1/R.
/// Throws std::invalid_argument for tol <= 0, R <= 0, n < 2 or an empty symbol.
EllipticityReport check_full_ellipticity(const FormalSymbol& a, int n = 24, double tol = 1e-8, double R = 1.0,
                                         int x_samples = 24);

/// Principal inverse, Neumann parametrices and their remainders on one grid.
struct ParametrixBundle {
  GridOperator A;
  GridOperator B0;
  std::vector<GridOperator> P;           ///< P[N-1] = B0 sum_{k<N} (I - A B0)^k
  std::vector<double> left_remainder;    ///< interior ||A P_N - I||
  std::vector<double> right_remainder;   ///< interior ||P_N A - I||
  EllipticityReport ellipticity;
};

/// b0 = chi(<(zeta,sigma,tau)>_l) / sym_e with chi = 0 for bracket <= 1 and 1 for bracket >= 2
/// (chi == 1 for order-0 symbols). Throws EllipticityError when a is not fully elliptic and
/// std::runtime_error when sym_e vanishes where chi does not.
ParametrixBundle build_parametrix(const FormalSymbol& a, const GridSpec& grid, int n_max);

/// Spectral norm of diag(w) M diag(w) with w the interior taper.
double interior_norm(const GridOperator& M);

struct FredholmReport {
  int kernel_dim = 0;
  int cokernel_dim = 0;
  double threshold = 0.0;
  double median = 0.0;
  std::vector<double> smallest;  ///< up to 6 smallest singular values, ascending
};

/// Singular values of R_{s-mu} e^{-(alpha+gamma)t} A e^{alpha t} R_s^{-1}; values below
/// 1e-8 x median count as zero. Mode-diagonal operators are decomposed per block; others
/// need nt*nz <= 4096.
FredholmReport fredholm_probe(const GridOperator& A, const SobolevParams& p = {},
                              const AnisotropyVector& l = AnisotropyVector(1, 1, 1), double mu = 0.0,
                              double gamma = 0.0);

}  // namespace conic_shubin
