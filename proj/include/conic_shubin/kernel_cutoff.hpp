#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace conic_shubin {

/// Smooth cut-off phi(t): 1 for |t| <= inner, 0 for |t| >= outer.
struct CutoffSpec {
  double inner = 1.0;
  double outer = 2.0;
  double operator()(double t) const;
};

/// Periodic sigma lattice sigma_m = 2 pi m / period (FFT order) dual to t_n = n period / size.
struct SigmaLattice {
  double period = 80.0;
  int size = 1 << 16;

  double dt() const { return period / size; }
  double sigma(int m) const;
  /// t at slot n, FFT order.
  double t(int n) const;
  /// Slot whose sigma is closest to the given value (>= 0 side).
  int slot_of(double sigma) const;
  /// Samples f(sigma_m) in slot order.
  std::vector<std::complex<double>> sample(const std::function<std::complex<double>(double)>& f) const;
};

/// H(phi)a(sigma + i gamma) on the lattice: F_{t->sigma}[e^{t gamma} phi(t) F^{-1} a].
/// Throws std::invalid_argument when phi's support does not fit in the t-window.
std::vector<std::complex<double>> kernel_cutoff(const std::vector<std::complex<double>>& a_line,
                                                const SigmaLattice& lattice, const CutoffSpec& phi,
                                                double gamma);

/// Truncated expansion sum_{j<=order} (i gamma)^j / j! d^j/dsigma^j H(phi)a(sigma), with the
/// sigma-derivatives taken exactly on the t side.
std::vector<std::complex<double>> holomorphic_expansion(const std::vector<std::complex<double>>& a_line,
                                                        const SigmaLattice& lattice, const CutoffSpec& phi,
                                                        double gamma, int order);

/// Log-log slope of |a - H(phi)a| at dyadic sigma = 2^j.
struct CutoffDecayFit {
  double slope = 0.0;
  std::vector<double> sigmas;       ///< dyadic points used in the fit
  std::vector<double> differences;  ///< |a - H(phi)a| at those points
};

/// Fits over the `points` largest dyadic sigma (at most half the lattice
/// Nyquist) whose difference is above `floor`.
CutoffDecayFit cutoff_decay_fit(const std::vector<std::complex<double>>& a_line,
                                const std::vector<std::complex<double>>& h_line, const SigmaLattice& lattice,
                                int points = 4, double floor = 1e-13);

}  // namespace conic_shubin
