#include "conic_shubin/kernel_cutoff.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "conic_shubin/fft.hpp"
#include "conic_shubin/grid.hpp"

namespace conic_shubin {

double CutoffSpec::operator()(double t) const {
  return smooth_step((outer - std::abs(t)) / (outer - inner));
}

double SigmaLattice::sigma(int m) const {
  const int mm = m < size / 2 ? m : m - size;
  return 2.0 * std::numbers::pi * mm / period;
}

double SigmaLattice::t(int n) const { return (n < size / 2 ? n : n - size) * dt(); }

int SigmaLattice::slot_of(double s) const {
  const long m = std::lround(std::abs(s) * period / (2.0 * std::numbers::pi));
  if (m >= size / 2) throw std::out_of_range("sigma beyond the lattice Nyquist frequency");
  return static_cast<int>(m);
}

std::vector<std::complex<double>> SigmaLattice::sample(const std::function<std::complex<double>(double)>& f) const {
  std::vector<std::complex<double>> v(static_cast<std::size_t>(size));
  for (int m = 0; m < size; ++m) v[static_cast<std::size_t>(m)] = f(sigma(m));
  return v;
}

namespace {

void validate(const std::vector<std::complex<double>>& a, const SigmaLattice& lat, const CutoffSpec& phi) {
  if (static_cast<int>(a.size()) != lat.size) throw std::invalid_argument("symbol line does not match the lattice");
  if (!(phi.inner > 0.0 && phi.outer > phi.inner)) throw std::invalid_argument("cut-off needs 0 < inner < outer");
  if (phi.outer >= 0.5 * lat.period) throw std::invalid_argument("cut-off support exceeds the t-window");
}

// k(t_n) = (1/period) sum_m a_m e^{i sigma_m t_n}
std::vector<std::complex<double>> inverse_transform(const std::vector<std::complex<double>>& a, const SigmaLattice& lat) {
  auto k = a;
  dft(k, true);
  for (auto& v : k) v /= lat.period;
  return k;
}

// dt * sum_n e^{-i sigma_m t_n} w_n
std::vector<std::complex<double>> forward_transform(std::vector<std::complex<double>> w, const SigmaLattice& lat) {
  dft(w, false);
  for (auto& v : w) v *= lat.dt();
  return w;
}

}  // namespace

std::vector<std::complex<double>> kernel_cutoff(const std::vector<std::complex<double>>& a_line,
                                                const SigmaLattice& lattice, const CutoffSpec& phi, double gamma) {
  validate(a_line, lattice, phi);
  auto k = inverse_transform(a_line, lattice);
  for (int n = 0; n < lattice.size; ++n) {
    const double t = lattice.t(n);
    k[static_cast<std::size_t>(n)] *= std::exp(gamma * t) * phi(t);
  }
  return forward_transform(std::move(k), lattice);
}

std::vector<std::complex<double>> holomorphic_expansion(const std::vector<std::complex<double>>& a_line,
                                                        const SigmaLattice& lattice, const CutoffSpec& phi,
                                                        double gamma, int order) {
  validate(a_line, lattice, phi);
  const auto k = inverse_transform(a_line, lattice);
  // sum_j (i gamma)^j / j! (-i t)^j = sum_j (gamma t)^j / j!
  std::vector<std::complex<double>> w(k.size());
  for (int n = 0; n < lattice.size; ++n) {
    const double t = lattice.t(n);
    double term = 1.0, sum = 1.0;
    for (int j = 1; j <= order; ++j) {
      term *= gamma * t / j;
      sum += term;
    }
    w[static_cast<std::size_t>(n)] = k[static_cast<std::size_t>(n)] * phi(t) * sum;
  }
  return forward_transform(std::move(w), lattice);
}

CutoffDecayFit cutoff_decay_fit(const std::vector<std::complex<double>>& a_line,
                                const std::vector<std::complex<double>>& h_line, const SigmaLattice& lattice,
                                int points, double floor) {
  if (a_line.size() != h_line.size()) throw std::invalid_argument("decay fit needs matching lines");
  const double nyquist = std::numbers::pi / lattice.dt();
  std::vector<double> s_all, d_all;
  for (double s = 1.0; s <= 0.5 * nyquist; s *= 2.0) {
    const auto m = static_cast<std::size_t>(lattice.slot_of(s));
    const double d = std::abs(a_line[m] - h_line[m]);
    if (d > floor) {
      s_all.push_back(lattice.sigma(static_cast<int>(m)));
      d_all.push_back(d);
    }
  }
  CutoffDecayFit fit;
  const std::size_t start = s_all.size() > static_cast<std::size_t>(points) ? s_all.size() - points : 0;
  fit.sigmas.assign(s_all.begin() + static_cast<std::ptrdiff_t>(start), s_all.end());
  fit.differences.assign(d_all.begin() + static_cast<std::ptrdiff_t>(start), d_all.end());
  if (fit.sigmas.size() < 2) throw std::runtime_error("too few dyadic points above the floor for a decay fit");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(fit.sigmas.size());
  for (std::size_t i = 0; i < fit.sigmas.size(); ++i) {
    const double x = std::log(fit.sigmas[i]), y = std::log(fit.differences[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

}  // namespace conic_shubin
