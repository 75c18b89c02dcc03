#include "conic_shubin/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "conic_shubin/fft.hpp"
#include "conic_shubin/parallel.hpp"

namespace conic_shubin {

SymbolTable SymbolTable::from_function(const GridSpec& g, Sampler f) {
  SymbolTable t(g);
  t.add_shift(0, std::move(f));
  return t;
}

SymbolTable SymbolTable::from_function_z(const GridSpec& g, std::function<cplx(double, double, double, double)> f) {
  SymbolTable table(g);
  const int nz = g.nz;
  for (int q = 0; q < nz; ++q) {
    const int s = g.mode(q);
    table.add_shift(s, [g, f, s, nz](double t, double sigma, double k) {
      cplx acc = 0.0;
      for (int p = 0; p < nz; ++p) acc += f(t, g.z(p), sigma, k) * std::polar(1.0, -s * g.z(p));
      return acc / static_cast<double>(nz);
    });
  }
  return table;
}

namespace {

struct TermSample {
  int alpha;
  int j;
  int tau_power;  // k - m
  cplx c;
};

double ipow(double b, int n) {
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

}  // namespace

SymbolTable SymbolTable::from_symbol(const FormalSymbol& a, const GridSpec& g) {
  std::map<int, std::vector<TermSample>> groups;
  for (const auto& [e, c] : a.terms())
    for (const auto& [key, cc] : c.terms())
      groups[key.second].push_back({e.alpha, e.j, e.k - key.first, cc.to_complex()});
  SymbolTable table(g);
  for (auto& [s, terms] : groups) {
    table.add_shift(s, [terms = std::move(terms)](double t, double sigma, double k) {
      cplx acc = 0.0;
      for (const auto& ts : terms) acc += ts.c * (ipow(k, ts.alpha) * ipow(sigma, ts.j) * std::exp(ts.tau_power * t));
      return acc;
    });
  }
  return table;
}

bool SymbolTable::z_independent() const {
  for (const auto& [s, f] : parts_)
    if (s != 0) return false;
  return true;
}

void SymbolTable::add_shift(int s, Sampler f) {
  auto it = parts_.find(s);
  if (it == parts_.end()) {
    parts_.emplace(s, std::move(f));
    return;
  }
  Sampler old = it->second;
  it->second = [old, f = std::move(f)](double t, double sigma, double k) { return old(t, sigma, k) + f(t, sigma, k); };
}

namespace {

// Value at z-slot q and lattice slot m with Nyquist entries averaged against their mirror.
cplx symmetrised(const SymbolTable::Sampler& f, const GridSpec& g, double t, int m, int q) {
  const double sigma = g.sigma(m);
  const double k = g.mode(q);
  const bool nyq_sigma = m == g.lattice_size() / 2;
  const bool nyq_k = q == g.nz / 2;
  auto at = [&](double sg, double kk) { return f(t, sg, kk); };
  if (!nyq_sigma && !nyq_k) return at(sigma, k);
  if (nyq_sigma && !nyq_k) return 0.5 * (at(sigma, k) + at(-sigma, k));
  if (!nyq_sigma && nyq_k) return 0.5 * (at(sigma, k) + at(sigma, -k));
  return 0.25 * (at(sigma, k) + at(-sigma, k) + at(sigma, -k) + at(-sigma, -k));
}

const SymbolTable::Sampler& part(const SymbolTable& a, int s) {
  auto it = a.shifts().find(s);
  if (it == a.shifts().end()) throw std::out_of_range("symbol table has no z-mode " + std::to_string(s));
  return it->second;
}

}  // namespace

cplx SymbolTable::sample(int s, int n, int m, int q) const { return symmetrised(part(*this, s), grid_, grid_.t(n), m, q); }

Eigen::MatrixXcd SymbolTable::samples(int s, int q) const {
  const auto& f = part(*this, s);
  const int M = grid_.lattice_size();
  Eigen::MatrixXcd S(grid_.nt, M);
  for (int n = 0; n < grid_.nt; ++n) {
    const double t = grid_.t(n);
    for (int m = 0; m < M; ++m) S(n, m) = symmetrised(f, grid_, t, m, q);
  }
  return S;
}

Eigen::MatrixXcd mellin_forward(const GridFunction& u) {
  const auto& g = u.grid();
  Eigen::MatrixXcd m = u.z_modes();  // nt x nz, columns contiguous
  dft_many(m.data(), g.nt, g.nz, false);
  return m * std::sqrt(g.h() * g.dz() / g.nt);
}

GridFunction mellin_inverse(const GridSpec& g, const Eigen::MatrixXcd& u_hat) {
  Eigen::MatrixXcd m = u_hat;
  dft_many(m.data(), g.nt, g.nz, true);
  m /= std::sqrt(g.h() * g.dz() * g.nt);
  return GridFunction::from_z_modes(g, m);
}

namespace {

// nt x nt left-quantised matrix from samples S (nt x lattice).
Eigen::MatrixXcd quantize_rows(const GridSpec& g, const Eigen::MatrixXcd& S) {
  const int nt = g.nt, M = g.lattice_size();
  Eigen::MatrixXcd K(nt, nt);
  std::vector<cplx> row(static_cast<std::size_t>(M));
  for (int n = 0; n < nt; ++n) {
    for (int m = 0; m < M; ++m) row[static_cast<std::size_t>(m)] = S(n, m);
    dft(row, true);
    auto kern = [&](int d) { return row[static_cast<std::size_t>(((d % M) + M) % M)] / static_cast<double>(M); };
    if (g.closure == Closure::Periodic) {
      for (int np = 0; np < nt; ++np) K(n, np) = kern(n - np);
    } else {
      for (int np = 0; np < nt; ++np) K(n, np) = kern(n - np) + kern(n + np + 1);
    }
  }
  return K;
}

}  // namespace

GridOperator op_quantize(const SymbolTable& a) {
  const GridSpec& g = a.grid();
  g.validate();
  std::vector<std::tuple<int, int, int>> jobs;  // (shift, input slot, output slot)
  for (const auto& [s, f] : a.shifts())
    for (int q = 0; q < g.nz; ++q) jobs.emplace_back(s, q, g.slot_of_mode(g.mode(q) + s));
  std::vector<Eigen::MatrixXcd> out(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const auto [s, q, qo] = jobs[i];
    out[i] = quantize_rows(g, a.samples(s, q));
  });
  GridOperator op(g);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto [s, q, qo] = jobs[i];
    op.add_to_block(qo, q, out[i]);
  }
  return op;
}

GridOperator quantize_symbol(const FormalSymbol& a, const GridSpec& g) {
  return op_quantize(SymbolTable::from_symbol(a, g));
}

GridFunction fourier_multiplier(const GridFunction& u, const std::function<cplx(double, double)>& f) {
  const GridSpec& g = u.grid();
  const int nt = g.nt, M = g.lattice_size();
  const SymbolTable::Sampler sampler = [&f](double, double sigma, double k) { return f(sigma, k); };
  Eigen::MatrixXcd modes = u.z_modes();
  std::vector<cplx> buf(static_cast<std::size_t>(M));
  for (int q = 0; q < g.nz; ++q) {
    for (int n = 0; n < nt; ++n) {
      buf[static_cast<std::size_t>(n)] = modes(n, q);
      if (g.closure == Closure::Reflection) buf[static_cast<std::size_t>(M - 1 - n)] = modes(n, q);
    }
    dft(buf, false);
    for (int m = 0; m < M; ++m) buf[static_cast<std::size_t>(m)] *= symmetrised(sampler, g, 0.0, m, q);
    dft(buf, true);
    for (int n = 0; n < nt; ++n) modes(n, q) = buf[static_cast<std::size_t>(n)] / static_cast<double>(M);
  }
  return GridFunction::from_z_modes(g, modes);
}

GridFunction apply_symbol(const FormalSymbol& a, const GridFunction& u) {
  const GridSpec& g = u.grid();
  std::map<std::pair<int, int>, GridFunction> multiplied;  // (alpha, j) -> F^{-1}[k^alpha sigma^j u_hat]
  GridFunction out(g);
  for (const auto& [e, c] : a.terms()) {
    auto it = multiplied.find({e.alpha, e.j});
    if (it == multiplied.end()) {
      const int alpha = e.alpha, j = e.j;
      it = multiplied
               .emplace(std::make_pair(alpha, j),
                        fourier_multiplier(u, [alpha, j](double sigma, double k) {
                          return cplx(ipow(k, alpha) * ipow(sigma, j));
                        }))
               .first;
    }
    const GridFunction& v = it->second;
    for (const auto& [key, cc] : c.terms()) {
      const cplx coef = cc.to_complex();
      for (int n = 0; n < g.nt; ++n) {
        const double w = std::exp((e.k - key.first) * g.t(n));
        for (int p = 0; p < g.nz; ++p) out(n, p) += coef * w * std::polar(1.0, key.second * g.z(p)) * v(n, p);
      }
    }
  }
  return out;
}

GridOperator numeric_adjoint(const GridOperator& A) { return A.adjoint(); }

GridOperator conjugate_weight_numeric(const GridOperator& A, double beta) {
  return A.sandwich(exp_weight(A.grid(), -beta), exp_weight(A.grid(), beta));
}

DecayReport residual_decay_report(const GridOperator& A) {
  const GridSpec& g = A.grid();
  const int nt = g.nt;
  Eigen::MatrixXd mag = Eigen::MatrixXd::Zero(nt, nt);
  for (const auto& [key, m] : A.blocks()) mag = mag.cwiseMax(m.cwiseAbs());

  DecayReport r;
  r.peak_magnitude = mag.maxCoeff();
  if (r.peak_magnitude == 0.0) {
    r.residual_like = true;
    r.fitted_exponent = -std::numeric_limits<double>::infinity();
    return r;
  }
  const double lo = std::log(2.0) + g.t(0), hi = std::log(2.0) + g.t(nt - 1);
  const int nbins = std::max(8, nt / 4);
  std::vector<double> bin_max(static_cast<std::size_t>(nbins), 0.0);
  for (int n = 0; n < nt; ++n)
    for (int np = 0; np < nt; ++np) {
      const double lr = std::log(std::exp(g.t(n)) + std::exp(g.t(np)));
      int b = static_cast<int>((lr - lo) / (hi - lo) * nbins);
      b = std::clamp(b, 0, nbins - 1);
      bin_max[static_cast<std::size_t>(b)] = std::max(bin_max[static_cast<std::size_t>(b)], mag(n, np));
    }
  const double floor = 1e-14 * r.peak_magnitude;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int b = nbins / 2; b < nbins; ++b) {
    const double v = bin_max[static_cast<std::size_t>(b)];
    if (b >= 3 * nbins / 4) r.tail_magnitude = std::max(r.tail_magnitude, v);
    if (v <= floor) continue;
    const double x = lo + (b + 0.5) * (hi - lo) / nbins, y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++r.points_fitted;
  }
  if (r.points_fitted < 3) {
    r.fitted_exponent = -std::numeric_limits<double>::infinity();
    r.residual_like = true;
    return r;
  }
  const double np = r.points_fitted;
  r.fitted_exponent = (np * sxy - sx * sy) / (np * sxx - sx * sx);
  r.residual_like = r.fitted_exponent < -8.0;
  return r;
}

}  // namespace conic_shubin
