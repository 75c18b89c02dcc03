#include "conic_shubin/sobolev.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "conic_shubin/quantize.hpp"

namespace conic_shubin {

OrderReduction::OrderReduction(double s, int l1, int l2, double lambda0) : s_(s), w_(l1, l2, l1), lambda0_(lambda0) {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("order reduction needs lambda0 > 0");
}

OrderReduction::OrderReduction(double s, const AnisotropyVector& l, double lambda0)
    : OrderReduction(s, l.l1(), l.l2(), lambda0) {}

double OrderReduction::multiplier(double sigma, double zeta) const {
  return std::pow(aniso_bracket(zeta, sigma, lambda0_, w_), s_);
}

GridFunction OrderReduction::apply(const GridFunction& u) const {
  return fourier_multiplier(u, [this](double sigma, double k) { return cplx(multiplier(sigma, k)); });
}

GridFunction OrderReduction::apply_inverse(const GridFunction& u) const {
  return fourier_multiplier(u, [this](double sigma, double k) { return cplx(1.0 / multiplier(sigma, k)); });
}

GridOperator OrderReduction::as_operator(const GridSpec& g) const {
  return op_quantize(SymbolTable::from_function(g, [this](double, double sigma, double k) {
    return cplx(multiplier(sigma, k));
  }));
}

namespace {

GridFunction weighted(const GridFunction& u, double beta) {
  GridFunction v = u;
  v.scale_t(exp_weight(u.grid(), beta));
  return v;
}

}  // namespace

double sobolev_norm(const GridFunction& u, const SobolevParams& p, const AnisotropyVector& l, double lambda0) {
  return OrderReduction(p.s, l, lambda0).apply(weighted(u, -p.alpha)).norm();
}

double isotropic_sobolev_norm(const GridFunction& u, double s, double alpha, double lambda0) {
  return OrderReduction(s, 1, 1, lambda0).apply(weighted(u, -alpha)).norm();
}

std::vector<GridFunction> random_band_limited(const GridSpec& g, int count, unsigned long seed) {
  std::mt19937_64 rng(seed);
  const double L = g.length();
  const double sigma_max = 0.25 * std::numbers::pi / g.h();
  std::uniform_real_distribution<double> centre(g.t0 + 0.3 * L, g.t1 - 0.3 * L), width(0.04 * L, 0.1 * L),
      freq(-sigma_max, sigma_max), unit(-1.0, 1.0);
  std::uniform_int_distribution<int> kz(-g.nz / 4, g.nz / 4), packets(1, 4);
  const auto taper = interior_taper(g);
  std::vector<GridFunction> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) {
    GridFunction u(g);
    const int np = packets(rng);
    for (int i = 0; i < np; ++i) {
      const double t_c = centre(rng), w = width(rng), s = freq(rng);
      const int k = kz(rng);
      const cplx amp(unit(rng), unit(rng));
      for (int n = 0; n < g.nt; ++n) {
        const double t = g.t(n), env = std::exp(-0.5 * (t - t_c) * (t - t_c) / (w * w)) * taper[std::size_t(n)];
        for (int p = 0; p < g.nz; ++p) u(n, p) += amp * env * std::polar(1.0, s * t + k * g.z(p));
      }
    }
    out.push_back(std::move(u));
  }
  return out;
}

EmbeddingReport embedding_check(const AnisotropyVector& l, double s, const GridSpec& g, int trials,
                                unsigned long seed, double lambda0) {
  EmbeddingReport rep;
  rep.s = s;
  rep.trials = trials;
  const double L = l.l1() + l.l2();
  const double a = std::max(s * L, s / L), b = std::min(s * L, s / L);
  const OrderReduction r_aniso(s, l, lambda0), r_a(a, 1, 1, lambda0), r_b(b, 1, 1, lambda0);

  for (const auto& u : random_band_limited(g, trials, seed)) {
    const double n_aniso = r_aniso.apply(u).norm();
    rep.empirical_upper = std::max(rep.empirical_upper, n_aniso / r_a.apply(u).norm());
    rep.empirical_lower = std::max(rep.empirical_lower, r_b.apply(u).norm() / n_aniso);
  }
  auto ratios = [&](double sigma, double zeta, double& up, double& lo) {
    const double m = r_aniso.multiplier(sigma, zeta);
    up = std::max(up, m / r_a.multiplier(sigma, zeta));
    lo = std::max(lo, r_b.multiplier(sigma, zeta) / m);
  };
  for (int m = 0; m < g.lattice_size(); ++m)
    for (int q = 0; q < g.nz; ++q) ratios(g.sigma(m), g.mode(q), rep.lattice_upper, rep.lattice_lower);

  std::vector<double> axis{0.0};
  for (int i = 0; i <= 800; ++i) axis.push_back(std::pow(10.0, -3.0 + 15.0 * i / 800.0));
  std::array<double, 2> arg_up{}, arg_lo{};
  for (double sg : axis)
    for (double zt : axis) {
      const double up = rep.continuum_upper, lo = rep.continuum_lower;
      ratios(sg, zt, rep.continuum_upper, rep.continuum_lower);
      if (rep.continuum_upper > up) arg_up = {sg, zt};
      if (rep.continuum_lower > lo) arg_lo = {sg, zt};
    }
  // local search from the best sample; zero coordinates stay on their axis
  auto refine = [&](std::array<double, 2> p, bool upper) {
    auto value = [&](const std::array<double, 2>& q) {
      double up = 0.0, lo = 0.0;
      ratios(q[0], q[1], up, lo);
      return upper ? up : lo;
    };
    double best = value(p);
    for (double step = 0.05; step > 1e-10;) {
      bool improved = false;
      for (int axis_i = 0; axis_i < 2; ++axis_i)
        for (double f : {1.0 + step, 1.0 / (1.0 + step)}) {
          auto q = p;
          q[std::size_t(axis_i)] *= f;
          const double v = value(q);
          if (v > best) best = v, p = q, improved = true;
        }
      if (!improved) step *= 0.5;
    }
    return best;
  };
  rep.continuum_upper = std::max(rep.continuum_upper, refine(arg_up, true));
  rep.continuum_lower = std::max(rep.continuum_lower, refine(arg_lo, false));

  const double sig_hi = g.sigma(g.lattice_size() / 2 - 1), sig_lo = 0.25 * sig_hi;
  rep.sigma_exponent = std::log(r_aniso.multiplier(sig_hi, 0) / r_aniso.multiplier(sig_lo, 0)) / std::log(4.0);
  const double zt_hi = g.nz / 2 - 1, zt_lo = 0.25 * zt_hi;
  rep.zeta_exponent = std::log(r_aniso.multiplier(0, zt_hi) / r_aniso.multiplier(0, zt_lo)) / std::log(zt_hi / zt_lo);

  const double slack = 1.0 + 1e-9;
  rep.holds = std::isfinite(rep.continuum_upper) && std::isfinite(rep.continuum_lower) &&
              rep.empirical_upper <= rep.lattice_upper * slack && rep.empirical_lower <= rep.lattice_lower * slack &&
              rep.lattice_upper <= rep.continuum_upper * slack && rep.lattice_lower <= rep.continuum_lower * slack;
  return rep;
}

double mapping_bound(const GridOperator& A, double mu, double gamma, const SobolevParams& p,
                     const AnisotropyVector& l, double lambda0, int max_iterations, double rel_tol) {
  const GridSpec& g = A.grid();
  const OrderReduction r_src(p.s, l, lambda0), r_dst(p.s - mu, l, lambda0);
  const GridOperator Astar = A.adjoint();
  auto T = [&](const GridFunction& v) {
    GridFunction w = r_src.apply_inverse(v);
    w.scale_t(exp_weight(g, p.alpha));
    w = A.apply(w);
    w.scale_t(exp_weight(g, -(p.alpha + gamma)));
    return r_dst.apply(w);
  };
  auto Tstar = [&](const GridFunction& v) {
    GridFunction w = r_dst.apply(v);
    w.scale_t(exp_weight(g, -(p.alpha + gamma)));
    w = Astar.apply(w);
    w.scale_t(exp_weight(g, p.alpha));
    return r_src.apply_inverse(w);
  };
  GridFunction v = random_band_limited(g, 1, 12345).front();
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd;
  for (int n = 0; n < g.nt; ++n)
    for (int q = 0; q < g.nz; ++q) v(n, q) += 1e-3 * cplx(nd(rng), nd(rng));
  v *= 1.0 / v.norm();
  double estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    GridFunction w = Tstar(T(v));
    const double lam = w.norm();
    if (lam == 0.0) return 0.0;
    const double next = std::sqrt(lam);
    v = (1.0 / lam) * w;
    if (it > 5 && std::abs(next - estimate) <= rel_tol * next) return next;
    estimate = next;
  }
  return estimate;
}

std::vector<double> embedding_singular_values(const GridSpec& g, double s, double s2, const AnisotropyVector& l,
                                              double lambda0) {
  const OrderReduction r1(s, l, lambda0), r2(s2, l, lambda0);
  std::vector<double> out;
  // periodic: every slot is a mode; reflection: slots 0..nt-1 are the cosine modes
  for (int m = 0; m < g.nt; ++m) {
    const double sigma = g.sigma(m);
    for (int q = 0; q < g.nz; ++q) out.push_back(r2.multiplier(sigma, g.mode(q)) / r1.multiplier(sigma, g.mode(q)));
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace conic_shubin
