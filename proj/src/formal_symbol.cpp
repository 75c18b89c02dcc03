#include "conic_shubin/formal_symbol.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace conic_shubin {

FormalSymbol FormalSymbol::constant(const AnisotropyVector& l, const CoeffElement& c) {
  return monomial(l, 0, 0, 0, c);
}

FormalSymbol FormalSymbol::monomial(const AnisotropyVector& l, int alpha, int j, int k, const CoeffElement& c) {
  FormalSymbol a(l);
  a.accumulate(alpha, j, k, c);
  return a;
}

CoeffElement FormalSymbol::coefficient(int alpha, int j, int k) const {
  auto it = terms_.find({alpha, j, k});
  return it == terms_.end() ? CoeffElement() : it->second;
}

void FormalSymbol::accumulate(int alpha, int j, int k, const CoeffElement& c) {
  if (alpha < 0 || j < 0 || k < 0) throw std::invalid_argument("symbol exponents must be nonnegative");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(Exponents{alpha, j, k}, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Exponents FormalSymbol::max_degrees() const {
  Exponents e;
  for (const auto& [ex, c] : terms_) {
    e.alpha = std::max(e.alpha, ex.alpha);
    e.j = std::max(e.j, ex.j);
    e.k = std::max(e.k, ex.k);
  }
  return e;
}

bool FormalSymbol::z_independent() const { return max_abs_mode() == 0; }

int FormalSymbol::max_abs_mode() const {
  int r = 0;
  for (const auto& [ex, c] : terms_) r = std::max(r, c.max_abs_mode());
  return r;
}

void FormalSymbol::require_same_aniso(const FormalSymbol& o) const {
  if (!(l_ == o.l_)) throw std::invalid_argument("symbols carry different anisotropy vectors");
}

FormalSymbol& FormalSymbol::operator+=(const FormalSymbol& o) {
  require_same_aniso(o);
  for (const auto& [e, c] : o.terms_) accumulate(e.alpha, e.j, e.k, c);
  return *this;
}

FormalSymbol& FormalSymbol::operator-=(const FormalSymbol& o) {
  require_same_aniso(o);
  for (const auto& [e, c] : o.terms_) accumulate(e.alpha, e.j, e.k, -c);
  return *this;
}

FormalSymbol& FormalSymbol::operator*=(const ComplexRational& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

int order(const FormalSymbol& a) {
  int mu = kOrderOfZero;
  for (const auto& [e, c] : a.terms()) mu = std::max(mu, a.aniso().weight(e.alpha, e.j, e.k));
  return mu;
}

SymbolHomPart sym_e(const FormalSymbol& a) {
  if (a.is_zero()) throw std::invalid_argument("extended principal symbol of the zero symbol");
  const int mu = order(a);
  FormalSymbol top(a.aniso());
  for (const auto& [e, c] : a.terms())
    if (a.aniso().weight(e.alpha, e.j, e.k) == mu) top.accumulate(e.alpha, e.j, e.k, c);
  return {top, mu};
}

SymbolHomPart b_sym_psi(const FormalSymbol& a) {
  if (a.is_zero()) return {FormalSymbol(a.aniso()), kOrderOfZero};
  auto h = sym_e(a);
  FormalSymbol r(a.aniso());
  for (const auto& [e, c] : h.part.terms())
    if (e.k == 0) r.accumulate(e.alpha, e.j, 0, c);
  return {r, h.mu};
}

namespace {

std::complex<double> ipow(std::complex<double> b, int n) {
  std::complex<double> r = 1.0;
  while (n > 0) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

template <class CoeffEval>
std::complex<double> eval_with(const FormalSymbol& a, CoeffEval ce, double zeta, double sigma, double tau) {
  std::complex<double> sum = 0.0;
  for (const auto& [e, c] : a.terms())
    sum += ce(c) * ipow(zeta, e.alpha) * ipow(sigma, e.j) * ipow(tau, e.k);
  return sum;
}

}  // namespace

std::complex<double> eval_symbol(const FormalSymbol& a, double x, double z, double zeta, double sigma,
                                 double tau) {
  return eval_with(a, [&](const CoeffElement& c) { return eval(c, x, z); }, zeta, sigma, tau);
}

std::complex<double> eval_symbol_at_infinity(const FormalSymbol& a, double z, double zeta, double sigma,
                                             double tau) {
  return eval_with(a, [&](const CoeffElement& c) { return eval_at_infinity(c, z); }, zeta, sigma, tau);
}

std::complex<double> eval_sym_psi(const FormalSymbol& a, double x, double z, double zeta, double xi) {
  if (!(x > 0.0)) throw std::domain_error("eval_sym_psi requires x > 0");
  return eval_symbol(b_sym_psi(a).part, x, z, zeta, x * xi, 0.0);
}

FormalSymbol sharp(const FormalSymbol& a1, const FormalSymbol& a2) {
  if (!(a1.aniso() == a2.aniso())) throw std::invalid_argument("sharp: anisotropy mismatch");
  FormalSymbol r(a1.aniso());
  for (const auto& [e2, c2] : a2.terms()) {
    // (xD_x - i k2)^r c2 for r up to the largest sigma degree of a1
    const int rmax = a1.max_degrees().j;
    const int qmax = a1.max_degrees().alpha;
    const ComplexRational shift(0, -e2.k);
    std::vector<std::vector<CoeffElement>> d(rmax + 1, std::vector<CoeffElement>(qmax + 1));
    d[0][0] = c2;
    for (int rr = 1; rr <= rmax; ++rr) d[rr][0] = xDx(d[rr - 1][0]) + d[rr - 1][0] * shift;
    for (int rr = 0; rr <= rmax; ++rr)
      for (int q = 1; q <= qmax; ++q) d[rr][q] = Dz(d[rr][q - 1]);

    for (const auto& [e1, c1] : a1.terms()) {
      for (int rr = 0; rr <= e1.j; ++rr) {
        for (int q = 0; q <= e1.alpha; ++q) {
          if (d[rr][q].is_zero()) continue;
          const ComplexRational b(binomial(e1.j, rr) * binomial(e1.alpha, q));
          r.accumulate(e1.alpha - q + e2.alpha, e1.j - rr + e2.j, e1.k + e2.k, c1 * d[rr][q] * b);
        }
      }
    }
  }
  return r;
}

FormalSymbol sharp_power(const FormalSymbol& a, unsigned n) {
  FormalSymbol r = FormalSymbol::constant(a.aniso(), CoeffElement(1));
  for (unsigned i = 0; i < n; ++i) r = sharp(r, a);
  return r;
}

FormalSymbol star(const FormalSymbol& a) {
  // (c x^k D_z^a (xD_x)^j)^* = (xD_x)^j D_z^a x^k conj(c), normal ordered.
  FormalSymbol r(a.aniso());
  for (const auto& [e, c] : a.terms()) {
    const ComplexRational shift(0, -e.k);
    CoeffElement dr = conj(c);
    for (int rr = 0; rr <= e.j; ++rr) {
      CoeffElement dq = dr;
      for (int q = 0; q <= e.alpha; ++q) {
        if (dq.is_zero()) break;
        const ComplexRational b(binomial(e.j, rr) * binomial(e.alpha, q));
        r.accumulate(e.alpha - q, e.j - rr, e.k, dq * b);
        dq = Dz(dq);
      }
      dr = xDx(dr) + dr * shift;
    }
  }
  return r;
}

FormalSymbol conjugate_weight(const FormalSymbol& a, const Rational& beta) {
  FormalSymbol r(a.aniso());
  const ComplexRational shift(0, -beta);
  for (const auto& [e, c] : a.terms()) {
    ComplexRational p(1);
    for (int rr = 0; rr <= e.j; ++rr) {
      r.accumulate(e.alpha, e.j - rr, e.k, c * (p * ComplexRational(binomial(e.j, rr))));
      p *= shift;
    }
  }
  return r;
}

FormalSymbol taylor_tau(const FormalSymbol& a, int j) {
  FormalSymbol r(a.aniso());
  for (const auto& [e, c] : a.terms())
    if (e.k == j) r.accumulate(e.alpha, e.j, 0, c);
  return r;
}

FormalSymbol pointwise_product(const FormalSymbol& a1, const FormalSymbol& a2) {
  if (!(a1.aniso() == a2.aniso())) throw std::invalid_argument("product: anisotropy mismatch");
  FormalSymbol r(a1.aniso());
  for (const auto& [e1, c1] : a1.terms())
    for (const auto& [e2, c2] : a2.terms()) r.accumulate(e1.alpha + e2.alpha, e1.j + e2.j, e1.k + e2.k, c1 * c2);
  return r;
}

FormalSymbol conj(const FormalSymbol& a) {
  FormalSymbol r(a.aniso());
  for (const auto& [e, c] : a.terms()) r.accumulate(e.alpha, e.j, e.k, conj(c));
  return r;
}

namespace {

void add_to(MonomialSum& out, const TestMonomial& m, const ComplexRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = out.try_emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) out.erase(it);
}

void apply_into(MonomialSum& out, const FormalSymbol& a, const TestMonomial& u, const ComplexRational& weight) {
  const ComplexRational eig_sigma = ComplexRational(0, -1) * u.s;  // xD_x x^s = -i s x^s
  const ComplexRational eig_zeta(u.q);
  for (const auto& [e, c] : a.terms()) {
    const ComplexRational factor = weight * eig_zeta.pow(e.alpha) * eig_sigma.pow(e.j);
    if (factor.is_zero()) continue;
    for (const auto& [key, cc] : c.terms()) {
      TestMonomial v{u.s + ComplexRational(e.k - key.first), u.q + key.second};
      add_to(out, v, factor * cc);
    }
  }
}

}  // namespace

MonomialSum apply(const FormalSymbol& a, const TestMonomial& u) {
  MonomialSum out;
  apply_into(out, a, u, ComplexRational(1));
  return out;
}

MonomialSum apply(const FormalSymbol& a, const MonomialSum& u) {
  MonomialSum out;
  for (const auto& [m, c] : u) apply_into(out, a, m, c);
  return out;
}

}  // namespace conic_shubin
