#pragma once

#include <complex>
#include <limits>
#include <map>
#include <tuple>
#include <utility>

#include "conic_shubin/aniso.hpp"
#include "conic_shubin/coeff_ring.hpp"

namespace conic_shubin {

/// Exponent triple (alpha, j, k) of zeta^alpha sigma^j tau^k.
struct Exponents {
  int alpha = 0;
  int j = 0;
  int k = 0;
  friend auto operator<=>(const Exponents&, const Exponents&) = default;
};

/// Order reported for the empty (zero) symbol.
inline constexpr int kOrderOfZero = std::numeric_limits<int>::min();

/// Polynomial in (zeta, sigma, tau) over CoeffElement.
///
/// The term c(x,z) zeta^alpha sigma^j tau^k stands for the operator
/// c(x,z) x^k D_z^alpha (xD_x)^j. No zero coefficient is stored.
class FormalSymbol {
public:
  using TermMap = std::map<Exponents, CoeffElement>;

  explicit FormalSymbol(AnisotropyVector l) : l_(l) {}

  static FormalSymbol constant(const AnisotropyVector& l, const CoeffElement& c);
  static FormalSymbol monomial(const AnisotropyVector& l, int alpha, int j, int k,
                               const CoeffElement& c = CoeffElement(1));
  static FormalSymbol zeta(const AnisotropyVector& l) { return monomial(l, 1, 0, 0); }
  static FormalSymbol sigma(const AnisotropyVector& l) { return monomial(l, 0, 1, 0); }
  static FormalSymbol tau(const AnisotropyVector& l) { return monomial(l, 0, 0, 1); }

  const AnisotropyVector& aniso() const { return l_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Coefficient of zeta^alpha sigma^j tau^k (zero when absent).
  CoeffElement coefficient(int alpha, int j, int k) const;

  /// Throws std::invalid_argument for negative exponents.
  void accumulate(int alpha, int j, int k, const CoeffElement& c);

  /// Max exponents over all terms.
  Exponents max_degrees() const;
  /// True when every coefficient is independent of z.
  bool z_independent() const;
  /// Largest |kz| appearing in any coefficient.
  int max_abs_mode() const;

  FormalSymbol& operator+=(const FormalSymbol& o);
  FormalSymbol& operator-=(const FormalSymbol& o);
  FormalSymbol& operator*=(const ComplexRational& s);

  friend FormalSymbol operator+(FormalSymbol a, const FormalSymbol& b) { return a += b; }
  friend FormalSymbol operator-(FormalSymbol a, const FormalSymbol& b) { return a -= b; }
  friend FormalSymbol operator*(FormalSymbol a, const ComplexRational& s) { return a *= s; }
  friend FormalSymbol operator*(const ComplexRational& s, FormalSymbol a) { return a *= s; }
  friend bool operator==(const FormalSymbol& a, const FormalSymbol& b) {
    return a.l_ == b.l_ && a.terms_ == b.terms_;
  }

private:
  void require_same_aniso(const FormalSymbol& o) const;

  AnisotropyVector l_;
  TermMap terms_;
};

/// Anisotropic homogeneous part of order mu.
struct SymbolHomPart {
  FormalSymbol part;
  int mu;
};

/// max l1 alpha + l2 j + l3 k over terms; kOrderOfZero for the empty symbol.
int order(const FormalSymbol& a);

/// Top-order terms. Throws std::invalid_argument for the empty symbol.
SymbolHomPart sym_e(const FormalSymbol& a);
/// sym_e restricted to tau = 0 (may be empty); mu is the order of a.
SymbolHomPart b_sym_psi(const FormalSymbol& a);
/// b_sym_psi at sigma = x*xi with coefficients evaluated at (x, z).
std::complex<double> eval_sym_psi(const FormalSymbol& a, double x, double z, double zeta, double xi);

/// Numeric value of a at (x, z, zeta, sigma, tau). x > 0.
std::complex<double> eval_symbol(const FormalSymbol& a, double x, double z, double zeta, double sigma,
                                 double tau);
/// Same with coefficients replaced by their x -> infinity limit.
std::complex<double> eval_symbol_at_infinity(const FormalSymbol& a, double z, double zeta, double sigma,
                                             double tau);

/// Composition symbol: op(sharp(a1, a2)) = op(a1) op(a2), exact.
/// Throws std::invalid_argument on anisotropy mismatch.
FormalSymbol sharp(const FormalSymbol& a1, const FormalSymbol& a2);
/// n-fold sharp power; n = 0 gives the identity symbol.
FormalSymbol sharp_power(const FormalSymbol& a, unsigned n);
/// Formal adjoint symbol with respect to L^2(dx/x dz), exact.
FormalSymbol star(const FormalSymbol& a);
/// Substitution sigma -> sigma - i beta, the symbol of x^{-beta} op(a) x^{beta}.
FormalSymbol conjugate_weight(const FormalSymbol& a, const Rational& beta);
/// tau^j slice, returned with tau removed.
FormalSymbol taylor_tau(const FormalSymbol& a, int j);
/// Commutative product of symbols (coefficients multiply pointwise).
FormalSymbol pointwise_product(const FormalSymbol& a1, const FormalSymbol& a2);
/// Coefficient-wise complex conjugate.
FormalSymbol conj(const FormalSymbol& a);

/// x^s e^{i q z} with exact complex rational s.
struct TestMonomial {
  ComplexRational s;
  int q = 0;
  friend bool operator<(const TestMonomial& a, const TestMonomial& b) {
    if (a.q != b.q) return a.q < b.q;
    return a.s < b.s;
  }
  friend bool operator==(const TestMonomial& a, const TestMonomial& b) { return a.q == b.q && a.s == b.s; }
};

/// Finite linear combination of test monomials, zero coefficients dropped.
using MonomialSum = std::map<TestMonomial, ComplexRational>;

/// Exact action of op(a) on x^s e^{iqz}.
MonomialSum apply(const FormalSymbol& a, const TestMonomial& u);
/// Exact action of op(a) on a combination.
MonomialSum apply(const FormalSymbol& a, const MonomialSum& u);

}  // namespace conic_shubin
