#pragma once

#include <complex>
#include <map>
#include <utility>

#include <nlohmann/json_fwd.hpp>

#include "conic_shubin/rational.hpp"

namespace conic_shubin {

/// Finite sum sum_{m,kz} c_{m,kz} x^{-m} e^{i kz z} with exact complex rational c.
///
/// Keys are (m >= 0, kz); zero coefficients are never stored.
class CoeffElement {
public:
  using Key = std::pair<int, int>;  // (m, kz)
  using TermMap = std::map<Key, ComplexRational>;

  CoeffElement() = default;
  CoeffElement(const ComplexRational& c);
  CoeffElement(long c) : CoeffElement(ComplexRational(c)) {}
  CoeffElement(int c) : CoeffElement(ComplexRational(c)) {}

  /// c x^{-m} e^{i kz z}; throws std::invalid_argument for m < 0.
  static CoeffElement monomial(int m, int kz, const ComplexRational& c = ComplexRational(1));

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// True when the element is a constant (only the (0,0) key).
  bool is_constant() const;
  /// Coefficient of (m, kz), zero when absent.
  ComplexRational coefficient(int m, int kz) const;
  /// Largest kz magnitude present.
  int max_abs_mode() const;

  /// Adds c to the (m, kz) coefficient, dropping it when the sum vanishes.
  void accumulate(int m, int kz, const ComplexRational& c);

  CoeffElement& operator+=(const CoeffElement& o);
  CoeffElement& operator-=(const CoeffElement& o);
  CoeffElement& operator*=(const ComplexRational& s);

  friend CoeffElement operator+(CoeffElement a, const CoeffElement& b) { return a += b; }
  friend CoeffElement operator-(CoeffElement a, const CoeffElement& b) { return a -= b; }
  friend CoeffElement operator-(const CoeffElement& a) { return a * ComplexRational(-1); }
  friend CoeffElement operator*(CoeffElement a, const ComplexRational& s) { return a *= s; }
  friend CoeffElement operator*(const ComplexRational& s, CoeffElement a) { return a *= s; }
  friend CoeffElement operator*(const CoeffElement& a, const CoeffElement& b);
  friend bool operator==(const CoeffElement& a, const CoeffElement& b) { return a.terms_ == b.terms_; }

private:
  TermMap terms_;
};

CoeffElement ring_add(const CoeffElement& a, const CoeffElement& b);
CoeffElement ring_mul(const CoeffElement& a, const CoeffElement& b);

/// x D_x with D = -i d: multiplies the (m, kz) term by i m.
CoeffElement xDx(const CoeffElement& a);
/// D_z: multiplies the (m, kz) term by kz.
CoeffElement Dz(const CoeffElement& a);
/// Pointwise complex conjugate: conjugated coefficients, kz -> -kz.
CoeffElement conj(const CoeffElement& a);

/// Floating-point value at (x, z); throws std::domain_error for x <= 0.
std::complex<double> eval(const CoeffElement& a, double x, double z);
/// Limit x -> infinity, i.e. the m = 0 part evaluated at z.
std::complex<double> eval_at_infinity(const CoeffElement& a, double z);

/// JSON array of {"m","kz","re","im"} objects in key order.
nlohmann::json to_json(const CoeffElement& a);
/// Inverse of to_json; throws std::invalid_argument on malformed input.
CoeffElement coeff_from_json(const nlohmann::json& j);

}  // namespace conic_shubin
