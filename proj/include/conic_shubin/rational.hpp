#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace conic_shubin {

using Rational = mpq_class;

/// Parses "p", "-p", "p/q" or a finite decimal "1.25" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
/// Canonical text: "p" for integers, otherwise "p/q" in lowest terms.
std::string to_string(const Rational& r);

/// Exact complex number re + i*im over the rationals.
struct ComplexRational {
  Rational re;
  Rational im;

  ComplexRational() = default;
  ComplexRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }
  ComplexRational(long v) : re(v), im(0) {}
  ComplexRational(int v) : re(v), im(0) {}

  static ComplexRational i() { return {0, 1}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  ComplexRational conj() const { return {re, -im}; }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  ComplexRational& operator+=(const ComplexRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ComplexRational& operator-=(const ComplexRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ComplexRational& operator*=(const ComplexRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  /// Throws std::domain_error on division by zero.
  ComplexRational& operator/=(const ComplexRational& o);

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  /// Lexicographic on (re, im); used only to key ordered containers.
  friend bool operator<(const ComplexRational& a, const ComplexRational& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  }

  ComplexRational pow(unsigned n) const;
};

/// n choose r as an exact rational.
Rational binomial(unsigned n, unsigned r);

std::string to_string(const ComplexRational& c);

}  // namespace conic_shubin
