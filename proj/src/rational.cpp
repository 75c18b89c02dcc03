#include "conic_shubin/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace conic_shubin {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw std::invalid_argument("malformed rational: " + s);
    bool neg = false;
    std::string digits = s;
    if (digits[0] == '-' || digits[0] == '+') {
      neg = digits[0] == '-';
      digits.erase(0, 1);
    }
    const auto d = digits.find('.');
    const std::string whole = digits.substr(0, d);
    const std::string frac = digits.substr(d + 1);
    if ((whole.empty() && frac.empty()) || frac.find_first_not_of("0123456789") != std::string::npos ||
        whole.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("malformed decimal: " + s);
    }
    mpz_class num(whole.empty() && frac.empty() ? "0" : (whole + frac).c_str(), 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rational r(num, den);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  }
  Rational r;
  try {
    if (s[0] == '+') s.erase(0, 1);
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational: " + s);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational: " + std::string(text));
  }
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  Rational c(r);
  c.canonicalize();
  return c.get_str();
}

ComplexRational& ComplexRational::operator/=(const ComplexRational& o) {
  const Rational n = o.re * o.re + o.im * o.im;
  if (n == 0) throw std::domain_error("division by zero in ComplexRational");
  Rational r = (re * o.re + im * o.im) / n;
  Rational i = (im * o.re - re * o.im) / n;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

ComplexRational ComplexRational::pow(unsigned n) const {
  ComplexRational result(1);
  ComplexRational base = *this;
  while (n > 0) {
    if (n & 1u) result *= base;
    base *= base;
    n >>= 1u;
  }
  return result;
}

Rational binomial(unsigned n, unsigned r) {
  if (r > n) return 0;
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, r);
  return Rational(b);
}

std::string to_string(const ComplexRational& c) {
  if (c.im == 0) return to_string(c.re);
  if (c.re == 0) return to_string(c.im) + "i";
  return to_string(c.re) + (c.im < 0 ? "" : "+") + to_string(c.im) + "i";
}

}  // namespace conic_shubin
