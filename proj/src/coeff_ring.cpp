#include "conic_shubin/coeff_ring.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace conic_shubin {

CoeffElement::CoeffElement(const ComplexRational& c) {
  if (!c.is_zero()) terms_.emplace(Key{0, 0}, c);
}

CoeffElement CoeffElement::monomial(int m, int kz, const ComplexRational& c) {
  if (m < 0) throw std::invalid_argument("coefficient ring admits only x^{-m} with m >= 0");
  CoeffElement e;
  e.accumulate(m, kz, c);
  return e;
}

bool CoeffElement::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0});
}

ComplexRational CoeffElement::coefficient(int m, int kz) const {
  auto it = terms_.find({m, kz});
  return it == terms_.end() ? ComplexRational() : it->second;
}

int CoeffElement::max_abs_mode() const {
  int r = 0;
  for (const auto& [key, c] : terms_) r = std::max(r, std::abs(key.second));
  return r;
}

void CoeffElement::accumulate(int m, int kz, const ComplexRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(Key{m, kz}, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

CoeffElement& CoeffElement::operator+=(const CoeffElement& o) {
  for (const auto& [key, c] : o.terms_) accumulate(key.first, key.second, c);
  return *this;
}

CoeffElement& CoeffElement::operator-=(const CoeffElement& o) {
  for (const auto& [key, c] : o.terms_) accumulate(key.first, key.second, -c);
  return *this;
}

CoeffElement& CoeffElement::operator*=(const ComplexRational& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, c] : terms_) c *= s;
  return *this;
}

CoeffElement operator*(const CoeffElement& a, const CoeffElement& b) {
  CoeffElement r;
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) r.accumulate(ka.first + kb.first, ka.second + kb.second, ca * cb);
  return r;
}

CoeffElement ring_add(const CoeffElement& a, const CoeffElement& b) { return a + b; }
CoeffElement ring_mul(const CoeffElement& a, const CoeffElement& b) { return a * b; }

CoeffElement xDx(const CoeffElement& a) {
  CoeffElement r;
  for (const auto& [key, c] : a.terms()) r.accumulate(key.first, key.second, c * ComplexRational(0, key.first));
  return r;
}

CoeffElement Dz(const CoeffElement& a) {
  CoeffElement r;
  for (const auto& [key, c] : a.terms()) r.accumulate(key.first, key.second, c * ComplexRational(key.second));
  return r;
}

CoeffElement conj(const CoeffElement& a) {
  CoeffElement r;
  for (const auto& [key, c] : a.terms()) r.accumulate(key.first, -key.second, c.conj());
  return r;
}

std::complex<double> eval(const CoeffElement& a, double x, double z) {
  if (!(x > 0.0)) throw std::domain_error("coefficient evaluation requires x > 0");
  std::complex<double> sum = 0.0;
  for (const auto& [key, c] : a.terms()) {
    const double xm = std::pow(x, -key.first);
    sum += c.to_complex() * xm * std::polar(1.0, key.second * z);
  }
  return sum;
}

std::complex<double> eval_at_infinity(const CoeffElement& a, double z) {
  std::complex<double> sum = 0.0;
  for (const auto& [key, c] : a.terms())
    if (key.first == 0) sum += c.to_complex() * std::polar(1.0, key.second * z);
  return sum;
}

nlohmann::json to_json(const CoeffElement& a) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [key, c] : a.terms()) {
    arr.push_back({{"m", key.first}, {"kz", key.second}, {"re", to_string(c.re)}, {"im", to_string(c.im)}});
  }
  return arr;
}

namespace {

Rational rational_field(const nlohmann::json& t, const char* name) {
  if (!t.contains(name)) return 0;
  const auto& v = t.at(name);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw std::invalid_argument(std::string("coefficient field '") + name + "' must be a rational string");
}

}  // namespace

CoeffElement coeff_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("coefficient must be a JSON array of terms");
  CoeffElement r;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("m") || !t.contains("kz"))
      throw std::invalid_argument("coefficient term needs integer fields 'm' and 'kz'");
    if (!t.at("m").is_number_integer() || !t.at("kz").is_number_integer())
      throw std::invalid_argument("coefficient fields 'm' and 'kz' must be integers");
    const int m = t.at("m").get<int>();
    if (m < 0) throw std::invalid_argument("coefficient term has m < 0 (positive x powers belong to tau)");
    r.accumulate(m, t.at("kz").get<int>(), ComplexRational(rational_field(t, "re"), rational_field(t, "im")));
  }
  return r;
}

}  // namespace conic_shubin
