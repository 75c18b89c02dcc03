#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "conic_shubin/coeff_ring.hpp"
#include "oracles/numeric_diff.hpp"

using namespace conic_shubin;
using cd = std::complex<double>;

namespace {

CoeffElement random_element(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> m(0, 3), kz(-2, 2), num(-9, 9), den(1, 7), count(1, 4);
  CoeffElement a;
  const int n = count(rng);
  for (int i = 0; i < n; ++i)
    a.accumulate(m(rng), kz(rng), ComplexRational(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))));
  return a;
}

bool close(cd a, cd b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("ring examples") {
  const CoeffElement one(1), xm1 = CoeffElement::monomial(1, 0);
  std::mt19937_64 rng(1);
  const auto a = random_element(rng);
  CHECK(ring_mul(one, a) == a);
  CHECK(ring_mul(xm1, xm1) == CoeffElement::monomial(2, 0));
  const auto cosz = ring_add(CoeffElement::monomial(0, 1), CoeffElement::monomial(0, -1));
  for (double z : {0.0, 0.7, 2.0, -1.3}) CHECK(std::abs(eval(cosz, 1.5, z) - 2.0 * std::cos(z)) < 1e-15);
  CHECK_THROWS_AS(CoeffElement::monomial(-1, 0), std::invalid_argument);
}

TEST_CASE("canonical form drops zero terms") {
  CoeffElement a = CoeffElement::monomial(1, 2, ComplexRational(3));
  a -= CoeffElement::monomial(1, 2, ComplexRational(3));
  CHECK(a.is_zero());
  CHECK(a.terms().empty());
  CHECK((CoeffElement(5) * ComplexRational(0)).is_zero());
}

TEST_CASE("derivations against numeric differentiation") {
  const CoeffElement one(1);
  CHECK(xDx(one).is_zero());
  CHECK(Dz(one).is_zero());
  CHECK(Dz(CoeffElement::monomial(0, 1)) == CoeffElement::monomial(0, 1));

  const CoeffElement xm1 = CoeffElement::monomial(1, 0);
  CHECK(xDx(xm1) == CoeffElement::monomial(1, 0, ComplexRational::i()));
  const CoeffElement b = CoeffElement::monomial(3, 2);
  CHECK(xDx(b) == CoeffElement::monomial(3, 2, ComplexRational(0, 3)));
  const CoeffElement c = CoeffElement::monomial(1, -2);
  CHECK(Dz(c) == CoeffElement::monomial(1, -2, ComplexRational(-2)));

  // xD_x = -i x d/dx, D_z = -i d/dz evaluated numerically at x = 2
  const cd mi(0, -1);
  for (const auto& e : {xm1, b}) {
    const double x = 2.0, z = 0.4;
    const cd num = mi * x * oracle::derivative([&](double xx) { return eval(e, xx, z); }, x);
    CHECK(close(eval(xDx(e), x, z), num, 1e-10));
  }
  {
    const double x = 2.0, z = 0.4;
    const cd num = mi * oracle::derivative([&](double zz) { return eval(c, x, zz); }, z);
    CHECK(close(eval(Dz(c), x, z), num, 1e-10));
  }
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto a = random_element(rng);
    const double x = 1.3, z = 0.9;
    CHECK(close(eval(xDx(a), x, z), mi * x * oracle::derivative([&](double xx) { return eval(a, xx, z); }, x), 1e-9));
    CHECK(close(eval(Dz(a), x, z), mi * oracle::derivative([&](double zz) { return eval(a, x, zz); }, z), 1e-9));
  }
}

TEST_CASE("conjugation") {
  CHECK(conj(CoeffElement(ComplexRational::i())) == CoeffElement(ComplexRational(0, -1)));
  CHECK(conj(CoeffElement::monomial(0, 1)) == CoeffElement::monomial(0, -1));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_element(rng);
    CHECK(conj(conj(a)) == a);
    CHECK(close(eval(conj(a), 1.7, 0.3), std::conj(eval(a, 1.7, 0.3)), 1e-14));
  }
}

TEST_CASE("eval examples and domain") {
  CHECK(eval(CoeffElement(1), 3.0, 1.0) == cd(1.0));
  CHECK(eval(CoeffElement::monomial(2, 0), 2.0, 0.0) == cd(0.25));
  CHECK(std::abs(eval(CoeffElement::monomial(0, 1), 1.0, std::numbers::pi) - cd(-1.0)) < 1e-15);
  CHECK_THROWS_AS(eval(CoeffElement(1), 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(eval(CoeffElement(1), -1.0, 0.0), std::domain_error);
}

TEST_CASE("ring axioms, Leibniz rules and homomorphism on random triples") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ux(0.5, 4.0), uz(0.0, 6.28);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_element(rng), b = random_element(rng), c = random_element(rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK(a + b == b + a);
    CHECK(xDx(a * b) == xDx(a) * b + a * xDx(b));
    CHECK(Dz(a * b) == Dz(a) * b + a * Dz(b));
    CHECK(xDx(Dz(a)) == Dz(xDx(a)));
    const double x = ux(rng), z = uz(rng);
    CHECK(close(eval(a * b, x, z), eval(a, x, z) * eval(b, x, z), 1e-12));
    CHECK(close(eval(a + b, x, z), eval(a, x, z) + eval(b, x, z), 1e-12));
  }
}

TEST_CASE("json round trip") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto a = random_element(rng);
    CHECK(coeff_from_json(to_json(a)) == a);
  }
  const auto j = nlohmann::json::parse(R"([{"m":1,"kz":-2,"re":"3/4","im":"-1/2"}])");
  CHECK(coeff_from_json(j) == CoeffElement::monomial(1, -2, ComplexRational(Rational(3, 4), Rational(-1, 2))));
  CHECK_THROWS_AS(coeff_from_json(nlohmann::json::parse(R"([{"m":-1,"kz":0,"re":"1","im":"0"}])")),
                  std::invalid_argument);
}
