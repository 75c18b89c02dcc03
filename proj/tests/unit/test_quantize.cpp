#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "conic_shubin/quantize.hpp"
#include "conic_shubin/symbol_parser.hpp"
#include "oracles/grid_functions.hpp"
#include "oracles/random_symbols.hpp"

using namespace conic_shubin;

namespace {

const AnisotropyVector L221(2, 2, 1);
FormalSymbol P(const char* s) { return parse_symbol_expr(s, L221); }

enum class Cutoff { Erf, Taper };

// erf steps centred in [0.1, 0.25] and [0.75, 0.9]: 1 on the interior 50% and below 1e-16 outside the interior 80%
double erf_cutoff(const GridSpec& g, int n) {
  const double u = (g.t(n) - g.t0) / g.length();
  const double k = 5.9 / 0.075;
  return 0.25 * std::erfc(-k * (u - 0.175)) * std::erfc(k * (u - 0.825));
}

// x^s e^{iqz} times a cutoff, sampled exactly
GridFunction tapered_monomial(const GridSpec& g, const TestMonomial& m, Cutoff c) {
  const auto w = interior_taper(g);
  const cplx s = m.s.to_complex();
  GridFunction u(g);
  for (int n = 0; n < g.nt; ++n) {
    const double cut = c == Cutoff::Erf ? erf_cutoff(g, n) : w[std::size_t(n)];
    for (int p = 0; p < g.nz; ++p) u(n, p) = cut * std::exp(s * g.t(n)) * std::polar(1.0, m.q * g.z(p));
  }
  return u;
}

GridFunction monomial(const GridSpec& g, const TestMonomial& m) {
  const cplx s = m.s.to_complex();
  GridFunction u(g);
  for (int n = 0; n < g.nt; ++n)
    for (int p = 0; p < g.nz; ++p) u(n, p) = std::exp(s * g.t(n)) * std::polar(1.0, m.q * g.z(p));
  return u;
}

GridFunction sampled_sum(const GridSpec& g, const MonomialSum& sum) {
  GridFunction u(g);
  for (const auto& [m, c] : sum) u += c.to_complex() * monomial(g, m);
  return u;
}

}  // namespace

TEST_CASE("grid geometry and validation") {
  CHECK_NOTHROW(GridSpec{-3, 4, 512, 32}.validate());
  CHECK_THROWS_AS((GridSpec{4, -3, 512, 32}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{-3, 4, 100, 32}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{-3, 4, 4, 32}.validate()), std::invalid_argument);
  const auto g = grid_from_json(nlohmann::json::parse(R"({"t0":-3,"t1":4,"nt":512,"nz":32})"));
  CHECK(g == GridSpec{-3, 4, 512, 32, Closure::Periodic});
  const GridSpec r{-1, 2, 16, 8, Closure::Reflection};
  CHECK(grid_from_json(to_json(r)) == r);
  CHECK(r.t(0) == doctest::Approx(-1 + 0.5 * 3.0 / 16));
  CHECK(r.lattice_size() == 32);
  CHECK(r.mode(5) == -3);
  CHECK(r.slot_of_mode(-3) == 5);
  CHECK(r.slot_of_mode(9) == 1);
}

TEST_CASE("taper") {
  const GridSpec g{0, 1, 256, 8};
  const auto w = interior_taper(g);
  for (int n = 0; n < g.nt; ++n) {
    const double u = g.t(n);
    if (u >= 0.25 && u <= 0.75) CHECK(w[std::size_t(n)] == 1.0);
    if (u <= 0.1 || u >= 0.9) CHECK(w[std::size_t(n)] == 0.0);
  }
}

TEST_CASE("mellin forward") {
  const GridSpec g{-3, 4, 64, 8};
  CHECK(mellin_forward(GridFunction(g)).norm() == 0.0);
  // grid mode -> delta
  GridFunction u(g);
  const int m0 = 5, q0 = 3;
  for (int n = 0; n < g.nt; ++n)
    for (int p = 0; p < g.nz; ++p) u(n, p) = std::polar(1.0, g.sigma(m0) * (g.t(n) - g.t0) + g.mode(q0) * g.z(p));
  const auto uh = mellin_forward(u);
  for (int m = 0; m < g.nt; ++m)
    for (int q = 0; q < g.nz; ++q) {
      if (m == m0 && q == q0) CHECK(std::abs(uh(m, q)) == doctest::Approx(u.norm()).epsilon(1e-12));
      else CHECK(std::abs(uh(m, q)) < 1e-12 * u.norm());
    }
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  GridFunction r(g);
  for (int n = 0; n < g.nt; ++n)
    for (int p = 0; p < g.nz; ++p) r(n, p) = cplx(nd(rng), nd(rng));
  CHECK(std::abs(mellin_forward(r).norm() - r.norm()) <= 1e-12 * r.norm());
  CHECK(oracle::rel_error(mellin_inverse(g, mellin_forward(r)), r) < 1e-13);
}

TEST_CASE("quantization basics") {
  for (auto closure : {Closure::Periodic, Closure::Reflection}) {
    const GridSpec g{-2, 2, 64, 8, closure};
    const auto I = quantize_symbol(P("1"), g);
    CHECK((I.dense() - Eigen::MatrixXcd::Identity(g.size(), g.size())).cwiseAbs().maxCoeff() < 1e-12);

    const auto T = quantize_symbol(P("tau"), g);
    for (const auto& [key, m] : T.blocks()) {
      CHECK(key.first == key.second);
      Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(g.nt, g.nt);
      for (int n = 0; n < g.nt; ++n) d(n, n) = std::exp(g.t(n));
      CHECK((m - d).cwiseAbs().maxCoeff() < 1e-12 * std::exp(2.0));
    }

    // op(sigma) = -i d/dt on band-limited data
    const GridSpec gf{-2, 2, 256, 8, closure};
    const auto u = oracle::packet(gf, 0.1, 0.25, 2.0, 1);
    GridFunction du(gf);
    for (int n = 0; n < gf.nt; ++n) {
      const double t = gf.t(n);
      for (int p = 0; p < gf.nz; ++p) du(n, p) = cplx(0, -1) * (-(t - 0.1) / (0.25 * 0.25) + cplx(0, 2.0)) * u(n, p);
    }
    CHECK(oracle::rel_error(quantize_symbol(P("sigma"), gf).apply(u), du) < 1e-10);

    std::mt19937_64 rng(2);
    const auto a = oracle::random_symbol(rng, L221, 2), b = oracle::random_symbol(rng, L221, 2);
    const auto lhs = quantize_symbol(a + b, g), rhs = quantize_symbol(a, g) + quantize_symbol(b, g);
    CHECK((lhs.dense() - rhs.dense()).cwiseAbs().maxCoeff() <= 1e-12 * rhs.dense().cwiseAbs().maxCoeff());
  }
}

TEST_CASE("matrix-free application agrees with the assembled operator") {
  std::mt19937_64 rng(3);
  for (auto closure : {Closure::Periodic, Closure::Reflection}) {
    const GridSpec g{-1, 1, 64, 8, closure};
    for (int i = 0; i < 5; ++i) {
      const auto a = oracle::random_symbol(rng, L221, 3);
      const auto u = oracle::random_packets(g, rng);
      const auto v1 = quantize_symbol(a, g).apply(u), v2 = apply_symbol(a, u);
      CHECK(oracle::rel_error(v1, v2) < 1e-10);
    }
  }
}

namespace {

struct ConsistencyCase {
  FormalSymbol a;
  TestMonomial m;
};

std::vector<ConsistencyCase> consistency_cases() {
  std::mt19937_64 rng(4);
  std::vector<ConsistencyCase> out;
  while (out.size() < 10) {
    FormalSymbol a = oracle::random_symbol(rng, L221, 2, 4, 2);
    const TestMonomial m{ComplexRational(oracle::random_rational(rng, 3, 4), oracle::random_rational(rng, 4, 2)),
                         std::uniform_int_distribution<int>(-2, 2)(rng)};
    if (order(a) <= 6) out.push_back({a, m});
  }
  return out;
}

double consistency_error(const ConsistencyCase& c, int nt, Cutoff cut) {
  const GridSpec g{-2, 2, nt, 16};
  const auto got = apply_symbol(c.a, tapered_monomial(g, c.m, cut));
  const auto expected = sampled_sum(g, conic_shubin::apply(c.a, c.m));
  return oracle::interior_rel_error(got, expected);
}

}  // namespace

TEST_CASE("sampled symbols agree with the exact action on tapered monomials") {
  // round-off of sigma^3 at the nt=512 Nyquist frequency
  const double floor = 1e-10;
  for (const auto& c : consistency_cases()) {
    const double e256 = consistency_error(c, 256, Cutoff::Erf), e512 = consistency_error(c, 512, Cutoff::Erf);
    INFO("symbol: ", to_expression(c.a), "  errors: ", e256, " ", e512);
    CHECK(e256 <= 1e-6);
    CHECK(e512 <= std::max(0.1 * e256, floor));
  }
}

TEST_CASE("refinement gain in the truncation-dominated regime") {
  for (const auto& c : consistency_cases()) {
    const double e256 = consistency_error(c, 256, Cutoff::Taper), e512 = consistency_error(c, 512, Cutoff::Taper);
    INFO("symbol: ", to_expression(c.a), "  errors: ", e256, " ", e512);
    CHECK(e512 <= std::max(0.1 * e256, 1e-10));
  }
}

TEST_CASE("composition consistency") {
  std::mt19937_64 rng(5);
  const GridSpec g{-2, 2, 256, 16};
  for (int i = 0; i < 5; ++i) {
    const auto a1 = oracle::random_symbol(rng, L221, 2, 3), a2 = oracle::random_symbol(rng, L221, 2, 3);
    const auto u = oracle::random_packets(g, rng);
    const auto lhs = apply_symbol(sharp(a1, a2), u);
    const auto rhs = apply_symbol(a1, apply_symbol(a2, u));
    CHECK(oracle::interior_rel_error(lhs, rhs) <= 1e-6);
  }
}

TEST_CASE("numeric adjoint") {
  const GridSpec g{-2, 2, 256, 8};
  const auto I = GridOperator::identity(g);
  CHECK((numeric_adjoint(I).dense() - I.dense()).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(6);
  const auto S = quantize_symbol(P("sigma"), g);
  for (int i = 0; i < 5; ++i) {
    const auto u = oracle::random_packets(g, rng);
    CHECK(oracle::rel_error(numeric_adjoint(S).apply(u), S.apply(u)) <= 1e-8);
  }
  const auto A = quantize_symbol(P("sigma*tau"), g);
  const auto Astar = quantize_symbol(star(P("sigma*tau")), g);
  for (int i = 0; i < 20; ++i) {
    const auto u = oracle::random_packets(g, rng), v = oracle::random_packets(g, rng);
    const cplx lhs = A.apply(u).inner(v), rhs = u.inner(Astar.apply(v));
    CHECK(std::abs(lhs - rhs) <= 1e-6 * std::abs(lhs));
  }
}

TEST_CASE("numeric weight conjugation") {
  const GridSpec g{-2, 2, 256, 8};
  std::mt19937_64 rng(7);
  const auto S = quantize_symbol(P("sigma"), g);
  CHECK((conjugate_weight_numeric(S, 0.0).dense() - S.dense()).cwiseAbs().maxCoeff() == 0.0);
  const auto target = quantize_symbol(P("sigma - i"), g);
  for (int i = 0; i < 5; ++i) {
    const auto u = oracle::random_packets(g, rng);
    CHECK(oracle::interior_rel_error(conjugate_weight_numeric(S, 1.0).apply(u), target.apply(u)) <= 1e-8);
  }
  const auto T = quantize_symbol(P("tau"), g);
  CHECK((conjugate_weight_numeric(T, 1.7).dense() - T.dense()).cwiseAbs().maxCoeff() <= 1e-12 * std::exp(2.0));
}

TEST_CASE("residual decay report") {
  const GridSpec g{-3, 4, 128, 8};
  Eigen::VectorXcd gauss(g.nt);
  for (int n = 0; n < g.nt; ++n) gauss(n) = std::exp(-2.0 * g.t(n) * g.t(n));
  GridOperator K(g);
  for (int q = 0; q < g.nz; ++q) K.add_to_block(q, q, gauss * gauss.transpose());
  CHECK(residual_decay_report(K).residual_like);
  const auto id = residual_decay_report(GridOperator::identity(g));
  CHECK_FALSE(id.residual_like);
  CHECK(std::abs(id.fitted_exponent) < 1e-9);
}
