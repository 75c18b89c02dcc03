// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "conic_shubin/aniso.hpp"
#include "conic_shubin/experiments.hpp"
#include "conic_shubin/kernel_cutoff.hpp"
#include "conic_shubin/parametrix.hpp"
#include "conic_shubin/quantize.hpp"
#include "conic_shubin/sobolev.hpp"
#include "conic_shubin/symbol_parser.hpp"
#include "oracles/cartesian_oscillator.hpp"
#include "oracles/fornberg.hpp"
#include "oracles/grid_functions.hpp"
#include "oracles/random_symbols.hpp"
#include "support/cli_cases.hpp"

extern char** environ;

using namespace conic_shubin;
namespace fs = std::filesystem;

namespace {

const AnisotropyVector L221(2, 2, 1), L211(2, 1, 1);

FormalSymbol P(const char* s) { return parse_symbol_expr(s, L221); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// 25 random symbols and the 25 cyclic pairs drawn from them
struct SymbolPool {
  std::vector<FormalSymbol> symbols;
  SymbolPool() {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 25; ++i) symbols.push_back(oracle::random_symbol(rng, L221, 3, 5));
  }
  std::pair<const FormalSymbol&, const FormalSymbol&> pair(int i) const {
    return {symbols[std::size_t(i)], symbols[std::size_t((i + 1) % 25)]};
  }
};

void composition_law(Outcome& o, const SymbolPool& pool) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(31);
  int checked = 0, equal = 0;
  for (int i = 0; i < 25; ++i) {
    const auto [a1, a2] = pool.pair(i);
    const auto s12 = sharp(a1, a2);
    for (int k = 0; k < 10; ++k) {
      const auto u = oracle::random_monomial(rng);
      const MonomialSum single{{u, ComplexRational(1)}};
      ++checked;
      if (conic_shubin::apply(s12, u) == conic_shubin::apply(a1, conic_shubin::apply(a2, single))) ++equal;
    }
  }
  const double dt = seconds_since(t0);
  o.detail << equal << "/" << checked << " exact matches, " << dt << " s";
  o.require(equal == checked, "exact equality");
  o.require(dt < 10.0, "runtime < 10 s");
}

void adjoint(Outcome& o, const SymbolPool& pool) {
  int involutions = 0;
  for (const auto& a : pool.symbols)
    if (star(star(a)) == a) ++involutions;
  o.require(involutions == 25, "star(star(a)) == a");
  o.require(star(P("sigma*tau")) == P("sigma*tau - i*tau"), "star(sigma tau) == sigma tau - i tau");

  const GridSpec g{-2, 2, 256, 16};
  std::mt19937_64 rng(32);
  double worst = 0.0;
  for (const auto& a : pool.symbols) {
    const auto as = star(a);
    for (int k = 0; k < 2; ++k) {
      // v overlaps the image of op(a), so the pairing is not zero by z-mode orthogonality
      const auto u = oracle::random_packets(g, rng);
      const auto v = apply_symbol(a, u) + oracle::random_packets(g, rng);
      const cplx lhs = apply_symbol(a, u).inner(v), rhs = u.inner(apply_symbol(as, v));
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
    }
  }
  o.detail << involutions << "/25 involutions, max pairing rel. error " << worst << " at nt=256";
  o.require(worst <= 1e-6, "pairing rel. error <= 1e-6");
}

void principal_multiplicativity(Outcome& o, const SymbolPool& pool) {
  int ok = 0;
  for (int i = 0; i < 25; ++i) {
    const auto [a1, a2] = pool.pair(i);
    const auto e = sym_e(sharp(a1, a2));
    const auto e1 = sym_e(a1), e2 = sym_e(a2);
    if (e.part == pointwise_product(e1.part, e2.part) && e.mu == e1.mu + e2.mu) ++ok;
  }
  o.detail << ok << "/25 pairs";
  o.require(ok == 25, "sym_e(a1 # a2) == sym_e(a1) sym_e(a2)");
}

void ellipticity(Outcome& o) {
  double slowest = 0.0;
  auto timed = [&](const FormalSymbol& a) {
    const auto t0 = Clock::now();
    auto rep = check_full_ellipticity(a);
    slowest = std::max(slowest, seconds_since(t0));
    return rep;
  };
  o.require(timed(harmonic_symbol()).fully_elliptic, "harmonic fully elliptic");
  const auto b = timed(P("sigma^2 + zeta^2"));
  o.require(!b.fully_elliptic, "sigma^2 + zeta^2 not fully elliptic");
  o.require(b.witness == CovarPoint(0, 0, 1), "pole witness");
  int anh = 0;
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 3; ++n) {
      const auto a = anharmonic_symbol(m, n);
      if (order(a) == 2 * m * (m + n) && timed(a).fully_elliptic) ++anh;
    }
  o.require(anh == 9, "anharmonic m,n <= 3 fully elliptic with order 2m(m+n)");
  o.detail << "harmonic elliptic, b-symbol witness (" << b.witness.zeta() << "," << b.witness.sigma() << ","
           << b.witness.tau() << "), " << anh << "/9 anharmonic, slowest " << slowest << " s";
  o.require(slowest < 5.0, "runtime < 5 s each");
}

void harmonic_spectrum(Outcome& o) {
  const auto t0 = Clock::now();
  const std::vector<double> analytic{2, 4, 4, 6, 6, 6};
  const auto cartesian = oracle::cartesian_harmonic_levels_extrapolated(6.0, 400, 6);
  auto run = [](int nt) {
    ModelOperatorSpec spec;
    spec.grid = GridSpec{-4, 3, nt, 32, Closure::Reflection};
    return spectrum(spec, 6);
  };
  const auto coarse = run(256), fine = run(512);
  o.require(fine.eigenvalues.size() == 6 && coarse.eigenvalues.size() == 6, "six eigenvalues");
  if (!o.pass) return;
  double err = 0, cart = 0, drift = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    err = std::max(err, std::abs(fine.eigenvalues[i] - analytic[i]) / analytic[i]);
    cart = std::max(cart, std::abs(fine.eigenvalues[i] - cartesian[i]) / cartesian[i]);
    drift = std::max(drift, std::abs(fine.eigenvalues[i] - coarse.eigenvalues[i]) / fine.eigenvalues[i]);
  }
  const double dt = seconds_since(t0);
  o.detail << "nt=512:";
  for (double e : fine.eigenvalues) o.detail << " " << e;
  o.detail << "; max rel. error " << err << " (analytic), " << cart << " (Cartesian), drift from nt=256 " << drift
           << ", " << dt << " s";
  o.require(err <= 0.01, "within 1% of {2,4,4,6,6,6}");
  o.require(cart <= 0.01, "within 1% of the Cartesian levels");
  o.require(drift <= 0.005, "change <= 0.5% from nt=256");
  o.require(dt < 300.0, "runtime < 5 min");
}

void parametrix(Outcome& o) {
  const auto t0 = Clock::now();
  const GridSpec g{0.5, 3.5, 128, 8, Closure::Reflection};
  const auto bundle = build_parametrix(P("sigma^2 + zeta^2 + tau^4 + 1"), g, 5);
  const auto& r = bundle.left_remainder;
  const double r13 = r[0] / r[2], r15 = r[0] / r[4];
  const double dt = seconds_since(t0);
  o.detail << "interior ||A P_N - I|| for N=1..5:";
  for (double v : r) o.detail << " " << v;
  o.detail << "; N1/N3 = " << r13 << ", N1/N5 = " << r15 << ", " << dt << " s";
  o.require(r13 >= 4.0, "N1/N3 >= 4");
  o.require(r15 >= 16.0, "N1/N5 >= 16");
  o.require(dt < 120.0, "runtime < 2 min");
}

void kernel_cutoff_check(Outcome& o) {
  const SigmaLattice lat;
  const CutoffSpec phi;
  const auto a = lat.sample([](double s) { return cplx(1.0 / (1.0 + s * s)); });
  const auto h0 = kernel_cutoff(a, lat, phi, 0.0);
  const auto fit = cutoff_decay_fit(a, h0, lat);

  // Taylor expansion in i gamma from 13-point finite-difference sigma-derivatives of H(phi)a
  const int half = 6, order = 4;
  std::vector<double> nodes;
  for (int j = -half; j <= half; ++j) nodes.push_back(j * 2.0 * M_PI / lat.period);
  const auto wts = oracle::fornberg_weights(0.0, nodes, order);
  auto max_error = [&](double gamma) {
    const auto hg = kernel_cutoff(a, lat, phi, gamma);
    double err = 0;
    for (int m = 0; m < 800; m += 7) {
      cplx sum = 0.0, coef = 1.0;
      for (int k = 0; k <= order; ++k) {
        cplx d = 0.0;
        for (int j = -half; j <= half; ++j)
          d += wts[std::size_t(k)][std::size_t(j + half)] * h0[std::size_t((m + j + lat.size) % lat.size)];
        sum += coef * d;
        coef *= cplx(0.0, gamma) / double(k + 1);
      }
      err = std::max(err, std::abs(hg[std::size_t(m)] - sum));
    }
    return err;
  };
  const double e1 = max_error(0.1), e2 = max_error(0.05);
  const double bound = std::pow(0.2, 5) / 120.0 * std::exp(0.2);
  o.detail << "slope " << fit.slope << " over " << fit.sigmas.size() << " dyadic sigmas; expansion error " << e1
           << " at gamma=0.1 (bound " << bound << "), ratio to gamma=0.05 " << e1 / e2;
  o.require(fit.slope <= -6.0, "slope <= -6");
  o.require(e1 <= bound, "O(gamma^5) error bound");
  o.require(std::abs(e1 / e2 - 32.0) <= 0.15 * 32.0, "halving gamma divides the error by 2^5");
}

void sobolev(Outcome& o) {
  const auto t0 = Clock::now();
  const GridSpec g{-3, 4, 256, 16};
  int chains = 0;
  for (double s : {2.0, -2.0, 4.0, -4.0})
    if (embedding_check(L211, s, g, 100).holds) ++chains;
  o.require(chains == 4, "embedding chain for s in {+-2, +-4}");

  const GridSpec gl{-3, 4, 128, 16};
  const double s = 1.5;
  const OrderReduction r10(s, L211, 10.0), r20(s, L211, 20.0);
  double lo = INFINITY, hi = 0;
  for (int m = 0; m < gl.lattice_size(); ++m)
    for (int q = 0; q < gl.nz; ++q) {
      const double ratio = r10.multiplier(gl.sigma(m), gl.mode(q)) / r20.multiplier(gl.sigma(m), gl.mode(q));
      lo = std::min(lo, ratio), hi = std::max(hi, ratio);
    }
  bool equivalent = lo > 0.0 && std::isfinite(hi);
  for (const auto& u : random_band_limited(gl, 100, 8)) {
    const double ratio = sobolev_norm(u, {s, 0}, L211, 10.0) / sobolev_norm(u, {s, 0}, L211, 20.0);
    equivalent = equivalent && ratio >= lo * (1 - 1e-12) && ratio <= hi * (1 + 1e-12);
  }
  o.require(equivalent, "lambda0 = 10 vs 20 ratios within the multiplier bounds");

  ModelOperatorSpec spec;
  spec.grid = GridSpec{-4, 3, 128, 8};
  const auto rows = mapping_shift_study(spec, {1.0}, {0.5}, {128, 256, 512}, {4.0, 2.0}, false);
  std::map<double, std::vector<double>> by_shift;
  for (const auto& r : rows) by_shift[r.s_shift].push_back(r.norm);
  const auto& good = by_shift[4.0];
  const auto& bad = by_shift[2.0];
  bool bounded = good.size() == 3, grows = bad.size() == 3;
  for (std::size_t i = 1; i < good.size(); ++i) bounded = bounded && std::abs(good[i] - good[0]) <= 0.05 * good[0];
  for (std::size_t i = 1; i < bad.size(); ++i) grows = grows && bad[i] >= 1.3 * bad[i - 1];
  o.require(bounded, "shift 4 bounded across nt");
  o.require(grows, "shift 2 grows with nt");

  const double dt = seconds_since(t0);
  o.detail << chains << "/4 embedding chains, lambda0 ratio bounds [" << lo << ", " << hi << "], shift-4 norms";
  for (double v : good) o.detail << " " << v;
  o.detail << ", shift-2 norms";
  for (double v : bad) o.detail << " " << v;
  o.detail << " (nt 128/256/512), " << dt << " s";
  o.require(dt < 120.0, "runtime < 2 min");
}

CovarPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> e(-6, 6);
  auto draw = [&] { return u(rng) * std::pow(10.0, e(rng) / 2.0); };
  return {draw(), draw(), std::abs(draw())};
}

void anisotropy(Outcome& o) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> sd(-6.0, 6.0);
  int homog = 0, peetre = 0, sandwich = 0;
  for (const auto& l : {AnisotropyVector(2, 2, 1), AnisotropyVector(3, 3, 2), AnisotropyVector(1, 2, 3)}) {
    std::vector<CovarPoint> sample;
    for (int i = 0; i < 1000; ++i) {
      const auto p = random_point(rng), q = random_point(rng);
      sample.push_back(p);
      const double base = aniso_abs(p, l);
      bool h = true;
      for (int k = -10; k <= 10; ++k) {
        const double rho = std::ldexp(1.0, k);
        h = h && std::abs(aniso_abs(p.scaled(rho, l), l) - rho * base) <= 1e-12 * rho * base;
      }
      if (h) ++homog;
      const double s = sd(rng);
      const double lhs = std::pow(aniso_bracket(p + q, l), s);
      const double rhs = std::pow(2.0, std::abs(s)) * std::pow(aniso_bracket(p, l), s) *
                         std::pow(aniso_bracket(q, l), std::abs(s));
      if (lhs <= rhs * (1 + 1e-12)) ++peetre;
    }
    // constants fitted on the sample, checked on every sampled point and against the closed-form pair
    const auto c = sandwich_constants(l, sample);
    const auto bound = sandwich_constants_bound(l);
    const double a = l.sum();
    bool ok = c.lower > 0.0 && c.lower >= bound.lower * (1 - 1e-12) && c.upper <= bound.upper * (1 + 1e-12);
    int inside = 0;
    for (const auto& p : sample) {
      const double b = aniso_bracket(p, l), j = japanese_bracket(p);
      if (c.lower * std::pow(j, 1.0 / a) <= b * (1 + 1e-12) && b <= c.upper * std::pow(j, a) * (1 + 1e-12)) ++inside;
    }
    if (ok && inside == 1000) ++sandwich;
  }
  o.detail << "homogeneity " << homog << "/3000, Peetre " << peetre << "/3000, sandwich " << sandwich
           << "/3 weight vectors (1000 points each)";
  o.require(homog == 3000, "homogeneity");
  o.require(peetre == 3000, "Peetre");
  o.require(sandwich == 3, "sandwich");
}

// runs the CLI with CONIC_SHUBIN_THREADS set; returns the exit code
int run_cli(const std::vector<std::string>& args, const std::string& threads) {
  std::vector<std::string> env;
  for (char** e = environ; *e; ++e)
    if (std::string(*e).rfind("CONIC_SHUBIN_THREADS=", 0) != 0) env.emplace_back(*e);
  env.push_back("CONIC_SHUBIN_THREADS=" + threads);
  std::vector<std::string> argv{CONIC_SHUBIN_CLI};
  argv.insert(argv.end(), args.begin(), args.end());
  auto cstrs = [](std::vector<std::string>& v) {
    std::vector<char*> out;
    for (auto& s : v) out.push_back(s.data());
    out.push_back(nullptr);
    return out;
  };
  auto cargv = cstrs(argv), cenv = cstrs(env);
  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_addopen(&fa, 1, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&fa, 2, "/dev/null", O_WRONLY, 0);
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, CONIC_SHUBIN_CLI, &fa, nullptr, cargv.data(), cenv.data());
  posix_spawn_file_actions_destroy(&fa);
  if (rc != 0) return -1;
  int status = 0;
  if (waitpid(pid, &status, 0) < 0 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

void determinism(Outcome& o) {
  const fs::path root = fs::temp_directory_path() / ("conic_shubin_acceptance." + std::to_string(getpid()));
  fs::remove_all(root);
  int identical = 0, golden = 0, total = 0;
  for (const auto& c : cli_cases::cases()) {
    std::vector<fs::path> dirs;
    bool codes = true;
    int run = 0;
    for (const char* threads : {"1", "4", "4"}) {
      const fs::path dir = root / c.name / std::to_string(run++);
      fs::create_directories(dir);
      auto args = c.args;
      args.insert(args.end(), {"--out", dir.string()});
      codes = codes && run_cli(args, threads) == c.exit_code;
      dirs.push_back(dir);
    }
    o.require(codes, c.name + " exit code");
    for (const auto& f : c.outputs) {
      ++total;
      const std::string first = cli_cases::read_bytes(dirs[0] / f);
      bool same = !first.empty();
      for (std::size_t i = 1; i < dirs.size(); ++i) same = same && cli_cases::read_bytes(dirs[i] / f) == first;
      if (same) ++identical;
      else o.require(false, c.name + "/" + f + " differs across runs or thread counts");
      if (cli_cases::artifact_matches(dirs[0] / f, cli_cases::golden_dir() / c.name / f)) ++golden;
      else o.require(false, c.name + "/" + f + " differs from its golden");
    }
  }
  fs::remove_all(root);
  o.detail << identical << "/" << total << " artifacts byte-identical across 3 runs (threads 1, 4, 4); " << golden
           << "/" << total << " match their goldens";
}

}  // namespace

int main() {
  const SymbolPool pool;
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"exact composition law", [&](Outcome& o) { composition_law(o, pool); }},
      {"adjoint involution and pairing", [&](Outcome& o) { adjoint(o, pool); }},
      {"principal symbol multiplicativity", [&](Outcome& o) { principal_multiplicativity(o, pool); }},
      {"ellipticity verdicts", ellipticity},
      {"harmonic oscillator spectrum", harmonic_spectrum},
      {"parametrix remainder decay", parametrix},
      {"kernel cut-off decay and holomorphic expansion", kernel_cutoff_check},
      {"Sobolev embeddings, lambda0 equivalence, mapping shifts", sobolev},
      {"anisotropy identities", anisotropy},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
