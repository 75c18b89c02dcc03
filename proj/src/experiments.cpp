#include "conic_shubin/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "conic_shubin/parallel.hpp"
#include "conic_shubin/quantize.hpp"

namespace conic_shubin {

FormalSymbol harmonic_symbol() { return anharmonic_symbol(1, 1); }

FormalSymbol anharmonic_symbol(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("anharmonic oscillator needs m, n >= 1");
  const AnisotropyVector l(m + n, m + n, m);
  const FormalSymbol B = FormalSymbol::monomial(l, 0, 2, 0) + FormalSymbol::monomial(l, 2, 0, 0);
  // x^{-2} op(B) x^{2j} = x^{2j-2} op(B(sigma + 2ji))
  FormalSymbol A = FormalSymbol::constant(l, CoeffElement(1));
  for (int j = m - 1; j >= 0; --j) A = sharp(A, conjugate_weight(B, Rational(-2 * j)));
  A += FormalSymbol::monomial(l, 0, 0, 2 * (m + n));
  return A;
}

ModelOperator make_anharmonic(int m, int n, const GridSpec& grid) {
  grid.validate();
  FormalSymbol a = anharmonic_symbol(m, n);
  GridOperator A = quantize_symbol(a, grid);
  return {std::move(a), m, n, std::move(A)};
}

ModelOperator make_harmonic(const GridSpec& grid) { return make_anharmonic(1, 1, grid); }

ModelOperator make_model(const ModelOperatorSpec& spec) {
  switch (spec.kind) {
    case ModelKind::Harmonic: return make_harmonic(spec.grid);
    case ModelKind::Anharmonic: return make_anharmonic(spec.m, spec.n, spec.grid);
    case ModelKind::Custom: {
      if (!spec.custom) throw std::invalid_argument("custom model needs a symbol");
      spec.grid.validate();
      return {*spec.custom, 1, 1, quantize_symbol(*spec.custom, spec.grid)};
    }
  }
  throw std::invalid_argument("unknown model kind");
}

GridOperator geometric_operator(const ModelOperator& model) {
  const GridSpec& g = model.A.grid();
  return model.A.sandwich(exp_weight(g, model.prefactor_power()), Eigen::VectorXcd::Ones(g.nt));
}

namespace {

GroundStateDecay fit_decay(const GridSpec& g, const Eigen::VectorXd& psi) {
  GroundStateDecay d;
  const double peak = psi.cwiseAbs().maxCoeff();
  std::vector<double> xs, ys;
  const double t_start = g.t1 - 0.25 * g.length();
  for (int n = 0; n < g.nt; ++n) {
    if (g.t(n) < t_start) continue;
    const double v = std::abs(psi(n));
    if (v <= 1e-12 * peak) continue;
    xs.push_back(std::exp(g.t(n)));
    ys.push_back(std::log(v));
  }
  d.points = static_cast<int>(xs.size());
  if (d.points < 3) return d;
  Eigen::MatrixXd V1(d.points, 2), V2(d.points, 3);
  Eigen::VectorXd y(d.points);
  for (int i = 0; i < d.points; ++i) {
    V1(i, 0) = V2(i, 0) = 1.0;
    V1(i, 1) = V2(i, 1) = xs[std::size_t(i)];
    V2(i, 2) = xs[std::size_t(i)] * xs[std::size_t(i)];
    y(i) = ys[std::size_t(i)];
  }
  d.linear_rate = -V1.colPivHouseholderQr().solve(y)(1);
  d.quadratic_rate = -V2.colPivHouseholderQr().solve(y)(2);
  d.decays = d.linear_rate > 0.0;
  return d;
}

}  // namespace

SpectrumResult spectrum(const ModelOperatorSpec& spec, int count) {
  if (count < 1) throw std::invalid_argument("spectrum needs count >= 1");
  const GridSpec& g = spec.grid;
  g.validate();
  const int nt = g.nt;

  std::vector<Eigen::MatrixXcd> forms(static_cast<std::size_t>(g.nz));
  if (spec.kind == ModelKind::Custom) {
    const ModelOperator model = make_model(spec);
    const GridOperator S = model.A.sandwich(exp_weight(g, -1.0), exp_weight(g, -1.0));
    if (!S.mode_diagonal()) throw std::invalid_argument("spectrum of a z-dependent custom symbol is not supported");
    for (int q = 0; q < g.nz; ++q) {
      const auto* b = S.block(q, q);
      forms[std::size_t(q)] = b ? *b : Eigen::MatrixXcd::Zero(nt, nt);
    }
  } else {
    const int m = spec.kind == ModelKind::Harmonic ? 1 : spec.m;
    const int n = spec.kind == ModelKind::Harmonic ? 1 : spec.n;
    if (m < 1 || n < 1) throw std::invalid_argument("anharmonic oscillator needs m, n >= 1");
    const AnisotropyVector l(m + n, m + n, m);
    const GridOperator B = quantize_symbol(FormalSymbol::monomial(l, 0, 2, 0) + FormalSymbol::monomial(l, 2, 0, 0), g);
    Eigen::VectorXcd xi = exp_weight(g, -1.0);
    Eigen::VectorXcd pot = exp_weight(g, 2.0 * n);
    for (int q = 0; q < g.nz; ++q) {
      const Eigen::MatrixXcd K = xi.asDiagonal() * *B.block(q, q) * xi.asDiagonal();
      Eigen::MatrixXcd G = K;
      for (int p = 1; p < m; ++p) G = G * K;
      G += Eigen::MatrixXcd(pot.asDiagonal());
      forms[std::size_t(q)] = std::move(G);
    }
  }

  struct ModeEig {
    Eigen::VectorXd values;
    Eigen::VectorXcd ground;
    bool ok = true;
  };
  std::vector<ModeEig> eig(static_cast<std::size_t>(g.nz));
  parallel_for(eig.size(), [&](std::size_t q) {
    const Eigen::MatrixXcd H = 0.5 * (forms[q] + forms[q].adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    eig[q].ok = es.info() == Eigen::Success;
    if (!eig[q].ok) return;
    eig[q].values = es.eigenvalues();
    eig[q].ground = es.eigenvectors().col(0);
  });

  SpectrumResult res;
  std::vector<std::pair<double, int>> all;
  for (int q = 0; q < g.nz; ++q) {
    const auto& e = eig[std::size_t(q)];
    res.converged = res.converged && e.ok;
    if (!e.ok) continue;
    for (int i = 0; i < std::min<int>(count, static_cast<int>(e.values.size())); ++i)
      all.emplace_back(e.values(i), g.mode(q));
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second < b.second;
  });
  for (int i = 0; i < std::min<int>(count, static_cast<int>(all.size())); ++i) {
    res.eigenvalues.push_back(all[std::size_t(i)].first);
    res.modes.push_back(all[std::size_t(i)].second);
  }
  // ground state of mode 0; psi = X^{-1} w undoes the similarity
  if (eig[0].ok) {
    Eigen::VectorXd psi(nt);
    for (int n = 0; n < nt; ++n) psi(n) = std::abs(eig[0].ground(n)) * std::exp(-g.t(n));
    res.decay = fit_decay(g, psi);
  }
  return res;
}

std::vector<MappingRow> mapping_shift_study(const ModelOperatorSpec& spec, const std::vector<double>& s_list,
                                            const std::vector<double>& alpha_list, const std::vector<int>& nts,
                                            const std::vector<double>& s_shifts, bool with_full) {
  std::vector<MappingRow> rows;
  for (int nt : nts) {
    ModelOperatorSpec local = spec;
    local.grid.nt = nt;
    const ModelOperator model = make_model(local);
    const GridOperator G = geometric_operator(model);
    const GridOperator GI = interior_restriction(G);
    const double weight_shift = model.prefactor_power();
    const auto& l = model.symbol.aniso();
    for (double s : s_list)
      for (double alpha : alpha_list)
        for (double shift : s_shifts) {
          const double norm = mapping_bound(GI, shift, weight_shift, {s, alpha}, l);
          const double full = with_full ? mapping_bound(G, shift, weight_shift, {s, alpha}, l) : 0.0;
          rows.push_back({nt, s, alpha, shift, weight_shift, norm, full});
        }
  }
  return rows;
}

}  // namespace conic_shubin
