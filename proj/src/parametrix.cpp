#include "conic_shubin/parametrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SVD>

#include "conic_shubin/parallel.hpp"
#include "conic_shubin/quantize.hpp"

namespace conic_shubin {

EllipticityReport check_full_ellipticity(const FormalSymbol& a, int n, double tol, double R, int x_samples) {
  if (!(tol > 0.0)) throw std::invalid_argument("ellipticity tolerance must be positive");
  if (!(R > 0.0)) throw std::invalid_argument("ellipticity radius R must be positive");
  if (x_samples < 2) throw std::invalid_argument("ellipticity check needs at least two x samples");
  if (a.is_zero()) throw std::invalid_argument("ellipticity check of the zero symbol");
  const FormalSymbol h = sym_e(a).part;
  const auto pts = hemisphere_sample(a.aniso(), n);

  std::vector<double> zs{0.0};
  if (!h.z_independent()) {
    const int nzs = std::max(8, 4 * h.max_abs_mode() + 1);
    zs.clear();
    for (int p = 0; p < nzs; ++p) zs.push_back(2.0 * std::numbers::pi * p / nzs);
  }
  std::vector<double> us{0.0};
  const double u_hi = 1.0 / R, u_lo = std::min(1e-6, u_hi);
  for (int i = 0; i < x_samples - 1; ++i)
    us.push_back(x_samples == 2 ? u_hi : u_lo * std::pow(u_hi / u_lo, static_cast<double>(i) / (x_samples - 2)));

  EllipticityReport rep;
  rep.min_modulus = std::numeric_limits<double>::infinity();
  rep.hemisphere_resolution = n;
  rep.x_samples = x_samples;
  for (double u : us) {
    for (double z : zs) {
      for (const auto& p : pts) {
        const cplx v = u == 0.0 ? eval_symbol_at_infinity(h, z, p.zeta(), p.sigma(), p.tau())
                                : eval_symbol(h, 1.0 / u, z, p.zeta(), p.sigma(), p.tau());
        ++rep.samples_used;
        if (std::abs(v) < rep.min_modulus) {
          rep.min_modulus = std::abs(v);
          rep.witness = p;
          rep.witness_x = u == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / u;
          rep.witness_z = z;
        }
      }
    }
  }
  rep.fully_elliptic = rep.min_modulus > tol;
  return rep;
}

namespace {

double largest_singular_value(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues();
}

}  // namespace

double interior_norm(const GridOperator& M) {
  const GridSpec& g = M.grid();
  const auto taper = interior_taper(g);
  Eigen::VectorXcd w(g.nt);
  for (int n = 0; n < g.nt; ++n) w(n) = taper[static_cast<std::size_t>(n)];
  if (M.mode_diagonal()) {
    std::vector<std::pair<int, const Eigen::MatrixXcd*>> blocks;
    for (const auto& [key, m] : M.blocks()) blocks.emplace_back(key.first, &m);
    std::vector<double> norms(blocks.size(), 0.0);
    parallel_for(blocks.size(), [&](std::size_t i) {
      norms[i] = largest_singular_value(w.asDiagonal() * *blocks[i].second * w.asDiagonal());
    });
    return norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
  }
  if (g.size() > 4096) throw std::invalid_argument("interior norm of a mode-coupled operator needs nt*nz <= 4096");
  return largest_singular_value(interior_restriction(M).dense());
}

ParametrixBundle build_parametrix(const FormalSymbol& a, const GridSpec& grid, int n_max) {
  if (n_max < 1) throw std::invalid_argument("parametrix order must be at least 1");
  grid.validate();
  auto rep = check_full_ellipticity(a);
  if (!rep.fully_elliptic) throw EllipticityError("symbol is not fully elliptic", rep);

  const FormalSymbol h = sym_e(a).part;
  const int mu = order(a);
  const AnisotropyVector l = a.aniso();
  auto b0 = [h, mu, l](double t, double z, double sigma, double k) -> cplx {
    const double x = std::exp(t);
    const double chi = mu > 0 ? smooth_step(aniso_bracket(CovarPoint(k, sigma, x), l) - 1.0) : 1.0;
    if (chi == 0.0) return 0.0;
    const cplx v = eval_symbol(h, x, z, k, sigma, x);
    if (v == 0.0) throw std::runtime_error("principal symbol vanishes where the excision is active");
    return chi / v;
  };
  const SymbolTable table = h.z_independent()
                                ? SymbolTable::from_function(grid, [b0](double t, double sigma, double k) {
                                    return b0(t, 0.0, sigma, k);
                                  })
                                : SymbolTable::from_function_z(grid, b0);

  ParametrixBundle bundle{quantize_symbol(a, grid), op_quantize(table), {}, {}, {}, rep};
  const GridOperator I = GridOperator::identity(grid);
  const GridOperator R = I - bundle.A * bundle.B0;
  GridOperator Rk = I;
  GridOperator S = GridOperator::zero(grid);
  for (int N = 1; N <= n_max; ++N) {
    S += Rk;
    bundle.P.push_back(bundle.B0 * S);
    const GridOperator& PN = bundle.P.back();
    bundle.left_remainder.push_back(interior_norm(bundle.A * PN - I));
    bundle.right_remainder.push_back(interior_norm(PN * bundle.A - I));
    if (N < n_max) Rk = Rk * R;
  }
  return bundle;
}

FredholmReport fredholm_probe(const GridOperator& A, const SobolevParams& p, const AnisotropyVector& l, double mu,
                              double gamma) {
  const GridSpec& g = A.grid();
  GridOperator T = A.sandwich(exp_weight(g, -(p.alpha + gamma)), exp_weight(g, p.alpha));
  if (p.s - mu != 0.0) T = OrderReduction(p.s - mu, l).as_operator(g) * T;
  if (p.s != 0.0) T = T * OrderReduction(-p.s, l).as_operator(g);

  std::vector<double> sv;
  int rows = g.size(), cols = g.size();
  if (T.mode_diagonal()) {
    std::vector<Eigen::VectorXd> parts(static_cast<std::size_t>(g.nz));
    parallel_for(static_cast<std::size_t>(g.nz), [&](std::size_t q) {
      const auto* b = T.block(static_cast<int>(q), static_cast<int>(q));
      parts[q] = b ? singular_values(*b) : Eigen::VectorXd::Zero(g.nt);
    });
    for (const auto& v : parts) sv.insert(sv.end(), v.data(), v.data() + v.size());
  } else {
    if (g.size() > 4096) throw std::invalid_argument("Fredholm probe of a mode-coupled operator needs nt*nz <= 4096");
    const auto v = singular_values(T.dense());
    sv.assign(v.data(), v.data() + v.size());
  }
  std::sort(sv.begin(), sv.end());
  FredholmReport rep;
  rep.median = sv[sv.size() / 2];
  rep.threshold = 1e-8 * rep.median;
  int small = 0;
  for (double s : sv)
    if (s <= rep.threshold) ++small;
  rep.kernel_dim = small + std::max(0, cols - rows);
  rep.cokernel_dim = small + std::max(0, rows - cols);
  rep.smallest.assign(sv.begin(), sv.begin() + std::min<std::size_t>(6, sv.size()));
  return rep;
}

}  // namespace conic_shubin
