#include "conic_shubin/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "conic_shubin/fft.hpp"

namespace conic_shubin {

std::string to_string(Closure c) { return c == Closure::Periodic ? "periodic" : "reflection"; }

Closure closure_from_string(const std::string& s) {
  if (s == "periodic") return Closure::Periodic;
  if (s == "reflection") return Closure::Reflection;
  throw std::invalid_argument("unknown closure '" + s + "' (expected periodic or reflection)");
}

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

void GridSpec::validate() const {
  if (!(t0 < t1) || !std::isfinite(t0) || !std::isfinite(t1))
    throw std::invalid_argument("grid window needs finite t0 < t1");
  if (nt < 8 || !power_of_two(nt)) throw std::invalid_argument("grid nt must be a power of two >= 8");
  if (nz < 8 || !power_of_two(nz)) throw std::invalid_argument("grid nz must be a power of two >= 8");
}

double GridSpec::dz() const { return 2.0 * std::numbers::pi / nz; }

double GridSpec::t(int n) const { return closure == Closure::Periodic ? t0 + n * h() : t0 + (n + 0.5) * h(); }

double GridSpec::z(int p) const { return p * dz(); }

int GridSpec::lattice_index(int m) const {
  const int M = lattice_size();
  return m < M / 2 ? m : m - M;
}

double GridSpec::sigma(int m) const {
  const double period = closure == Closure::Periodic ? length() : 2.0 * length();
  return 2.0 * std::numbers::pi * lattice_index(m) / period;
}

int GridSpec::mode(int q) const { return q < nz / 2 ? q : q - nz; }

int GridSpec::slot_of_mode(int k) const { return ((k % nz) + nz) % nz; }

nlohmann::json to_json(const GridSpec& g) {
  return {{"t0", g.t0}, {"t1", g.t1}, {"nt", g.nt}, {"nz", g.nz}, {"closure", to_string(g.closure)}};
}

GridSpec grid_from_json(const nlohmann::json& j) {
  GridSpec g;
  try {
    g.t0 = j.at("t0").get<double>();
    g.t1 = j.at("t1").get<double>();
    g.nt = j.at("nt").get<int>();
    g.nz = j.at("nz").get<int>();
    if (j.contains("closure")) g.closure = closure_from_string(j.at("closure").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed grid JSON: ") + e.what());
  }
  g.validate();
  return g;
}

double smooth_step(double s) {
  auto f = [](double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; };
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return f(s) / (f(s) + f(1.0 - s));
}

std::vector<double> interior_taper(const GridSpec& g) {
  std::vector<double> w(static_cast<std::size_t>(g.nt));
  for (int n = 0; n < g.nt; ++n) {
    const double u = (g.t(n) - g.t0) / g.length();
    w[static_cast<std::size_t>(n)] = smooth_step((u - 0.1) / 0.15) * smooth_step((0.9 - u) / 0.15);
  }
  return w;
}

GridFunction::GridFunction(const GridSpec& g) : grid_(g), values_(Eigen::MatrixXcd::Zero(g.nt, g.nz)) {}

GridFunction::GridFunction(const GridSpec& g, Eigen::MatrixXcd values) : grid_(g), values_(std::move(values)) {
  if (values_.rows() != g.nt || values_.cols() != g.nz) throw std::invalid_argument("grid function shape mismatch");
}

double GridFunction::norm() const { return std::sqrt(grid_.h() * grid_.dz()) * values_.norm(); }

cplx GridFunction::inner(const GridFunction& v) const {
  if (!(v.grid_ == grid_)) throw std::invalid_argument("inner product of functions on different grids");
  // sum u conj(v)
  return grid_.h() * grid_.dz() * (v.values_.array().conjugate() * values_.array()).sum();
}

Eigen::MatrixXcd GridFunction::z_modes() const {
  Eigen::MatrixXcd tr = values_.transpose();  // nz x nt, columns contiguous
  dft_many(tr.data(), grid_.nz, grid_.nt, false);
  tr /= std::sqrt(static_cast<double>(grid_.nz));
  return tr.transpose();
}

GridFunction GridFunction::from_z_modes(const GridSpec& g, const Eigen::MatrixXcd& modes) {
  Eigen::MatrixXcd tr = modes.transpose();
  dft_many(tr.data(), g.nz, g.nt, true);
  tr /= std::sqrt(static_cast<double>(g.nz));
  return GridFunction(g, tr.transpose());
}

GridFunction& GridFunction::scale_t(const Eigen::VectorXcd& d) {
  values_ = d.asDiagonal() * values_;
  return *this;
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  values_ += o.values_;
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  values_ -= o.values_;
  return *this;
}

GridFunction& GridFunction::operator*=(cplx s) {
  values_ *= s;
  return *this;
}

GridOperator GridOperator::identity(const GridSpec& g) {
  return t_diagonal(g, Eigen::VectorXcd::Ones(g.nt));
}

GridOperator GridOperator::t_diagonal(const GridSpec& g, const Eigen::VectorXcd& d) {
  GridOperator op(g);
  Eigen::MatrixXcd m = d.asDiagonal();
  for (int q = 0; q < g.nz; ++q) op.blocks_.emplace(std::make_pair(q, q), m);
  return op;
}

GridOperator GridOperator::from_dense(const GridSpec& g, const Eigen::MatrixXcd& dense) {
  const int N = g.size();
  if (dense.rows() != N || dense.cols() != N) throw std::invalid_argument("dense operator shape mismatch");
  // F = unitary z-DFT acting on index n*nz + p; blocks of F dense F^*
  const int nz = g.nz, nt = g.nt;
  Eigen::MatrixXcd Fz(nz, nz);
  for (int q = 0; q < nz; ++q)
    for (int p = 0; p < nz; ++p) Fz(q, p) = std::polar(1.0 / std::sqrt(double(nz)), -g.mode(q) * g.z(p));
  GridOperator op(g);
  for (int a = 0; a < nz; ++a) {
    for (int b = 0; b < nz; ++b) {
      Eigen::MatrixXcd blk = Eigen::MatrixXcd::Zero(nt, nt);
      for (int p = 0; p < nz; ++p)
        for (int pp = 0; pp < nz; ++pp) {
          const cplx w = Fz(a, p) * std::conj(Fz(b, pp));
          for (int n = 0; n < nt; ++n)
            for (int nn = 0; nn < nt; ++nn) blk(n, nn) += w * dense(n * nz + p, nn * nz + pp);
        }
      if (blk.cwiseAbs().maxCoeff() > 0.0) op.blocks_.emplace(std::make_pair(a, b), std::move(blk));
    }
  }
  return op;
}

bool GridOperator::mode_diagonal() const {
  for (const auto& [key, m] : blocks_)
    if (key.first != key.second) return false;
  return true;
}

const Eigen::MatrixXcd* GridOperator::block(int a, int b) const {
  auto it = blocks_.find({a, b});
  return it == blocks_.end() ? nullptr : &it->second;
}

void GridOperator::add_to_block(int a, int b, const Eigen::MatrixXcd& m) {
  if (m.rows() != grid_.nt || m.cols() != grid_.nt) throw std::invalid_argument("block shape mismatch");
  auto [it, inserted] = blocks_.try_emplace({a, b}, m);
  if (!inserted) it->second += m;
}

Eigen::MatrixXcd GridOperator::apply_modes(const Eigen::MatrixXcd& modes) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(grid_.nt, grid_.nz);
  for (const auto& [key, m] : blocks_) out.col(key.first).noalias() += m * modes.col(key.second);
  return out;
}

GridFunction GridOperator::apply(const GridFunction& u) const {
  if (!(u.grid() == grid_)) throw std::invalid_argument("operator applied to function on another grid");
  return GridFunction::from_z_modes(grid_, apply_modes(u.z_modes()));
}

GridOperator GridOperator::adjoint() const {
  GridOperator r(grid_);
  for (const auto& [key, m] : blocks_) r.blocks_.emplace(std::make_pair(key.second, key.first), m.adjoint());
  return r;
}

GridOperator GridOperator::sandwich(const Eigen::VectorXcd& l, const Eigen::VectorXcd& r) const {
  GridOperator out(grid_);
  for (const auto& [key, m] : blocks_) out.blocks_.emplace(key, l.asDiagonal() * m * r.asDiagonal());
  return out;
}

Eigen::MatrixXcd GridOperator::dense() const {
  const int nz = grid_.nz, nt = grid_.nt;
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(grid_.size(), grid_.size());
  // physical (n,p) <- mode q: e^{i k_q z_p} / sqrt(nz)
  auto basis = [&](int p, int q) { return std::polar(1.0 / std::sqrt(double(nz)), grid_.mode(q) * grid_.z(p)); };
  for (const auto& [key, m] : blocks_) {
    const auto [a, b] = key;
    for (int p = 0; p < nz; ++p)
      for (int pp = 0; pp < nz; ++pp) {
        const cplx w = basis(p, a) * std::conj(basis(pp, b));
        for (int n = 0; n < nt; ++n)
          for (int nn = 0; nn < nt; ++nn) D(n * nz + p, nn * nz + pp) += w * m(n, nn);
      }
  }
  return D;
}

void GridOperator::require_same_grid(const GridSpec& g) const {
  if (!(g == grid_)) throw std::invalid_argument("operators live on different grids");
}

GridOperator& GridOperator::operator+=(const GridOperator& o) {
  require_same_grid(o.grid_);
  for (const auto& [key, m] : o.blocks_) add_to_block(key.first, key.second, m);
  return *this;
}

GridOperator& GridOperator::operator-=(const GridOperator& o) {
  require_same_grid(o.grid_);
  for (const auto& [key, m] : o.blocks_) add_to_block(key.first, key.second, -m);
  return *this;
}

GridOperator& GridOperator::operator*=(cplx s) {
  for (auto& [key, m] : blocks_) m *= s;
  return *this;
}

GridOperator operator*(const GridOperator& a, const GridOperator& b) {
  a.require_same_grid(b.grid_);
  GridOperator r(a.grid_);
  for (const auto& [ka, ma] : a.blocks_)
    for (const auto& [kb, mb] : b.blocks_) {
      if (ka.second != kb.first) continue;
      Eigen::MatrixXcd prod = ma * mb;
      auto [it, inserted] = r.blocks_.try_emplace({ka.first, kb.second}, std::move(prod));
      if (!inserted) it->second += prod;
    }
  return r;
}

Eigen::VectorXcd exp_weight(const GridSpec& g, double beta) {
  Eigen::VectorXcd w(g.nt);
  for (int n = 0; n < g.nt; ++n) w(n) = std::exp(beta * g.t(n));
  return w;
}

GridOperator interior_restriction(const GridOperator& A) {
  const auto taper = interior_taper(A.grid());
  Eigen::VectorXcd w(A.grid().nt);
  for (int n = 0; n < A.grid().nt; ++n) w(n) = taper[static_cast<std::size_t>(n)];
  return A.sandwich(w, w);
}

}  // namespace conic_shubin
