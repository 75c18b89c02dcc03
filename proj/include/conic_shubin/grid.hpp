#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace conic_shubin {

using cplx = std::complex<double>;

/// Boundary closure of the truncated t-window.
///
/// Periodic: nodes t0 + n h, lattice sigma = 2 pi m / L (nt frequencies).
/// Reflection: cell-centred nodes t0 + (n + 1/2) h, functions extended evenly
/// across both ends, lattice sigma = pi m / L (2 nt frequencies).
enum class Closure { Periodic, Reflection };

std::string to_string(Closure c);
Closure closure_from_string(const std::string& s);

/// Log-radial window t = log x in [t0, t1] times z in [0, 2 pi).
struct GridSpec {
  double t0 = -3.0;
  double t1 = 4.0;
  int nt = 256;
  int nz = 16;
  Closure closure = Closure::Periodic;

  /// Throws std::invalid_argument unless t0 < t1 and nt, nz are powers of two >= 8.
  void validate() const;

  double length() const { return t1 - t0; }
  double h() const { return length() / nt; }
  double dz() const;
  int size() const { return nt * nz; }

  double t(int n) const;
  double z(int p) const;
  /// Number of sigma samples: nt (periodic) or 2 nt (reflection).
  int lattice_size() const { return closure == Closure::Periodic ? nt : 2 * nt; }
  /// Signed lattice index of slot m in FFT order.
  int lattice_index(int m) const;
  /// sigma at lattice slot m (FFT order).
  double sigma(int m) const;
  /// Angular mode k at z-slot q (FFT order, -nz/2 .. nz/2 - 1).
  int mode(int q) const;
  /// z-slot of angular mode k, aliased mod nz.
  int slot_of_mode(int k) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

nlohmann::json to_json(const GridSpec& g);
/// {"t0","t1","nt","nz"} with optional "closure": "periodic" | "reflection".
GridSpec grid_from_json(const nlohmann::json& j);

/// Smooth step: 0 for s <= 0, 1 for s >= 1, built from e^{-1/s}.
double smooth_step(double s);

/// Taper in t: 1 on the interior 50% of the window, 0 outside the interior 80%.
std::vector<double> interior_taper(const GridSpec& g);

/// Complex samples u(t_n, z_p), stored nt x nz.
class GridFunction {
public:
  explicit GridFunction(const GridSpec& g);
  GridFunction(const GridSpec& g, Eigen::MatrixXcd values);

  const GridSpec& grid() const { return grid_; }
  const Eigen::MatrixXcd& values() const { return values_; }
  Eigen::MatrixXcd& values() { return values_; }
  cplx operator()(int n, int p) const { return values_(n, p); }
  cplx& operator()(int n, int p) { return values_(n, p); }

  /// Discrete L^2(dt dz) norm: sqrt(h dz sum |u|^2).
  double norm() const;
  /// Discrete pairing h dz sum u conj(v).
  cplx inner(const GridFunction& v) const;

  /// Unitary DFT over z: column q holds the coefficient of e^{i mode(q) z}.
  Eigen::MatrixXcd z_modes() const;
  static GridFunction from_z_modes(const GridSpec& g, const Eigen::MatrixXcd& modes);

  /// Multiplies every z-slice by d(t_n).
  GridFunction& scale_t(const Eigen::VectorXcd& d);

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(cplx s);
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(cplx s, GridFunction a) { return a *= s; }

private:
  GridSpec grid_;
  Eigen::MatrixXcd values_;
};

/// Linear operator on grid functions, stored in the z-Fourier basis.
///
/// Block (a, b) is the nt x nt matrix sending z-mode slot b to slot a.
/// Operators built from z-independent symbols only have diagonal blocks.
class GridOperator {
public:
  using BlockMap = std::map<std::pair<int, int>, Eigen::MatrixXcd>;

  explicit GridOperator(const GridSpec& g) : grid_(g) {}

  static GridOperator identity(const GridSpec& g);
  static GridOperator zero(const GridSpec& g) { return GridOperator(g); }
  /// Multiplication by d(t_n), the same in every z-mode.
  static GridOperator t_diagonal(const GridSpec& g, const Eigen::VectorXcd& d);
  /// Operator from a dense matrix in the physical basis (index n*nz + p).
  static GridOperator from_dense(const GridSpec& g, const Eigen::MatrixXcd& dense);

  const GridSpec& grid() const { return grid_; }
  const BlockMap& blocks() const { return blocks_; }
  /// True when only blocks (q, q) are present.
  bool mode_diagonal() const;
  /// Block (a, b), or nullptr when structurally zero.
  const Eigen::MatrixXcd* block(int a, int b) const;
  /// Adds m to block (a, b).
  void add_to_block(int a, int b, const Eigen::MatrixXcd& m);

  GridFunction apply(const GridFunction& u) const;
  /// Action on z-mode coefficients (nt x nz).
  Eigen::MatrixXcd apply_modes(const Eigen::MatrixXcd& modes) const;

  /// Conjugate transpose with respect to the grid pairing.
  GridOperator adjoint() const;
  /// diag(l) A diag(r) with t-diagonals applied in every mode.
  GridOperator sandwich(const Eigen::VectorXcd& l, const Eigen::VectorXcd& r) const;
  /// Dense matrix in the physical basis, index n*nz + p.
  Eigen::MatrixXcd dense() const;

  GridOperator& operator+=(const GridOperator& o);
  GridOperator& operator-=(const GridOperator& o);
  GridOperator& operator*=(cplx s);
  friend GridOperator operator+(GridOperator a, const GridOperator& b) { return a += b; }
  friend GridOperator operator-(GridOperator a, const GridOperator& b) { return a -= b; }
  friend GridOperator operator*(cplx s, GridOperator a) { return a *= s; }
  friend GridOperator operator*(const GridOperator& a, const GridOperator& b);

private:
  void require_same_grid(const GridSpec& g) const;

  GridSpec grid_;
  BlockMap blocks_;
};

/// Vector e^{beta t_n}.
Eigen::VectorXcd exp_weight(const GridSpec& g, double beta);
/// diag(w) A diag(w) with w the interior taper.
GridOperator interior_restriction(const GridOperator& A);

}  // namespace conic_shubin
