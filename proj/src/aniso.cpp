#include "conic_shubin/aniso.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace conic_shubin {

namespace {

// x^n for n >= 0; repeated squaring keeps integer exponents exact up to rounding of the products.
double ipow(double x, std::int64_t n) {
  double result = 1.0;
  while (n > 0) {
    if (n & 1) result *= x;
    x *= x;
    n >>= 1;
  }
  return result;
}

double power(double x, std::int64_t n) {
  if (n <= 64) return ipow(x, n);
  return x == 0.0 ? 0.0 : std::exp(static_cast<double>(n) * std::log(x));
}

// w_j = |y_j|^{1/l_j}; the norm is the l^{2L} norm of (w_1,w_2,w_3[,1]) with L = l1 l2 l3.
double scaled_norm(const std::array<double, 4>& w, std::size_t count, std::int64_t two_l) {
  double m = 0.0;
  for (std::size_t i = 0; i < count; ++i) m = std::max(m, w[i]);
  if (m == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += power(w[i] / m, two_l);
  return m * std::pow(sum, 1.0 / static_cast<double>(two_l));
}

double root(double y, int l) {
  const double a = std::abs(y);
  if (l == 1) return a;
  if (l == 2) return std::sqrt(a);
  return std::pow(a, 1.0 / l);
}

}  // namespace

AnisotropyVector::AnisotropyVector(int l1, int l2, int l3) : w_{l1, l2, l3} {
  if (l1 < 1 || l2 < 1 || l3 < 1) {
    throw std::invalid_argument("anisotropy weights must be >= 1, got (" + std::to_string(l1) + "," +
                                std::to_string(l2) + "," + std::to_string(l3) + ")");
  }
}

std::int64_t AnisotropyVector::product() const {
  return static_cast<std::int64_t>(w_[0]) * w_[1] * w_[2];
}

const AnisotropyVector& AnisotropyVector::require_global() const {
  if (!is_global()) throw std::invalid_argument("global-manifold mode requires l1 == l2");
  return *this;
}

CovarPoint::CovarPoint(double zeta, double sigma, double tau) : zeta_(zeta), sigma_(sigma), tau_(tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("CovarPoint requires tau >= 0");
}

CovarPoint CovarPoint::scaled(double rho, const AnisotropyVector& l) const {
  return {std::pow(rho, l.l1()) * zeta_, std::pow(rho, l.l2()) * sigma_, std::pow(rho, l.l3()) * tau_};
}

double aniso_abs(const CovarPoint& p, const AnisotropyVector& l) {
  const std::array<double, 4> w{root(p.zeta(), l.l1()), root(p.sigma(), l.l2()), root(p.tau(), l.l3()), 0.0};
  return scaled_norm(w, 3, 2 * l.product());
}

double aniso_bracket(double y1, double y2, double y3, const AnisotropyVector& l) {
  const std::array<double, 4> w{root(y1, l.l1()), root(y2, l.l2()), root(y3, l.l3()), 1.0};
  return scaled_norm(w, 4, 2 * l.product());
}

double aniso_bracket(const CovarPoint& p, const AnisotropyVector& l) {
  return aniso_bracket(p.zeta(), p.sigma(), p.tau(), l);
}

double japanese_bracket(const CovarPoint& p) {
  return std::sqrt(1.0 + p.zeta() * p.zeta() + p.sigma() * p.sigma() + p.tau() * p.tau());
}

std::vector<CovarPoint> hemisphere_sample(const AnisotropyVector& l, int n) {
  if (n < 2) throw std::invalid_argument("hemisphere_sample needs n >= 2");
  const double e_zeta = 1.0 / static_cast<double>(l.l2() * l.l3());
  const double e_sigma = 1.0 / static_cast<double>(l.l1() * l.l3());
  const double e_tau = 1.0 / static_cast<double>(l.l1() * l.l2());
  auto pull_back = [&](double w, double e) { return std::copysign(std::pow(std::abs(w), e), w); };

  std::vector<CovarPoint> out;
  const int rings = n - 1;  // latitudes 0..rings-1; the pole is added separately
  const int per_ring = 4 * (n - 1);
  out.reserve(static_cast<std::size_t>(rings * per_ring + 1));
  for (int i = 0; i < rings; ++i) {
    const double theta = 0.5 * std::numbers::pi * i / rings;
    const double c = std::cos(theta);
    const double s = i == 0 ? 0.0 : std::sin(theta);
    for (int j = 0; j < per_ring; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / per_ring;
      // exact zeros on the axes keep the equator/meridian points on the coordinate planes
      const double cp = (j % (per_ring / 4) == 0 && (j / (per_ring / 4)) % 2 == 1) ? 0.0 : std::cos(phi);
      const double sp = (j % (per_ring / 4) == 0 && (j / (per_ring / 4)) % 2 == 0) ? 0.0 : std::sin(phi);
      out.emplace_back(pull_back(c * cp, e_zeta), pull_back(c * sp, e_sigma), std::pow(s, e_tau));
    }
  }
  out.emplace_back(0.0, 0.0, 1.0);
  return out;
}

namespace {

double lower_ratio(const CovarPoint& p, const AnisotropyVector& l) {
  return aniso_bracket(p, l) / std::pow(japanese_bracket(p), 1.0 / l.sum());
}

double upper_ratio(const CovarPoint& p, const AnisotropyVector& l) {
  return aniso_bracket(p, l) / std::pow(japanese_bracket(p), static_cast<double>(l.sum()));
}

// Coordinate search in (log-ish) scale around a start point; f is minimised.
template <class F>
CovarPoint refine(CovarPoint p, F f) {
  double step = 0.5;
  double best = f(p);
  for (int iter = 0; iter < 200 && step > 1e-9; ++iter) {
    bool improved = false;
    for (int axis = 0; axis < 3; ++axis) {
      for (double dir : {-1.0, 1.0}) {
        std::array<double, 3> y{p.zeta(), p.sigma(), p.tau()};
        const double scale = std::max(1.0, std::abs(y[axis]));
        y[axis] += dir * step * scale;
        if (y[2] < 0.0) y[2] = 0.0;
        const CovarPoint q(y[0], y[1], y[2]);
        const double v = f(q);
        if (v < best) {
          best = v;
          p = q;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return p;
}

}  // namespace

SandwichConstants sandwich_constants(const AnisotropyVector& l, const std::vector<CovarPoint>& sample) {
  if (sample.empty()) throw std::invalid_argument("sandwich_constants needs a nonempty sample");
  auto lo = [&](const CovarPoint& p) { return lower_ratio(p, l); };
  auto hi = [&](const CovarPoint& p) { return -upper_ratio(p, l); };
  CovarPoint arg_lo = sample.front(), arg_hi = sample.front();
  SandwichConstants c{lo(arg_lo), -hi(arg_hi)};
  for (const auto& p : sample) {
    if (lo(p) < c.lower) {
      c.lower = lo(p);
      arg_lo = p;
    }
    if (upper_ratio(p, l) > c.upper) {
      c.upper = upper_ratio(p, l);
      arg_hi = p;
    }
  }
  c.lower = std::min(c.lower, lo(refine(arg_lo, lo)));
  c.upper = std::max(c.upper, -hi(refine(arg_hi, hi)));
  return c;
}

SandwichConstants sandwich_constants_bound(const AnisotropyVector& l) {
  return {std::pow(2.0, -1.0 / l.sum()), std::pow(4.0, 1.0 / (2.0 * static_cast<double>(l.product())))};
}

}  // namespace conic_shubin
