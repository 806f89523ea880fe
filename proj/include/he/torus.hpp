#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

// Frequency points on the m-torus with coordinates normalized to the
// fundamental domain [-1/2, 1/2), plus the phase arithmetic shared by the
// multiplier code. Phases of integer multiples are reduced with an exact
// two-product so that huge floor values lose no precision and conjugate
// symmetry m(-xi) = conj(m(xi)) holds exactly.

namespace he {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Wraps x to [-1/2, 1/2).
inline double reduce_mod1(double x) {
  double r = x - std::floor(x + 0.5);
  if (r >= 0.5) r -= 1.0;      // guards the upper boundary under rounding
  if (r < -0.5) r += 1.0;
  return r;
}

struct TorusPoint {
  Eigen::ArrayXd coords;  // each in [-1/2, 1/2)

  TorusPoint() = default;
  explicit TorusPoint(Eigen::ArrayXd c) : coords(std::move(c)) {}

  static TorusPoint reduce(const Eigen::ArrayXd& raw) {
    Eigen::ArrayXd c(raw.size());
    for (Eigen::Index i = 0; i < raw.size(); ++i) c[i] = reduce_mod1(raw[i]);
    return TorusPoint(std::move(c));
  }
  static TorusPoint reduce(double raw) {
    Eigen::ArrayXd c(1);
    c[0] = raw;
    return reduce(c);
  }

  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](int i) const { return coords[i]; }
  // sup-norm distance to 0 on the torus
  double norm_inf() const { return coords.abs().maxCoeff(); }
};

// Fractional part of xi * k in [-1/2, 1/2), exact to one rounding: the
// two-product splits xi * k into hi + lo with no error, subtracting the
// nearest integer from hi is exact, and lo restores the discarded bits.
// Antisymmetric in xi by construction.
inline double frac_mul(double xi, double k) {
  const double p = xi * k;
  const double lo = std::fma(xi, k, -p);
  return reduce_mod1((p - std::nearbyint(p)) + lo);
}

// e(x) = exp(2 pi i x), with the symmetry e(-x) = conj(e(x)) exact: sine and
// cosine are taken at |x| and the sign of the imaginary part is restored.
// |x| = 1/2 is pinned to the exact value -1, both because it is exact and
// because -1/2 is its own negative mod 1, so its image must be real for the
// conjugation symmetry to survive the [-1/2, 1/2) wrap.
inline std::complex<double> unit_phase(double x) {
  const double ax = std::abs(x);
  if (ax == 0.5) return {-1.0, 0.0};
  const double c = std::cos(two_pi * ax);
  const double s = std::sin(two_pi * ax);
  return {c, x < 0.0 ? -s : s};
}

}  // namespace he
