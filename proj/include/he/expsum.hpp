#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "he/hardy.hpp"
#include "he/torus.hpp"

// Exponential-sum multipliers along floor orbits of Hardy-field families,
// their continuous counterparts, major/minor arc geometry on the frequency
// torus, and the sawtooth expansion used to strip floors from phases.

namespace he {

// m_N(xi) = (1/N) sum_n e(xi . floor orbit(n)), n over (N/2, N] when
// upper_half, over [1, N] otherwise. Summation is compensated and runs in
// ascending n, so results are independent of threading and conjugate
// symmetric exactly. Requires xi.dim() == family size.
std::complex<double> m_discrete(const HardyFamily& family, std::int64_t N,
                                const TorusPoint& xi, bool upper_half);

// m_discrete at many scales in one orbit pass (prefix snapshots). Scales must
// be positive and strictly increasing. Agrees with per-scale m_discrete to
// roundoff for upper_half (identical operations when upper_half = false).
std::vector<std::complex<double>> multiplier_profile(const HardyFamily& family,
                                                     const TorusPoint& xi,
                                                     const std::vector<std::int64_t>& scales,
                                                     bool upper_half);

// (1/N) * integral over [N/2, N] of e(xi . P(t)) dt by adaptive composite
// Gauss-Legendre; panels double until the Richardson estimate is below tol.
// Requires N >= 4 and tol > 0; throws runtime_error if the estimate refuses
// to settle.
std::complex<double> m_continuous(const HardyFamily& family, std::int64_t N,
                                  const TorusPoint& xi, double tol);

struct MajorArcBox {
  Eigen::ArrayXd half_widths;  // per coordinate, centered at 0
  bool contains(const TorusPoint& xi) const {
    for (int i = 0; i < xi.dim(); ++i)
      if (std::abs(xi[i]) > half_widths[i]) return false;
    return true;
  }
};

// Box with half-widths 2^l / |P_i(N)|.
MajorArcBox major_arc_box(const HardyFamily& family, std::int64_t N, int l);

// Max of |m_discrete(upper half)| over a deterministic jittered grid on the
// torus with the major arc box removed. grid_per_dim >= 8.
double minor_arc_sup(const HardyFamily& family, std::int64_t N, int l,
                     int grid_per_dim, std::uint64_t seed);

// Oscillation bound h * (lambda^(1/(J-2)) + N^(-2/J) + (lambda N^j)^(-2/J)),
// J = 2^j, valid when the j-th phase derivative lives in [lambda, h*lambda].
// Requires j >= 2, lambda > 0, h >= 1.
double vdc_bound(int j, std::int64_t N, double lambda, double h);

// (min, max) of |sum_i coeffs_i P_i^(j)| over [a, b]: uniform samples plus
// golden-section refinement around interior extrema; sign changes pin the
// minimum at zero. Requires j >= 0, 2 <= a < b, samples >= 3.
std::pair<double, double> derivative_range(const HardyFamily& family,
                                           const Eigen::ArrayXd& coeffs, int j,
                                           double a, double b, int samples);

// Truncated Fourier expansion of x -> e(-xi {x}): coefficient a(xi)/(xi + k)
// for |k| <= K with a(xi) = (1 - e(-xi))/(2 pi i). xi = 0 degenerates to the
// constant term 1. |a| is nudged down by at most a few ulps where final
// rounding would break the exact invariant |a(xi)| <= ||xi||.
struct SawtoothExpansion {
  double xi = 0.0;
  int K = 0;
  std::complex<double> a{0.0, 0.0};
  std::vector<std::pair<int, std::complex<double>>> terms;  // (k, coefficient)
};

SawtoothExpansion sawtooth_expansion(double xi, int K);

// Partial sum sum_k coeff_k e(k x).
std::complex<double> sawtooth_eval(const SawtoothExpansion& e, double x);

// The expanded function e(-xi {x}) itself.
std::complex<double> sawtooth_target(double xi, double x);

// C(t) = sum_i a_i |P_i(t)| / sum_i |a_i| |P_i(t)|. Domain t >= 1 (t = 1 via
// the limit convention). Throws if the denominator underflows or every
// coefficient is zero.
double correlation_function(const Eigen::ArrayXd& coeffs, const HardyFamily& family, double t);

// (N/2) * fraction of deterministic midpoint samples t in [N/2, N] with
// |C(t)| < threshold. Requires N >= 4, threshold in (0, 1], samples >= 1.
double exceptional_measure(const Eigen::ArrayXd& coeffs, const HardyFamily& family,
                           std::int64_t N, double threshold, std::int64_t samples);

// Full jittered-grid scan used by the CLI: one row per grid point.
struct ScanRow {
  std::int64_t N = 0;
  int l = 0;
  Eigen::ArrayXd xi;
  double abs_m = 0.0;
  bool in_major_arc = false;
};

std::vector<ScanRow> expsum_scan(const HardyFamily& family, std::int64_t N, int l,
                                 int grid_per_dim, std::uint64_t seed);

// CSV with header N,l,xi_1..xi_m,abs_m,in_major_arc.
std::string scan_csv(const std::vector<ScanRow>& rows);

}  // namespace he
