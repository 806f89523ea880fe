#include "he/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "he/io.hpp"
#include "he/parallel.hpp"
#include "he/rng.hpp"

namespace he {
namespace {

struct KahanComplex {
  double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
  void add(const std::complex<double>& z) {
    const double yr = z.real() - cre;
    const double sr = re + yr;
    cre = (sr - re) - yr;
    re = sr;
    const double yi = z.imag() - cim;
    const double si = im + yi;
    cim = (si - im) - yi;
    im = si;
  }
  std::complex<double> sum() const { return {re, im}; }
};

using OrbitSet = std::vector<std::vector<std::int64_t>>;

OrbitSet collect_orbits(const HardyFamily& family, std::int64_t N) {
  OrbitSet orbits;
  orbits.reserve(family.size());
  for (const auto& f : family) orbits.push_back(floor_orbit(f, N));
  return orbits;
}

void check_dim(const HardyFamily& family, const TorusPoint& xi) {
  if (family.empty()) throw std::invalid_argument("he: empty family");
  if (static_cast<std::size_t>(xi.dim()) != family.size())
    throw std::invalid_argument("he: xi dimension must match family size");
}

// Phase of the n-th orbit point: sum_i frac(xi_i * orbit_i[n]), wrapped back
// to [-1/2, 1/2). Each frac is antisymmetric in xi except at the -1/2
// boundary, where both signs of xi land on -1/2 and the raw totals differ by
// an integer instead of flipping sign; the final wrap removes that integer,
// so the total is exactly antisymmetric under xi -> -xi (boundary totals are
// self-conjugate and unit_phase treats them as real).
double orbit_phase(const OrbitSet& orbits, const TorusPoint& xi, std::size_t n) {
  double phase = 0.0;
  for (std::size_t i = 0; i < orbits.size(); ++i)
    phase += frac_mul(xi[static_cast<int>(i)], static_cast<double>(orbits[i][n]));
  return reduce_mod1(phase);
}

std::complex<double> multiplier_from_orbits(const OrbitSet& orbits, std::int64_t N,
                                            const TorusPoint& xi, bool upper_half) {
  const std::int64_t first = upper_half ? N / 2 + 1 : 1;
  KahanComplex acc;
  for (std::int64_t n = first; n <= N; ++n)
    acc.add(unit_phase(orbit_phase(orbits, xi, static_cast<std::size_t>(n - 1))));
  return acc.sum() / static_cast<double>(N);
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1], Newton on the Legendre
// recurrence (standard construction, no tables).
struct GaussLegendre {
  double node[16];
  double weight[16];
  GaussLegendre() {
    constexpr int n = 16;
    for (int k = 0; k < n; ++k) {
      double x = std::cos(0.5 * two_pi * (k + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
          const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      node[k] = x;
      weight[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre& gl16() {
  static const GaussLegendre table;
  return table;
}

std::complex<double> integrate_panels(const HardyFamily& family, const TorusPoint& xi,
                                      double a, double b, std::int64_t panels) {
  const GaussLegendre& gl = gl16();
  KahanComplex acc;
  const double width = (b - a) / static_cast<double>(panels);
  for (std::int64_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double mid = lo + 0.5 * width;
    const double half = 0.5 * width;
    for (int k = 0; k < 16; ++k) {
      const double t = mid + half * gl.node[k];
      double phase = 0.0;
      for (std::size_t i = 0; i < family.size(); ++i)
        phase += xi[static_cast<int>(i)] * eval(family[i], t);
      acc.add(gl.weight[k] * half * unit_phase(phase));
    }
  }
  return acc.sum();
}

// Jittered grid coordinate d of flat point index `flat`: cell offset plus a
// deterministic jitter in [0, 1).
double grid_coord(std::uint64_t seed, std::int64_t flat, int d, std::int64_t cell,
                  int grid_per_dim) {
  const double u = jitter01(seed, static_cast<std::uint64_t>(flat) * 8 + static_cast<std::uint64_t>(d));
  return -0.5 + (static_cast<double>(cell) + u) / static_cast<double>(grid_per_dim);
}

TorusPoint grid_point(std::uint64_t seed, std::int64_t flat, int m, int grid_per_dim) {
  Eigen::ArrayXd c(m);
  std::int64_t rest = flat;
  for (int d = m - 1; d >= 0; --d) {
    c[d] = grid_coord(seed, flat, d, rest % grid_per_dim, grid_per_dim);
    rest /= grid_per_dim;
  }
  return TorusPoint(std::move(c));
}

}  // namespace

std::complex<double> m_discrete(const HardyFamily& family, std::int64_t N,
                                const TorusPoint& xi, bool upper_half) {
  check_dim(family, xi);
  if (N < 1) throw std::invalid_argument("he::m_discrete: N must be >= 1");
  return multiplier_from_orbits(collect_orbits(family, N), N, xi, upper_half);
}

std::vector<std::complex<double>> multiplier_profile(const HardyFamily& family,
                                                     const TorusPoint& xi,
                                                     const std::vector<std::int64_t>& scales,
                                                     bool upper_half) {
  check_dim(family, xi);
  if (scales.empty()) throw std::invalid_argument("he::multiplier_profile: empty scales");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (scales[i] < 1 || (i > 0 && scales[i] <= scales[i - 1]))
      throw std::invalid_argument("he::multiplier_profile: scales must be positive increasing");
  }
  const std::int64_t top = scales.back();
  const OrbitSet orbits = collect_orbits(family, top);

  // Prefix snapshots at every scale and window edge.
  std::vector<std::int64_t> marks;
  for (std::int64_t s : scales) {
    marks.push_back(s);
    if (upper_half) marks.push_back(s / 2);
  }
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  std::vector<std::complex<double>> prefix(marks.size());
  KahanComplex acc;
  std::size_t next = 0;
  for (std::int64_t n = 0; n <= top; ++n) {
    if (n >= 1) acc.add(unit_phase(orbit_phase(orbits, xi, static_cast<std::size_t>(n - 1))));
    while (next < marks.size() && marks[next] == n) prefix[next++] = acc.sum();
  }
  auto at = [&](std::int64_t n) {
    const auto it = std::lower_bound(marks.begin(), marks.end(), n);
    return prefix[static_cast<std::size_t>(it - marks.begin())];
  };

  std::vector<std::complex<double>> out;
  out.reserve(scales.size());
  for (std::int64_t s : scales) {
    const std::complex<double> window = upper_half ? at(s) - at(s / 2) : at(s);
    out.push_back(window / static_cast<double>(s));
  }
  return out;
}

std::complex<double> m_continuous(const HardyFamily& family, std::int64_t N,
                                  const TorusPoint& xi, double tol) {
  check_dim(family, xi);
  if (N < 4) throw std::invalid_argument("he::m_continuous: N must be >= 4");
  if (!(tol > 0.0)) throw std::invalid_argument("he::m_continuous: tol must be > 0");
  const double a = static_cast<double>(N) / 2.0;
  const double b = static_cast<double>(N);

  double oscillations = 2.0;
  for (std::size_t i = 0; i < family.size(); ++i)
    oscillations += std::abs(xi[static_cast<int>(i)]) * std::abs(eval(family[i], b) - eval(family[i], a));

  std::int64_t panels = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil(oscillations / 2.0)), 4, 1 << 14);
  std::complex<double> prev = integrate_panels(family, xi, a, b, panels) / static_cast<double>(N);
  for (int round = 0; round < 12; ++round) {
    panels *= 2;
    const std::complex<double> cur = integrate_panels(family, xi, a, b, panels) / static_cast<double>(N);
    if (std::abs(cur - prev) <= tol) return cur;
    prev = cur;
    if (panels > (1 << 19))
      throw std::runtime_error("he::m_continuous: quadrature did not converge");
  }
  throw std::runtime_error("he::m_continuous: quadrature did not converge");
}

MajorArcBox major_arc_box(const HardyFamily& family, std::int64_t N, int l) {
  if (family.empty()) throw std::invalid_argument("he: empty family");
  if (N < 2) throw std::invalid_argument("he::major_arc_box: N must be >= 2");
  MajorArcBox box;
  box.half_widths.resize(static_cast<Eigen::Index>(family.size()));
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double mag = std::abs(eval(family[i], static_cast<double>(N)));
    if (mag == 0.0) throw std::domain_error("he::major_arc_box: P_i(N) = 0");
    box.half_widths[static_cast<Eigen::Index>(i)] = std::ldexp(1.0, l) / mag;
  }
  return box;
}

double minor_arc_sup(const HardyFamily& family, std::int64_t N, int l,
                     int grid_per_dim, std::uint64_t seed) {
  if (grid_per_dim < 8) throw std::invalid_argument("he::minor_arc_sup: grid_per_dim must be >= 8");
  const int m = static_cast<int>(family.size());
  const MajorArcBox box = major_arc_box(family, N, l);
  const OrbitSet orbits = collect_orbits(family, N);
  std::int64_t total = 1;
  for (int d = 0; d < m; ++d) total *= grid_per_dim;

  std::vector<double> mags(static_cast<std::size_t>(total), -1.0);
  parallel_for(total, [&](std::int64_t flat) {
    const TorusPoint xi = grid_point(seed, flat, m, grid_per_dim);
    if (box.contains(xi)) return;
    mags[static_cast<std::size_t>(flat)] = std::abs(multiplier_from_orbits(orbits, N, xi, true));
  });
  double sup = 0.0;
  for (double v : mags) sup = std::max(sup, v);
  return sup;
}

double vdc_bound(int j, std::int64_t N, double lambda, double h) {
  if (j < 2) throw std::invalid_argument("he::vdc_bound: j must be >= 2");
  if (j > 30) throw std::invalid_argument("he::vdc_bound: j too large");
  if (!(lambda > 0.0)) throw std::invalid_argument("he::vdc_bound: lambda must be > 0");
  if (!(h >= 1.0)) throw std::invalid_argument("he::vdc_bound: h must be >= 1");
  if (N < 1) throw std::invalid_argument("he::vdc_bound: N must be >= 1");
  const double J = std::ldexp(1.0, j);
  const double Nd = static_cast<double>(N);
  return h * (std::pow(lambda, 1.0 / (J - 2.0)) + std::pow(Nd, -2.0 / J) +
              std::pow(lambda * std::pow(Nd, static_cast<double>(j)), -2.0 / J));
}

namespace {

double golden_section(double lo, double hi, bool maximize,
                      const std::function<double(double)>& f) {
  constexpr double inv_phi = 0.6180339887498948482;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
    const bool keep_low = maximize ? (f1 > f2) : (f1 < f2);
    if (keep_low) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  const double xm = 0.5 * (lo + hi);
  return f(xm);
}

}  // namespace

std::pair<double, double> derivative_range(const HardyFamily& family,
                                           const Eigen::ArrayXd& coeffs, int j,
                                           double a, double b, int samples) {
  if (family.empty()) throw std::invalid_argument("he: empty family");
  if (static_cast<std::size_t>(coeffs.size()) != family.size())
    throw std::invalid_argument("he::derivative_range: coeffs size mismatch");
  if (!(a >= 2.0) || !(b > a)) throw std::invalid_argument("he::derivative_range: need 2 <= a < b");
  if (samples < 3) throw std::invalid_argument("he::derivative_range: samples must be >= 3");
  if (j < 0) throw std::invalid_argument("he::derivative_range: j must be >= 0");

  std::vector<HardyFunction> ds;
  ds.reserve(family.size());
  for (const auto& f : family) ds.push_back(derivative(f, j));
  auto g = [&](double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i)
      s += coeffs[static_cast<Eigen::Index>(i)] * eval(ds[i], t);
    return s;
  };
  auto absg = [&](double t) { return std::abs(g(t)); };

  const double step = (b - a) / static_cast<double>(samples - 1);
  std::vector<double> ts(static_cast<std::size_t>(samples)), gs(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    ts[static_cast<std::size_t>(k)] = (k == samples - 1) ? b : a + step * k;
    gs[static_cast<std::size_t>(k)] = g(ts[static_cast<std::size_t>(k)]);
  }

  double lo_val = std::abs(gs.front()), hi_val = std::abs(gs.front());
  for (int k = 1; k < samples; ++k) {
    lo_val = std::min(lo_val, std::abs(gs[static_cast<std::size_t>(k)]));
    hi_val = std::max(hi_val, std::abs(gs[static_cast<std::size_t>(k)]));
    // A sign change pins the minimum of |g| at zero.
    if (gs[static_cast<std::size_t>(k - 1)] * gs[static_cast<std::size_t>(k)] < 0.0) lo_val = 0.0;
  }
  for (int k = 1; k + 1 < samples; ++k) {
    const double prev = std::abs(gs[static_cast<std::size_t>(k - 1)]);
    const double mid = std::abs(gs[static_cast<std::size_t>(k)]);
    const double next = std::abs(gs[static_cast<std::size_t>(k + 1)]);
    if (mid >= prev && mid >= next)
      hi_val = std::max(hi_val, golden_section(ts[static_cast<std::size_t>(k - 1)],
                                               ts[static_cast<std::size_t>(k + 1)], true, absg));
    if (mid <= prev && mid <= next)
      lo_val = std::min(lo_val, golden_section(ts[static_cast<std::size_t>(k - 1)],
                                               ts[static_cast<std::size_t>(k + 1)], false, absg));
  }
  return {lo_val, hi_val};
}

SawtoothExpansion sawtooth_expansion(double xi, int K) {
  if (!(xi >= -0.5) || !(xi < 0.5))
    throw std::invalid_argument("he::sawtooth_expansion: xi must lie in [-1/2, 1/2)");
  if (K < 0) throw std::invalid_argument("he::sawtooth_expansion: K must be >= 0");
  SawtoothExpansion e;
  e.xi = xi;
  e.K = K;
  if (xi == 0.0) {
    e.terms.emplace_back(0, std::complex<double>(1.0, 0.0));
    return e;
  }
  e.a = (std::complex<double>(1.0, 0.0) - unit_phase(-xi)) / std::complex<double>(0.0, two_pi);
  // |a| = |sin(pi xi)| / pi < |xi| holds strictly in exact arithmetic, but for
  // tiny xi the final rounding can land a fraction of an ulp above. Nudge the
  // magnitude back so callers can rely on |a| <= ||xi|| as an exact invariant.
  const double dist = std::abs(xi);
  const double mag = std::abs(e.a);
  if (mag > dist) {
    e.a *= dist / mag;
    while (std::abs(e.a) > dist) e.a *= 1.0 - 0x1p-52;
  }
  for (int k = -K; k <= K; ++k)
    e.terms.emplace_back(k, e.a / (xi + static_cast<double>(k)));
  return e;
}

std::complex<double> sawtooth_eval(const SawtoothExpansion& e, double x) {
  KahanComplex acc;
  for (const auto& [k, coeff] : e.terms)
    acc.add(coeff * unit_phase(static_cast<double>(k) * x));
  return acc.sum();
}

std::complex<double> sawtooth_target(double xi, double x) {
  return unit_phase(-xi * (x - std::floor(x)));
}

double correlation_function(const Eigen::ArrayXd& coeffs, const HardyFamily& family, double t) {
  if (family.empty()) throw std::invalid_argument("he: empty family");
  if (static_cast<std::size_t>(coeffs.size()) != family.size())
    throw std::invalid_argument("he::correlation_function: coeffs size mismatch");
  if (coeffs.abs().maxCoeff() == 0.0)
    throw std::invalid_argument("he::correlation_function: all coefficients zero");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double mag = std::abs(detail::eval_limit(family[i], t));
    num += coeffs[static_cast<Eigen::Index>(i)] * mag;
    den += std::abs(coeffs[static_cast<Eigen::Index>(i)]) * mag;
  }
  if (den < 4.0 * std::numeric_limits<double>::min())
    throw std::domain_error("he::correlation_function: denominator underflow");
  return num / den;
}

double exceptional_measure(const Eigen::ArrayXd& coeffs, const HardyFamily& family,
                           std::int64_t N, double threshold, std::int64_t samples) {
  if (N < 4) throw std::invalid_argument("he::exceptional_measure: N must be >= 4");
  if (!(threshold > 0.0) || !(threshold <= 1.0))
    throw std::invalid_argument("he::exceptional_measure: threshold must be in (0, 1]");
  if (samples < 1) throw std::invalid_argument("he::exceptional_measure: samples must be >= 1");
  const double half = static_cast<double>(N) / 2.0;
  std::int64_t hits = 0;
  for (std::int64_t k = 0; k < samples; ++k) {
    const double t = half + (static_cast<double>(k) + 0.5) * half / static_cast<double>(samples);
    if (std::abs(correlation_function(coeffs, family, t)) < threshold) ++hits;
  }
  return half * static_cast<double>(hits) / static_cast<double>(samples);
}

std::vector<ScanRow> expsum_scan(const HardyFamily& family, std::int64_t N, int l,
                                 int grid_per_dim, std::uint64_t seed) {
  if (grid_per_dim < 8) throw std::invalid_argument("he::expsum_scan: grid_per_dim must be >= 8");
  const int m = static_cast<int>(family.size());
  const MajorArcBox box = major_arc_box(family, N, l);
  const OrbitSet orbits = collect_orbits(family, N);
  std::int64_t total = 1;
  for (int d = 0; d < m; ++d) total *= grid_per_dim;

  std::vector<ScanRow> rows(static_cast<std::size_t>(total));
  parallel_for(total, [&](std::int64_t flat) {
    const TorusPoint xi = grid_point(seed, flat, m, grid_per_dim);
    ScanRow& row = rows[static_cast<std::size_t>(flat)];
    row.N = N;
    row.l = l;
    row.xi = xi.coords;
    row.abs_m = std::abs(multiplier_from_orbits(orbits, N, xi, true));
    row.in_major_arc = box.contains(xi);
  });
  return rows;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string out;
  const int m = rows.empty() ? 1 : static_cast<int>(rows.front().xi.size());
  std::vector<std::string> header{"N", "l"};
  for (int d = 1; d <= m; ++d) header.push_back("xi_" + std::to_string(d));
  header.push_back("abs_m");
  header.push_back("in_major_arc");
  out += csv_row(header);
  for (const auto& row : rows) {
    std::vector<std::string> cells{fmt_int(row.N), fmt_int(row.l)};
    for (int d = 0; d < row.xi.size(); ++d) cells.push_back(fmt_real(row.xi[d]));
    cells.push_back(fmt_real(row.abs_m));
    cells.push_back(row.in_major_arc ? "1" : "0");
    out += csv_row(cells);
  }
  return out;
}

}  // namespace he
