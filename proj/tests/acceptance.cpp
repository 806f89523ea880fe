// Acceptance gate: eleven end-to-end criteria, one PASS/FAIL line each.
// Exit status is the number of failed criteria capped at 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "he/arcs.hpp"
#include "he/ergodic.hpp"
#include "he/expsum.hpp"
#include "he/hardy.hpp"
#include "he/lattice.hpp"
#include "he/parallel.hpp"
#include "he/rng.hpp"
#include "he/torus.hpp"
#include "he/variation.hpp"

namespace {

using he::IndexedSequence;
using he::SplitMix64;
using he::TorusPoint;
using cd = std::complex<double>;

IndexedSequence random_sequence(SplitMix64& rng, int len) {
  std::vector<cd> values;
  values.reserve(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) values.emplace_back(rng.symmetric(), rng.symmetric());
  return he::make_sequence(std::move(values));
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct Outcome {
  bool ok = false;
  std::string detail;
};

// criterion 1: the chain DP agrees with exhaustive chain search.
Outcome variation_oracle() {
  SplitMix64 rng{101u};
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const IndexedSequence seq = random_sequence(rng, 2 + static_cast<int>(rng.next() % 11));
    for (double r : {1.0, 1.5, 2.0, 3.0}) {
      const double diff = std::abs(he::vr_norm(seq, r).value - he::vr_norm_bruteforce(seq, r));
      worst = std::max(worst, diff);
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |dp - bruteforce| = %.2e", worst);
  return {worst <= 1e-12, buf};
}

// criterion 2: the jump count DP agrees with exhaustive search exactly.
Outcome jump_oracle() {
  SplitMix64 rng{202u};
  std::int64_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const IndexedSequence seq = random_sequence(rng, 2 + static_cast<int>(rng.next() % 11));
    for (double delta : {0.1, 0.5, 1.0})
      if (he::jump_count(seq, delta) != he::jump_count_bruteforce(seq, delta)) ++mismatches;
  }
  return {mismatches == 0, "mismatches = " + std::to_string(mismatches)};
}

// criterion 3: five variation inequalities, 10^4 random instances each.
Outcome inequality_suite() {
  SplitMix64 rng{303u};
  const double slack = 1.0 + 1e-12;
  std::int64_t violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const IndexedSequence seq = random_sequence(rng, 2 + static_cast<int>(rng.next() % 11));
    const double r = 1.0 + 2.0 * rng.uniform();
    const double vr = he::vr_norm(seq, r).value;

    // delta * count^(1/r) <= V^r
    const double delta = 0.05 + rng.uniform();
    const double count = static_cast<double>(he::jump_count(seq, delta));
    if (delta * std::pow(count, 1.0 / r) > vr * slack) ++violations;

    // V^r nonincreasing in r
    const double r2 = r + 1.0;
    if (he::vr_norm(seq, r2).value > vr * slack) ++violations;

    // V^r <= 3 * l^r norm
    double lr = 0.0;
    for (const cd& v : seq.values) lr += std::pow(std::abs(v), r);
    if (vr > 3.0 * std::pow(lr, 1.0 / r) * slack) ++violations;

    // splitting the scale range in two costs at most a factor 3
    const std::size_t cut = 1 + rng.next() % (seq.indices.size() - 1);
    IndexedSequence left, right;
    left.indices.assign(seq.indices.begin(), seq.indices.begin() + static_cast<long>(cut));
    left.values.assign(seq.values.begin(), seq.values.begin() + static_cast<long>(cut));
    right.indices.assign(seq.indices.begin() + static_cast<long>(cut), seq.indices.end());
    right.values.assign(seq.values.begin() + static_cast<long>(cut), seq.values.end());
    const double parts = he::vr_norm(left, r).value + he::vr_norm(right, r).value;
    if (vr > 3.0 * parts * slack) ++violations;

    // dyadic long part plus block short parts control the full variation
    const int kmax = 2 + static_cast<int>(rng.next() % 3);
    IndexedSequence dense;
    for (std::int64_t n = 2; n <= (std::int64_t{1} << kmax); ++n) {
      dense.indices.push_back(n);
      dense.values.emplace_back(rng.symmetric(), rng.symmetric());
    }
    const he::LongShortSplit split = he::long_short_split(dense, 2.25 + 2.0 * rng.uniform());
    if (split.full > 3.0 * (split.long_part + split.short_part) * slack) ++violations;
  }
  return {violations == 0, "violations = " + std::to_string(violations)};
}

// criterion 4: every scanned point with |m| >= 0.3 sits inside the major arc
// box at one fitted level l*, and the sup of |m| off that box decays in N.
Outcome arc_confinement() {
  const he::HardyFamily family{he::parse_hardy("1*t^1.5")};
  // This seed's jittered grid lands a point within 2e-5 of the origin, so the
  // containment clause is exercised on actual flagged points rather than
  // passing vacuously.
  const std::uint64_t seed = 44u;
  std::vector<std::int64_t> Ns;
  for (int k = 10; k <= 16; ++k) Ns.push_back(std::int64_t{1} << k);

  std::vector<std::vector<he::ScanRow>> scans;
  int l_star = 0;
  std::int64_t flagged = 0;
  for (std::int64_t N : Ns) {
    scans.push_back(he::expsum_scan(family, N, 0, 512, seed));
    const double pN = std::abs(he::eval(family[0], static_cast<double>(N)));
    for (const he::ScanRow& row : scans.back()) {
      if (row.abs_m < 0.3) continue;
      ++flagged;
      const double stretch = std::abs(row.xi[0]) * pN;
      if (stretch > 1.0)
        l_star = std::max(l_star, static_cast<int>(std::ceil(std::log2(stretch))));
    }
  }
  if (l_star > 8) return {false, "fitted l* = " + std::to_string(l_star) + " exceeds 8"};

  std::int64_t escapes = 0;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    const he::MajorArcBox box = he::major_arc_box(family, Ns[i], l_star);
    for (const he::ScanRow& row : scans[i])
      if (row.abs_m >= 0.3 && !box.contains(TorusPoint(row.xi))) ++escapes;
  }

  std::vector<double> lx, ly;
  for (std::int64_t N : Ns) {
    lx.push_back(std::log(static_cast<double>(N)));
    ly.push_back(std::log(he::minor_arc_sup(family, N, l_star, 512, seed)));
  }
  const double slope = lsq_slope(lx, ly);

  char buf[96];
  std::snprintf(buf, sizeof buf, "l* = %d, flagged = %lld, escapes = %lld, sup slope = %.3f",
                l_star, static_cast<long long>(flagged), static_cast<long long>(escapes), slope);
  return {escapes == 0 && slope < -0.1, buf};
}

// criterion 5: the discrete sum approaches the continuous integral inside
// the innermost arc box as N grows.
Outcome discrete_continuous_agreement() {
  const he::HardyFamily family{he::parse_hardy("1*t^1.5")};
  SplitMix64 rng{505u};
  auto max_gap = [&](std::int64_t N) {
    const double hw = 1.0 / std::abs(he::eval(family[0], static_cast<double>(N)));
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
      const TorusPoint xi = TorusPoint::reduce(rng.symmetric() * hw);
      const cd mz = he::m_discrete(family, N, xi, true);
      const cd mr = he::m_continuous(family, N, xi, 1e-10);
      worst = std::max(worst, std::abs(mz - mr));
    }
    return worst;
  };
  const double coarse = max_gap(std::int64_t{1} << 10);
  const double fine = max_gap(std::int64_t{1} << 14);
  char buf[96];
  std::snprintf(buf, sizeof buf, "max gap %.3e at 2^10 vs %.3e at 2^14 (ratio %.1f)",
                coarse, fine, coarse / fine);
  return {coarse >= 2.0 * fine, buf};
}

// criterion 6: truncated sawtooth series error bound and the exact
// coefficient bound |a(xi)| <= ||xi||.
Outcome sawtooth_bounds() {
  SplitMix64 rng{606u};
  std::int64_t trunc_viol = 0, coef_viol = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    double xi = 0.5 * rng.symmetric();
    if (trial % 10 == 9) xi *= 1e-10;  // stress the coefficient bound near 0
    const double x = 2.5 * rng.symmetric();
    const double dist = std::abs(he::reduce_mod1(x));
    for (int K : {16, 64, 256}) {
      const he::SawtoothExpansion e = he::sawtooth_expansion(xi, K);
      if (std::abs(e.a) > std::abs(xi)) ++coef_viol;
      const double err = std::abs(he::sawtooth_eval(e, x) - he::sawtooth_target(xi, x));
      const double bound =
          10.0 * std::log2(static_cast<double>(K)) *
          std::min(1.0, dist > 0.0 ? 1.0 / (static_cast<double>(K) * dist) : 1.0);
      if (err > bound) ++trunc_viol;
      else if (bound > 0.0) worst_ratio = std::max(worst_ratio, err / bound);
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "truncation violations = %lld, coef violations = %lld, max err/bound = %.2f",
                static_cast<long long>(trunc_viol), static_cast<long long>(coef_viol), worst_ratio);
  return {trunc_viol == 0 && coef_viol == 0, buf};
}

// criterion 7: jump counts along a lacunary scale set grow no faster than
// delta^-3 (fitted log-log slope >= -3).
Outcome jump_count_scaling() {
  const he::HardyFamily family{he::parse_hardy("1*t^1.5")};
  SplitMix64 rng{707u};
  const std::vector<double> deltas{0.4, 0.2, 0.1, 0.05};
  double min_slope = 0.0;
  for (int i = 0; i < 16; ++i) {
    const TorusPoint xi = TorusPoint::reduce(0.5 * rng.symmetric());
    const he::JumpReport rep =
        he::jump_experiment(family, xi, he::ScaleSet::lacunary(2.0, std::int64_t{1} << 16), deltas);
    min_slope = std::min(min_slope, rep.slope);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "min fitted slope = %.3f", min_slope);
  return {min_slope >= -3.0, buf};
}

// criterion 8: the floor orbit rotation by sqrt(2)-1 equidistributes; the
// empirical density of each arc matches its length.
Outcome equidistribution() {
  const he::HardyFamily family{he::parse_hardy("1*t^1.5")};
  he::TorusSystem sys;
  sys.alphas = Eigen::ArrayXd::Constant(1, std::sqrt(2.0) - 1.0);
  sys.beta = Eigen::ArrayXd::Constant(1, 1.0);
  const Eigen::ArrayXd x0 = Eigen::ArrayXd::Zero(1);
  double worst = 0.0;
  for (double len : {0.1, 0.25, 0.5, 0.9}) {
    const double lo = 0.5 * (1.0 - len);
    const std::vector<double> dens =
        he::equidistribution_trace(sys, family, x0, {{lo, lo + len}}, {100000});
    worst = std::max(worst, std::abs(dens[0] - len));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |density - length| = %.4f", worst);
  return {worst < 0.02, buf};
}

// criterion 9: empirical operator ratios off the major arc box shrink as the
// box grows and the pure-frequency ratio reproduces the multiplier modulus.
Outcome minor_arc_operator() {
  const he::HardyFamily family{he::parse_hardy("1*t^1.5")};
  he::ArcConfig cfg;
  cfg.grid_size = 1 << 16;
  const std::int64_t N = 1 << 12;

  double ratios[3] = {0.0, 0.0, 0.0};
  const int levels[3] = {2, 4, 6};
  for (int i = 0; i < 3; ++i)
    ratios[i] = he::minor_arc_operator_ratio(cfg, family, N, levels[i], 32, 909u).max_ratio;
  const bool nonincreasing = ratios[1] <= ratios[0] + 0.02 && ratios[2] <= ratios[1] + 0.02;
  const bool small_tail = ratios[2] <= 0.5;

  double worst_pure = 0.0;
  for (std::int64_t q : {std::int64_t{1}, std::int64_t{37}, std::int64_t{1024},
                         std::int64_t{32768}, std::int64_t{65535}}) {
    const double coord =
        static_cast<double>(q >= cfg.grid_size / 2 ? q - cfg.grid_size : q) / cfg.grid_size;
    const double direct = std::abs(he::m_discrete(family, N, TorusPoint::reduce(coord), true));
    worst_pure = std::max(worst_pure,
                          std::abs(he::pure_frequency_ratio(cfg, family, N, {q}) - direct));
  }

  char buf[128];
  std::snprintf(buf, sizeof buf, "max ratios = %.4f/%.4f/%.4f at l = 2/4/6, pure freq gap = %.1e",
                ratios[0], ratios[1], ratios[2], worst_pure);
  return {nonincreasing && small_tail && worst_pure <= 1e-10, buf};
}

// criterion 10: on a pure frequency the lattice average route and the
// multiplier route give bitwise equal 2-variation over each dyadic block,
// and the block variation obeys the fluctuation bound 4 sqrt(2^k A a).
Outcome short_variation_bound() {
  const he::HardyFamily family{he::parse_hardy("1*t^1.5")};
  SplitMix64 rng{1010u};
  std::int64_t route_diffs = 0, bound_viol = 0;
  double min_headroom = 1e300;
  for (int k : {6, 8, 10}) {
    const std::int64_t lo = std::int64_t{1} << k, hi = lo * 2;
    std::vector<std::int64_t> scales;
    for (std::int64_t n = lo; n <= hi; ++n) scales.push_back(n);
    const std::int64_t reach =
        static_cast<std::int64_t>(he::eval(family[0], static_cast<double>(hi)));

    for (int i = 0; i < 16; ++i) {
      const double xi0 = 0.5 * rng.symmetric();
      const TorusPoint xi = TorusPoint::reduce(xi0);

      IndexedSequence via_m{scales, he::multiplier_profile(family, xi, scales, false)};
      const he::VariationResult vm = he::vr_norm(via_m, 2.0);

      // f(y) = e(xi * (-y)) on [-reach, 0], so f(0 - orbit) matches the
      // multiplier summand bit for bit.
      he::LatticeBox box;
      box.lo = he::LatticePoint::Constant(1, -reach);
      box.hi = he::LatticePoint::Constant(1, 0);
      Eigen::ArrayXcd values(reach + 1);
      for (std::int64_t idx = 0; idx <= reach; ++idx)
        values[idx] = he::unit_phase(he::frac_mul(xi[0], static_cast<double>(reach - idx)));
      const he::LatticeFunction f(box, std::move(values));
      IndexedSequence via_f;
      via_f.indices = scales;
      for (std::int64_t N : scales)
        via_f.values.push_back(
            he::lattice_average(f, family, N, he::LatticePoint::Zero(1), false));
      if (he::vr_norm(via_f, 2.0).value != vm.value) ++route_diffs;

      double A = 0.0, a = 0.0;
      for (std::size_t j = 0; j < via_m.values.size(); ++j) {
        A = std::max(A, std::abs(via_m.values[j] - via_m.values[0]));
        if (j + 1 < via_m.values.size())
          a = std::max(a, std::abs(via_m.values[j + 1] - via_m.values[j]));
      }
      const double bound = 4.0 * std::sqrt(static_cast<double>(lo) * A * a);
      if (vm.jump_term > bound) ++bound_viol;
      else if (vm.jump_term > 0.0) min_headroom = std::min(min_headroom, bound / vm.jump_term);
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "route diffs = %lld, bound violations = %lld, min headroom = %.2fx",
                static_cast<long long>(route_diffs), static_cast<long long>(bound_viol),
                min_headroom);
  return {route_diffs == 0 && bound_viol == 0, buf};
}

// criterion 11: symbolic calculus is exact where it should be.
Outcome hardy_calculus() {
  std::int64_t errors = 0;
  for (const char* text : {"1*t^1.5", "1*t^1.5 + 1*t^0.5*log^1", "2*t^2.25*log^2", "1*t^0.5",
                           "3*t^3"}) {
    const he::HardyFunction f = he::parse_hardy(text);
    const he::HardyFunction df = he::derivative(f);
    if (he::growth_type(df) != he::growth_type(f) - 1.0) ++errors;
    for (double t : {10.0, 100.0}) {
      const double h = 1e-4 * t;
      const double central = (he::eval(f, t + h) - he::eval(f, t - h)) / (2.0 * h);
      const double exact = he::eval(df, t);
      if (std::abs(central - exact) > 1e-6 * std::abs(exact)) ++errors;
    }
  }
  const he::HardyFunction p15 = he::parse_hardy("1*t^1.5");
  const auto orbit = he::floor_orbit(p15, 10000);
  for (std::int64_t s = 1; s * s <= 10000; ++s)
    if (orbit[static_cast<std::size_t>(s * s - 1)] != s * s * s) ++errors;
  if (orbit[3] != 8) ++errors;  // floor(4^1.5) hit exactly
  return {errors == 0, "errors = " + std::to_string(errors)};
}

}  // namespace

int main() {
  he::set_num_threads(4);
  struct Criterion {
    const char* label;
    double limit_s;
    Outcome (*run)();
  };
  const Criterion table[] = {
      {"variation norm matches exhaustive search", 10.0, variation_oracle},
      {"jump counts match exhaustive search", 10.0, jump_oracle},
      {"variation inequality suite", 60.0, inequality_suite},
      {"large multiplier values confined to major arcs", 300.0, arc_confinement},
      {"discrete and continuous multipliers converge", 120.0, discrete_continuous_agreement},
      {"sawtooth truncation and coefficient bounds", 10.0, sawtooth_bounds},
      {"lacunary jump counts scale like a bounded power", 300.0, jump_count_scaling},
      {"floor orbit rotation equidistributes", 30.0, equidistribution},
      {"minor arc operator ratios decay", 300.0, minor_arc_operator},
      {"short variation controlled by fluctuation size", 120.0, short_variation_bound},
      {"symbolic calculus and floor orbits exact", 5.0, hardy_calculus},
  };

  int failures = 0;
  for (std::size_t i = 0; i < std::size(table); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = table[i].run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > table[i].limit_s) {
      out.ok = false;
      out.detail += " [time limit exceeded]";
    }
    if (!out.ok) ++failures;
    std::printf("%s criterion %2zu: %s (%s; %.1f s)\n", out.ok ? "PASS" : "FAIL", i + 1,
                table[i].label, out.detail.c_str(), elapsed);
    std::fflush(stdout);
  }
  std::printf("%d/11 criteria passed\n", 11 - failures);
  return failures > 0 ? 1 : 0;
}
