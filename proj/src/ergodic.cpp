#include "he/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "he/io.hpp"

namespace he {
namespace {

void check_system(const TorusSystem& system, const HardyFamily& family) {
  if (family.empty()) throw std::invalid_argument("he: empty family");
  if (static_cast<std::size_t>(system.alphas.size()) != family.size() ||
      static_cast<std::size_t>(system.beta.size()) != family.size())
    throw std::invalid_argument("he: system dimension must match family size");
  for (Eigen::Index i = 0; i < system.alphas.size(); ++i)
    if (!(system.alphas[i] >= 0.0) || !(system.alphas[i] < 1.0))
      throw std::invalid_argument("he: rotation amounts must lie in [0, 1)");
}

void check_scales(const std::vector<std::int64_t>& scales) {
  if (scales.empty()) throw std::invalid_argument("he: empty scale list");
  for (std::size_t i = 0; i < scales.size(); ++i)
    if (scales[i] < 1 || (i > 0 && scales[i] <= scales[i - 1]))
      throw std::invalid_argument("he: scales must be positive and strictly increasing");
}

double wrap01(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  return r;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) { mx += xs[i]; my += ys[i]; }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return den == 0.0 ? 0.0 : num / den;
}

}  // namespace

IndexedSequence to_sequence(const AverageTrace& trace) {
  IndexedSequence seq;
  seq.indices = trace.scales;
  seq.values = trace.values;
  validate_sequence(seq);
  return seq;
}

AverageTrace torus_average_trace(const TorusSystem& system, const HardyFamily& family,
                                 const Eigen::ArrayXd& x0,
                                 const std::vector<std::int64_t>& scales) {
  check_system(system, family);
  check_scales(scales);
  if (x0.size() != system.alphas.size())
    throw std::invalid_argument("he::torus_average_trace: basepoint dimension mismatch");

  const TorusPoint xi = TorusPoint::reduce(Eigen::ArrayXd(system.alphas * system.beta));
  const std::complex<double> front = unit_phase((system.beta * x0).sum());
  AverageTrace trace;
  trace.scales = scales;
  trace.basepoint = x0;
  trace.values = multiplier_profile(family, xi, scales, false);
  for (auto& v : trace.values) v *= front;
  return trace;
}

std::complex<double> lattice_average(const LatticeFunction& f, const HardyFamily& family,
                                     std::int64_t N, const LatticePoint& x, bool upper_half) {
  if (family.empty()) throw std::invalid_argument("he: empty family");
  if (N < 1) throw std::invalid_argument("he::lattice_average: N must be >= 1");
  if (x.size() != static_cast<Eigen::Index>(family.size()) || f.box().dim() != static_cast<int>(family.size()))
    throw std::invalid_argument("he::lattice_average: dimension mismatch");

  std::vector<std::vector<std::int64_t>> orbits;
  orbits.reserve(family.size());
  for (const auto& p : family) orbits.push_back(floor_orbit(p, N));

  const std::int64_t first = upper_half ? N / 2 + 1 : 1;
  double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
  LatticePoint y(x.size());
  for (std::int64_t n = first; n <= N; ++n) {
    for (Eigen::Index d = 0; d < x.size(); ++d)
      y[d] = x[d] - orbits[static_cast<std::size_t>(d)][static_cast<std::size_t>(n - 1)];
    const std::complex<double> z = f.at(y);
    const double yr = z.real() - cre;
    const double sr = re + yr;
    cre = (sr - re) - yr;
    re = sr;
    const double yi = z.imag() - cim;
    const double si = im + yi;
    cim = (si - im) - yi;
    im = si;
  }
  return std::complex<double>(re, im) / static_cast<double>(N);
}

std::vector<double> equidistribution_trace(const TorusSystem& system, const HardyFamily& family,
                                           const Eigen::ArrayXd& x0,
                                           const std::vector<std::pair<double, double>>& arcs,
                                           const std::vector<std::int64_t>& scales) {
  check_system(system, family);
  check_scales(scales);
  if (x0.size() != system.alphas.size())
    throw std::invalid_argument("he::equidistribution_trace: basepoint dimension mismatch");
  if (arcs.size() != family.size())
    throw std::invalid_argument("he::equidistribution_trace: one arc per coordinate required");
  for (const auto& [lo, hi] : arcs)
    if (!(lo >= 0.0) || !(lo <= hi) || !(hi <= 1.0))
      throw std::invalid_argument("he::equidistribution_trace: arcs must satisfy 0 <= lo <= hi <= 1");

  const std::int64_t top = scales.back();
  std::vector<std::vector<std::int64_t>> orbits;
  orbits.reserve(family.size());
  for (const auto& p : family) orbits.push_back(floor_orbit(p, top));

  std::vector<double> densities;
  densities.reserve(scales.size());
  std::int64_t hits = 0;
  std::size_t next = 0;
  for (std::int64_t n = 1; n <= top; ++n) {
    bool inside = true;
    for (std::size_t d = 0; d < family.size(); ++d) {
      const double pos = wrap01(x0[static_cast<Eigen::Index>(d)] +
                                frac_mul(system.alphas[static_cast<Eigen::Index>(d)],
                                         static_cast<double>(orbits[d][static_cast<std::size_t>(n - 1)])));
      if (pos < arcs[d].first || pos >= arcs[d].second) {
        inside = false;
        break;
      }
    }
    if (inside) ++hits;
    while (next < scales.size() && scales[next] == n)
      densities.push_back(static_cast<double>(hits) / static_cast<double>(scales[next++]));
  }
  return densities;
}

ConvergenceReport convergence_diagnostics(const AverageTrace& trace, double r,
                                          const std::vector<double>& deltas) {
  if (deltas.empty())
    throw std::invalid_argument("he::convergence_diagnostics: deltas must be nonempty");
  const IndexedSequence seq = to_sequence(trace);
  ConvergenceReport report;
  report.vr = vr_norm(seq, r);
  report.deltas = deltas;
  for (double d : deltas) {
    report.counts.push_back(jump_count(seq, d));
    report.ratios.push_back(static_cast<double>(report.counts.back()) * std::pow(d, 2.5));
  }
  const std::size_t n = seq.values.size();
  const std::size_t tail = (n + 3) / 4;
  std::complex<double> mean{0.0, 0.0};
  for (std::size_t i = n - tail; i < n; ++i) mean += seq.values[i];
  report.limit = mean / static_cast<double>(tail);
  return report;
}

JumpReport jump_experiment(const HardyFamily& family, const TorusPoint& xi,
                           const ScaleSet& scale_set, const std::vector<double>& deltas,
                           double r) {
  if (deltas.empty()) throw std::invalid_argument("he::jump_experiment: empty delta list");
  const FamilyClass cls = classify_family(family);
  if (scale_set.kind == ScaleSet::Kind::Lacunary) {
    if (cls.verdict == FamilyVerdict::NotMember)
      throw std::invalid_argument(
          "he::jump_experiment: lacunary scale set needs an admissible family");
  } else {
    if (cls.verdict != FamilyVerdict::MemberOfPPrime)
      throw std::invalid_argument(
          "he::jump_experiment: full scale set needs a pure non-integer power family");
  }

  std::vector<std::int64_t> scales;
  if (scale_set.kind == ScaleSet::Kind::Lacunary) {
    scales = lacunary_subset(scale_set.n_max, scale_set.lambda);
  } else {
    if (scale_set.n_max < 1)
      throw std::invalid_argument("he::jump_experiment: n_max must be >= 1");
    scales.resize(static_cast<std::size_t>(scale_set.n_max));
    for (std::int64_t n = 1; n <= scale_set.n_max; ++n)
      scales[static_cast<std::size_t>(n - 1)] = n;
  }
  return jump_experiment(family, xi, scales, deltas, r);
}

JumpReport jump_experiment(const HardyFamily& family, const TorusPoint& xi,
                           const std::vector<std::int64_t>& scales,
                           const std::vector<double>& deltas, double r) {
  if (deltas.empty()) throw std::invalid_argument("he::jump_experiment: empty delta list");
  check_scales(scales);
  JumpReport report;
  report.r = r;
  report.scales = scales;
  report.values = multiplier_profile(family, xi, report.scales, false);

  AverageTrace trace;
  trace.scales = report.scales;
  trace.values = report.values;
  trace.basepoint = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(family.size()));
  const ConvergenceReport diag = convergence_diagnostics(trace, r, deltas);
  report.deltas = deltas;
  report.counts = diag.counts;
  report.vr_value = diag.vr.value;
  report.limit = diag.limit;

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (report.counts[i] > 0) {
      xs.push_back(std::log(deltas[i]));
      ys.push_back(std::log(static_cast<double>(report.counts[i])));
    }
  }
  report.slope = fit_slope(xs, ys);
  return report;
}

std::string jump_report_csv(const JumpReport& report) {
  std::string out = csv_row({"delta", "count", "vr", "limit_re", "limit_im", "slope"});
  for (std::size_t i = 0; i < report.deltas.size(); ++i) {
    out += csv_row({fmt_real(report.deltas[i]), fmt_int(report.counts[i]),
                    fmt_real(report.vr_value), fmt_real(report.limit.real()),
                    fmt_real(report.limit.imag()), fmt_real(report.slope)});
  }
  return out;
}

}  // namespace he
