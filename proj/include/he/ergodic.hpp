#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "he/expsum.hpp"
#include "he/lattice.hpp"
#include "he/variation.hpp"

// Ergodic averages along floor orbits: commuting rotations on the m-torus
// with a character observable, lattice averaging, equidistribution counts
// and the jump/variation convergence diagnostics.

namespace he {

// x -> x + alpha_i e_i on T^m, observed through f(x) = e(beta . x).
struct TorusSystem {
  Eigen::ArrayXd alphas;  // rotation amounts, each in [0, 1)
  Eigen::ArrayXd beta;    // character frequency
  int dim() const { return static_cast<int>(alphas.size()); }
};

struct AverageTrace {
  std::vector<std::int64_t> scales;
  std::vector<std::complex<double>> values;
  Eigen::ArrayXd basepoint;
};

IndexedSequence to_sequence(const AverageTrace& trace);

// Averages (1/N) sum_{n<=N} f(T^(orbit(n)) x0 ) at each requested scale in a
// single orbit pass. The value at scale N factorizes exactly as
// e(beta . x0) * m_discrete(family, N, reduce(alphas * beta), false).
AverageTrace torus_average_trace(const TorusSystem& system, const HardyFamily& family,
                                 const Eigen::ArrayXd& x0,
                                 const std::vector<std::int64_t>& scales);

// (1/N) sum_n f(x - orbit(n)), n over (N/2, N] when upper_half else [1, N].
std::complex<double> lattice_average(const LatticeFunction& f, const HardyFamily& family,
                                     std::int64_t N, const LatticePoint& x, bool upper_half);

// Fraction of orbit points x0 + alpha * floor(P(n)) mod 1 landing in the
// product arc [lo_i, hi_i) at each scale. Arcs live inside [0, 1].
std::vector<double> equidistribution_trace(const TorusSystem& system, const HardyFamily& family,
                                           const Eigen::ArrayXd& x0,
                                           const std::vector<std::pair<double, double>>& arcs,
                                           const std::vector<std::int64_t>& scales);

struct ConvergenceReport {
  VariationResult vr;
  std::vector<double> deltas;
  std::vector<std::int64_t> counts;        // jump counts per delta
  std::complex<double> limit{0.0, 0.0};    // mean of the last quartile
  std::vector<double> ratios;              // count * delta^2.5 per delta
};

ConvergenceReport convergence_diagnostics(const AverageTrace& trace, double r,
                                          const std::vector<double>& deltas);

// Scale sets for jump experiments: either the greedy lacunary subset of
// [1, n_max] or every integer scale up to n_max.
struct ScaleSet {
  enum class Kind { Lacunary, AllN };
  Kind kind = Kind::Lacunary;
  double lambda = 2.0;
  std::int64_t n_max = 0;

  static ScaleSet lacunary(double lambda, std::int64_t n_max) {
    return {Kind::Lacunary, lambda, n_max};
  }
  static ScaleSet all(std::int64_t n_max) { return {Kind::AllN, 0.0, n_max}; }
};

struct JumpReport {
  std::vector<std::int64_t> scales;
  std::vector<std::complex<double>> values;  // multiplier trace at the scales
  std::vector<double> deltas;
  std::vector<std::int64_t> counts;
  double r = 2.5;
  double vr_value = 0.0;
  std::complex<double> limit{0.0, 0.0};
  double slope = 0.0;  // log-log fit of count against delta (positive counts)
};

// Multiplier trace (1/N) sum_{n<=N} e(xi . orbit(n)) over the scale set, with
// jump counts per delta. Lacunary scale sets require the family to classify
// as a member of the admissible class; full scale sets require the stricter
// pure-power verdict.
JumpReport jump_experiment(const HardyFamily& family, const TorusPoint& xi,
                           const ScaleSet& scale_set, const std::vector<double>& deltas,
                           double r = 2.5);

// Same experiment over an explicit strictly increasing scale list; the
// caller vouches for the scales, so no admissibility gate is applied.
JumpReport jump_experiment(const HardyFamily& family, const TorusPoint& xi,
                           const std::vector<std::int64_t>& scales,
                           const std::vector<double>& deltas, double r = 2.5);

// CSV with header delta,count,vr,limit_re,limit_im,slope.
std::string jump_report_csv(const JumpReport& report);

}  // namespace he
