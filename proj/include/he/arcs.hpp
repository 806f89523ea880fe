#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "he/expsum.hpp"
#include "he/lattice.hpp"

// Circle-method machinery on the frequency torus: the smooth plateau cutoff,
// dyadic annular pieces around the major arc, DFT-based major-arc projection
// of lattice functions, a Littlewood-Paley square function adapted to the
// family, and minor-arc operator-norm experiments.

namespace he {

// Even C-infinity cutoff: 1 on [-1/2, 1/2], 0 outside (-1, 1), glued with
// the exp(-1/u) transition so psi(0.75) = 1/2 exactly by symmetry.
double psi(double x);

// psi rescaled to the dyadic ceiling of `threshold`: psi(xi / 2^ceil(log2
// threshold)). Plateau covers |xi| <= threshold/2 at worst, support stays
// within twice the threshold. Requires threshold > 0.
double psi_leq(double threshold, double xi);

struct ArcConfig {
  int C0 = 1;         // scale exponent multiplier in l_N
  int C1 = 2;         // lowest annulus index is -C1
  int C2 = 16;        // annulus sweep budget used by experiment drivers
  int grid_size = 256;  // DFT points per dimension, power of two
};

// l_N = floor(C0 * log2(log2 N)); the major-arc cutoff lives at scale
// 2^l_N / |P_i(N)|. Requires N >= 2.
int major_scale_exponent(const ArcConfig& cfg, std::int64_t N);

// Annular piece Phi_{N,l}(xi): difference of plateau products at scales l
// and l-1; the base annulus l = -C1 is the plain product. The pieces
// telescope: sum_{l=-C1}^{L} Phi_{N,l} equals the product at scale L.
double phi_annulus(const ArcConfig& cfg, const HardyFamily& family, std::int64_t N,
                   int l, const TorusPoint& xi);

// Major-arc frequency projection: embeds f in a centered DFT grid of
// cfg.grid_size per dimension (must be a power of two and at least 4x the
// support width), multiplies the spectrum by the plateau product at scale
// l_N, and transforms back. Throws runtime_error when the implied
// convolution kernel wraps more than 1e-4 of its mass around the grid,
// which for this kernel class means the plateau spans fewer than about a
// hundred grid bins.
LatticeFunction project_major(const ArcConfig& cfg, const LatticeFunction& f,
                              const HardyFamily& family, std::int64_t N);

struct OperatorRatio {
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  int trials_used = 0;
};

// Empirical ell^2 operator ratio ||A_N f|| / ||f|| over random trial
// functions whose spectrum is hard-zeroed inside the major arc box at level
// l. A_N is the upper-half orbit average, applied cyclically on the DFT grid
// (convolution with the orbit counting kernel mod grid size), so a pure
// grid frequency xi is an exact eigenfunction with eigenvalue modulus
// |m_discrete(xi)|. Trials that project to zero are skipped.
OperatorRatio minor_arc_operator_ratio(const ArcConfig& cfg, const HardyFamily& family,
                                       std::int64_t N, int l, int trials,
                                       std::uint64_t seed);

// ||A_N f|| / ||f|| for the pure grid frequency with index freq (one entry
// per dimension, each in [0, grid_size)), computed through the counting
// kernel's DFT rather than a phase sum.
double pure_frequency_ratio(const ArcConfig& cfg, const HardyFamily& family,
                            std::int64_t N, const std::vector<std::int64_t>& freq);

// Littlewood-Paley piece eta_j(xi) = u_j(xi) - u_{j+1}(xi) where u_j is the
// plateau product at threshold 1/(2 |P_i(2^j)|). Supported in the box with
// half-widths 1/|P_i(2^j)|, vanishes once every |xi_i| is below a quarter of
// 1/|P_i(2^(j+1))|. Requires j >= 1.
double littlewood_paley_symbol(const HardyFamily& family, int j, const TorusPoint& xi);

// Square function sqrt(sum_{j=1}^{j_max} |eta_j-filtered f|^2) computed on a
// DFT grid (grid_size = 0 picks the smallest adequate power of two). Values
// are real and nonnegative.
LatticeFunction square_function(const HardyFamily& family, const LatticeFunction& f,
                                int j_max, int grid_size = 0);

struct RatioRow {
  std::int64_t N = 0;
  int l = 0;
  int trials = 0;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
};

// CSV with header N,l,trials,max_ratio,median_ratio.
std::string ratio_csv(const std::vector<RatioRow>& rows);

}  // namespace he
