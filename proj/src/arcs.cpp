#include "he/arcs.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "he/io.hpp"
#include "he/parallel.hpp"
#include "he/rng.hpp"

namespace he {

namespace {

using cd = std::complex<double>;

bool is_pow2(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

// frequency of DFT bin j on a size-G grid, in [-1/2, 1/2)
double grid_freq(std::int64_t j, std::int64_t G) {
  return static_cast<double>(j >= G / 2 ? j - G : j) / static_cast<double>(G);
}

std::int64_t checked_total(std::int64_t G, int m) {
  std::int64_t total = 1;
  for (int d = 0; d < m; ++d) {
    if (total > (std::int64_t{1} << 26) / G)
      throw std::invalid_argument("DFT grid exceeds 2^26 points");
    total *= G;
  }
  return total;
}

// In-place DFT along every axis of a cubic m-dimensional array, row-major
// with the last coordinate fastest.
void fft_nd(std::vector<cd>& vals, int m, std::int64_t G, bool inverse) {
  Eigen::FFT<double> fft;
  const std::int64_t total = static_cast<std::int64_t>(vals.size());
  std::vector<cd> in(static_cast<std::size_t>(G)), out;
  std::int64_t stride = 1;
  for (int axis = m - 1; axis >= 0; --axis) {
    const std::int64_t block = stride * G;
    for (std::int64_t base = 0; base < total; base += block)
      for (std::int64_t off = 0; off < stride; ++off) {
        for (std::int64_t k = 0; k < G; ++k)
          in[static_cast<std::size_t>(k)] = vals[base + off + k * stride];
        if (inverse)
          fft.inv(out, in);
        else
          fft.fwd(out, in);
        for (std::int64_t k = 0; k < G; ++k)
          vals[base + off + k * stride] = out[static_cast<std::size_t>(k)];
      }
    stride = block;
  }
}

// A frequency symbol acts as cyclic convolution with its inverse DFT; if that
// kernel carries mass near the antipode of the grid, the grid is too coarse
// for the cutoff and results would alias. The psi kernel decays like
// exp(-c sqrt(distance / plateau width)), so the 1e-4 bound amounts to the
// plateau spanning on the order of a hundred grid bins.
void kernel_wrap_check(const std::vector<cd>& line, std::int64_t G) {
  Eigen::FFT<double> fft;
  std::vector<cd> kern;
  fft.inv(kern, line);
  double mass = 0.0, tail = 0.0;
  for (std::int64_t p = 0; p < G; ++p) {
    const double a = std::abs(kern[static_cast<std::size_t>(p)]);
    mass += a;
    if (std::min(p, G - p) > G / 4) tail += a;
  }
  if (tail > 1e-4 * mass)
    throw std::runtime_error("frequency cutoff kernel wraps around the DFT grid; increase grid_size");
}

// per-dimension plateau samples psi_leq(threshold, grid frequencies)
std::vector<cd> symbol_line(double threshold, std::int64_t G) {
  std::vector<cd> line(static_cast<std::size_t>(G));
  for (std::int64_t j = 0; j < G; ++j)
    line[static_cast<std::size_t>(j)] = cd(psi_leq(threshold, grid_freq(j, G)), 0.0);
  return line;
}

Eigen::ArrayXd family_magnitudes(const HardyFamily& family, double t) {
  Eigen::ArrayXd mags(static_cast<Eigen::Index>(family.size()));
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double v = std::abs(eval(family[i], t));
    if (!(v > 0.0))
      throw std::domain_error("family member vanishes at the evaluation scale");
    mags[static_cast<Eigen::Index>(i)] = v;
  }
  return mags;
}

// grid box of width G per coordinate with the support box centered
LatticeBox centered_grid_box(const LatticeBox& support, std::int64_t G) {
  const int m = support.dim();
  LatticePoint lo(m), hi(m);
  for (int d = 0; d < m; ++d) {
    lo[d] = support.lo[d] - (G - support.width(d)) / 2;
    hi[d] = lo[d] + G - 1;
  }
  return LatticeBox{std::move(lo), std::move(hi)};
}

std::vector<cd> embed_on_grid(const LatticeFunction& f, const LatticeBox& grid,
                              std::int64_t G, std::int64_t total) {
  const int m = grid.dim();
  std::vector<cd> vals(static_cast<std::size_t>(total), cd(0.0, 0.0));
  const LatticeBox& fb = f.box();
  std::vector<std::int64_t> offset(static_cast<std::size_t>(m));
  for (int d = 0; d < m; ++d) offset[static_cast<std::size_t>(d)] = fb.lo[d] - grid.lo[d];
  const std::int64_t fsize = fb.size();
  for (std::int64_t s = 0; s < fsize; ++s) {
    std::int64_t rem = s, gflat = 0, scale = 1;
    for (int d = m - 1; d >= 0; --d) {
      const std::int64_t c = rem % fb.width(d);
      rem /= fb.width(d);
      gflat += (c + offset[static_cast<std::size_t>(d)]) * scale;
      scale *= G;
    }
    vals[static_cast<std::size_t>(gflat)] = f.values()[static_cast<Eigen::Index>(s)];
  }
  return vals;
}

// multiplies vals[j] by prod_d lines[d][j_d]
void apply_product_symbol(std::vector<cd>& vals, const std::vector<std::vector<cd>>& lines,
                          int m, std::int64_t G) {
  const std::int64_t total = static_cast<std::int64_t>(vals.size());
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t rem = flat;
    double prod = 1.0;
    for (int d = m - 1; d >= 0; --d) {
      const std::int64_t j = rem % G;
      rem /= G;
      prod *= lines[static_cast<std::size_t>(d)][static_cast<std::size_t>(j)].real();
    }
    vals[static_cast<std::size_t>(flat)] *= prod;
  }
}

void validate_grid(std::int64_t G, const LatticeBox& support) {
  if (!is_pow2(G) || G < 4) throw std::invalid_argument("grid_size must be a power of two >= 4");
  for (int d = 0; d < support.dim(); ++d)
    if (G < 4 * support.width(d))
      throw std::invalid_argument("grid_size must be at least 4x the support width");
}

// DFT of the upper-half orbit counting kernel divided by N: the exact
// multiplier of the cyclic averaging operator on Z_G^m.
std::vector<cd> counting_multiplier(const HardyFamily& family, std::int64_t N, std::int64_t G) {
  const int m = static_cast<int>(family.size());
  const std::int64_t total = checked_total(G, m);
  std::vector<std::vector<std::int64_t>> orbits;
  orbits.reserve(family.size());
  for (const auto& f : family) orbits.push_back(floor_orbit(f, N));
  std::vector<cd> mult(static_cast<std::size_t>(total), cd(0.0, 0.0));
  for (std::int64_t n = N / 2 + 1; n <= N; ++n) {
    std::int64_t flat = 0;
    for (int d = 0; d < m; ++d) {
      const std::int64_t o = orbits[static_cast<std::size_t>(d)][static_cast<std::size_t>(n - 1)];
      flat = flat * G + ((o % G) + G) % G;
    }
    mult[static_cast<std::size_t>(flat)] += cd(1.0, 0.0);
  }
  fft_nd(mult, m, G, false);
  const double inv_n = 1.0 / static_cast<double>(N);
  for (auto& v : mult) v *= inv_n;
  return mult;
}

}  // namespace

double psi(double x) {
  const double ax = std::abs(x);
  if (ax <= 0.5) return 1.0;
  if (ax >= 1.0) return 0.0;
  const double u = 2.0 * (1.0 - ax);  // in (0, 1), u = 1/2 at ax = 3/4
  const double su = std::exp(-1.0 / u);
  const double sv = std::exp(-1.0 / (1.0 - u));
  return su / (su + sv);
}

double psi_leq(double threshold, double xi) {
  if (!(threshold > 0.0) || !std::isfinite(threshold))
    throw std::invalid_argument("psi_leq threshold must be positive and finite");
  const double scale = std::exp2(std::ceil(std::log2(threshold)));
  return psi(xi / scale);
}

int major_scale_exponent(const ArcConfig& cfg, std::int64_t N) {
  if (N < 2) throw std::invalid_argument("major_scale_exponent requires N >= 2");
  const double inner = std::log2(std::log2(static_cast<double>(N)));
  return static_cast<int>(std::floor(cfg.C0 * inner));
}

double phi_annulus(const ArcConfig& cfg, const HardyFamily& family, std::int64_t N,
                   int l, const TorusPoint& xi) {
  if (family.empty()) throw std::invalid_argument("empty family");
  if (xi.dim() != static_cast<int>(family.size()))
    throw std::invalid_argument("frequency dimension does not match family size");
  if (l < -cfg.C1) throw std::invalid_argument("annulus index below the base -C1");
  if (N < 2) throw std::invalid_argument("phi_annulus requires N >= 2");
  const Eigen::ArrayXd mags = family_magnitudes(family, static_cast<double>(N));
  const auto plateau = [&](int level) {
    double prod = 1.0;
    for (int i = 0; i < xi.dim(); ++i)
      prod *= psi_leq(std::ldexp(1.0, level) / mags[i], xi[i]);
    return prod;
  };
  if (l == -cfg.C1) return plateau(l);
  return plateau(l) - plateau(l - 1);
}

LatticeFunction project_major(const ArcConfig& cfg, const LatticeFunction& f,
                              const HardyFamily& family, std::int64_t N) {
  const int m = f.box().dim();
  if (static_cast<int>(family.size()) != m)
    throw std::invalid_argument("family size does not match lattice dimension");
  const std::int64_t G = cfg.grid_size;
  validate_grid(G, f.box());
  const std::int64_t total = checked_total(G, m);

  const int l_n = major_scale_exponent(cfg, N);
  const MajorArcBox arc = major_arc_box(family, N, l_n);

  std::vector<std::vector<cd>> lines;
  lines.reserve(static_cast<std::size_t>(m));
  for (int d = 0; d < m; ++d) {
    lines.push_back(symbol_line(arc.half_widths[d], G));
    kernel_wrap_check(lines.back(), G);
  }

  const LatticeBox grid = centered_grid_box(f.box(), G);
  std::vector<cd> vals = embed_on_grid(f, grid, G, total);
  fft_nd(vals, m, G, false);
  apply_product_symbol(vals, lines, m, G);
  fft_nd(vals, m, G, true);

  Eigen::ArrayXcd out = Eigen::Map<const Eigen::ArrayXcd>(vals.data(), static_cast<Eigen::Index>(total));
  return LatticeFunction(grid, std::move(out));
}

OperatorRatio minor_arc_operator_ratio(const ArcConfig& cfg, const HardyFamily& family,
                                       std::int64_t N, int l, int trials,
                                       std::uint64_t seed) {
  if (family.empty()) throw std::invalid_argument("empty family");
  if (N < 2) throw std::invalid_argument("minor_arc_operator_ratio requires N >= 2");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const int m = static_cast<int>(family.size());
  const std::int64_t G = cfg.grid_size;
  if (!is_pow2(G) || G < 8) throw std::invalid_argument("grid_size must be a power of two >= 8");
  const std::int64_t total = checked_total(G, m);

  const std::vector<cd> mult = counting_multiplier(family, N, G);
  const MajorArcBox arc = major_arc_box(family, N, l);

  // trial functions live on a centered box of width G/4 per dimension
  const std::int64_t w = G / 4;
  const std::int64_t start = G / 2 - G / 8;
  std::int64_t support = 1;
  for (int d = 0; d < m; ++d) support *= w;

  std::vector<double> ratios(static_cast<std::size_t>(trials), -1.0);
  parallel_for(trials, [&](std::int64_t t) {
    SplitMix64 rng(splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(t + 1))));
    std::vector<cd> fv(static_cast<std::size_t>(total), cd(0.0, 0.0));
    double pre2 = 0.0;
    for (std::int64_t s = 0; s < support; ++s) {
      std::int64_t rem = s, flat = 0, scale = 1;
      for (int d = m - 1; d >= 0; --d) {
        flat += (start + rem % w) * scale;
        rem /= w;
        scale *= G;
      }
      const cd v(rng.symmetric(), rng.symmetric());
      fv[static_cast<std::size_t>(flat)] = v;
      pre2 += std::norm(v);
    }
    fft_nd(fv, m, G, false);
    double den2 = 0.0, num2 = 0.0;
    for (std::int64_t flat = 0; flat < total; ++flat) {
      std::int64_t rem = flat;
      bool inside = true;
      for (int d = m - 1; d >= 0; --d) {
        const std::int64_t j = rem % G;
        rem /= G;
        if (std::abs(grid_freq(j, G)) > arc.half_widths[d]) inside = false;
      }
      if (inside) continue;  // spectrum hard-zeroed on the major arc
      const double a2 = std::norm(fv[static_cast<std::size_t>(flat)]);
      den2 += a2;
      num2 += a2 * std::norm(mult[static_cast<std::size_t>(flat)]);
    }
    // Parseval: forward DFT multiplies l2 mass by G^m on both sides
    if (den2 <= 1e-24 * pre2 * static_cast<double>(total)) return;
    ratios[static_cast<std::size_t>(t)] = std::sqrt(num2 / den2);
  });

  std::vector<double> kept;
  kept.reserve(ratios.size());
  for (double r : ratios)
    if (r >= 0.0) kept.push_back(r);
  if (kept.empty()) throw std::runtime_error("every trial projected to zero outside the major arc");
  std::sort(kept.begin(), kept.end());
  OperatorRatio out;
  out.max_ratio = kept.back();
  out.median_ratio = kept[(kept.size() - 1) / 2];
  out.trials_used = static_cast<int>(kept.size());
  return out;
}

double pure_frequency_ratio(const ArcConfig& cfg, const HardyFamily& family,
                            std::int64_t N, const std::vector<std::int64_t>& freq) {
  if (family.empty()) throw std::invalid_argument("empty family");
  if (freq.size() != family.size())
    throw std::invalid_argument("frequency index dimension does not match family size");
  const std::int64_t G = cfg.grid_size;
  if (!is_pow2(G) || G < 8) throw std::invalid_argument("grid_size must be a power of two >= 8");
  checked_total(G, static_cast<int>(family.size()));
  std::int64_t flat = 0;
  for (std::int64_t j : freq) {
    if (j < 0 || j >= G) throw std::invalid_argument("frequency index out of range");
    flat = flat * G + j;
  }
  const std::vector<cd> mult = counting_multiplier(family, N, G);
  return std::abs(mult[static_cast<std::size_t>(flat)]);
}

double littlewood_paley_symbol(const HardyFamily& family, int j, const TorusPoint& xi) {
  if (family.empty()) throw std::invalid_argument("empty family");
  if (xi.dim() != static_cast<int>(family.size()))
    throw std::invalid_argument("frequency dimension does not match family size");
  if (j < 1 || j > 40) throw std::invalid_argument("dyadic index must be in [1, 40]");
  const auto plateau = [&](int jj) {
    const Eigen::ArrayXd mags = family_magnitudes(family, std::ldexp(1.0, jj));
    double prod = 1.0;
    for (int i = 0; i < xi.dim(); ++i) prod *= psi_leq(0.5 / mags[i], xi[i]);
    return prod;
  };
  return plateau(j) - plateau(j + 1);
}

LatticeFunction square_function(const HardyFamily& family, const LatticeFunction& f,
                                int j_max, int grid_size) {
  const int m = f.box().dim();
  if (static_cast<int>(family.size()) != m)
    throw std::invalid_argument("family size does not match lattice dimension");
  if (j_max < 1 || j_max > 40) throw std::invalid_argument("j_max must be in [1, 40]");
  std::int64_t G = grid_size;
  if (G == 0) {
    std::int64_t need = 8;
    for (int d = 0; d < m; ++d)
      while (need < 4 * f.box().width(d)) need *= 2;
    G = need;
  }
  validate_grid(G, f.box());
  const std::int64_t total = checked_total(G, m);

  const LatticeBox grid = centered_grid_box(f.box(), G);
  const std::vector<cd> fhat = [&] {
    std::vector<cd> v = embed_on_grid(f, grid, G, total);
    fft_nd(v, m, G, false);
    return v;
  }();

  // plateau lines at thresholds 1/(2 |P_d(2^j)|), j = 1 .. j_max + 1
  std::vector<std::vector<std::vector<cd>>> lines(static_cast<std::size_t>(j_max + 2));
  for (int jj = 1; jj <= j_max + 1; ++jj) {
    const Eigen::ArrayXd mags = family_magnitudes(family, std::ldexp(1.0, jj));
    auto& per_dim = lines[static_cast<std::size_t>(jj)];
    per_dim.reserve(static_cast<std::size_t>(m));
    for (int d = 0; d < m; ++d) {
      per_dim.push_back(symbol_line(0.5 / mags[d], G));
      kernel_wrap_check(per_dim.back(), G);
    }
  }

  std::vector<double> acc(static_cast<std::size_t>(total), 0.0);
  std::vector<cd> tmp(static_cast<std::size_t>(total));
  for (int jj = 1; jj <= j_max; ++jj) {
    const auto& lo = lines[static_cast<std::size_t>(jj)];
    const auto& hi = lines[static_cast<std::size_t>(jj + 1)];
    for (std::int64_t flat = 0; flat < total; ++flat) {
      std::int64_t rem = flat;
      double pl = 1.0, ph = 1.0;
      for (int d = m - 1; d >= 0; --d) {
        const std::int64_t idx = rem % G;
        rem /= G;
        pl *= lo[static_cast<std::size_t>(d)][static_cast<std::size_t>(idx)].real();
        ph *= hi[static_cast<std::size_t>(d)][static_cast<std::size_t>(idx)].real();
      }
      tmp[static_cast<std::size_t>(flat)] = fhat[static_cast<std::size_t>(flat)] * (pl - ph);
    }
    fft_nd(tmp, m, G, true);
    for (std::int64_t flat = 0; flat < total; ++flat)
      acc[static_cast<std::size_t>(flat)] += std::norm(tmp[static_cast<std::size_t>(flat)]);
  }

  Eigen::ArrayXcd out(static_cast<Eigen::Index>(total));
  for (std::int64_t flat = 0; flat < total; ++flat)
    out[static_cast<Eigen::Index>(flat)] = cd(std::sqrt(acc[static_cast<std::size_t>(flat)]), 0.0);
  return LatticeFunction(grid, std::move(out));
}

std::string ratio_csv(const std::vector<RatioRow>& rows) {
  std::string out = csv_row({"N", "l", "trials", "max_ratio", "median_ratio"});
  for (const auto& r : rows)
    out += csv_row({fmt_int(r.N), fmt_int(r.l), fmt_int(r.trials),
                    fmt_real(r.max_ratio), fmt_real(r.median_ratio)});
  return out;
}

}  // namespace he
