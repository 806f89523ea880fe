#include "he/variation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "he/io.hpp"

namespace he {
namespace {

void require_bruteforce_size(const IndexedSequence& seq) {
  if (seq.values.size() > 18)
    throw std::invalid_argument("bruteforce oracle limited to length <= 18");
}

double abs_diff(const std::complex<double>& a, const std::complex<double>& b) {
  return std::abs(a - b);
}

}  // namespace

IndexedSequence make_sequence(std::vector<std::complex<double>> values) {
  IndexedSequence seq;
  seq.indices.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    seq.indices[i] = static_cast<std::int64_t>(i) + 1;
  seq.values = std::move(values);
  return seq;
}

void validate_sequence(const IndexedSequence& seq) {
  if (seq.values.empty()) throw std::invalid_argument("he: empty sequence");
  if (seq.indices.size() != seq.values.size())
    throw std::invalid_argument("he: index/value size mismatch");
  for (std::size_t i = 1; i < seq.indices.size(); ++i)
    if (seq.indices[i] <= seq.indices[i - 1])
      throw std::invalid_argument("he: indices must be strictly increasing");
}

VariationResult vr_norm(const IndexedSequence& seq, double r) {
  validate_sequence(seq);
  if (!(r >= 1.0)) throw std::invalid_argument("he::vr_norm: r must be >= 1");
  const auto& a = seq.values;
  const std::size_t n = a.size();

  VariationResult res;
  for (const auto& v : a) res.sup_term = std::max(res.sup_term, std::abs(v));

  // G[i] = best sum of |increments|^r over chains starting at i. Computing
  // suffix-best (rather than prefix-best) lets the witness be rebuilt front
  // first, so "smallest scale on ties" yields the lexicographically smallest
  // optimal chain.
  std::vector<double> G(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double cand = std::pow(abs_diff(a[j], a[i]), r) + G[j];
      if (cand > G[i]) G[i] = cand;
    }
  }
  double best = 0.0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (G[i] > best) { best = G[i]; start = i; }
  }
  if (best > 0.0) {
    res.jump_term = std::pow(best, 1.0 / r);
    std::size_t i = start;
    res.witness.push_back(seq.indices[i]);
    while (G[i] > 0.0) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (std::pow(abs_diff(a[j], a[i]), r) + G[j] == G[i]) {
          res.witness.push_back(seq.indices[j]);
          i = j;
          break;
        }
      }
    }
  }
  res.value = res.sup_term + res.jump_term;
  return res;
}

double vr_norm_bruteforce(const IndexedSequence& seq, double r) {
  validate_sequence(seq);
  require_bruteforce_size(seq);
  if (!(r >= 1.0)) throw std::invalid_argument("he::vr_norm_bruteforce: r must be >= 1");
  const auto& a = seq.values;
  const int n = static_cast<int>(a.size());
  double sup = 0.0;
  for (const auto& v : a) sup = std::max(sup, std::abs(v));

  double best = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    double sum = 0.0;
    int prev = -1;
    for (int i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      if (prev >= 0) sum += std::pow(abs_diff(a[i], a[prev]), r);
      prev = i;
    }
    best = std::max(best, sum);
  }
  return sup + (best > 0.0 ? std::pow(best, 1.0 / r) : 0.0);
}

std::int64_t jump_count(const IndexedSequence& seq, double delta) {
  validate_sequence(seq);
  if (!(delta > 0.0)) throw std::invalid_argument("he::jump_count: delta must be > 0");
  const auto& a = seq.values;
  const std::size_t n = a.size();
  // J[i] = most jumps over chains ending at i whose every increment is >= delta.
  std::vector<std::int64_t> J(n, 0);
  std::int64_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (abs_diff(a[i], a[j]) >= delta) J[i] = std::max(J[i], J[j] + 1);
    }
    best = std::max(best, J[i]);
  }
  return best;
}

std::int64_t jump_count_bruteforce(const IndexedSequence& seq, double delta) {
  validate_sequence(seq);
  require_bruteforce_size(seq);
  if (!(delta > 0.0)) throw std::invalid_argument("he::jump_count_bruteforce: delta must be > 0");
  const auto& a = seq.values;
  const int n = static_cast<int>(a.size());
  std::int64_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::int64_t jumps = 0;
    int prev = -1;
    bool valid = true;
    for (int i = 0; i < n && valid; ++i) {
      if (!(mask & (1u << i))) continue;
      if (prev >= 0) {
        if (abs_diff(a[i], a[prev]) >= delta) ++jumps;
        else valid = false;
      }
      prev = i;
    }
    if (valid) best = std::max(best, jumps);
  }
  return best;
}

std::vector<std::int64_t> lacunary_subset(std::int64_t n_max, double lam) {
  if (n_max < 1) throw std::invalid_argument("he::lacunary_subset: n_max must be >= 1");
  if (!(lam > 1.0)) throw std::invalid_argument("he::lacunary_subset: lam must be > 1");
  std::vector<std::int64_t> out;
  std::int64_t cur = 1;
  while (cur <= n_max) {
    out.push_back(cur);
    const double next = std::floor(lam * static_cast<double>(cur)) + 1.0;
    cur = static_cast<std::int64_t>(next);
  }
  return out;
}

LongShortSplit long_short_split(const IndexedSequence& seq, double r) {
  validate_sequence(seq);
  if (!(r > 2.0)) throw std::invalid_argument("he::long_short_split: r must be > 2");
  if (seq.indices.front() != 2)
    throw std::invalid_argument("he::long_short_split: scales must start at 2");
  const std::int64_t top = seq.indices.back();
  int kmax = 0;
  while ((static_cast<std::int64_t>(1) << (kmax + 1)) <= top) ++kmax;
  if ((static_cast<std::int64_t>(1) << kmax) != top || kmax < 1)
    throw std::invalid_argument("he::long_short_split: top scale must be a power of two");
  if (seq.indices.size() != static_cast<std::size_t>(top - 1))
    throw std::invalid_argument("he::long_short_split: scales must cover every integer in [2, 2^kmax]");

  auto slice = [&seq](std::int64_t lo, std::int64_t hi) {
    IndexedSequence sub;
    for (std::size_t i = 0; i < seq.indices.size(); ++i) {
      if (seq.indices[i] >= lo && seq.indices[i] <= hi) {
        sub.indices.push_back(seq.indices[i]);
        sub.values.push_back(seq.values[i]);
      }
    }
    return sub;
  };

  IndexedSequence dyadic;
  for (int k = 1; k <= kmax; ++k) {
    const std::int64_t scale = static_cast<std::int64_t>(1) << k;
    dyadic.indices.push_back(scale);
    dyadic.values.push_back(seq.values[static_cast<std::size_t>(scale - 2)]);
  }

  LongShortSplit out;
  out.long_part = vr_norm(dyadic, r).value;
  double short_sq = 0.0;
  for (int k = 1; k < kmax; ++k) {
    const std::int64_t lo = static_cast<std::int64_t>(1) << k;
    const double v2 = vr_norm(slice(lo, lo * 2), 2.0).value;
    short_sq += v2 * v2;
  }
  out.short_part = std::sqrt(short_sq);
  out.full = vr_norm(seq, r).value;
  return out;
}

std::string sequence_csv(const IndexedSequence& seq) {
  validate_sequence(seq);
  std::string out = csv_row({"index", "re", "im"});
  for (std::size_t i = 0; i < seq.values.size(); ++i)
    out += csv_row({fmt_int(seq.indices[i]), fmt_real(seq.values[i].real()),
                    fmt_real(seq.values[i].imag())});
  return out;
}

}  // namespace he
