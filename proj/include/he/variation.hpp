#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

// r-variation seminorms, jump counting and lacunary scale sets for sequences
// indexed by increasing scales. The fast routines are exact dynamic programs;
// the *_bruteforce twins enumerate all chains and exist to pin them down.

namespace he {

struct IndexedSequence {
  std::vector<std::int64_t> indices;             // strictly increasing scales
  std::vector<std::complex<double>> values;
};

// Values with implicit scales 1..n.
IndexedSequence make_sequence(std::vector<std::complex<double>> values);

// Throws invalid_argument unless indices are strictly increasing, sizes
// match and the sequence is nonempty.
void validate_sequence(const IndexedSequence& seq);

struct VariationResult {
  double value = 0.0;      // sup_term + jump_term
  double sup_term = 0.0;   // max |a_N|
  double jump_term = 0.0;  // sup over chains of (sum |increments|^r)^(1/r)
  std::vector<std::int64_t> witness;  // scales of an optimal chain, empty if jump_term = 0
};

// V^r norm via an O(n^2) chain DP. The witness is the lexicographically
// smallest optimal chain (ties broken toward earlier scales, front first).
// Requires r >= 1.
VariationResult vr_norm(const IndexedSequence& seq, double r);

// Exhaustive chain enumeration; only for lengths <= 18.
double vr_norm_bruteforce(const IndexedSequence& seq, double r);

// Largest J such that some chain N_0 < ... < N_J has every consecutive
// increment at least delta in modulus. O(n^2) DP; requires delta > 0.
std::int64_t jump_count(const IndexedSequence& seq, double delta);

// Exhaustive version, lengths <= 18.
std::int64_t jump_count_bruteforce(const IndexedSequence& seq, double delta);

// Greedy lam-lacunary subset of [1, n_max]: starts at 1, then repeatedly the
// smallest integer strictly greater than lam times the last element.
// Requires lam > 1, n_max >= 1.
std::vector<std::int64_t> lacunary_subset(std::int64_t n_max, double lam);

struct LongShortSplit {
  double long_part = 0.0;   // V^r over the dyadic scales 2, 4, ..., 2^kmax
  double short_part = 0.0;  // sqrt(sum_k V^2(block k)^2), blocks {2^k..2^(k+1)}
  double full = 0.0;        // V^r over every scale in [2, 2^kmax]
};

// Requires r > 2 and indices covering every integer in [2, 2^kmax].
LongShortSplit long_short_split(const IndexedSequence& seq, double r);

// CSV with header index,re,im.
std::string sequence_csv(const IndexedSequence& seq);

}  // namespace he
