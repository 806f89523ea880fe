#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>

// Finitely supported functions on Z^m: an inclusive integer box plus values
// stored row-major (last coordinate fastest). Reads outside the box are 0.

namespace he {

using LatticePoint = Eigen::Array<std::int64_t, Eigen::Dynamic, 1>;

struct LatticeBox {
  LatticePoint lo, hi;  // inclusive bounds per coordinate

  int dim() const { return static_cast<int>(lo.size()); }
  std::int64_t width(int d) const { return hi[d] - lo[d] + 1; }
  std::int64_t size() const {
    std::int64_t n = 1;
    for (int d = 0; d < dim(); ++d) n *= width(d);
    return n;
  }
  bool contains(const LatticePoint& x) const {
    for (int d = 0; d < dim(); ++d)
      if (x[d] < lo[d] || x[d] > hi[d]) return false;
    return true;
  }
  std::int64_t flatten(const LatticePoint& x) const {
    std::int64_t idx = 0;
    for (int d = 0; d < dim(); ++d) idx = idx * width(d) + (x[d] - lo[d]);
    return idx;
  }
};

class LatticeFunction {
 public:
  LatticeFunction(LatticeBox box, Eigen::ArrayXcd values);
  static LatticeFunction zeros(LatticeBox box);

  const LatticeBox& box() const { return box_; }
  const Eigen::ArrayXcd& values() const { return values_; }
  Eigen::ArrayXcd& values() { return values_; }

  std::complex<double> at(const LatticePoint& x) const {
    if (!box_.contains(x)) return {0.0, 0.0};
    return values_[static_cast<Eigen::Index>(box_.flatten(x))];
  }
  std::complex<double>& ref(const LatticePoint& x);

  double l2_norm() const { return std::sqrt(values_.abs2().sum()); }

 private:
  LatticeBox box_;
  Eigen::ArrayXcd values_;
};

// Binary format, little-endian: uint32 dimension m, then int64 lo/hi per
// coordinate, then size() complex doubles (re, im) row-major.
void save_lattice(const LatticeFunction& f, const std::string& path);
LatticeFunction load_lattice(const std::string& path);

}  // namespace he
