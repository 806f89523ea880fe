#include "he/lattice.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace he {
namespace {

static_assert(std::endian::native == std::endian::little,
              "lattice serialization assumes a little-endian host");

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("he::load_lattice: truncated file");
  return v;
}

}  // namespace

LatticeFunction::LatticeFunction(LatticeBox box, Eigen::ArrayXcd values)
    : box_(std::move(box)), values_(std::move(values)) {
  if (box_.dim() < 1) throw std::invalid_argument("he::LatticeFunction: dimension must be >= 1");
  for (int d = 0; d < box_.dim(); ++d)
    if (box_.hi[d] < box_.lo[d])
      throw std::invalid_argument("he::LatticeFunction: empty box");
  if (values_.size() != static_cast<Eigen::Index>(box_.size()))
    throw std::invalid_argument("he::LatticeFunction: value count does not match box");
}

LatticeFunction LatticeFunction::zeros(LatticeBox box) {
  const std::int64_t n = box.size();
  return LatticeFunction(std::move(box), Eigen::ArrayXcd::Zero(static_cast<Eigen::Index>(n)));
}

std::complex<double>& LatticeFunction::ref(const LatticePoint& x) {
  if (!box_.contains(x)) throw std::out_of_range("he::LatticeFunction: point outside box");
  return values_[static_cast<Eigen::Index>(box_.flatten(x))];
}

void save_lattice(const LatticeFunction& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("he::save_lattice: cannot open " + path);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.box().dim()));
  for (int d = 0; d < f.box().dim(); ++d) {
    put<std::int64_t>(out, f.box().lo[d]);
    put<std::int64_t>(out, f.box().hi[d]);
  }
  for (Eigen::Index i = 0; i < f.values().size(); ++i) {
    put<double>(out, f.values()[i].real());
    put<double>(out, f.values()[i].imag());
  }
  if (!out) throw std::runtime_error("he::save_lattice: write failed");
}

LatticeFunction load_lattice(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("he::load_lattice: cannot open " + path);
  const std::uint32_t m = get<std::uint32_t>(in);
  if (m == 0 || m > 8) throw std::runtime_error("he::load_lattice: implausible dimension");
  LatticeBox box;
  box.lo.resize(m);
  box.hi.resize(m);
  for (std::uint32_t d = 0; d < m; ++d) {
    box.lo[d] = get<std::int64_t>(in);
    box.hi[d] = get<std::int64_t>(in);
    if (box.hi[d] < box.lo[d]) throw std::runtime_error("he::load_lattice: empty box");
  }
  const std::int64_t n = box.size();
  if (n > (static_cast<std::int64_t>(1) << 28))
    throw std::runtime_error("he::load_lattice: box too large");
  Eigen::ArrayXcd values(static_cast<Eigen::Index>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    values[static_cast<Eigen::Index>(i)] = {re, im};
  }
  return LatticeFunction(std::move(box), std::move(values));
}

}  // namespace he
