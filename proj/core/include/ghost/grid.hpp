#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ghost/types.hpp"

namespace ghost {

/// Sample counts and half-widths of a two-photon grid. Axis 1 is photon 1.
struct GridSpec {
  std::size_t n1 = 1024;
  std::size_t n2 = 1024;
  double span1 = 0.0;
  double span2 = 0.0;
};

/// Row-major samples psi(z1_i, z2_j) with z = -span + index * (2 span / n).
class Grid2D {
 public:
  explicit Grid2D(const GridSpec& spec);

  const GridSpec& spec() const noexcept { return spec_; }
  std::size_t n1() const noexcept { return spec_.n1; }
  std::size_t n2() const noexcept { return spec_.n2; }
  double span1() const noexcept { return spec_.span1; }
  double span2() const noexcept { return spec_.span2; }
  double dz1() const noexcept { return 2.0 * spec_.span1 / static_cast<double>(spec_.n1); }
  double dz2() const noexcept { return 2.0 * spec_.span2 / static_cast<double>(spec_.n2); }
  double z1(std::size_t i) const noexcept { return -spec_.span1 + static_cast<double>(i) * dz1(); }
  double z2(std::size_t j) const noexcept { return -spec_.span2 + static_cast<double>(j) * dz2(); }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * spec_.n2 + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * spec_.n2 + j];
  }
  std::span<cplx> values() noexcept { return values_; }
  std::span<const cplx> values() const noexcept { return values_; }

  /// sum |psi|^2 dz1 dz2
  double norm() const noexcept;
  void scale(double factor) noexcept;

  /// Little-endian binary dump: n1, n2, span1, span2 as f64, then re/im pairs.
  void write(std::ostream& out) const;
  static Grid2D read(std::istream& in);

 private:
  GridSpec spec_;
  std::vector<cplx> values_;
};

}  // namespace ghost
