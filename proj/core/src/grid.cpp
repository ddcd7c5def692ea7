#include "ghost/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "ghost/errors.hpp"

namespace ghost {

namespace {

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  char buf[8];
  std::memcpy(buf, &bits, sizeof buf);
  out.write(buf, sizeof buf);
}

double get_f64(std::istream& in) {
  char buf[8];
  if (!in.read(buf, sizeof buf)) throw Error(ErrorCode::InvalidParameter, "truncated grid dump");
  std::uint64_t bits;
  std::memcpy(&bits, buf, sizeof bits);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

Grid2D::Grid2D(const GridSpec& spec) : spec_(spec) {
  if (spec.n1 < 2 || spec.n2 < 2) {
    throw Error(ErrorCode::InvalidParameter, "grid needs at least 2 samples per axis");
  }
  if (!(spec.span1 > 0.0) || !(spec.span2 > 0.0) || !std::isfinite(spec.span1) ||
      !std::isfinite(spec.span2)) {
    throw Error(ErrorCode::InvalidParameter, "grid spans must be positive and finite");
  }
  values_.assign(spec.n1 * spec.n2, cplx{});
}

double Grid2D::norm() const noexcept {
  double s = 0.0;
  for (const cplx& v : values_) s += std::norm(v);
  return s * dz1() * dz2();
}

void Grid2D::scale(double factor) noexcept {
  for (cplx& v : values_) v *= factor;
}

void Grid2D::write(std::ostream& out) const {
  put_f64(out, static_cast<double>(spec_.n1));
  put_f64(out, static_cast<double>(spec_.n2));
  put_f64(out, spec_.span1);
  put_f64(out, spec_.span2);
  for (const cplx& v : values_) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
}

Grid2D Grid2D::read(std::istream& in) {
  const double n1 = get_f64(in);
  const double n2 = get_f64(in);
  const double s1 = get_f64(in);
  const double s2 = get_f64(in);
  if (!(n1 >= 2.0 && n2 >= 2.0 && n1 <= 1e9 && n2 <= 1e9) || n1 != std::floor(n1) ||
      n2 != std::floor(n2)) {
    throw Error(ErrorCode::InvalidParameter, "grid dump has an invalid header");
  }
  Grid2D g({static_cast<std::size_t>(n1), static_cast<std::size_t>(n2), s1, s2});
  for (cplx& v : g.values_) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    v = {re, im};
  }
  return g;
}

}  // namespace ghost
