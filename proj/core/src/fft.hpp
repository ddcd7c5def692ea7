#pragma once

#include <cstddef>
#include <span>

#include "ghost/types.hpp"

namespace ghost::detail {

/// In-place unnormalised DFTs over `count` contiguous rows of length n, or over
/// columns when stride > 1 (element k of row r lives at r * dist + k * stride).
void dft_many(cplx* data, std::size_t n, std::size_t count, std::size_t stride, std::size_t dist,
              int sign);

inline void dft(std::span<cplx> data, int sign) { dft_many(data.data(), data.size(), 1, 1, 0, sign); }

/// Angular wavenumber of FFT bin m on a grid of n samples spaced dz.
double bin_wavenumber(std::size_t m, std::size_t n, double dz);

}  // namespace ghost::detail
