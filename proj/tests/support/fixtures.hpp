#pragma once

#include "ghost/types.hpp"

namespace ghost::testing {

inline constexpr double kLambda = 702e-9;

struct Fixture {
  double sigma, omega, epsilon, z0, L1, L2;
  SourceParams source() const { return SourceParams::create(sigma, omega); }
  Geometry geometry() const { return Geometry::create(z0, epsilon, kLambda, L1, L2); }
};

/// 100 um slits, D = 1.5 m, finite-Omega source.
inline constexpr Fixture kDesk{1e6, 1e-2, 1e-5, 1e-4, 0.5, 0.5};

/// Wide-source sets where the closed forms hold (aperture ratio well below 0.1).
inline constexpr Fixture kF1{1e6, 1.0, 1e-5, 1e-4, 0.5, 0.5};
inline constexpr Fixture kF2{1e6, 0.5, 1e-5, 5e-5, 1.0, 0.5};
inline constexpr Fixture kF3{5e5, 1.0, 8e-6, 6e-5, 1.0, 1.0};

/// Short-baseline set small enough for a 1024 x 1024 grid.
inline constexpr Fixture kDense{2e5, 2e-4, 2.4e-5, 7.2e-5, 0.008, 0.008};

}  // namespace ghost::testing
