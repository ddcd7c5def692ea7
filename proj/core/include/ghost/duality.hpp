#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ghost/analytic.hpp"
#include "ghost/oracle.hpp"
#include "ghost/types.hpp"

namespace ghost {

/// 1 - (|G12| + |G13| + |G23|) / 3
double distinguishability(const PathDetector& detector);

/// 3S / (6 + S), equal to 1 - 2D/(3 - D).
double visibility_bound(const PathDetector& detector);

/// Closed-form visibility of the fringe near z2 in the approximate regime.
/// Throws OutsideEnvelope when |z2| > 3 gamma_D.
double analytic_v2(const PathDetector& detector, const SourceParams& source, const Geometry& geom,
                   double z2);

/// Two-slit counterpart: g / cosh(4 z2 z0 / gamma_D^2).
double analytic_v2_two_slit(double overlap, const SourceParams& source, const Geometry& geom,
                            double z2);

/// Position of the second principal fringe beside the central one.
double second_offcenter_fringe(const Geometry& geom, SlitSet slits = SlitSet::three);

enum class PatternSource {
  analytic,  ///< closed-form visibility at the evaluation point
  sampled,   ///< measured on the sampled closed-form pattern
  oracle,    ///< measured on the numeric-oracle pattern
};

struct DualityOptions {
  PatternSource source = PatternSource::analytic;
  /// Evaluation point for the analytic visibility; defaults to the second fringe.
  std::optional<double> z2;
  /// Measured sources: samples across +/- window (window 0: five principal fringes).
  std::size_t samples = 4001;
  double window = 0.0;
  OracleOptions oracle;
};

struct DualitySample {
  PathDetector detector;
  DualityReport report;
  PatternSource source;
};

DualitySample check_duality(const PathDetector& detector, const SourceParams& source,
                            const Geometry& geom, const DualityOptions& options = {});

/// Slit B blocked, detector states |d1>, |d3> with overlap g; checks V + D <= 1.
DualitySample two_slit_check(double overlap, const SourceParams& source, const Geometry& geom,
                             const DualityOptions& options = {});

/// Gram matrices of three random unit vectors in C^dim (dim >= 3). The
/// vectors are drawn around a common direction or around an orthonormal
/// frame with a random spread so that D covers [0, 1]. Deterministic per seed.
std::vector<PathDetector> sample_gram(std::uint64_t seed, std::size_t count, std::size_t dim = 3);

struct SweepSummary {
  std::size_t count = 0;
  std::size_t violations = 0;
  double worst_margin = 1.0;
  std::vector<DualitySample> samples;
};

SweepSummary duality_sweep(std::uint64_t seed, std::size_t count, const SourceParams& source,
                           const Geometry& geom, const DualityOptions& options = {},
                           double slack = 1e-9);

}  // namespace ghost
