#pragma once

// Brute-force reference: sample the source state, propagate with the paraxial
// transfer function, project onto the slits and read out the D2 line at D1 = 0.
// Only the source amplitude and its widths are shared with analytic.hpp.

#include <array>
#include <optional>
#include <vector>

#include "ghost/analytic.hpp"
#include "ghost/grid.hpp"
#include "ghost/types.hpp"

namespace ghost {

enum class Photon { one = 1, two = 2 };

enum class SlitMode {
  gaussian,  ///< projection onto the three Gaussian slit modes
  hard,      ///< top-hat apertures of full width 2 epsilon (diagnostic)
};

enum class OracleStrategy {
  automatic,     ///< full_grid when it fits in max_cells, else slit_adjoint
  full_grid,     ///< the whole 2D state is propagated
  slit_adjoint,  ///< per-slit readout modes traced back to the source on a 1D line
};

/// Samples the source state and renormalises. Throws SpanTooSmall when the
/// half-spans are below 3 delta_z or the discrete norm misses one by 1e-6.
Grid2D discretize_state(const SourceParams& source, const GridSpec& spec);

/// exp(-i lambda L k^2 / (4 pi)) along one photon's axis. Throws AliasingRisk
/// when lambda |L| / (n dz^2) > 1, i.e. the chirp phase steps by more than pi
/// between adjacent wavenumbers at the band edge.
Grid2D propagate(const Grid2D& grid, Photon photon, double lambda, double L);

/// Same transfer function on a periodic line of samples spaced dz.
std::vector<cplx> propagate_line(std::vector<cplx> line, double dz, double lambda, double L);

/// Normalised Gaussian slit mode (pi/2)^(-1/4) eps^(-1/2) exp(-(z - c)^2 / eps^2).
double slit_mode(double z, double centre, double epsilon);

/// Top-hat aperture of full width 2 epsilon.
double slit_mask(double z, double centre, double epsilon);

struct SlitProjection {
  Grid2D grid;          ///< renormalised to unit norm
  double transmission;  ///< norm after projection / norm before
};

/// Photon-1 axis onto span{phi_A, phi_B, phi_C} (gaussian) or through the
/// masks (hard), dropping the blocked component. Throws UnderResolved when
/// dz1 > epsilon / 8 and SpanTooSmall when a slit is not inside the grid.
SlitProjection project_slits(const Grid2D& grid, const Geometry& geom, SlitMode mode,
                             SlitSet slits = SlitSet::three);

/// Photon-2 states <phi_j|Psi> (gaussian mode) on the grid's z2 axis, j = A, B, C.
std::array<std::vector<cplx>, 3> conditional_amplitudes(const Grid2D& grid, const Geometry& geom);

/// Periodic 1D grid used by the slit_adjoint strategy.
struct LineSpec {
  std::size_t n = 0;
  double span = 0.0;
  std::size_t refine = 1;  ///< zero-padding factor for the source overlap integral
};

struct OracleOptions {
  SlitMode mode = SlitMode::gaussian;
  SlitSet slits = SlitSet::three;
  OracleStrategy strategy = OracleStrategy::automatic;
  std::optional<GridSpec> grid;
  std::optional<LineSpec> line;
  /// Returned samples are restricted to |z2| <= window (0: everything).
  double z2_window = 0.0;
  std::size_t max_cells = std::size_t{1} << 22;
  /// Keep the final 2D grid (full_grid strategy only).
  bool keep_grid = false;
};

struct OracleResult {
  CoincidencePattern pattern;                ///< |Psi(0, z2)|^2, unit peak
  std::array<std::vector<cplx>, 3> branches; ///< per-slit amplitudes on pattern.z2(), same scale
  OracleStrategy strategy;
  double transmission;  ///< full_grid only, NaN otherwise
  std::optional<Grid2D> grid;
};

/// Default full-grid layout for the given parameters. Throws SpanTooSmall,
/// UnderResolved or AliasingRisk when n samples per axis cannot satisfy all guards.
GridSpec plan_full_grid(const SourceParams& source, const Geometry& geom, std::size_t n = 1024);

/// Line layout for the slit_adjoint strategy.
LineSpec plan_line(const SourceParams& source, const Geometry& geom);

OracleResult oracle_coincidence(const SourceParams& source, const Geometry& geom,
                                const OracleOptions& options = {});

/// Overlap-weighted density from the oracle's branch amplitudes, unit peak.
CoincidencePattern detector_density(const OracleResult& result, const PathDetector& detector);

}  // namespace ghost
