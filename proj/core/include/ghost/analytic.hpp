#pragma once

// Closed-form two-photon amplitudes and coincidence densities for the
// three-slit ghost-interference geometry.
//
// Conventions: photon 1 goes through the slits, photon 2 is the "ghost"
// photon detected by D2. Branch index 0, 1, 2 is slit A (+z0), B (0), C (-z0),
// which the path detector marks with |d1>, |d2>, |d3>.

#include <array>
#include <optional>
#include <span>

#include "ghost/types.hpp"

namespace ghost {

enum class GammaModel {
  approximate,  ///< Gamma = gamma^2 + 2i*lambda*L2/pi, z0' = z0 (good-correlation limit)
  exact,        ///< full Gaussian integral over photon 1, finite Omega
};

enum class SlitSet {
  three,       ///< A, B and C open
  outer_pair,  ///< B blocked: the two-slit reduction
};

enum class Normalization {
  printed,     ///< closed-form C_t (fast)
  quadrature,  ///< rescale so that the 2D quadrature of the density is one
};

/// How the fixed-D1 closed forms treat the cross-term phases.
enum class PhaseModel {
  exact_xi,      ///< xi1, xi2 as defined from the complex widths
  retain_beta,   ///< kappa_i z2 -/+ beta (xi2 -> pi/(lambda D), xi1 -> pi/(lambda L1))
  neglect_beta,  ///< kappa_i z2 only
};

/// Generalised EPR amplitude at the source, normalised to unit probability.
double epr_position_space(const SourceParams& source, double z1, double z2);

struct Uncertainties {
  double delta_z;  ///< sqrt(Omega^2 + 1/(4 sigma^2)); the marginal |psi|^2 has std delta_z / 2
  double delta_k;  ///< sqrt(sigma^2 + 1/(4 Omega^2)) / 2; the k-marginal has std 2 delta_k
};

Uncertainties uncertainties(const SourceParams& source);

/// Photon-2 packet conditioned on photon 1 passing one slit, evaluated when
/// photon 1 reaches the slit plane:  psi_A(z2) ~ weight * exp(-(z2 - z0')^2 / Gamma).
struct ConditionalPacketParams {
  ComplexWidth gamma_cap;
  cplx z0_prime;
  cplx side_weight;  ///< amplitude of the +/-z0 packets relative to the central one
  cplx c2_norm;
  double gamma_sq;   ///< epsilon^2 + 1/sigma^2
  GammaModel model;
};

/// Throws DegenerateCorrelation in exact mode when 4 Omega^2 sigma^2 <= 1.
ConditionalPacketParams conditional_packets(const SourceParams& source, const Geometry& geom,
                                            GammaModel model = GammaModel::approximate);

struct PostSlitOptions {
  SlitSet slits = SlitSet::three;
  Normalization normalization = Normalization::printed;
  std::optional<PathDetector> detector;
};

/// Entangled state at the detectors: photon 1 has travelled L1 past the slits,
/// each photon-2 packet has gained i*lambda*L1/pi on top of Gamma.
class TwoPhotonAmplitude {
 public:
  /// Per-slit terms (A, B, C); a blocked slit contributes zero.
  std::array<cplx, 3> branches(double z1, double z2) const;
  cplx amplitude(double z1, double z2) const;
  /// |amplitude|^2, or the overlap-weighted sum when a path detector is attached.
  double density(double z1, double z2) const;

  const SourceParams& source() const noexcept { return source_; }
  const Geometry& geometry() const noexcept { return geom_; }
  const ConditionalPacketParams& packets() const noexcept { return packets_; }
  const std::optional<PathDetector>& detector() const noexcept { return detector_; }
  SlitSet slits() const noexcept { return slits_; }

  /// epsilon^2 + i lambda L1 / pi
  cplx photon1_width() const noexcept { return a1_; }
  /// Gamma + i lambda L1 / pi
  cplx photon2_width() const noexcept { return b_; }
  cplx normalization() const noexcept { return ct_; }

  /// Real centres and unit side weights: the six-term and fixed-D1 closed forms apply.
  bool closed_form_regime() const noexcept;

  TwoPhotonAmplitude with_detector(std::optional<PathDetector> detector) const;

 private:
  friend TwoPhotonAmplitude post_slit_state(const SourceParams&, const Geometry&,
                                            const ConditionalPacketParams&, PostSlitOptions);
  TwoPhotonAmplitude(const SourceParams& s, const Geometry& g, const ConditionalPacketParams& p)
      : source_(s), geom_(g), packets_(p) {}

  SourceParams source_;
  Geometry geom_;
  ConditionalPacketParams packets_;
  std::optional<PathDetector> detector_;
  SlitSet slits_ = SlitSet::three;
  cplx a1_{};
  cplx b_{};
  cplx ct_{};
};

TwoPhotonAmplitude post_slit_state(const SourceParams& source, const Geometry& geom,
                                   const ConditionalPacketParams& packets,
                                   PostSlitOptions options = {});

/// Expanded six-term |Psi(z1, z2)|^2 (three envelopes plus three cross terms).
double coincidence_density(const TwoPhotonAmplitude& state, double z1, double z2);

/// Scales that appear in the fixed-D1 expressions.
struct FringeScales {
  double photon1_envelope;  ///< epsilon^2 + (lambda L1 / (pi epsilon))^2
  double gamma_d_sq;        ///< gamma^2 + (lambda D / (pi gamma))^2
  double xi1;
  double xi2;
  double kappa1;  ///< 4 pi z0 / (lambda D)
  double kappa2;  ///< 2 pi z0 / (lambda D)
  double beta;    ///< z0^2 pi / lambda * (1/L1 + 1/D)
};

FringeScales fringe_scales(const TwoPhotonAmplitude& state);

/// Density at D1 = 0 as a function of z2, with overlap weights |<d_i|d_j>|.
double fixed_detector_density(const TwoPhotonAmplitude& state, double z2, double g12, double g13,
                              double g23, PhaseModel phases);

/// Ghost pattern |Psi(0, z2)|^2 for a state without a path detector.
CoincidencePattern ghost_pattern(const TwoPhotonAmplitude& state, std::span<const double> z2_grid,
                                 bool neglect_beta = true);

/// Ghost pattern with which-path marking, weighted by the detector overlaps.
CoincidencePattern detector_pattern(const TwoPhotonAmplitude& state,
                                    std::span<const double> z2_grid,
                                    PhaseModel phases = PhaseModel::exact_xi);

struct YoungWidths {
  double w_ac;  ///< lambda D / (2 z0), slits A and C
  double w_ab;  ///< lambda D / z0, slits A-B and B-C
};

/// Throws DegenerateGeometry when z0 < 1e-3 epsilon.
YoungWidths young_widths(const Geometry& geom);

/// Trapezoidal integral of density(z1, z2) over +/-(centre + 6 envelope widths).
double total_probability(const TwoPhotonAmplitude& state, std::size_t samples_per_axis = 1201);

}  // namespace ghost
