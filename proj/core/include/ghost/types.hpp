#pragma once

// Value types shared by every layer. All lengths are in metres, wave numbers
// in 1/m. Each type validates its invariants on construction and is immutable
// afterwards.

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ghost {

using cplx = std::complex<double>;

/// Replaces 2*hbar*t/m of the massive-particle propagator by lambda*L/pi, the
/// imaginary width gained by a paraxial Gaussian after a path of length L.
double effective_diffusion(double lambda, double L);

/// Entanglement parameters of the generalised EPR source: sigma (1/m) sets the
/// width 1/sigma of the relative coordinate, omega (m) the centre-of-mass spread.
class SourceParams {
 public:
  static SourceParams create(double sigma, double omega);

  double sigma() const noexcept { return sigma_; }
  double omega() const noexcept { return omega_; }

 private:
  SourceParams(double sigma, double omega) : sigma_(sigma), omega_(omega) {}
  double sigma_;
  double omega_;
};

/// Three slits at +z0, 0, -z0 of Gaussian half-width epsilon. L2 runs from the
/// source to the slit plane, L1 from the slit plane to detector D1.
class Geometry {
 public:
  static Geometry create(double z0, double epsilon, double lambda, double L1, double L2);

  double z0() const noexcept { return z0_; }
  double epsilon() const noexcept { return epsilon_; }
  double lambda() const noexcept { return lambda_; }
  double L1() const noexcept { return L1_; }
  double L2() const noexcept { return L2_; }

  /// Unfolded slit-to-D2 distance through the source.
  double D() const noexcept { return L1_ + 2.0 * L2_; }

  /// epsilon >= z0: neighbouring slit modes overlap. Formulas stay defined,
  /// callers surface this as a warning.
  bool slits_overlap() const noexcept { return epsilon_ >= z0_; }

 private:
  Geometry(double z0, double eps, double lambda, double L1, double L2)
      : z0_(z0), epsilon_(eps), lambda_(lambda), L1_(L1), L2_(L2) {}
  double z0_;
  double epsilon_;
  double lambda_;
  double L1_;
  double L2_;
};

/// Ratios that decide whether the closed-form (approximate) regime applies.
struct CorrelationRegime {
  double omega_over_epsilon;
  double omega_sigma;
  /// (lambda*L2/(pi*epsilon)) / omega: how hard the source aperture clips the
  /// slit mode traced back to the crystal. Small is good.
  double aperture_ratio;

  bool good(double threshold = 10.0) const noexcept {
    return omega_over_epsilon >= threshold && omega_sigma >= threshold;
  }
};

CorrelationRegime correlation_regime(const SourceParams& source, const Geometry& geom);

struct ComplexWidth {
  double re;
  double im;

  static ComplexWidth create(double re, double im);
  static ComplexWidth create(cplx value) { return create(value.real(), value.imag()); }
  cplx value() const noexcept { return {re, im}; }
};

using Gram3 = std::array<std::array<cplx, 3>, 3>;

/// Which-path detector, described by the Gram matrix G[i][j] = <d_i|d_j>.
class PathDetector {
 public:
  static PathDetector orthogonal();
  static PathDetector indistinguishable();
  /// Real non-negative overlaps |<d1|d2>|, |<d1|d3>|, |<d2|d3>|.
  static PathDetector from_overlaps(double g12, double g13, double g23);

  const Gram3& gram() const noexcept { return gram_; }
  double overlap(std::size_t i, std::size_t j) const { return std::abs(gram_.at(i).at(j)); }
  double overlap_sum() const noexcept;

 private:
  friend PathDetector validate_gram(const Gram3& gram);
  explicit PathDetector(const Gram3& gram) : gram_(gram) {}
  Gram3 gram_;
};

/// Accepts a Gram matrix iff it is Hermitian, unit-diagonal and positive
/// semidefinite (eigenvalues >= -1e-12 * largest).
PathDetector validate_gram(const Gram3& gram);

struct PatternProvenance {
  SourceParams source;
  Geometry geometry;
  std::optional<PathDetector> detector;
};

/// Coincidence density sampled along z2 at a fixed D1 position.
class CoincidencePattern {
 public:
  static CoincidencePattern create(std::vector<double> z2, std::vector<double> density,
                                   double z1_fixed = 0.0,
                                   std::optional<PatternProvenance> provenance = std::nullopt);

  std::span<const double> z2() const noexcept { return z2_; }
  std::span<const double> density() const noexcept { return density_; }
  std::size_t size() const noexcept { return z2_.size(); }
  double spacing() const noexcept { return z2_.size() > 1 ? z2_[1] - z2_[0] : 0.0; }
  double z1_fixed() const noexcept { return z1_fixed_; }
  const std::optional<PatternProvenance>& provenance() const noexcept { return provenance_; }

  double peak() const noexcept;
  /// Same samples rescaled to unit peak.
  CoincidencePattern normalized_to_peak() const;

 private:
  CoincidencePattern() = default;
  std::vector<double> z2_;
  std::vector<double> density_;
  double z1_fixed_ = 0.0;
  std::optional<PatternProvenance> provenance_;
};

/// n uniformly spaced samples covering [lo, hi].
std::vector<double> uniform_samples(double lo, double hi, std::size_t n);

enum class DualityRelation { three_slit, two_slit };

struct DualityReport {
  double visibility;
  double distinguishability;
  double bound_lhs;
  double margin;
  DualityRelation relation;

  /// three_slit: V + 2D/(3-D); two_slit: V + D.
  static DualityReport create(double visibility, double distinguishability,
                              DualityRelation relation = DualityRelation::three_slit);
};

}  // namespace ghost
