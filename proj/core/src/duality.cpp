#include "ghost/duality.hpp"

#include <cmath>
#include <random>

#include "ghost/errors.hpp"
#include "ghost/pattern_analysis.hpp"

namespace ghost {

namespace {

struct Scales {
  double w1;   // photon-1 envelope at D1
  double gd2;  // gamma_D^2
};

Scales scales(const SourceParams& source, const Geometry& geom) {
  const double eps = geom.epsilon();
  const double tau1 = effective_diffusion(geom.lambda(), geom.L1());
  const double tauD = effective_diffusion(geom.lambda(), geom.D());
  const double gsq = eps * eps + 1.0 / (source.sigma() * source.sigma());
  return {eps * eps + tau1 * tau1 / (eps * eps), gsq + tauD * tauD / gsq};
}

void check_envelope(double z2, double gd2) {
  if (!std::isfinite(z2) || std::abs(z2) > 3.0 * std::sqrt(gd2)) {
    throw Error(ErrorCode::OutsideEnvelope, "z2 lies beyond 3 gamma_D from the axis");
  }
}

double measured(const CoincidencePattern& pattern) {
  try {
    return visibility(pattern);
  } catch (const Error& e) {
    // a pattern without off-centre fringes has zero visibility
    if (e.code() == ErrorCode::NoFringePair) return 0.0;
    throw;
  }
}

std::vector<double> measurement_grid(const Geometry& geom, SlitSet slits,
                                     const DualityOptions& options) {
  const double w = young_widths(geom).w_ab;
  const double half = options.window > 0.0 ? options.window : 2.5 * w;
  std::size_t n = options.samples;
  const double fine = (slits == SlitSet::three ? 0.5 : 1.0) * w / 32.0;
  n = std::max<std::size_t>(n, static_cast<std::size_t>(std::ceil(2.0 * half / fine)) + 1);
  return uniform_samples(-half, half, n);
}

DualitySample evaluate(const PathDetector& det, double d, DualityRelation relation,
                       SlitSet slits, double analytic_value, const SourceParams& source,
                       const Geometry& geom, const DualityOptions& options) {
  double v = 0.0;
  switch (options.source) {
    case PatternSource::analytic:
      v = analytic_value;
      break;
    case PatternSource::sampled: {
      const auto packets = conditional_packets(source, geom);
      const auto state = post_slit_state(source, geom, packets, {slits, Normalization::printed, det});
      v = measured(detector_pattern(state, measurement_grid(geom, slits, options)));
      break;
    }
    case PatternSource::oracle: {
      OracleOptions o = options.oracle;
      o.slits = slits;
      if (o.z2_window <= 0.0) o.z2_window = measurement_grid(geom, slits, options).back();
      v = measured(detector_density(oracle_coincidence(source, geom, o), det));
      break;
    }
  }
  return {det, DualityReport::create(v, d, relation), options.source};
}

}  // namespace

double distinguishability(const PathDetector& detector) {
  return 1.0 - detector.overlap_sum() / 3.0;
}

double visibility_bound(const PathDetector& detector) {
  const double s = detector.overlap_sum();
  return 3.0 * s / (6.0 + s);
}

double analytic_v2(const PathDetector& detector, const SourceParams& source, const Geometry& geom,
                   double z2) {
  const Scales sc = scales(source, geom);
  check_envelope(z2, sc.gd2);
  const double z0 = geom.z0();
  const double zeta = 1.0 / sc.w1 + 1.0 / sc.gd2;
  const double e = std::exp(-z0 * z0 * zeta);
  const double u = 2.0 * z2 * z0 / sc.gd2;
  const double x = detector.overlap(0, 1) * std::exp(u) + detector.overlap(0, 2) * e +
                   detector.overlap(1, 2) * std::exp(-u);
  const double alpha = 2.0 * (1.0 / e + 2.0 * e * std::cosh(2.0 * u));
  return 3.0 * x / (alpha + x);
}

double analytic_v2_two_slit(double overlap, const SourceParams& source, const Geometry& geom,
                            double z2) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "overlap must lie in [0, 1]");
  }
  const Scales sc = scales(source, geom);
  check_envelope(z2, sc.gd2);
  return overlap / std::cosh(4.0 * z2 * geom.z0() / sc.gd2);
}

double second_offcenter_fringe(const Geometry& geom, SlitSet slits) {
  const YoungWidths w = young_widths(geom);
  return 2.0 * (slits == SlitSet::three ? w.w_ab : w.w_ac);
}

DualitySample check_duality(const PathDetector& detector, const SourceParams& source,
                            const Geometry& geom, const DualityOptions& options) {
  double analytic = 0.0;
  if (options.source == PatternSource::analytic) {
    const double z2 = options.z2.value_or(second_offcenter_fringe(geom));
    analytic = analytic_v2(detector, source, geom, z2);
  }
  return evaluate(detector, distinguishability(detector), DualityRelation::three_slit,
                  SlitSet::three, analytic, source, geom, options);
}

DualitySample two_slit_check(double overlap, const SourceParams& source, const Geometry& geom,
                             const DualityOptions& options) {
  const PathDetector det = PathDetector::from_overlaps(0.0, overlap, 0.0);
  double analytic = 0.0;
  if (options.source == PatternSource::analytic) {
    const double z2 = options.z2.value_or(second_offcenter_fringe(geom, SlitSet::outer_pair));
    analytic = analytic_v2_two_slit(overlap, source, geom, z2);
  }
  return evaluate(det, 1.0 - overlap, DualityRelation::two_slit, SlitSet::outer_pair, analytic,
                  source, geom, options);
}

std::vector<PathDetector> sample_gram(std::uint64_t seed, std::size_t count, std::size_t dim) {
  if (dim < 3) throw Error(ErrorCode::InvalidParameter, "vector dimension must be at least 3");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PathDetector> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const bool clustered = unit(rng) < 0.5;
    const double spread = std::pow(10.0, -2.0 + 3.0 * unit(rng));
    std::array<std::vector<cplx>, 3> v;
    for (std::size_t i = 0; i < 3; ++i) {
      v[i].assign(dim, cplx{});
      v[i][clustered ? 0 : i] = 1.0;
      double norm = 0.0;
      for (cplx& x : v[i]) {
        x += spread * cplx{normal(rng), normal(rng)};
        norm += std::norm(x);
      }
      for (cplx& x : v[i]) x /= std::sqrt(norm);
    }
    Gram3 g{};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        cplx s{};
        for (std::size_t k = 0; k < dim; ++k) s += std::conj(v[i][k]) * v[j][k];
        g[i][j] = i == j ? cplx{1.0, 0.0} : s;
      }
    }
    out.push_back(validate_gram(g));
  }
  return out;
}

SweepSummary duality_sweep(std::uint64_t seed, std::size_t count, const SourceParams& source,
                           const Geometry& geom, const DualityOptions& options, double slack) {
  SweepSummary summary;
  for (const PathDetector& det : sample_gram(seed, count)) {
    DualitySample s = check_duality(det, source, geom, options);
    ++summary.count;
    if (s.report.margin < -slack) ++summary.violations;
    summary.worst_margin = std::min(summary.worst_margin, s.report.margin);
    summary.samples.push_back(std::move(s));
  }
  return summary;
}

}  // namespace ghost
