#include "ghost/analytic.hpp"

#include <cmath>
#include <numbers>

#include "ghost/errors.hpp"

namespace ghost {

namespace {

constexpr double kPi = std::numbers::pi;

void require_closed_form(const TwoPhotonAmplitude& state, const char* what) {
  if (!state.closed_form_regime()) {
    throw Error(ErrorCode::InvalidParameter,
                std::string(what) + " needs real packet centres and unit side weights "
                                    "(approximate Gamma model)");
  }
}

}  // namespace

double epr_position_space(const SourceParams& source, double z1, double z2) {
  const double s = source.sigma();
  const double o = source.omega();
  const double rel = z1 - z2;
  const double com = z1 + z2;
  return std::sqrt(2.0 * s / (kPi * o)) * std::exp(-rel * rel * s * s - com * com / (4.0 * o * o));
}

Uncertainties uncertainties(const SourceParams& source) {
  const double s = source.sigma();
  const double o = source.omega();
  return {std::sqrt(o * o + 1.0 / (4.0 * s * s)), 0.5 * std::sqrt(s * s + 1.0 / (4.0 * o * o))};
}

ConditionalPacketParams conditional_packets(const SourceParams& source, const Geometry& geom,
                                            GammaModel model) {
  const double s = source.sigma();
  const double o = source.omega();
  const double eps = geom.epsilon();
  const double z0 = geom.z0();
  const double tau2 = effective_diffusion(geom.lambda(), geom.L2());
  const double gamma_sq = eps * eps + 1.0 / (s * s);

  cplx gamma_cap;
  cplx z0p = z0;
  cplx weight = 1.0;
  if (model == GammaModel::approximate) {
    // photon 2 spreads over L2 on the way out and, traced back through the
    // crystal, over L2 again: twice the single-path diffusion
    gamma_cap = {gamma_sq, 2.0 * tau2};
  } else {
    if (4.0 * o * o * s * s - 1.0 <= 1e-12) {
      throw Error(ErrorCode::DegenerateCorrelation,
                  "4 Omega^2 sigma^2 must exceed 1 for the exact conditional packets");
    }
    const double A = s * s + 1.0 / (4.0 * o * o);
    const double B = s * s - 1.0 / (4.0 * o * o);
    const cplx a{eps * eps, tau2};
    const cplx den = A + a * (s * s / (o * o));
    if (std::abs(den) < 1e-12 * A) {
      throw Error(ErrorCode::DegenerateCorrelation, "z0' denominator vanishes");
    }
    gamma_cap = (a * A + 1.0) / den + cplx{0.0, tau2};
    z0p = B * z0 / den;
    weight = std::exp(-z0 * z0 * s * s / (o * o * den));
  }

  const ComplexWidth width = ComplexWidth::create(gamma_cap);
  const double gr = width.re;
  const cplx c2 = std::pow(2.0 / kPi, 0.25) * std::pow(gr, 0.25) / std::sqrt(gamma_cap);
  return {width, z0p, weight, c2, gamma_sq, model};
}

std::array<cplx, 3> TwoPhotonAmplitude::branches(double z1, double z2) const {
  const double z0 = geom_.z0();
  const cplx zp = packets_.z0_prime;
  const cplx w = packets_.side_weight;
  auto term = [&](double c1, cplx c2) {
    const double d1 = z1 - c1;
    const cplx d2 = z2 - c2;
    return std::exp(-d1 * d1 / a1_ - d2 * d2 / b_);
  };
  std::array<cplx, 3> out{ct_ * w * term(z0, zp), ct_ * term(0.0, 0.0), ct_ * w * term(-z0, -zp)};
  if (slits_ == SlitSet::outer_pair) out[1] = 0.0;
  return out;
}

cplx TwoPhotonAmplitude::amplitude(double z1, double z2) const {
  const auto t = branches(z1, z2);
  return t[0] + t[1] + t[2];
}

double TwoPhotonAmplitude::density(double z1, double z2) const {
  const auto t = branches(z1, z2);
  if (!detector_) return std::norm(t[0] + t[1] + t[2]);
  double sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    sum += std::norm(t[i]);
    for (std::size_t j = i + 1; j < 3; ++j) {
      sum += 2.0 * detector_->overlap(i, j) * std::real(std::conj(t[i]) * t[j]);
    }
  }
  return std::max(sum, 0.0);
}

bool TwoPhotonAmplitude::closed_form_regime() const noexcept {
  return packets_.z0_prime.imag() == 0.0 && packets_.z0_prime.real() == geom_.z0() &&
         packets_.side_weight == cplx{1.0, 0.0};
}

TwoPhotonAmplitude TwoPhotonAmplitude::with_detector(std::optional<PathDetector> detector) const {
  TwoPhotonAmplitude copy = *this;
  copy.detector_ = std::move(detector);
  return copy;
}

TwoPhotonAmplitude post_slit_state(const SourceParams& source, const Geometry& geom,
                                   const ConditionalPacketParams& packets,
                                   PostSlitOptions options) {
  TwoPhotonAmplitude st(source, geom, packets);
  st.detector_ = std::move(options.detector);
  st.slits_ = options.slits;

  const double eps = geom.epsilon();
  const double tau1 = effective_diffusion(geom.lambda(), geom.L1());
  st.a1_ = {eps * eps, tau1};
  st.b_ = packets.gamma_cap.value() + cplx{0.0, tau1};

  const double n_slits = options.slits == SlitSet::three ? 3.0 : 2.0;
  const double gr = packets.gamma_cap.re;
  st.ct_ = std::sqrt(2.0 / (n_slits * kPi)) / std::sqrt(st.a1_ / eps) /
           std::sqrt(st.b_ / std::sqrt(gr));

  if (options.normalization == Normalization::quadrature) {
    const auto det = st.detector_;
    st.detector_.reset();
    const double total = total_probability(st);
    st.detector_ = det;
    if (!(total > 0.0) || !std::isfinite(total)) {
      throw Error(ErrorCode::InvalidParameter, "state has no weight on the quadrature box");
    }
    st.ct_ /= std::sqrt(total);
  }
  return st;
}

FringeScales fringe_scales(const TwoPhotonAmplitude& state) {
  const Geometry& g = state.geometry();
  const cplx a1 = state.photon1_width();
  const cplx b = state.photon2_width();
  FringeScales f{};
  f.photon1_envelope = std::norm(a1) / a1.real();
  f.gamma_d_sq = std::norm(b) / b.real();
  f.xi1 = -std::imag(1.0 / a1);
  f.xi2 = -std::imag(1.0 / b);
  const double D = g.D();
  f.kappa1 = 4.0 * kPi * g.z0() / (g.lambda() * D);
  f.kappa2 = 2.0 * kPi * g.z0() / (g.lambda() * D);
  f.beta = g.z0() * g.z0() * kPi / g.lambda() * (1.0 / g.L1() + 1.0 / D);
  return f;
}

double coincidence_density(const TwoPhotonAmplitude& state, double z1, double z2) {
  if (state.detector()) {
    throw Error(ErrorCode::InvalidParameter, "six-term density is defined without a path detector");
  }
  require_closed_form(state, "six-term density");
  const FringeScales f = fringe_scales(state);
  const double z0 = state.geometry().z0();
  const double W1 = f.photon1_envelope;
  const double G = f.gamma_d_sq;
  const double pref = std::norm(state.normalization());
  const bool middle = state.slits() == SlitSet::three;

  const double eA = std::exp(-2.0 * (z1 - z0) * (z1 - z0) / W1 - 2.0 * (z2 - z0) * (z2 - z0) / G);
  const double eB = middle ? std::exp(-2.0 * z1 * z1 / W1 - 2.0 * z2 * z2 / G) : 0.0;
  const double eC = std::exp(-2.0 * (z1 + z0) * (z1 + z0) / W1 - 2.0 * (z2 + z0) * (z2 + z0) / G);

  double cross = 0.0;
  if (middle) {
    // A-B and B-C: envelopes are the geometric means of the two packets
    const double ab = std::sqrt(eA * eB);
    const double bc = std::sqrt(eB * eC);
    cross += 2.0 * ab * std::cos(f.xi1 * (z0 * z0 - 2.0 * z1 * z0) + f.xi2 * (z0 * z0 - 2.0 * z2 * z0));
    cross += 2.0 * bc * std::cos(f.xi1 * (z0 * z0 + 2.0 * z1 * z0) + f.xi2 * (z0 * z0 + 2.0 * z2 * z0));
  }
  cross += 2.0 * std::sqrt(eA * eC) * std::cos(4.0 * z0 * z1 * f.xi1 + 4.0 * z0 * z2 * f.xi2);
  return std::max(pref * (eA + eB + eC + cross), 0.0);
}

double fixed_detector_density(const TwoPhotonAmplitude& state, double z2, double g12, double g13,
                              double g23, PhaseModel phases) {
  require_closed_form(state, "fixed-D1 density");
  const FringeScales f = fringe_scales(state);
  const double z0 = state.geometry().z0();
  const double W1 = f.photon1_envelope;
  const double G = f.gamma_d_sq;
  const bool middle = state.slits() == SlitSet::three;

  double p12 = 0.0, p13 = 0.0, p23 = 0.0;
  switch (phases) {
    case PhaseModel::exact_xi: {
      const double s = z0 * z0 * (f.xi1 + f.xi2);
      p12 = 2.0 * z2 * z0 * f.xi2 - s;
      p13 = 4.0 * z2 * z0 * f.xi2;
      p23 = 2.0 * z2 * z0 * f.xi2 + s;
      break;
    }
    case PhaseModel::retain_beta:
      p12 = f.kappa2 * z2 - f.beta;
      p13 = f.kappa1 * z2;
      p23 = f.kappa2 * z2 + f.beta;
      break;
    case PhaseModel::neglect_beta:
      p12 = f.kappa2 * z2;
      p13 = f.kappa1 * z2;
      p23 = f.kappa2 * z2;
      break;
  }

  const double side = std::exp(-2.0 * z0 * z0 / W1 - 2.0 * (z2 * z2 + z0 * z0) / G);
  const double u = 4.0 * z2 * z0 / G;
  double sum = side * 2.0 * std::cosh(u) + 2.0 * g13 * side * std::cos(p13);
  if (middle) {
    sum += std::exp(-2.0 * z2 * z2 / G);
    const double mixed = -z0 * z0 / W1 - (2.0 * z2 * z2 + z0 * z0) / G;
    sum += 2.0 * g12 * std::exp(mixed + 2.0 * z2 * z0 / G) * std::cos(p12);
    sum += 2.0 * g23 * std::exp(mixed - 2.0 * z2 * z0 / G) * std::cos(p23);
  }
  return std::max(std::norm(state.normalization()) * sum, 0.0);
}

CoincidencePattern ghost_pattern(const TwoPhotonAmplitude& state, std::span<const double> z2_grid,
                                 bool neglect_beta) {
  if (state.detector()) {
    throw Error(ErrorCode::InvalidParameter,
                "ghost_pattern takes a state without a path detector; use detector_pattern");
  }
  const PhaseModel phases = neglect_beta ? PhaseModel::neglect_beta : PhaseModel::retain_beta;
  std::vector<double> z(z2_grid.begin(), z2_grid.end());
  std::vector<double> d(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    d[i] = fixed_detector_density(state, z[i], 1.0, 1.0, 1.0, phases);
  }
  return CoincidencePattern::create(std::move(z), std::move(d), 0.0,
                                    PatternProvenance{state.source(), state.geometry(), {}});
}

CoincidencePattern detector_pattern(const TwoPhotonAmplitude& state,
                                    std::span<const double> z2_grid, PhaseModel phases) {
  if (!state.detector()) {
    throw Error(ErrorCode::InvalidParameter, "detector_pattern needs a state with a path detector");
  }
  const PathDetector& det = *state.detector();
  std::vector<double> z(z2_grid.begin(), z2_grid.end());
  std::vector<double> d(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    d[i] = fixed_detector_density(state, z[i], det.overlap(0, 1), det.overlap(0, 2),
                                  det.overlap(1, 2), phases);
  }
  return CoincidencePattern::create(std::move(z), std::move(d), 0.0,
                                    PatternProvenance{state.source(), state.geometry(), det});
}

YoungWidths young_widths(const Geometry& geom) {
  if (geom.z0() < 1e-3 * geom.epsilon()) {
    throw Error(ErrorCode::DegenerateGeometry, "slit separation is negligible against the slit width");
  }
  const double lD = geom.lambda() * geom.D();
  return {lD / (2.0 * geom.z0()), lD / geom.z0()};
}

double total_probability(const TwoPhotonAmplitude& state, std::size_t samples_per_axis) {
  if (samples_per_axis < 3) throw Error(ErrorCode::InvalidParameter, "need at least 3 samples per axis");
  const cplx a1 = state.photon1_width();
  const cplx b = state.photon2_width();
  const double w1 = std::sqrt(std::norm(a1) / a1.real());
  const double w2 = std::sqrt(std::norm(b) / b.real());
  const double h1 = state.geometry().z0() + 6.0 * w1;
  const double h2 = std::abs(state.packets().z0_prime) + 6.0 * w2;
  const std::vector<double> x1 = uniform_samples(-h1, h1, samples_per_axis);
  const std::vector<double> x2 = uniform_samples(-h2, h2, samples_per_axis);
  const double d1 = x1[1] - x1[0];
  const double d2 = x2[1] - x2[0];
  double sum = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const double wi = (i == 0 || i + 1 == x1.size()) ? 0.5 : 1.0;
    double row = 0.0;
    for (std::size_t j = 0; j < x2.size(); ++j) {
      const double wj = (j == 0 || j + 1 == x2.size()) ? 0.5 : 1.0;
      row += wj * state.density(x1[i], x2[j]);
    }
    sum += wi * row;
  }
  return sum * d1 * d2;
}

}  // namespace ghost
