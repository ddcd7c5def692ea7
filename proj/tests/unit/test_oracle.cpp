#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "fixtures.hpp"
#include "ghost/analytic.hpp"
#include "ghost/errors.hpp"
#include "ghost/oracle.hpp"
#include "ghost/pattern_analysis.hpp"

using namespace ghost;
using ghost::testing::kDense;
using ghost::testing::kLambda;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ghost::Error thrown";
  return ErrorCode::ConfigError;
}

double max_diff(const Grid2D& a, const Grid2D& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

double max_abs(const Grid2D& a) {
  double m = 0.0;
  for (const cplx& v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

const Grid2D& dense_slit_plane() {
  static const Grid2D g = [] {
    const auto s = kDense.source();
    const auto geo = kDense.geometry();
    Grid2D x = discretize_state(s, plan_full_grid(s, geo));
    x = propagate(x, Photon::one, kLambda, geo.L2());
    return propagate(x, Photon::two, kLambda, geo.L2());
  }();
  return g;
}

double rms_rel(std::span<const double> a, std::span<const double> b) {
  double n = 0.0, d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    n += (a[i] - b[i]) * (a[i] - b[i]);
    d += b[i] * b[i];
  }
  return std::sqrt(n / d);
}

std::vector<double> analytic_unit_peak(const SourceParams& s, const Geometry& g, std::span<const double> z,
                                       GammaModel model, SlitSet slits = SlitSet::three) {
  const auto st = post_slit_state(s, g, conditional_packets(s, g, model), {slits});
  std::vector<double> d;
  double peak = 0.0;
  for (double x : z) {
    d.push_back(st.density(0.0, x));
    peak = std::max(peak, d.back());
  }
  for (double& v : d) v /= peak;
  return d;
}

}  // namespace

TEST(Discretize, NormBeforeRenormalisation) {
  const auto s = SourceParams::create(1.0, 1.0);
  const Grid2D g = discretize_state(s, {256, 256, 10.0, 10.0});
  // independent direct sum of the sampled source
  double sum = 0.0;
  const double dz = 20.0 / 256;
  for (std::size_t i = 0; i < 256; ++i) {
    for (std::size_t j = 0; j < 256; ++j) {
      const double a = -10 + i * dz, b = -10 + j * dz;
      sum += std::exp(-2 * (a - b) * (a - b) - (a + b) * (a + b) / 2) * 2 / std::numbers::pi;
    }
  }
  EXPECT_NEAR(sum * dz * dz, 1.0, 1e-6);
  EXPECT_NEAR(g.norm(), 1.0, 1e-12);
  // peak on the origin sample
  std::size_t best = 0;
  for (std::size_t k = 0; k < g.values().size(); ++k) {
    if (std::abs(g.values()[k]) > std::abs(g.values()[best])) best = k;
  }
  EXPECT_EQ(best / 256, 128u);
  EXPECT_EQ(best % 256, 128u);
}

TEST(Discretize, MarginalVarianceMatchesUncertainty) {
  for (auto [sigma, omega] : {std::pair{1.0, 1.0}, std::pair{4.0, 0.7}}) {
    const auto s = SourceParams::create(sigma, omega);
    const double dz = uncertainties(s).delta_z;
    const Grid2D g = discretize_state(s, {512, 512, 6.0 * dz, 6.0 * dz});
    double var = 0.0;
    for (std::size_t i = 0; i < g.n1(); ++i)
      for (std::size_t j = 0; j < g.n2(); ++j) var += g.z1(i) * g.z1(i) * std::norm(g(i, j));
    var *= g.dz1() * g.dz2();
    EXPECT_NEAR(var / (dz * dz / 4.0), 1.0, 1e-4);
  }
}

TEST(Discretize, SpanTooSmall) {
  const auto s = SourceParams::create(1.0, 1.0);
  EXPECT_EQ(code_of([&] { discretize_state(s, {256, 256, 2.0, 10.0}); }), ErrorCode::SpanTooSmall);
  // covers 3 delta_z but far too coarse to hold the norm
  EXPECT_EQ(code_of([&] { discretize_state(s, {8, 8, 4.0, 4.0}); }), ErrorCode::SpanTooSmall);
}

TEST(Propagate, IdentityUnitarySemigroup) {
  const Grid2D& g = dense_slit_plane();
  EXPECT_EQ(max_diff(propagate(g, Photon::one, kLambda, 0.0), g), 0.0);
  for (Photon p : {Photon::one, Photon::two}) {
    const Grid2D full = propagate(g, p, kLambda, 0.006);
    EXPECT_NEAR(full.norm() / g.norm(), 1.0, 1e-9);
    const Grid2D half = propagate(propagate(g, p, kLambda, 0.003), p, kLambda, 0.003);
    EXPECT_LE(max_diff(full, half), 1e-10 * max_abs(full));
    const Grid2D back = propagate(full, p, kLambda, -0.006);
    EXPECT_LE(max_diff(back, g), 1e-10 * max_abs(g));
  }
}

TEST(Propagate, GaussianIntensityWidth) {
  const double eps = 3e-5, L = 0.01;
  Grid2D g({1024, 16, 2.5e-3, 1.0});
  for (std::size_t i = 0; i < g.n1(); ++i)
    for (std::size_t j = 0; j < g.n2(); ++j) g(i, j) = std::exp(-g.z1(i) * g.z1(i) / (eps * eps));
  const Grid2D out = propagate(g, Photon::one, kLambda, L);
  double m0 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < out.n1(); ++i) {
    m0 += std::norm(out(i, 0));
    m2 += out.z1(i) * out.z1(i) * std::norm(out(i, 0));
  }
  const double tau = kLambda * L / std::numbers::pi;
  const double expected = (eps * eps + tau * tau / (eps * eps)) / 4.0;
  EXPECT_NEAR(m2 / m0 / expected, 1.0, 1e-4);
}

TEST(Propagate, AliasingGuard) {
  const Grid2D& g = dense_slit_plane();
  EXPECT_EQ(code_of([&] { propagate(g, Photon::two, kLambda, 10.0); }), ErrorCode::AliasingRisk);
  EXPECT_EQ(code_of([] { propagate_line(std::vector<cplx>(64, 1.0), 1e-6, kLambda, 1.0); }),
            ErrorCode::AliasingRisk);
}

TEST(ProjectSlits, HardMaskZeroOutsideAndContracts) {
  const auto geo = kDense.geometry();
  const Grid2D& g = dense_slit_plane();
  const SlitProjection p = project_slits(g, geo, SlitMode::hard);
  EXPECT_GT(p.transmission, 0.0);
  EXPECT_LT(p.transmission, 1.0);
  for (std::size_t i = 0; i < g.n1(); ++i) {
    const double z = g.z1(i);
    const bool inside = std::abs(z - geo.z0()) <= geo.epsilon() || std::abs(z) <= geo.epsilon() ||
                        std::abs(z + geo.z0()) <= geo.epsilon();
    if (inside) continue;
    for (std::size_t j = 0; j < g.n2(); ++j) ASSERT_EQ(p.grid(i, j), cplx(0.0, 0.0));
  }
}

TEST(ProjectSlits, GaussianCommutesWithPhotonTwoPropagation) {
  const auto geo = kDense.geometry();
  const Grid2D& g = dense_slit_plane();
  const SlitProjection a = project_slits(g, geo, SlitMode::gaussian);
  EXPECT_LT(a.transmission, 1.0);
  const Grid2D ab = propagate(a.grid, Photon::two, kLambda, geo.L1());
  const Grid2D ba = project_slits(propagate(g, Photon::two, kLambda, geo.L1()), geo, SlitMode::gaussian).grid;
  EXPECT_LE(max_diff(ab, ba), 1e-12 * max_abs(ab));
}

TEST(ProjectSlits, ResolutionAndSpanGuards) {
  const auto geo = kDense.geometry();
  Grid2D coarse({64, 64, 1e-3, 1e-3});
  EXPECT_EQ(code_of([&] { project_slits(coarse, geo, SlitMode::gaussian); }), ErrorCode::UnderResolved);
  Grid2D narrow({256, 64, 1e-4, 1e-3});
  EXPECT_EQ(code_of([&] { project_slits(narrow, geo, SlitMode::gaussian); }), ErrorCode::SpanTooSmall);
}

TEST(ConditionalAmplitudes, WidthMatchesExactGamma) {
  const auto s = kDense.source();
  const auto geo = kDense.geometry();
  const Grid2D& g = dense_slit_plane();
  const auto cond = conditional_amplitudes(g, geo);
  const auto exact = conditional_packets(s, geo, GammaModel::exact);
  const std::size_t j0 = g.n2() / 2;
  const std::size_t k = 10;
  const double h = k * g.dz2();
  for (std::size_t slit : {0u, 1u}) {
    const auto& psi = cond[slit];
    // log psi is quadratic: second difference gives -2 h^2 / Gamma
    const cplx second = std::log(psi[j0 + k] * psi[j0 - k] / (psi[j0] * psi[j0]));
    const cplx gamma = -2.0 * h * h / second;
    EXPECT_LT(std::abs(gamma - exact.gamma_cap.value()) / std::abs(exact.gamma_cap.value()), 1e-3);
    if (slit == 0) {
      const cplx first = std::log(psi[j0 + k] / psi[j0 - k]) / (2.0 * h);  // 2 z0' / Gamma at z2 = 0
      const cplx z0p = 0.5 * first * gamma;
      EXPECT_LT(std::abs(z0p - exact.z0_prime) / geo.z0(), 1e-3);
    }
  }
}

TEST(OracleCoincidence, FullGridMatchesExactClosedForm) {
  const auto s = kDense.source();
  const auto geo = kDense.geometry();
  OracleOptions opt;
  opt.strategy = OracleStrategy::full_grid;
  opt.z2_window = 2.0 * young_widths(geo).w_ab;
  const OracleResult r = oracle_coincidence(s, geo, opt);
  EXPECT_EQ(r.strategy, OracleStrategy::full_grid);
  EXPECT_GT(r.transmission, 0.0);
  EXPECT_LT(r.transmission, 1.0);
  const auto exact = analytic_unit_peak(s, geo, r.pattern.z2(), GammaModel::exact);
  EXPECT_LT(rms_rel(r.pattern.density(), exact), 1e-9);
  // the per-slit branches add up to the propagated grid slice
  const auto via_branches = detector_density(r, PathDetector::indistinguishable());
  EXPECT_LT(rms_rel(via_branches.density(), r.pattern.density()), 1e-10);
}

TEST(OracleCoincidence, SlitAdjointAgreesWithFullGrid) {
  const auto s = kDense.source();
  const auto geo = kDense.geometry();
  OracleOptions opt;
  opt.z2_window = 2.0 * young_widths(geo).w_ab;
  opt.strategy = OracleStrategy::slit_adjoint;
  const OracleResult r = oracle_coincidence(s, geo, opt);
  EXPECT_EQ(r.strategy, OracleStrategy::slit_adjoint);
  EXPECT_TRUE(std::isnan(r.transmission));
  const auto exact = analytic_unit_peak(s, geo, r.pattern.z2(), GammaModel::exact);
  EXPECT_LT(rms_rel(r.pattern.density(), exact), 1e-9);
  const auto det = PathDetector::from_overlaps(0.2, 0.7, 0.4);
  const auto st = post_slit_state(s, geo, conditional_packets(s, geo, GammaModel::exact),
                                  {SlitSet::three, Normalization::printed, det});
  const auto weighted = detector_density(r, det);
  std::vector<double> ref;
  for (double z : weighted.z2()) ref.push_back(st.density(0.0, z));
  const double peak = *std::max_element(ref.begin(), ref.end());
  for (double& v : ref) v /= peak;
  EXPECT_LT(rms_rel(weighted.density(), ref), 1e-9);
}

TEST(OracleCoincidence, AutomaticStrategyAndBudget) {
  OracleOptions opt;
  opt.z2_window = 1e-3;
  EXPECT_EQ(oracle_coincidence(kDense.source(), kDense.geometry(), opt).strategy,
            OracleStrategy::full_grid);
  opt.max_cells = 1 << 10;
  EXPECT_EQ(oracle_coincidence(kDense.source(), kDense.geometry(), opt).strategy,
            OracleStrategy::slit_adjoint);
  opt.strategy = OracleStrategy::full_grid;
  EXPECT_EQ(code_of([&] { oracle_coincidence(kDense.source(), kDense.geometry(), opt); }),
            ErrorCode::GridTooLarge);
}

TEST(OracleCoincidence, FringeSpacingAtDeskScale) {
  const auto f = ghost::testing::kF1;
  OracleOptions opt;
  opt.z2_window = 0.03;
  const OracleResult r = oracle_coincidence(f.source(), f.geometry(), opt);
  EXPECT_EQ(r.strategy, OracleStrategy::slit_adjoint);
  EXPECT_NEAR(fringe_widths(r.pattern).primary_width, 1.053e-2, 0.02 * 1.053e-2);
  opt.slits = SlitSet::outer_pair;
  const OracleResult two = oracle_coincidence(f.source(), f.geometry(), opt);
  EXPECT_NEAR(fringe_widths(two.pattern).primary_width, 5.265e-3, 0.02 * 5.265e-3);
}

TEST(OracleCoincidence, WeakCorrelationLowersVisibility) {
  const auto f = ghost::testing::kF1;
  OracleOptions opt;
  opt.z2_window = 0.03;
  const double good = visibility(oracle_coincidence(f.source(), f.geometry(), opt).pattern);
  const double weak =
      visibility(oracle_coincidence(SourceParams::create(2e4, f.omega), f.geometry(), opt).pattern);
  EXPECT_GT(good, 0.9);
  EXPECT_LT(weak, good);
}

TEST(OracleCoincidence, HardSlitsRunAsDiagnostic) {
  OracleOptions opt;
  opt.mode = SlitMode::hard;
  opt.strategy = OracleStrategy::full_grid;
  opt.z2_window = 1e-3;
  const OracleResult r = oracle_coincidence(kDense.source(), kDense.geometry(), opt);
  EXPECT_GT(r.transmission, 0.0);
  EXPECT_LT(r.transmission, 1.0);
  EXPECT_DOUBLE_EQ(r.pattern.peak(), 1.0);
  const auto sum = detector_density(r, PathDetector::indistinguishable());
  EXPECT_LT(rms_rel(sum.density(), r.pattern.density()), 1e-9);
}

TEST(Grid2D, BinaryDumpRoundTrip) {
  Grid2D g({4, 2, 1.5, 2.5});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 2; ++j) g(i, j) = {double(i), -double(j) * 0.5};
  std::stringstream ss;
  g.write(ss);
  const std::string bytes = ss.str();
  ASSERT_EQ(bytes.size(), 4 * 8 + 4 * 2 * 16u);
  double header[4];
  std::memcpy(header, bytes.data(), sizeof header);  // little-endian host
  EXPECT_EQ(header[0], 4.0);
  EXPECT_EQ(header[1], 2.0);
  EXPECT_EQ(header[2], 1.5);
  EXPECT_EQ(header[3], 2.5);
  double first[4];
  std::memcpy(first, bytes.data() + 32 + 16, sizeof first);  // (0,1) then (1,0)
  EXPECT_EQ(first[0], 0.0);
  EXPECT_EQ(first[1], -0.5);
  EXPECT_EQ(first[2], 1.0);
  const Grid2D back = Grid2D::read(ss);
  EXPECT_EQ(back.n1(), 4u);
  EXPECT_EQ(back.span2(), 2.5);
  EXPECT_EQ(max_diff(back, g), 0.0);
  std::stringstream truncated(bytes.substr(0, 40));
  EXPECT_THROW(Grid2D::read(truncated), Error);
}
