#include "ghost/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ghost/errors.hpp"

namespace ghost {
namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

constexpr double kGramTolerance = 1e-12;

}  // namespace

double effective_diffusion(double lambda, double L) {
  require(positive_finite(lambda), ErrorCode::InvalidParameter, "lambda must be > 0");
  require(std::isfinite(L) && L >= 0.0, ErrorCode::InvalidParameter, "L must be >= 0");
  return lambda * L / std::numbers::pi;
}

SourceParams SourceParams::create(double sigma, double omega) {
  require(positive_finite(sigma), ErrorCode::InvalidParameter, "sigma must be finite and > 0");
  require(positive_finite(omega), ErrorCode::InvalidParameter, "omega must be finite and > 0");
  return SourceParams(sigma, omega);
}

Geometry Geometry::create(double z0, double epsilon, double lambda, double L1, double L2) {
  require(positive_finite(z0), ErrorCode::InvalidParameter, "z0 must be finite and > 0");
  require(positive_finite(epsilon), ErrorCode::InvalidParameter,
          "epsilon must be finite and > 0");
  require(positive_finite(lambda), ErrorCode::InvalidParameter, "lambda must be finite and > 0");
  require(std::isfinite(L1) && L1 >= 0.0, ErrorCode::InvalidParameter, "L1 must be >= 0");
  require(std::isfinite(L2) && L2 >= 0.0, ErrorCode::InvalidParameter, "L2 must be >= 0");
  return Geometry(z0, epsilon, lambda, L1, L2);
}

CorrelationRegime correlation_regime(const SourceParams& source, const Geometry& geom) {
  const double tau2 = geom.lambda() * geom.L2() / std::numbers::pi;
  return CorrelationRegime{
      .omega_over_epsilon = source.omega() / geom.epsilon(),
      .omega_sigma = source.omega() * source.sigma(),
      .aperture_ratio = tau2 / geom.epsilon() / source.omega(),
  };
}

ComplexWidth ComplexWidth::create(double re, double im) {
  require(std::isfinite(re) && std::isfinite(im), ErrorCode::InvalidParameter,
          "complex width must be finite");
  require(re > 0.0, ErrorCode::InvalidParameter,
          "complex width needs a positive real part (unnormalisable Gaussian otherwise)");
  return ComplexWidth{re, im};
}

PathDetector validate_gram(const Gram3& gram) {
  for (const auto& row : gram)
    for (const auto& g : row)
      require(std::isfinite(g.real()) && std::isfinite(g.imag()), ErrorCode::InvalidParameter,
              "Gram entries must be finite");

  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (std::abs(gram[i][j] - std::conj(gram[j][i])) > kGramTolerance) {
        std::ostringstream os;
        os << "G[" << i << "][" << j << "] != conj(G[" << j << "][" << i << "])";
        throw Error(ErrorCode::NonHermitian, os.str());
      }
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (std::abs(gram[i][i] - 1.0) > kGramTolerance) {
      std::ostringstream os;
      os << "G[" << i << "][" << i << "] = " << gram[i][i] << ", detector states must have unit norm";
      throw Error(ErrorCode::NotNormalized, os.str());
    }
  }

  Eigen::Matrix3cd m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = gram[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  const double largest = ev.maxCoeff();
  if (ev.minCoeff() < -kGramTolerance * std::max(largest, 1.0)) {
    std::ostringstream os;
    os << "smallest eigenvalue " << ev.minCoeff() << " < 0";
    throw Error(ErrorCode::NotPositiveSemidefinite, os.str());
  }

  Gram3 clean = gram;
  for (std::size_t i = 0; i < 3; ++i) clean[i][i] = 1.0;
  return PathDetector(clean);
}

PathDetector PathDetector::orthogonal() { return from_overlaps(0.0, 0.0, 0.0); }

PathDetector PathDetector::indistinguishable() { return from_overlaps(1.0, 1.0, 1.0); }

PathDetector PathDetector::from_overlaps(double g12, double g13, double g23) {
  Gram3 g{};
  g[0] = {1.0, g12, g13};
  g[1] = {g12, 1.0, g23};
  g[2] = {g13, g23, 1.0};
  return validate_gram(g);
}

double PathDetector::overlap_sum() const noexcept {
  return std::abs(gram_[0][1]) + std::abs(gram_[0][2]) + std::abs(gram_[1][2]);
}

std::vector<double> uniform_samples(double lo, double hi, std::size_t n) {
  require(n >= 2, ErrorCode::InvalidParameter, "need at least two samples");
  require(std::isfinite(lo) && std::isfinite(hi) && hi > lo, ErrorCode::InvalidParameter,
          "sample range must satisfy lo < hi");
  std::vector<double> z(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) z[i] = lo + step * static_cast<double>(i);
  return z;
}

CoincidencePattern CoincidencePattern::create(std::vector<double> z2, std::vector<double> density,
                                              double z1_fixed,
                                              std::optional<PatternProvenance> provenance) {
  require(z2.size() == density.size(), ErrorCode::InvalidParameter,
          "z2 samples and density must have the same length");
  require(z2.size() >= 2, ErrorCode::InvalidParameter, "pattern needs at least two samples");
  const double step = z2[1] - z2[0];
  require(step > 0.0, ErrorCode::InvalidParameter, "z2 samples must be strictly increasing");
  const double scale = std::max(std::abs(z2.front()), std::abs(z2.back()));
  for (std::size_t i = 1; i < z2.size(); ++i) {
    const double d = z2[i] - z2[i - 1];
    require(d > 0.0, ErrorCode::InvalidParameter, "z2 samples must be strictly increasing");
    require(std::abs(d - step) <= 1e-9 * step + 4e-16 * scale, ErrorCode::InvalidParameter,
            "z2 samples must be uniformly spaced");
  }

  double peak = 0.0;
  for (double v : density) {
    require(std::isfinite(v), ErrorCode::InvalidParameter, "density must be finite");
    peak = std::max(peak, v);
  }
  // Round-off below a closed-form minimum may dip a hair under zero.
  for (double& v : density) {
    if (v < 0.0) {
      require(v >= -1e-12 * peak, ErrorCode::InvalidParameter, "density must be non-negative");
      v = 0.0;
    }
  }

  CoincidencePattern p;
  p.z2_ = std::move(z2);
  p.density_ = std::move(density);
  p.z1_fixed_ = z1_fixed;
  p.provenance_ = std::move(provenance);
  return p;
}

double CoincidencePattern::peak() const noexcept {
  double m = 0.0;
  for (double v : density_) m = std::max(m, v);
  return m;
}

CoincidencePattern CoincidencePattern::normalized_to_peak() const {
  const double m = peak();
  require(m > 0.0, ErrorCode::InvalidParameter, "cannot normalise an all-zero pattern");
  CoincidencePattern out = *this;
  for (double& v : out.density_) v /= m;
  return out;
}

DualityReport DualityReport::create(double visibility, double distinguishability,
                                    DualityRelation relation) {
  constexpr double slack = 1e-12;
  require(visibility >= -slack && visibility <= 1.0 + slack, ErrorCode::InvalidParameter,
          "visibility must lie in [0, 1]");
  require(distinguishability >= -slack && distinguishability <= 1.0 + slack,
          ErrorCode::InvalidParameter, "distinguishability must lie in [0, 1]");
  const double v = std::clamp(visibility, 0.0, 1.0);
  const double d = std::clamp(distinguishability, 0.0, 1.0);
  const double lhs = relation == DualityRelation::three_slit ? v + 2.0 * d / (3.0 - d) : v + d;
  return DualityReport{v, d, lhs, 1.0 - lhs, relation};
}

}  // namespace ghost
