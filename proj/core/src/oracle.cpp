#include "ghost/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "fft.hpp"
#include "ghost/errors.hpp"

namespace ghost {

namespace {

constexpr double kPi = std::numbers::pi;

std::array<double, 3> slit_centres(const Geometry& geom) { return {geom.z0(), 0.0, -geom.z0()}; }

bool slit_open(SlitSet slits, std::size_t k) { return !(slits == SlitSet::outer_pair && k == 1); }

void check_alias(double lambda, double L, std::size_t n, double dz) {
  const double ratio = lambda * std::abs(L) / (static_cast<double>(n) * dz * dz);
  if (ratio > 1.0) {
    throw Error(ErrorCode::AliasingRisk,
                "chirp phase step at the band edge is " + std::to_string(ratio) +
                    " pi; enlarge the span or the sample count");
  }
}

std::vector<double> transfer_phase_factors(std::size_t n, double dz, double lambda, double L) {
  std::vector<double> phase(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double k = detail::bin_wavenumber(m, n, dz);
    phase[m] = -lambda * L * k * k / (4.0 * kPi);
  }
  return phase;
}

std::size_t next_pow2(double x) {
  if (!(x < 4.6e18)) throw Error(ErrorCode::GridTooLarge, "required sample count overflows");
  return std::bit_ceil(static_cast<std::size_t>(std::max(2.0, std::ceil(x))));
}

// Intensity standard deviation of one photon's marginal after a free path L.
double marginal_std(const SourceParams& source, double lambda, double L) {
  const Uncertainties u = uncertainties(source);
  const double sz = 0.5 * u.delta_z;
  const double sk = 2.0 * u.delta_k;
  const double drift = lambda * L / (2.0 * kPi);
  return std::sqrt(sz * sz + drift * drift * sk * sk);
}

// Band-limited interpolation by zero padding the spectrum: n samples -> n * m.
std::vector<cplx> refine_line(std::vector<cplx> coarse, std::size_t m) {
  const std::size_t n = coarse.size();
  if (m == 1) return coarse;
  detail::dft(coarse, -1);
  std::vector<cplx> fine(n * m, cplx{});
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < half; ++k) fine[k] = coarse[k];
  for (std::size_t k = half + 1; k < n; ++k) fine[n * m - n + k] = coarse[k];
  fine[half] = 0.5 * coarse[half];
  fine[n * m - half] = 0.5 * coarse[half];
  detail::dft(fine, +1);
  const double s = 1.0 / static_cast<double>(n);
  for (cplx& v : fine) v *= s;
  return fine;
}

std::vector<std::size_t> window_indices(std::size_t n, double z_start, double dz, double window) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < n; ++j) {
    const double z = z_start + static_cast<double>(j) * dz;
    if (window <= 0.0 || std::abs(z) <= window * (1.0 + 1e-12)) idx.push_back(j);
  }
  if (idx.size() < 2) throw Error(ErrorCode::SpanTooSmall, "z2 window keeps fewer than 2 samples");
  return idx;
}

CoincidencePattern unit_peak_pattern(std::vector<double> z, std::vector<double> d,
                                     const SourceParams& source, const Geometry& geom,
                                     std::optional<PathDetector> det = std::nullopt) {
  const double peak = *std::max_element(d.begin(), d.end());
  if (!(peak > 0.0)) throw Error(ErrorCode::NoExtremaFound, "oracle pattern is identically zero");
  for (double& v : d) v /= peak;
  return CoincidencePattern::create(std::move(z), std::move(d), 0.0,
                                    PatternProvenance{source, geom, std::move(det)});
}

OracleResult run_full_grid(const SourceParams& source, const Geometry& geom,
                           const OracleOptions& opt, const GridSpec& spec) {
  if (spec.n1 * spec.n2 > opt.max_cells) {
    throw Error(ErrorCode::GridTooLarge, "grid exceeds the configured cell budget");
  }
  if (spec.n1 % 2 != 0) throw Error(ErrorCode::InvalidParameter, "n1 must be even to sample z1 = 0");
  const double lambda = geom.lambda();

  Grid2D g = discretize_state(source, spec);
  g = propagate(g, Photon::one, lambda, geom.L2());
  g = propagate(g, Photon::two, lambda, geom.L2());

  std::array<std::vector<cplx>, 3> branch_full;
  const std::size_t i0 = spec.n1 / 2;
  const auto centres = slit_centres(geom);
  SlitProjection proj = project_slits(g, geom, opt.mode, opt.slits);
  const double renorm = 1.0 / std::sqrt(g.norm() * proj.transmission);

  if (opt.mode == SlitMode::gaussian) {
    // each branch is separable, phi_j(z1) (x) <phi_j|Psi>(z2)
    const auto cond = conditional_amplitudes(g, geom);
    for (std::size_t k = 0; k < 3; ++k) {
      branch_full[k].assign(spec.n2, cplx{});
      if (!slit_open(opt.slits, k)) continue;
      std::vector<cplx> phi(spec.n1);
      for (std::size_t i = 0; i < spec.n1; ++i) phi[i] = slit_mode(g.z1(i), centres[k], geom.epsilon());
      phi = propagate_line(std::move(phi), g.dz1(), lambda, geom.L1());
      std::vector<cplx> psi = propagate_line(cond[k], g.dz2(), lambda, geom.L1());
      for (std::size_t j = 0; j < spec.n2; ++j) branch_full[k][j] = renorm * phi[i0] * psi[j];
    }
  } else {
    for (std::size_t k = 0; k < 3; ++k) {
      branch_full[k].assign(spec.n2, cplx{});
      if (!slit_open(opt.slits, k)) continue;
      Grid2D part = g;
      for (std::size_t i = 0; i < spec.n1; ++i) {
        const double m = slit_mask(g.z1(i), centres[k], geom.epsilon());
        for (std::size_t j = 0; j < spec.n2; ++j) part(i, j) *= m * renorm;
      }
      part = propagate(part, Photon::one, lambda, geom.L1());
      part = propagate(part, Photon::two, lambda, geom.L1());
      for (std::size_t j = 0; j < spec.n2; ++j) branch_full[k][j] = part(i0, j);
    }
  }

  Grid2D fin = propagate(proj.grid, Photon::one, lambda, geom.L1());
  fin = propagate(fin, Photon::two, lambda, geom.L1());

  const auto idx = window_indices(spec.n2, -spec.span2, fin.dz2(), opt.z2_window);
  std::vector<double> z, d;
  std::array<std::vector<cplx>, 3> branches;
  for (std::size_t j : idx) {
    z.push_back(fin.z2(j));
    d.push_back(std::norm(fin(i0, j)));
    for (std::size_t k = 0; k < 3; ++k) branches[k].push_back(branch_full[k][j]);
  }
  OracleResult out{unit_peak_pattern(std::move(z), std::move(d), source, geom),
                   std::move(branches), OracleStrategy::full_grid, proj.transmission, std::nullopt};
  if (opt.keep_grid) out.grid = std::move(fin);
  return out;
}

OracleResult run_slit_adjoint(const SourceParams& source, const Geometry& geom,
                              const OracleOptions& opt, const LineSpec& line) {
  const std::size_t n = line.n;
  const std::size_t m = std::max<std::size_t>(1, line.refine);
  if (n < 16 || n % 2 != 0) throw Error(ErrorCode::InvalidParameter, "line needs an even count >= 16");
  if (n * m > (std::size_t{1} << 25)) {
    throw Error(ErrorCode::GridTooLarge, "refined line exceeds 2^25 samples");
  }
  const double lambda = geom.lambda();
  const double dz = 2.0 * line.span / static_cast<double>(n);
  const double eps = geom.epsilon();
  if (opt.mode == SlitMode::gaussian && dz > eps / 4.0) {
    throw Error(ErrorCode::UnderResolved, "line spacing must be at most epsilon / 4");
  }
  const double z_start = -line.span;
  const std::size_t i0 = n / 2;
  const auto centres = slit_centres(geom);

  // hard-mode readout: row of the discrete L1 propagator ending at z1 = 0
  std::vector<cplx> kernel;
  if (opt.mode == SlitMode::hard) {
    kernel.assign(n, cplx{});
    kernel[i0] = 1.0;
    kernel = propagate_line(std::move(kernel), dz, lambda, geom.L1());
  }

  const double sigma = source.sigma();
  const double dzf = dz / static_cast<double>(m);
  const auto band = static_cast<std::ptrdiff_t>(std::ceil(6.5 / (sigma * dzf)));
  const auto nf = static_cast<std::ptrdiff_t>(n * m);

  std::array<std::vector<cplx>, 3> full;
  for (std::size_t k = 0; k < 3; ++k) {
    full[k].assign(n, cplx{});
    if (!slit_open(opt.slits, k)) continue;

    std::vector<cplx> r(n);
    if (opt.mode == SlitMode::gaussian) {
      std::vector<cplx> phi(n);
      for (std::size_t i = 0; i < n; ++i) {
        phi[i] = slit_mode(z_start + static_cast<double>(i) * dz, centres[k], eps);
      }
      const cplx f0 = propagate_line(phi, dz, lambda, geom.L1())[i0];
      for (std::size_t i = 0; i < n; ++i) r[i] = std::conj(f0) * phi[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const double mask = slit_mask(z_start + static_cast<double>(i) * dz, centres[k], eps);
        r[i] = std::conj(kernel[i]) * mask / dz;
      }
    }

    const std::vector<cplx> back =
        refine_line(propagate_line(std::move(r), dz, lambda, -geom.L2()), m);

    std::vector<cplx> psi(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double z2 = z_start + static_cast<double>(i) * dz;
      const auto centre = static_cast<std::ptrdiff_t>(i * m);
      const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, centre - band);
      const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(nf - 1, centre + band);
      cplx acc{};
      for (std::ptrdiff_t j = lo; j <= hi; ++j) {
        const double z1 = z_start + static_cast<double>(j) * dzf;
        acc += std::conj(back[static_cast<std::size_t>(j)]) * epr_position_space(source, z1, z2);
      }
      psi[i] = acc * dzf;
    }
    full[k] = propagate_line(std::move(psi), dz, lambda, geom.L1() + geom.L2());
  }

  const auto idx = window_indices(n, z_start, dz, opt.z2_window);
  std::vector<double> z, d;
  std::array<std::vector<cplx>, 3> branches;
  for (std::size_t j : idx) {
    z.push_back(z_start + static_cast<double>(j) * dz);
    d.push_back(std::norm(full[0][j] + full[1][j] + full[2][j]));
    for (std::size_t k = 0; k < 3; ++k) branches[k].push_back(full[k][j]);
  }
  return {unit_peak_pattern(std::move(z), std::move(d), source, geom), std::move(branches),
          OracleStrategy::slit_adjoint, std::numeric_limits<double>::quiet_NaN(), std::nullopt};
}

}  // namespace


Grid2D discretize_state(const SourceParams& source, const GridSpec& spec) {
  const Uncertainties u = uncertainties(source);
  if (spec.span1 < 3.0 * u.delta_z || spec.span2 < 3.0 * u.delta_z) {
    throw Error(ErrorCode::SpanTooSmall, "grid half-spans must cover 3 delta_z");
  }
  Grid2D g(spec);
  for (std::size_t i = 0; i < g.n1(); ++i) {
    const double z1 = g.z1(i);
    for (std::size_t j = 0; j < g.n2(); ++j) g(i, j) = epr_position_space(source, z1, g.z2(j));
  }
  const double norm = g.norm();
  if (!(std::abs(norm - 1.0) < 1e-6)) {
    throw Error(ErrorCode::SpanTooSmall,
                "discrete norm of the source state is " + std::to_string(norm) +
                    "; the grid does not cover or resolve it");
  }
  g.scale(1.0 / std::sqrt(norm));
  return g;
}

Grid2D propagate(const Grid2D& grid, Photon photon, double lambda, double L) {
  if (!(lambda > 0.0) || !std::isfinite(L)) {
    throw Error(ErrorCode::InvalidParameter, "propagation needs lambda > 0 and finite L");
  }
  Grid2D out = grid;
  if (L == 0.0) return out;
  const bool first = photon == Photon::one;
  const std::size_t n = first ? grid.n1() : grid.n2();
  const std::size_t other = first ? grid.n2() : grid.n1();
  const double dz = first ? grid.dz1() : grid.dz2();
  check_alias(lambda, L, n, dz);

  const std::vector<double> phase = transfer_phase_factors(n, dz, lambda, L);
  const double inv_n = 1.0 / static_cast<double>(n);
  cplx* data = out.values().data();
  // photon one: columns (stride n2); photon two: rows
  const std::size_t stride = first ? grid.n2() : 1;
  const std::size_t dist = first ? 1 : grid.n2();
  detail::dft_many(data, n, other, stride, dist, -1);
  for (std::size_t r = 0; r < other; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      data[r * dist + k * stride] *= std::polar(inv_n, phase[k]);
    }
  }
  detail::dft_many(data, n, other, stride, dist, +1);
  return out;
}

std::vector<cplx> propagate_line(std::vector<cplx> line, double dz, double lambda, double L) {
  if (!(lambda > 0.0) || !(dz > 0.0) || !std::isfinite(L)) {
    throw Error(ErrorCode::InvalidParameter, "propagation needs lambda > 0, dz > 0 and finite L");
  }
  if (L == 0.0 || line.empty()) return line;
  const std::size_t n = line.size();
  check_alias(lambda, L, n, dz);
  const std::vector<double> phase = transfer_phase_factors(n, dz, lambda, L);
  detail::dft(line, -1);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) line[k] *= std::polar(inv_n, phase[k]);
  detail::dft(line, +1);
  return line;
}

double slit_mode(double z, double centre, double epsilon) {
  const double d = (z - centre) / epsilon;
  return std::pow(kPi / 2.0, -0.25) / std::sqrt(epsilon) * std::exp(-d * d);
}

double slit_mask(double z, double centre, double epsilon) {
  return std::abs(z - centre) <= epsilon ? 1.0 : 0.0;
}

std::array<std::vector<cplx>, 3> conditional_amplitudes(const Grid2D& grid, const Geometry& geom) {
  const auto centres = slit_centres(geom);
  std::array<std::vector<cplx>, 3> out;
  for (std::size_t k = 0; k < 3; ++k) {
    out[k].assign(grid.n2(), cplx{});
    for (std::size_t i = 0; i < grid.n1(); ++i) {
      const double w = slit_mode(grid.z1(i), centres[k], geom.epsilon()) * grid.dz1();
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < grid.n2(); ++j) out[k][j] += w * grid(i, j);
    }
  }
  return out;
}

SlitProjection project_slits(const Grid2D& grid, const Geometry& geom, SlitMode mode,
                             SlitSet slits) {
  const double eps = geom.epsilon();
  if (mode == SlitMode::gaussian && grid.dz1() > eps / 8.0) {
    throw Error(ErrorCode::UnderResolved, "photon-1 spacing must be at most epsilon / 8");
  }
  if (geom.z0() + 6.0 * eps > grid.span1() - grid.dz1()) {
    throw Error(ErrorCode::SpanTooSmall, "slits do not fit inside the photon-1 span");
  }
  const auto centres = slit_centres(geom);
  const double before = grid.norm();
  Grid2D out(grid.spec());

  if (mode == SlitMode::gaussian) {
    const auto cond = conditional_amplitudes(grid, geom);
    for (std::size_t k = 0; k < 3; ++k) {
      if (!slit_open(slits, k)) continue;
      for (std::size_t i = 0; i < grid.n1(); ++i) {
        const double phi = slit_mode(grid.z1(i), centres[k], eps);
        if (phi == 0.0) continue;
        for (std::size_t j = 0; j < grid.n2(); ++j) out(i, j) += phi * cond[k][j];
      }
    }
  } else {
    for (std::size_t i = 0; i < grid.n1(); ++i) {
      double m = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        if (slit_open(slits, k)) m = std::max(m, slit_mask(grid.z1(i), centres[k], eps));
      }
      if (m == 0.0) continue;
      for (std::size_t j = 0; j < grid.n2(); ++j) out(i, j) = grid(i, j);
    }
  }

  const double after = out.norm();
  if (!(after > 0.0)) throw Error(ErrorCode::SpanTooSmall, "no amplitude passes the slits");
  out.scale(1.0 / std::sqrt(after));
  return {std::move(out), after / before};
}

GridSpec plan_full_grid(const SourceParams& source, const Geometry& geom, std::size_t n) {
  if (n < 16 || n % 2 != 0) throw Error(ErrorCode::InvalidParameter, "n must be even and >= 16");
  const double lambda = geom.lambda();
  const double eps = geom.epsilon();
  const double z0 = geom.z0();
  const Uncertainties u = uncertainties(source);
  const double tau1 = effective_diffusion(lambda, geom.L1());
  const double tauD = effective_diffusion(lambda, geom.D());
  const double gsq = eps * eps + 1.0 / (source.sigma() * source.sigma());
  const double w1 = std::abs(cplx{eps * eps, tau1}) / eps;
  const double wD = std::abs(cplx{gsq, tauD}) / std::sqrt(gsq);

  // before the slits each photon carries its marginal; afterwards only the
  // slit-conditioned packets matter
  const double src = std::max(3.0 * u.delta_z, 5.0 * marginal_std(source, lambda, geom.L2()));
  const double need1 = std::max({src, z0 + 6.0 * eps, z0 + 4.5 * w1});
  const double need2 = std::max(src, z0 + 4.5 * wD);
  const double dz_source = kPi / (6.0 * 2.0 * u.delta_k);
  const double lmax = std::max(geom.L1(), geom.L2());
  const double dz_alias = std::sqrt(lambda * lmax / static_cast<double>(n));

  auto axis = [&](double need, double dz_max) {
    const double dz = std::max(2.0 * need / static_cast<double>(n), dz_alias);
    if (dz > dz_max * (1.0 + 1e-12)) {
      if (2.0 * need / static_cast<double>(n) >= dz_alias) {
        throw Error(ErrorCode::UnderResolved,
                    "n = " + std::to_string(n) + " cannot cover the state at the required spacing");
      }
      throw Error(ErrorCode::AliasingRisk, "no spacing satisfies both resolution and the chirp guard");
    }
    return 0.5 * static_cast<double>(n) * dz;
  };
  return {n, n, axis(need1, std::min(eps / 8.0, dz_source)), axis(need2, dz_source)};
}

LineSpec plan_line(const SourceParams& source, const Geometry& geom) {
  const double lambda = geom.lambda();
  const double eps = geom.epsilon();
  const double tau1 = effective_diffusion(lambda, geom.L1());
  const double tau2 = effective_diffusion(lambda, geom.L2());
  const double tauD = effective_diffusion(lambda, geom.D());
  const double gsq = eps * eps + 1.0 / (source.sigma() * source.sigma());
  const double width = std::max({std::abs(cplx{eps * eps, tau2}) / eps,
                                 std::abs(cplx{eps * eps, tau1}) / eps,
                                 std::abs(cplx{gsq, tauD}) / std::sqrt(gsq)});
  const double need = geom.z0() + 6.0 * width;
  const double dz = eps / 4.0;
  const double lmax = geom.L1() + geom.L2();
  const std::size_t n = next_pow2(std::max(2.0 * need / dz, lambda * lmax / (dz * dz)));
  if (n > (std::size_t{1} << 22)) {
    throw Error(ErrorCode::GridTooLarge, "slit_adjoint line would need " + std::to_string(n) + " samples");
  }
  const auto refine =
      static_cast<std::size_t>(std::max(1.0, std::ceil(3.0 * dz * source.sigma())));
  return {n, 0.5 * static_cast<double>(n) * dz, refine};
}

OracleResult oracle_coincidence(const SourceParams& source, const Geometry& geom,
                                const OracleOptions& options) {
  switch (options.strategy) {
    case OracleStrategy::full_grid:
      return run_full_grid(source, geom, options,
                           options.grid ? *options.grid : plan_full_grid(source, geom));
    case OracleStrategy::slit_adjoint:
      return run_slit_adjoint(source, geom, options,
                              options.line ? *options.line : plan_line(source, geom));
    case OracleStrategy::automatic:
      break;
  }
  if (options.grid) return run_full_grid(source, geom, options, *options.grid);
  std::optional<GridSpec> spec;
  try {
    spec = plan_full_grid(source, geom);
  } catch (const Error& e) {
    if (!is_numerical_guard(e.code())) throw;
  }
  if (spec && spec->n1 * spec->n2 <= options.max_cells) {
    return run_full_grid(source, geom, options, *spec);
  }
  return run_slit_adjoint(source, geom, options,
                          options.line ? *options.line : plan_line(source, geom));
}

CoincidencePattern detector_density(const OracleResult& result, const PathDetector& detector) {
  const auto z2 = result.pattern.z2();
  std::vector<double> d(z2.size());
  for (std::size_t j = 0; j < z2.size(); ++j) {
    double s = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
      s += std::norm(result.branches[a][j]);
      for (std::size_t b = a + 1; b < 3; ++b) {
        s += 2.0 * detector.overlap(a, b) *
             std::real(std::conj(result.branches[a][j]) * result.branches[b][j]);
      }
    }
    d[j] = std::max(s, 0.0);
  }
  const auto& prov = result.pattern.provenance();
  return unit_peak_pattern({z2.begin(), z2.end()}, std::move(d), prov->source, prov->geometry,
                           detector);
}

}  // namespace ghost
