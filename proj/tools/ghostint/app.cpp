#include "app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "config.hpp"
#include "ghost/analytic.hpp"
#include "ghost/duality.hpp"
#include "ghost/errors.hpp"
#include "ghost/oracle.hpp"
#include "ghost/pattern_analysis.hpp"

namespace ghostint {

namespace {

namespace fs = std::filesystem;
using ghost::Error;
using ghost::ErrorCode;

constexpr double kAnalyticSlack = 1e-9;
constexpr double kMeasuredSlack = 0.02;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* name(ghost::PatternSource s) {
  switch (s) {
    case ghost::PatternSource::analytic: return "analytic";
    case ghost::PatternSource::sampled: return "sampled";
    case ghost::PatternSource::oracle: return "oracle";
  }
  return "?";
}

const char* name(ghost::OracleStrategy s) {
  switch (s) {
    case ghost::OracleStrategy::automatic: return "auto";
    case ghost::OracleStrategy::full_grid: return "full_grid";
    case ghost::OracleStrategy::slit_adjoint: return "slit_adjoint";
  }
  return "?";
}

const char* name(RunMode m) {
  switch (m) {
    case RunMode::analytic: return "analytic";
    case RunMode::oracle: return "oracle";
    case RunMode::both: return "both";
  }
  return "?";
}

void warn(const ExperimentConfig& c, std::ostream& err) {
  if (c.geometry.slits_overlap()) {
    err << "warning: epsilon >= z0, neighbouring slit modes overlap\n";
  }
  const ghost::CorrelationRegime r = ghost::correlation_regime(c.source, c.geometry);
  if (!r.good()) {
    err << "warning: weak correlation (Omega/epsilon = " << r.omega_over_epsilon
        << ", Omega*sigma = " << r.omega_sigma << "); closed forms are approximate\n";
  }
  if (r.aperture_ratio > 0.1) {
    err << "warning: source aperture ratio " << r.aperture_ratio
        << " > 0.1; finite Omega clips the slit modes and the approximate closed forms degrade\n";
  }
}

ghost::SlitSet slits_of(const ExperimentConfig& c) {
  return c.run.two_slit ? ghost::SlitSet::outer_pair : ghost::SlitSet::three;
}

double window_of(const ExperimentConfig& c) {
  return c.run.z2_window > 0.0 ? c.run.z2_window : 3.0 * ghost::young_widths(c.geometry).w_ab;
}

std::vector<double> unit_peak(std::vector<double> d) {
  double peak = 0.0;
  for (double v : d) peak = std::max(peak, v);
  if (!(peak > 0.0)) throw Error(ErrorCode::NoExtremaFound, "pattern is identically zero");
  for (double& v : d) v /= peak;
  return d;
}

std::vector<double> analytic_density(const ExperimentConfig& c, std::span<const double> z) {
  const auto model = c.run.exact_gamma ? ghost::GammaModel::exact : ghost::GammaModel::approximate;
  const auto packets = ghost::conditional_packets(c.source, c.geometry, model);
  const auto state =
      ghost::post_slit_state(c.source, c.geometry, packets, {slits_of(c), ghost::Normalization::printed, c.detector});
  std::vector<double> d;
  if (state.closed_form_regime()) {
    const auto p = c.detector ? ghost::detector_pattern(state, z,
                                                        c.run.neglect_beta
                                                            ? ghost::PhaseModel::neglect_beta
                                                            : ghost::PhaseModel::retain_beta)
                              : ghost::ghost_pattern(state, z, c.run.neglect_beta);
    d.assign(p.density().begin(), p.density().end());
  } else {
    for (double x : z) d.push_back(state.density(0.0, x));
  }
  return unit_peak(std::move(d));
}

ghost::OracleOptions oracle_options(const ExperimentConfig& c) {
  ghost::OracleOptions o;
  o.mode = c.run.slit_mode;
  o.slits = slits_of(c);
  o.strategy = c.run.oracle_strategy;
  o.grid = c.run.grid;
  o.z2_window = window_of(c);
  o.keep_grid = c.run.dump_grid;
  return o;
}

void describe(const ExperimentConfig& c, std::ostream& out) {
  const auto w = ghost::young_widths(c.geometry);
  const auto r = ghost::correlation_regime(c.source, c.geometry);
  out << "D_m=" << num(c.geometry.D()) << "\n"
      << "expected_w_ab_m=" << num(w.w_ab) << "\n"
      << "expected_w_ac_m=" << num(w.w_ac) << "\n"
      << "omega_over_epsilon=" << num(r.omega_over_epsilon) << "\n"
      << "omega_sigma=" << num(r.omega_sigma) << "\n"
      << "aperture_ratio=" << num(r.aperture_ratio) << "\n";
  if (c.detector) {
    out << "distinguishability=" << num(ghost::distinguishability(*c.detector)) << "\n"
        << "visibility_bound=" << num(ghost::visibility_bound(*c.detector)) << "\n";
  }
}

void fringe_report(const std::string& prefix, std::span<const double> z, std::span<const double> d,
                   std::ostream& rep) {
  try {
    const auto pattern = ghost::CoincidencePattern::create({z.begin(), z.end()}, {d.begin(), d.end()});
    const ghost::FringeReport f = ghost::fringe_widths(pattern);
    rep << prefix << "primary_width_m=" << num(f.primary_width) << "\n";
    rep << prefix << "secondary_width_m="
        << (f.secondary_width ? num(*f.secondary_width) : std::string("none")) << "\n";
    rep << prefix << "visibility=" << num(f.visibility) << "\n";
    rep << prefix << "principal_peaks=" << f.peak_positions.size() << "\n";
  } catch (const Error& e) {
    if (!ghost::is_numerical_guard(e.code()) && e.code() != ErrorCode::TooFewSamples) throw;
    rep << prefix << "fringe_analysis=unavailable (" << e.what() << ")\n";
  }
}

int cmd_ghost(const ExperimentConfig& c, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  const double win = window_of(c);
  std::vector<double> z, analytic, oracle;
  std::optional<ghost::OracleResult> res;
  if (c.run.mode != RunMode::analytic) {
    res = ghost::oracle_coincidence(c.source, c.geometry, oracle_options(c));
    const auto p = c.detector ? ghost::detector_density(*res, *c.detector) : res->pattern;
    z.assign(p.z2().begin(), p.z2().end());
    oracle.assign(p.density().begin(), p.density().end());
  } else {
    z = ghost::uniform_samples(-win, win, c.run.samples);
  }
  if (c.run.mode != RunMode::oracle) analytic = analytic_density(c, z);

  fs::create_directories(out_dir);
  {
    std::ofstream csv(out_dir / "pattern.csv");
    csv << "z2_m";
    if (!analytic.empty()) csv << ",density_analytic";
    if (!oracle.empty()) csv << ",density_oracle";
    csv << "\n";
    for (std::size_t i = 0; i < z.size(); ++i) {
      csv << num(z[i]);
      if (!analytic.empty()) csv << "," << num(analytic[i]);
      if (!oracle.empty()) csv << "," << num(oracle[i]);
      csv << "\n";
    }
    if (!csv) throw std::runtime_error("failed writing pattern.csv");
  }

  std::ofstream rep(out_dir / "report.txt");
  rep << "mode=" << name(c.run.mode) << "\n"
      << "slits=" << (c.run.two_slit ? "outer_pair" : "three") << "\n"
      << "samples=" << z.size() << "\n"
      << "z2_window_m=" << num(win) << "\n";
  describe(c, rep);
  fringe_report("", z, analytic.empty() ? oracle : analytic, rep);
  if (res) {
    rep << "oracle_strategy=" << name(res->strategy) << "\n";
    if (std::isfinite(res->transmission)) rep << "oracle_transmission=" << num(res->transmission) << "\n";
  }
  if (c.run.mode == RunMode::both) {
    fringe_report("oracle_", z, oracle, rep);
    const double lim = 2.0 * ghost::young_widths(c.geometry).w_ab;
    double numr = 0.0, den = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (std::abs(z[i]) > lim) continue;
      numr += (analytic[i] - oracle[i]) * (analytic[i] - oracle[i]);
      den += analytic[i] * analytic[i];
    }
    const double rms = den > 0.0 ? std::sqrt(numr / den) : std::numeric_limits<double>::quiet_NaN();
    rep << "rms_deviation=" << num(rms) << "\n";
    out << "rms_deviation=" << num(rms) << "\n";
  }
  if (!rep) throw std::runtime_error("failed writing report.txt");

  if (c.run.dump_grid) {
    if (res && res->grid) {
      std::ofstream bin(out_dir / "grid.bin", std::ios::binary);
      res->grid->write(bin);
    } else {
      err << "warning: run.dump_grid needs the full_grid oracle; nothing dumped\n";
    }
  }
  out << "wrote " << (out_dir / "pattern.csv").string() << " (" << z.size() << " samples)\n";
  return kOk;
}

nlohmann::json record(const ghost::DualitySample& s) {
  nlohmann::json j;
  j["D"] = s.report.distinguishability;
  j["V2"] = s.report.visibility;
  j["bound_lhs"] = s.report.bound_lhs;
  j["margin"] = s.report.margin;
  j["pattern_source"] = name(s.source);
  j["relation"] = s.report.relation == ghost::DualityRelation::three_slit ? "three_slit" : "two_slit";
  j["g12"] = s.detector.overlap(0, 1);
  j["g13"] = s.detector.overlap(0, 2);
  j["g23"] = s.detector.overlap(1, 2);
  return j;
}

int cmd_duality(const ExperimentConfig& c, const fs::path& out_dir, std::ostream& out) {
  ghost::DualityOptions opt;
  opt.source = c.run.pattern_source;
  opt.samples = c.run.samples;
  opt.window = c.run.z2_window;
  opt.oracle = oracle_options(c);
  opt.oracle.z2_window = 0.0;
  opt.oracle.keep_grid = false;

  std::vector<ghost::PathDetector> detectors;
  if (c.run.sweep_count > 0) {
    detectors = ghost::sample_gram(c.run.seed, c.run.sweep_count);
  } else if (c.detector) {
    detectors.push_back(*c.detector);
  } else {
    throw Error(ErrorCode::ConfigError, "duality needs detector.* overlaps or run.sweep_count > 0");
  }

  const double slack = opt.source == ghost::PatternSource::analytic ? kAnalyticSlack : kMeasuredSlack;
  std::size_t violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  fs::create_directories(out_dir);
  std::ofstream jl(out_dir / "duality.jsonl");
  for (const auto& det : detectors) {
    const ghost::DualitySample s =
        c.run.two_slit ? ghost::two_slit_check(det.overlap(0, 2), c.source, c.geometry, opt)
                       : ghost::check_duality(det, c.source, c.geometry, opt);
    if (s.report.margin < -slack) ++violations;
    worst = std::min(worst, s.report.margin);
    jl << record(s).dump() << "\n";
  }
  if (!jl) throw std::runtime_error("failed writing duality.jsonl");
  out << "records=" << detectors.size() << "\n"
      << "violations=" << violations << "\n"
      << "worst_margin=" << num(worst) << "\n"
      << "slack=" << num(slack) << "\n";
  return violations == 0 ? kOk : kDualityViolation;
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidParameter:
    case ErrorCode::NonHermitian:
    case ErrorCode::NotNormalized:
    case ErrorCode::NotPositiveSemidefinite:
      return kConfigError;
    default:
      return ghost::is_numerical_guard(e.code()) ? kNumericalGuard : kFailure;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Three-slit ghost interference simulator"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = ".";
  std::string mode;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config file")->required();
  };
  auto* ghost_cmd = app.add_subcommand("ghost", "compute the coincidence pattern at D1 = 0");
  auto* duality_cmd = app.add_subcommand("duality", "check the visibility/distinguishability bound");
  auto* validate_cmd = app.add_subcommand("validate", "check a config and print derived scales");
  for (auto* sub : {ghost_cmd, duality_cmd, validate_cmd}) add_common(sub);
  for (auto* sub : {ghost_cmd, duality_cmd}) {
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override run.seed");
  }
  ghost_cmd->add_option("--mode", mode, "analytic, oracle or both");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (!mode.empty()) cfg.run.mode = parse_mode(mode);
    if (seed) cfg.run.seed = *seed;
    warn(cfg, err);
    if (*validate_cmd) {
      out << "config ok\n";
      describe(cfg, out);
      return kOk;
    }
    if (*ghost_cmd) return cmd_ghost(cfg, out_dir, out, err);
    return cmd_duality(cfg, out_dir, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace ghostint
