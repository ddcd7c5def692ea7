#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "ghost/duality.hpp"
#include "ghost/oracle.hpp"
#include "ghost/types.hpp"

namespace ghostint {

enum class RunMode { analytic, oracle, both };

struct RunConfig {
  RunMode mode = RunMode::analytic;
  std::size_t samples = 4001;
  double z2_window = 0.0;  ///< 0: three AB fringe widths
  bool neglect_beta = true;
  bool exact_gamma = false;
  std::uint64_t seed = 1;
  std::size_t sweep_count = 0;
  bool two_slit = false;
  ghost::PatternSource pattern_source = ghost::PatternSource::analytic;
  ghost::OracleStrategy oracle_strategy = ghost::OracleStrategy::automatic;
  ghost::SlitMode slit_mode = ghost::SlitMode::gaussian;
  std::optional<ghost::GridSpec> grid;
  bool dump_grid = false;
};

struct ExperimentConfig {
  ghost::SourceParams source;
  ghost::Geometry geometry;
  std::optional<ghost::PathDetector> detector;
  RunConfig run;
};

/// Flat "section.key = value" lines, '#' starts a comment. Unknown or
/// duplicate keys, malformed numbers and violated invariants raise
/// ghost::Error with ConfigError, naming the key.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

RunMode parse_mode(const std::string& text);

}  // namespace ghostint
