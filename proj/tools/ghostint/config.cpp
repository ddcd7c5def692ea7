#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ghost/errors.hpp"

namespace ghostint {

namespace {

using ghost::Error;
using ghost::ErrorCode;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "source.sigma_per_m", "source.omega_m",      "geometry.z0_m",
      "geometry.epsilon_m", "geometry.lambda_m",   "geometry.L1_m",
      "geometry.L2_m",      "detector.g12",        "detector.g13",
      "detector.g23",       "detector.phase12_rad", "detector.phase13_rad",
      "detector.phase23_rad", "run.mode",          "run.samples",
      "run.z2_window_m",    "run.neglect_beta",    "run.exact_gamma",
      "run.seed",           "run.sweep_count",     "run.two_slit",
      "run.pattern_source", "run.oracle_strategy", "run.slit_mode",
      "run.grid.n1",        "run.grid.n2",         "run.grid.span1_m",
      "run.grid.span2_m",   "run.dump_grid"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Table {
 public:
  explicit Table(std::map<std::string, std::string> v) : values_(std::move(v)) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  double number(const std::string& key) const {
    const std::string& text = require(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::ConfigError, key + ": '" + text + "' is not a finite number");
    }
    return v;
  }
  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string& text = require(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw Error(ErrorCode::ConfigError, key + ": '" + text + "' is not a non-negative integer");
    }
    return v;
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& t = require(key);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw Error(ErrorCode::ConfigError, key + ": expected true or false, got '" + t + "'");
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? require(key) : fallback;
  }

  const std::string& require(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw Error(ErrorCode::ConfigError, "missing required key " + key);
    return it->second;
  }

 private:
  std::map<std::string, std::string> values_;
};

template <class T>
T choose(const std::string& key, const std::string& value,
         std::initializer_list<std::pair<const char*, T>> options) {
  std::string names;
  for (const auto& [name, v] : options) {
    if (value == name) return v;
    names += names.empty() ? name : std::string(", ") + name;
  }
  throw Error(ErrorCode::ConfigError, key + ": '" + value + "' is not one of " + names);
}

// Constructor failures are reported as configuration errors naming the section.
template <class F>
auto checked(const std::string& section, F&& make) {
  try {
    return make();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    throw Error(ErrorCode::ConfigError, section + ": " + e.what());
  }
}

}  // namespace

RunMode parse_mode(const std::string& text) {
  return choose<RunMode>("run.mode", text,
                         {{"analytic", RunMode::analytic},
                          {"oracle", RunMode::oracle},
                          {"both", RunMode::both}});
}

ExperimentConfig parse_config(std::istream& in) {
  std::map<std::string, std::string> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key)) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": unknown key " + key);
    }
    if (value.empty()) throw Error(ErrorCode::ConfigError, key + ": empty value");
    if (!values.emplace(key, value).second) {
      throw Error(ErrorCode::ConfigError, "duplicate key " + key);
    }
  }
  const Table t(std::move(values));

  const auto source = checked("source", [&] {
    return ghost::SourceParams::create(t.number("source.sigma_per_m"), t.number("source.omega_m"));
  });
  const auto geometry = checked("geometry", [&] {
    return ghost::Geometry::create(t.number("geometry.z0_m"), t.number("geometry.epsilon_m"),
                                   t.number("geometry.lambda_m"), t.number("geometry.L1_m"),
                                   t.number("geometry.L2_m"));
  });

  std::optional<ghost::PathDetector> detector;
  const bool any_detector = t.has("detector.g12") || t.has("detector.g13") || t.has("detector.g23");
  if (any_detector) {
    detector = checked("detector", [&] {
      ghost::Gram3 g{};
      const auto entry = [&](const char* mag, const char* phase) {
        return std::polar(t.number(mag), t.number(phase, 0.0));
      };
      const ghost::cplx g12 = entry("detector.g12", "detector.phase12_rad");
      const ghost::cplx g13 = entry("detector.g13", "detector.phase13_rad");
      const ghost::cplx g23 = entry("detector.g23", "detector.phase23_rad");
      g[0] = {1.0, g12, g13};
      g[1] = {std::conj(g12), 1.0, g23};
      g[2] = {std::conj(g13), std::conj(g23), 1.0};
      return ghost::validate_gram(g);
    });
  } else if (t.has("detector.phase12_rad") || t.has("detector.phase13_rad") ||
             t.has("detector.phase23_rad")) {
    throw Error(ErrorCode::ConfigError, "detector phases given without overlaps");
  }

  RunConfig run;
  run.mode = parse_mode(t.text("run.mode", "analytic"));
  run.samples = t.count("run.samples", run.samples);
  if (run.samples < 16) throw Error(ErrorCode::ConfigError, "run.samples must be at least 16");
  run.z2_window = t.number("run.z2_window_m", 0.0);
  if (run.z2_window < 0.0) throw Error(ErrorCode::ConfigError, "run.z2_window_m must be >= 0");
  run.neglect_beta = t.flag("run.neglect_beta", run.neglect_beta);
  run.exact_gamma = t.flag("run.exact_gamma", run.exact_gamma);
  run.seed = t.count("run.seed", run.seed);
  run.sweep_count = t.count("run.sweep_count", 0);
  run.two_slit = t.flag("run.two_slit", false);
  run.pattern_source = choose<ghost::PatternSource>(
      "run.pattern_source", t.text("run.pattern_source", "analytic"),
      {{"analytic", ghost::PatternSource::analytic},
       {"sampled", ghost::PatternSource::sampled},
       {"oracle", ghost::PatternSource::oracle}});
  run.oracle_strategy = choose<ghost::OracleStrategy>(
      "run.oracle_strategy", t.text("run.oracle_strategy", "auto"),
      {{"auto", ghost::OracleStrategy::automatic},
       {"full_grid", ghost::OracleStrategy::full_grid},
       {"slit_adjoint", ghost::OracleStrategy::slit_adjoint}});
  run.slit_mode = choose<ghost::SlitMode>("run.slit_mode", t.text("run.slit_mode", "gaussian"),
                                          {{"gaussian", ghost::SlitMode::gaussian},
                                           {"hard", ghost::SlitMode::hard}});
  const bool any_grid = t.has("run.grid.n1") || t.has("run.grid.n2") ||
                        t.has("run.grid.span1_m") || t.has("run.grid.span2_m");
  if (any_grid) {
    ghost::GridSpec g;
    g.n1 = t.count("run.grid.n1", 1024);
    g.n2 = t.count("run.grid.n2", 1024);
    g.span1 = t.number("run.grid.span1_m");
    g.span2 = t.number("run.grid.span2_m");
    if (g.n1 < 16 || g.n2 < 16 || g.n1 % 2 || g.n2 % 2 || !(g.span1 > 0) || !(g.span2 > 0)) {
      throw Error(ErrorCode::ConfigError, "run.grid: counts must be even and >= 16, spans positive");
    }
    run.grid = g;
  }
  run.dump_grid = t.flag("run.dump_grid", false);
  if (run.two_slit && detector &&
      (detector->overlap(0, 1) != 0.0 || detector->overlap(1, 2) != 0.0)) {
    throw Error(ErrorCode::ConfigError,
                "run.two_slit: only detector.g13 (outer slits) may be non-zero");
  }
  return {source, geometry, detector, run};
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file " + path);
  return parse_config(in);
}

}  // namespace ghostint
