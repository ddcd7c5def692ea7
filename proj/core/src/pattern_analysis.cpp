#include "ghost/pattern_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ghost/errors.hpp"

namespace ghost {

namespace {

constexpr double kFloor = 1e-8;

// Parabola through the extremum and its neighbours for the position; the value
// comes from the quartic through five samples when they exist.
Extremum refine(std::span<const double> z, std::span<const double> y, std::size_t i) {
  const double ym = y[i - 1], y0 = y[i], yp = y[i + 1];
  const double den = ym - 2.0 * y0 + yp;
  double x = den != 0.0 ? 0.5 * (ym - yp) / den : 0.0;
  x = std::clamp(x, -0.5, 0.5);
  double value = y0 - 0.25 * (ym - yp) * x;
  if (i >= 2 && i + 2 < y.size()) {
    const double a = y[i - 2], e = y[i + 2];
    // Lagrange quartic on nodes -2..2, derivatives for a few Newton steps
    const double c1 = (a - 8.0 * ym + 8.0 * yp - e) / 12.0;
    const double c2 = (-a + 16.0 * ym - 30.0 * y0 + 16.0 * yp - e) / 24.0;
    const double c3 = (-a + 2.0 * ym - 2.0 * yp + e) / 12.0;
    const double c4 = (a - 4.0 * ym + 6.0 * y0 - 4.0 * yp + e) / 24.0;
    double t = x;
    for (int it = 0; it < 8; ++it) {
      const double d1 = c1 + 2.0 * c2 * t + 3.0 * c3 * t * t + 4.0 * c4 * t * t * t;
      const double d2 = 2.0 * c2 + 6.0 * c3 * t + 12.0 * c4 * t * t;
      if (d2 == 0.0) break;
      t -= d1 / d2;
    }
    if (std::isfinite(t) && std::abs(t) <= 1.0) {
      x = t;
      value = y0 + c1 * t + c2 * t * t + c3 * t * t * t + c4 * t * t * t * t;
    }
  }
  const double h = z[1] - z[0];
  return {z[i] + x * h, value, i};
}

}  // namespace

Extrema find_extrema(const CoincidencePattern& pattern) {
  const auto z = pattern.z2();
  const auto y = pattern.density();
  if (y.size() < 16) throw Error(ErrorCode::TooFewSamples, "need at least 16 samples");
  const double peak = pattern.peak();
  Extrema out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
      if (y[i] >= kFloor * peak) out.maxima.push_back(refine(z, y, i));
    } else if (y[i] < y[i - 1] && y[i] <= y[i + 1]) {
      out.minima.push_back(refine(z, y, i));
    }
  }
  if (out.maxima.empty()) throw Error(ErrorCode::NoExtremaFound, "pattern has no interior maximum");
  const double lo = out.maxima.front().position;
  const double hi = out.maxima.back().position;
  std::erase_if(out.minima, [&](const Extremum& m) { return m.position < lo || m.position > hi; });
  for (Extremum& m : out.minima) m.value = std::max(m.value, 0.0);
  return out;
}

std::vector<Extremum> principal_maxima(const Extrema& extrema) {
  const auto& mx = extrema.maxima;
  std::vector<Extremum> out;
  auto lg = [](double v) { return std::log(std::max(v, 1e-300)); };
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double self = lg(mx[i].value);
    bool principal;
    if (mx.size() == 1) {
      principal = true;
    } else if (i == 0) {
      principal = self >= lg(mx[1].value);
    } else if (i + 1 == mx.size()) {
      principal = self >= lg(mx[i - 1].value);
    } else {
      principal = self >= 0.5 * (lg(mx[i - 1].value) + lg(mx[i + 1].value));
    }
    if (principal) out.push_back(mx[i]);
  }
  return out;
}

std::vector<FringeVisibility> fringe_visibilities(const CoincidencePattern& pattern) {
  const Extrema ex = find_extrema(pattern);
  const std::vector<Extremum> pm = principal_maxima(ex);
  if (pm.empty()) return {};
  const auto central = std::max_element(pm.begin(), pm.end(), [](const Extremum& a, const Extremum& b) {
    return a.value < b.value;
  });
  std::vector<FringeVisibility> out;
  for (auto it = pm.begin(); it != pm.end(); ++it) {
    if (it == central) continue;
    const Extremum* left = nullptr;
    const Extremum* right = nullptr;
    for (const Extremum& m : ex.minima) {
      if (m.position < it->position) left = &m;
      if (m.position > it->position && right == nullptr) right = &m;
    }
    if (left == nullptr && right == nullptr) continue;
    const double imin = left && right ? 0.5 * (left->value + right->value)
                                      : (left ? left->value : right->value);
    const double imax = it->value;
    const double v = (imax - imin) / (imax + imin);
    out.push_back({it->position, std::clamp(v, 0.0, 1.0)});
  }
  return out;
}

double visibility(const CoincidencePattern& pattern, std::optional<Window> window) {
  std::vector<FringeVisibility> fv;
  try {
    fv = fringe_visibilities(pattern);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoExtremaFound) {
      throw Error(ErrorCode::NoFringePair, "pattern has no extrema");
    }
    throw;
  }
  double best = -1.0;
  for (const FringeVisibility& f : fv) {
    if (window && (f.position < window->lo || f.position > window->hi)) continue;
    best = std::max(best, f.visibility);
  }
  if (best < 0.0) throw Error(ErrorCode::NoFringePair, "no off-centre maximum with an adjacent minimum");
  return best;
}

FringeReport fringe_widths(const CoincidencePattern& pattern) {
  const Extrema ex = find_extrema(pattern);
  if (ex.maxima.size() < 3) throw Error(ErrorCode::TooFewPeaks, "need at least 3 maxima");
  const std::vector<Extremum> pm = principal_maxima(ex);
  if (pm.size() < 2) throw Error(ErrorCode::TooFewPeaks, "need at least 2 principal maxima");

  std::vector<double> gaps;
  for (std::size_t i = 1; i < pm.size(); ++i) gaps.push_back(pm[i].position - pm[i - 1].position);
  std::sort(gaps.begin(), gaps.end());
  const std::size_t mid = gaps.size() / 2;
  const double primary = gaps.size() % 2 ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]);

  FringeReport report{primary, std::nullopt, 0.0, {}};
  for (const Extremum& m : pm) report.peak_positions.push_back(m.position);
  try {
    report.visibility = visibility(pattern);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoFringePair) throw;
  }

  // detrend by a one-period moving average, then Hann-windowed DFT power
  const auto z = pattern.z2();
  const auto y = pattern.density();
  const std::size_t n = y.size();
  const double h = pattern.spacing();
  const auto half = static_cast<std::ptrdiff_t>(std::llround(0.5 * primary / h));
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + y[i];
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - half));
    const auto hi = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n) - 1, static_cast<std::ptrdiff_t>(i) + half));
    r[i] = y[i] - (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    r[i] *= 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  auto power = [&](double f) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ph = 2.0 * std::numbers::pi * f * z[i];
      re += r[i] * std::cos(ph);
      im += r[i] * std::sin(ph);
    }
    return re * re + im * im;
  };
  const double f1 = 1.0 / primary;
  const double p1 = power(f1);
  if (p1 > 0.0 && power(2.0 * f1) > 0.1 * p1) {
    constexpr int steps = 80;
    std::vector<double> fs(steps + 1), ps(steps + 1);
    std::size_t best = 0;
    for (int s = 0; s <= steps; ++s) {
      fs[s] = f1 * (1.8 + 0.4 * s / steps);
      ps[s] = power(fs[s]);
      if (ps[s] > ps[best]) best = static_cast<std::size_t>(s);
    }
    double f2 = fs[best];
    if (best > 0 && best < static_cast<std::size_t>(steps)) {
      const double den = ps[best - 1] - 2.0 * ps[best] + ps[best + 1];
      if (den != 0.0) f2 += 0.5 * (ps[best - 1] - ps[best + 1]) / den * (fs[1] - fs[0]);
    }
    report.secondary_width = 1.0 / f2;
  }
  return report;
}

}  // namespace ghost
