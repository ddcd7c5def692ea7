#pragma once

#include <optional>
#include <vector>

#include "ghost/types.hpp"

namespace ghost {

struct Extremum {
  double position;
  double value;
  std::size_t index;  ///< nearest sample
};

struct Extrema {
  std::vector<Extremum> maxima;
  std::vector<Extremum> minima;
};

/// Three-point local extrema refined to sub-sample resolution. Maxima below
/// 1e-8 of the peak are treated as numerical floor and dropped, together with
/// minima outside the retained maxima. Throws TooFewSamples (< 16 samples)
/// and NoExtremaFound.
Extrema find_extrema(const CoincidencePattern& pattern);

/// Maxima that dominate their neighbours (log value at least the mean of the
/// neighbours' log values); secondary three-slit maxima are excluded.
std::vector<Extremum> principal_maxima(const Extrema& extrema);

struct FringeVisibility {
  double position;  ///< of the maximum
  double visibility;
};

/// (Imax - Imin) / (Imax + Imin) for every principal maximum except the
/// central (brightest) one, Imin being the mean of the adjacent minima.
std::vector<FringeVisibility> fringe_visibilities(const CoincidencePattern& pattern);

struct Window {
  double lo;
  double hi;
};

/// Largest off-centre fringe visibility, optionally restricted to maxima in
/// the window. Throws NoFringePair.
double visibility(const CoincidencePattern& pattern, std::optional<Window> window = std::nullopt);

struct FringeReport {
  double primary_width;
  std::optional<double> secondary_width;
  double visibility;  ///< 0 when no off-centre fringe exists
  std::vector<double> peak_positions;
};

/// Median spacing of principal maxima, plus the half-period component when
/// its spectral power exceeds 10% of the fundamental. Throws TooFewPeaks.
FringeReport fringe_widths(const CoincidencePattern& pattern);

}  // namespace ghost
