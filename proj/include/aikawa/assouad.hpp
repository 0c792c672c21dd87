// Lower/upper Assouad codimension estimation from neighborhood-measure
// ratios via extremal-envelope log-log regression.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aikawa/distance.hpp"
#include "aikawa/grid.hpp"

namespace aikawa {

/// One observed neighborhood-measure ratio mu(E_r ∩ B(z,R)) / mu(B(z,R)).
struct ScaleSample {
  std::vector<double> z;  // a cell center of E
  double r = 0.0;
  double R = 0.0;
  double ratio = 0.0;  // in (0, 1]
};

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  std::int64_t sample_count = 0;
};

struct SamplingParams {
  std::int64_t centers = 64;
  std::int64_t scales = 16;  // cap on the number of dyadic R values
  std::uint64_t seed = 1;
  /// Replaces diam(E) when the set is a single cell (paper convention:
  /// R < diam(X) instead). Must be supplied by the caller in that case.
  std::optional<double> ambient_diameter;
};

/// Draw ratio samples: z uniform over E's cells (all of them when
/// centers >= |E|), R dyadic in [8h, diam(E)/2], r = R/2^m down to 2h.
std::vector<ScaleSample> ratio_samples(const GridSet& space, const GridSet& E,
                                       const SamplingParams& params);

/// Envelope regression taking the per-theta MAXIMUM ratio (binding side of
/// the lower-codimension bound). Slope estimates the lower codimension.
ExponentFit lower_codim(const std::vector<ScaleSample>& samples);

/// Same pipeline with the per-theta MINIMUM ratio; estimates the upper
/// Assouad codimension.
ExponentFit upper_codim(const std::vector<ScaleSample>& samples);

/// The (log theta, log envelope-ratio) points the fits regress through;
/// upper = false takes per-bucket maxima, true takes minima.
std::vector<std::pair<double, double>> envelope_points(
    const std::vector<ScaleSample>& samples, bool upper);

}  // namespace aikawa
