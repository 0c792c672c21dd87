// Lower/upper Aikawa integral conditions: ball averages of dist(.,E)^-alpha,
// exact greedy trimming against an adversarial subset, and empirical
// exponent thresholds decided by cross-resolution growth.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aikawa/assouad.hpp"
#include "aikawa/distance.hpp"
#include "aikawa/grid.hpp"

namespace aikawa {

struct TrimSpec {
  enum class Mode { kRemoveWorst, kKeepWorst };
  double delta = 0.0;  // fraction of ball measure removed / kept
  Mode mode = Mode::kRemoveWorst;
};

struct AikawaScore {
  double alpha = 0.0;
  double value = 0.0;  // normalized: R^alpha * ball-average integral
  std::vector<double> z;
  double R = 0.0;
  double delta = 0.0;  // 0 for the untrimmed lower integral
};

/// Ball average of dist(y,E)^-alpha over B(z,R) cells of `space`, with the
/// singularity clamped at h/2 on E-cells. alpha = 0 returns exactly 1.
double aikawa_integral(const GridSet& space, const GridSet& E,
                       const std::vector<double>& z, double R, double alpha,
                       std::optional<double> diam_override = std::nullopt);
double aikawa_integral(const GridSet& space, const DistanceField& dist_to_E,
                       const std::vector<double>& z, double R, double alpha);

/// Exact extremal trimmed ball average. remove-worst realizes the infimum
/// over Borel sets K with mu(B \ K) <= delta mu(B); keep-worst the supremum
/// over K with mu(K ∩ B) <= delta mu(B). Exact because the objective is
/// additive over cells; the boundary cell is fractionally weighted.
double trimmed_integral(const GridSet& space, const GridSet& E,
                        const std::vector<double>& z, double R, double alpha,
                        const TrimSpec& trim,
                        std::optional<double> diam_override = std::nullopt);
double trimmed_integral(const GridSet& space, const DistanceField& dist_to_E,
                        const std::vector<double>& z, double R, double alpha,
                        const TrimSpec& trim);

struct ScoreParams {
  std::int64_t centers = 16;
  std::int64_t scales = 5;  // dyadic R ladder length
  std::uint64_t seed = 1;
  /// Ladder top; default diam(E)/2 (ambient diameter for single cells).
  std::optional<double> r_max;
  /// Ladder bottom; default 8h.
  std::optional<double> r_min;
  std::optional<double> ambient_diameter;
};

/// inf over sampled (z,R) of R^alpha * trimmed_integral(remove-worst, delta).
/// The set satisfies the upper Aikawa condition at (eps, delta) empirically
/// iff the score is >= 1/eps.
double upper_aikawa_score(const GridSet& space, const GridSet& E, double alpha,
                          double delta, const ScoreParams& params);

/// sup over sampled (z,R) of R^alpha * aikawa_integral (no trimming).
double lower_aikawa_sup(const GridSet& space, const GridSet& E, double alpha,
                        const ScoreParams& params);

struct ThresholdRow {
  double alpha = 0.0;
  double delta = 0.0;  // 0 for the lower condition
  int depth = 0;       // 0 = coarse, 1 = fine
  double score = 0.0;
};

struct ThresholdParams {
  std::vector<double> alpha_grid;  // default: 40 points uniform in (0, n]
  std::vector<double> delta_grid = {0.2, 0.1, 0.05, 0.02, 0.01};
  std::int64_t centers = 16;
  std::int64_t scales = 5;
  std::uint64_t seed = 1;
  /// Growth-exponent cutoff per unit log-refinement: a scale statistic
  /// grows "unboundedly" when log(fine/coarse) / log(h_c/h_f) >= cutoff.
  /// Calibrated on the generator suite so the detected thresholds track
  /// the measured codimensions of the same discretized sets.
  double growth_cutoff = 0.12;
  std::optional<double> ambient_diameter;
};

struct ThresholdResult {
  double alpha_hat = 0.0;
  std::vector<ThresholdRow> table;
  std::vector<double> alpha_grid;
  std::vector<char> pass;  // per alpha-grid entry
  double growth_cutoff = 0.0;
  double refinement = 0.0;  // h_coarse / h_fine
  ExponentFit as_fit() const;
};

class InconclusiveThreshold : public std::runtime_error {
 public:
  InconclusiveThreshold(std::string what, ThresholdResult table)
      : std::runtime_error(std::move(what)), result(std::move(table)) {}
  ThresholdResult result;
};

/// Largest alpha for which M(alpha) = sup R^alpha * integral stays bounded
/// across the two resolutions (empirical lower Aikawa codimension).
ThresholdResult lower_aikawa_threshold(const GridSet& space_coarse,
                                       const GridSet& E_coarse,
                                       const GridSet& space_fine,
                                       const GridSet& E_fine,
                                       const ThresholdParams& params);

/// Smallest alpha for which the trimmed score grows across resolutions for
/// all larger alphas (empirical upper Aikawa codimension). Throws
/// InconclusiveThreshold when the passing set is not an up-set.
ThresholdResult upper_aikawa_threshold(const GridSet& space_coarse,
                                       const GridSet& E_coarse,
                                       const GridSet& space_fine,
                                       const GridSet& E_fine,
                                       const ThresholdParams& params);

/// Default alpha grid: `points` values uniform in (0, n].
std::vector<double> default_alpha_grid(int dim, int points = 40);

struct PorosityParams {
  std::int64_t centers = 64;
  std::uint64_t seed = 1;
};

/// Diagnostic: estimated largest C such that every sampled ball B(x,r)
/// contains a sub-ball B(y,Cr) disjoint from E.
double porosity_constant(const GridSet& space, const GridSet& E,
                         const PorosityParams& params);

}  // namespace aikawa
