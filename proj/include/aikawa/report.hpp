// JSON / CSV serialization of estimator outputs and the combined
// main-theorem verification report.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "aikawa/aikawa.hpp"
#include "aikawa/assouad.hpp"
#include "aikawa/certificate.hpp"
#include "aikawa/hardy.hpp"

namespace aikawa {

nlohmann::json fit_json(const ExponentFit& fit);
nlohmann::json threshold_json(const ThresholdResult& result);
nlohmann::json certificate_json(const InequalityCertificate& cert);

/// CSV with columns z..., r, R, ratio.
std::string samples_csv(const std::vector<ScaleSample>& samples);
/// CSV with columns alpha, delta, depth, score.
std::string threshold_csv(const ThresholdResult& result);
/// CSV with columns log_theta, log_envelope for the fitted envelope line.
std::string fit_csv(const ExponentFit& fit,
                    const std::vector<ScaleSample>& samples, bool upper);

struct MainTheoremParams {
  SamplingParams sampling;
  ThresholdParams threshold;
  EnergyParams energy{0.5, 2.0, 1.2};
  std::int64_t hardy_trials = 4;
  double tolerance = 0.1;  // |alpha_hat - q_hat| acceptance gap
};

struct MainTheoremReport {
  ExponentFit codim;          // upper Assouad codimension Q_hat (fine depth)
  ThresholdResult threshold;  // upper Aikawa threshold alpha_hat
  InequalityCertificate hardy_coarse;
  InequalityCertificate hardy_fine;
  InequalityCertificate hardy_drift;
  double gap = 0.0;  // |alpha_hat - Q_hat|
  bool pass = false;
  std::string error;  // nonempty when a stage failed; partial results kept
};

/// Capstone: juxtapose the upper Aikawa threshold with the upper Assouad
/// codimension on a coarse/fine depth pair, plus the Hardy battery.
MainTheoremReport main_theorem_report(const GridSet& space_coarse,
                                      const GridSet& E_coarse,
                                      const GridSet& space_fine,
                                      const GridSet& E_fine,
                                      const MainTheoremParams& params);

nlohmann::json main_theorem_json(const MainTheoremReport& report);

}  // namespace aikawa
