#include "aikawa/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace aikawa {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::json fit_json(const ExponentFit& fit) {
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"residual_rms", fit.residual_rms},
          {"theta_min", fit.theta_min},
          {"theta_max", fit.theta_max},
          {"n", fit.sample_count}};
}

nlohmann::json threshold_json(const ThresholdResult& result) {
  nlohmann::json j = fit_json(result.as_fit());
  j["method"] = "cross-resolution-growth";
  j["alpha_hat"] = result.alpha_hat;
  j["growth_cutoff"] = result.growth_cutoff;
  j["refinement"] = result.refinement;
  j["alpha_grid"] = result.alpha_grid;
  nlohmann::json pass = nlohmann::json::array();
  for (const char p : result.pass) pass.push_back(p != 0);
  j["pass"] = pass;
  return j;
}

nlohmann::json certificate_json(const InequalityCertificate& cert) {
  return {{"name", cert.name},
          {"lhs", cert.lhs},
          {"rhs_raw", cert.rhs_raw},
          {"constant", cert.constant},
          {"pass", cert.pass},
          {"worst_case", cert.worst_case},
          {"resolution", cert.resolution},
          {"params", {{"s", cert.s}, {"p", cert.p}, {"q", cert.q}}}};
}

std::string samples_csv(const std::vector<ScaleSample>& samples) {
  std::ostringstream os;
  if (!samples.empty()) {
    for (std::size_t a = 0; a < samples.front().z.size(); ++a)
      os << "z" << a << ",";
  }
  os << "r,R,ratio\n";
  for (const auto& s : samples) {
    for (const double z : s.z) os << num(z) << ",";
    os << num(s.r) << "," << num(s.R) << "," << num(s.ratio) << "\n";
  }
  return os.str();
}

std::string threshold_csv(const ThresholdResult& result) {
  std::ostringstream os;
  os << "alpha,delta,depth,score\n";
  for (const auto& row : result.table)
    os << num(row.alpha) << "," << num(row.delta) << "," << row.depth << ","
       << num(row.score) << "\n";
  return os.str();
}

std::string fit_csv(const ExponentFit&, const std::vector<ScaleSample>& samples,
                    bool upper) {
  std::ostringstream os;
  os << "log_theta,log_envelope\n";
  for (const auto& [x, y] : envelope_points(samples, upper))
    os << num(x) << "," << num(y) << "\n";
  return os.str();
}

MainTheoremReport main_theorem_report(const GridSet& space_coarse,
                                      const GridSet& E_coarse,
                                      const GridSet& space_fine,
                                      const GridSet& E_fine,
                                      const MainTheoremParams& params) {
  MainTheoremReport report;
  bool have_codim = false, have_threshold = false;
  auto note = [&report](const std::string& stage, const std::exception& e) {
    if (!report.error.empty()) report.error += "; ";
    report.error += stage + ": " + e.what();
  };
  try {
    report.codim =
        upper_codim(ratio_samples(space_fine, E_fine, params.sampling));
    have_codim = true;
  } catch (const std::exception& e) {
    note("codim", e);
  }
  try {
    report.threshold = upper_aikawa_threshold(space_coarse, E_coarse,
                                              space_fine, E_fine, params.threshold);
    have_threshold = true;
  } catch (const InconclusiveThreshold& e) {
    report.threshold = e.result;
    note("threshold", e);
  } catch (const std::exception& e) {
    note("threshold", e);
  }

  // Hardy battery at a resolution-capped scale: keep B(z, 8r) around the
  // cell budget so the quadratic energy kernel stays tractable.
  const double budget = 40000.0;
  auto run_hardy = [&](const GridSet& space, const GridSet& E) {
    const double h = space.cell();
    const double diam = set_diameter(E);
    double r = diam / 8.0;
    r = std::min(r, h * std::pow(budget, 1.0 / space.dim()) / 16.0);
    r = std::max(r, 2.5 * h);
    const std::vector<double> z = E.center(E.set_cells().front());
    return hardy_check(space, E, z, r, params.energy, params.hardy_trials,
                       params.sampling.seed);
  };
  try {
    report.hardy_coarse = run_hardy(space_coarse, E_coarse);
    report.hardy_fine = run_hardy(space_fine, E_fine);
    report.hardy_drift = hardy_stability(report.hardy_coarse, report.hardy_fine);
  } catch (const std::exception& e) {
    note("hardy", e);
  }

  if (have_codim && have_threshold) {
    report.gap = std::abs(report.threshold.alpha_hat - report.codim.slope);
    report.pass = report.gap <= params.tolerance;
  }
  return report;
}

nlohmann::json main_theorem_json(const MainTheoremReport& report) {
  return {{"upper_codim", fit_json(report.codim)},
          {"upper_aikawa_threshold", threshold_json(report.threshold)},
          {"alpha_hat", report.threshold.alpha_hat},
          {"q_hat", report.codim.slope},
          {"gap", report.gap},
          {"pass", report.pass},
          {"hardy_coarse", certificate_json(report.hardy_coarse)},
          {"hardy_fine", certificate_json(report.hardy_fine)},
          {"hardy_drift", certificate_json(report.hardy_drift)},
          {"error", report.error}};
}

}  // namespace aikawa
