// Batch command-line front end: generators, codimension estimators, Aikawa
// condition checkers, inequality certificates, and the combined
// main-theorem verification. Exit codes: 0 pass, 1 usage/input error,
// 2 certified mathematical failure.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "aikawa/aikawa.hpp"
#include "aikawa/assouad.hpp"
#include "aikawa/distance.hpp"
#include "aikawa/fractal.hpp"
#include "aikawa/grid.hpp"
#include "aikawa/hardy.hpp"
#include "aikawa/report.hpp"
#include "aikawa/rng.hpp"
#include "aikawa/truncation.hpp"

using namespace aikawa;
using nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kUsage = 1;
constexpr int kCertifiedFailure = 2;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

void emit(const std::string& prefix, const std::string& command,
          const std::string& format, const json& j, const std::string& csv) {
  if (format == "json" || format == "both")
    write_text(prefix + "." + command + ".json", j.dump(2) + "\n");
  if (format == "csv" || format == "both")
    write_text(prefix + "." + command + ".csv", csv);
}

/// Ambient space of a stored set: the full grid of the same geometry.
GridSet ambient_of(const GridSet& set) {
  return GridSet::full(set.shape(), set.cell(), set.origin());
}

/// Recognize a stored set as a known generator output by exact bit-pattern
/// match, so cross-resolution commands can regenerate it at other depths.
std::string infer_kind(const GridSet& set, int* depth_out) {
  auto matches = [&](const Generated& g, int depth, const char* name) {
    if (g.set.same_geometry(set) && g.set.same_bits(set)) {
      *depth_out = depth;
      return std::string(name);
    }
    return std::string();
  };
  if (set.dim() == 1) {
    for (int k = 1, cells = 12; k <= 12; ++k, cells *= 3) {
      if (set.cells() != cells) continue;
      const auto s = matches(make_cantor(k), k, "cantor");
      if (!s.empty()) return s;
    }
  }
  if (set.dim() == 2) {
    for (int k = 1, side = 12; k <= 8; ++k, side *= 3) {
      if (set.shape()[0] != side || set.shape()[1] != side) continue;
      const auto s = matches(make_sierpinski_carpet(k), k, "sierpinski_carpet");
      if (!s.empty()) return s;
    }
  }
  throw std::runtime_error(
      "cannot infer the generator of this set; supply explicit inputs for "
      "both depths");
}

Generated regenerate(const std::string& kind, int depth) {
  return generate(kind + "(" + std::to_string(depth) + ")");
}

struct DepthPairInput {
  Generated coarse;
  Generated fine;
};

/// Resolve a coarse/fine input pair from either two files or one
/// recognized file plus --depth-pair.
DepthPairInput resolve_pair(const std::string& input,
                            const std::string& second_input,
                            const std::vector<int>& depth_pair) {
  if (!second_input.empty()) {
    const GridSet a = read_gridset(input);
    const GridSet b = read_gridset(second_input);
    return {{ambient_of(a), a}, {ambient_of(b), b}};
  }
  if (depth_pair.size() != 2 || depth_pair[0] + 1 != depth_pair[1])
    throw std::runtime_error(
        "need either two input files or --depth-pair k k+1");
  const GridSet set = read_gridset(input);
  int found_depth = 0;
  const std::string kind = infer_kind(set, &found_depth);
  return {regenerate(kind, depth_pair[0]), regenerate(kind, depth_pair[1])};
}

json threshold_report(const ThresholdResult& res, bool conclusive,
                      const std::string& note) {
  json j = threshold_json(res);
  j["conclusive"] = conclusive;
  if (!note.empty()) j["note"] = note;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Assouad codimension / Aikawa condition toolkit"};
  app.require_subcommand(1);

  std::string input, second_input, out_prefix = "out", format = "both";
  std::string kind;
  std::uint64_t seed = 0;
  int threads = 0;
  std::vector<int> depth_pair;
  std::int64_t centers = 0, scales = 0, trials = 0;
  double alpha = 0.5, delta = 0.05, r_value = 0.0;
  double s = 0.5, p = 2.0, q = 1.2, sigma = 2.0, kappa = 2.0;
  double tol = 0.1, cutoff = -1.0;
  std::int64_t grid_side = 64;

  auto add_common = [&](CLI::App* cmd, bool needs_seed) {
    cmd->add_option("-o,--prefix", out_prefix, "output path prefix");
    cmd->add_option("--format", format, "json|csv|both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    cmd->add_option("--threads", threads, "OpenMP thread count");
    auto* s_opt = cmd->add_option("--seed", seed, "deterministic RNG seed");
    if (needs_seed) s_opt->required();
  };

  auto* c_generate = app.add_subcommand("generate", "emit a generator set");
  c_generate
      ->add_option("--kind", kind,
                   "generator name (with --depth) or full spec like cantor(8)")
      ->required();
  std::int64_t gen_depth = -1;
  c_generate->add_option("--depth", gen_depth, "generator depth");
  std::string gen_out;
  c_generate->add_option("-o,--output", gen_out, "output .agrd path")->required();

  auto* c_codim = app.add_subcommand("codim", "Assouad codimension estimates");
  c_codim->add_option("input", input, "GridSet file")->required();
  c_codim->add_option("--centers", centers, "sample centers");
  c_codim->add_option("--scales", scales, "dyadic scale count");
  add_common(c_codim, true);

  auto* c_lower = app.add_subcommand("aikawa-lower", "lower Aikawa threshold");
  auto* c_upper = app.add_subcommand("aikawa-upper", "upper Aikawa threshold");
  for (auto* cmd : {c_lower, c_upper}) {
    cmd->add_option("input", input, "GridSet file (coarse)")->required();
    cmd->add_option("fine", second_input, "GridSet file (fine), optional");
    cmd->add_option("--depth-pair", depth_pair, "consecutive depths k k+1")
        ->expected(2);
    cmd->add_option("--centers", centers, "sample centers");
    cmd->add_option("--scales", scales, "R ladder length");
    cmd->add_option("--cutoff", cutoff, "growth-exponent cutoff override");
    add_common(cmd, true);
  }

  auto* c_trunc = app.add_subcommand("truncate", "truncate a set to a ball");
  c_trunc->add_option("input", input, "GridSet file")->required();
  c_trunc->add_option("--r", r_value, "truncation radius")->required();
  std::int64_t center_rank = 0;
  c_trunc->add_option("--center-rank", center_rank,
                      "which set cell (ascending order) is the base point");
  add_common(c_trunc, true);

  auto* c_mazya = app.add_subcommand("mazya", "Maz'ya truncation battery");
  c_mazya->add_option("--grid", grid_side, "line grid cells");
  c_mazya->add_option("--p", p, "integrability exponent");
  c_mazya->add_option("--s", s, "fractional smoothness");
  c_mazya->add_option("--trials", trials, "random test functions")->required();
  add_common(c_mazya, true);

  auto* c_hole = app.add_subcommand("holefill", "holefilling certificate");
  c_hole->add_option("input", input, "GridSet file")->required();
  c_hole->add_option("--r", r_value, "truncation radius")->required();
  c_hole->add_option("--sigma", sigma, "outer dilation (>= 1)");
  c_hole->add_option("--kappa", kappa, "inner dilation (>= 2)");
  c_hole->add_option("--s", s, "fractional smoothness");
  c_hole->add_option("--p", p, "integrability exponent");
  c_hole->add_option("--trials", trials, "random admissible test functions")
      ->required();
  add_common(c_hole, true);

  auto* c_hardy = app.add_subcommand("hardy", "local Hardy constant stability");
  c_hardy->add_option("input", input, "GridSet file (coarse)")->required();
  c_hardy->add_option("fine", second_input, "GridSet file (fine), optional");
  c_hardy->add_option("--depth-pair", depth_pair, "consecutive depths k k+1")
      ->expected(2);
  c_hardy->add_option("--s", s, "fractional smoothness");
  c_hardy->add_option("--p", p, "integrability exponent");
  c_hardy->add_option("--q", q, "Hardy exponent (1 < q < p)");
  c_hardy->add_option("--trials", trials, "random test functions")->required();
  add_common(c_hardy, true);

  auto* c_main = app.add_subcommand("verify-main",
                                    "threshold vs codimension capstone");
  c_main->add_option("input", input, "GridSet file (coarse)")->required();
  c_main->add_option("fine", second_input, "GridSet file (fine), optional");
  c_main->add_option("--depth-pair", depth_pair, "consecutive depths k k+1")
      ->expected(2);
  c_main->add_option("--tol", tol, "acceptance gap |alpha_hat - q_hat|");
  c_main->add_option("--centers", centers, "sample centers");
  c_main->add_option("--cutoff", cutoff, "growth-exponent cutoff override");
  add_common(c_main, true);

  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (c_generate->parsed()) {
      const std::string spec =
          gen_depth >= 0 ? kind + "(" + std::to_string(gen_depth) + ")" : kind;
      write_gridset(generate(spec).set, gen_out);
      return kPass;
    }

    if (c_codim->parsed()) {
      const GridSet set = read_gridset(input);
      const GridSet space = ambient_of(set);
      SamplingParams params;
      if (centers > 0) params.centers = centers;
      if (scales > 0) params.scales = scales;
      params.seed = seed;
      if (set_diameter(set) == 0.0)
        params.ambient_diameter = grid_diameter(space);
      const auto samples = ratio_samples(space, set, params);
      const ExponentFit lo = lower_codim(samples);
      const ExponentFit hi = upper_codim(samples);
      json j = {{"lower_codim", fit_json(lo)},
                {"upper_codim", fit_json(hi)},
                {"seed", seed}};
      std::string csv = "side,log_theta,log_envelope\n";
      for (const auto& [x, y] : envelope_points(samples, false))
        csv += "lower," + std::to_string(x) + "," + std::to_string(y) + "\n";
      for (const auto& [x, y] : envelope_points(samples, true))
        csv += "upper," + std::to_string(x) + "," + std::to_string(y) + "\n";
      emit(out_prefix, "codim", format, j, csv);
      return kPass;
    }

    if (c_lower->parsed() || c_upper->parsed()) {
      const bool upper = c_upper->parsed();
      const DepthPairInput pair = resolve_pair(input, second_input, depth_pair);
      ThresholdParams params;
      if (centers > 0) params.centers = centers;
      if (scales > 0) params.scales = scales;
      if (cutoff >= 0.0) params.growth_cutoff = cutoff;
      params.seed = seed;
      if (set_diameter(pair.fine.set) == 0.0)
        params.ambient_diameter = grid_diameter(pair.fine.space);
      const char* command = upper ? "aikawa-upper" : "aikawa-lower";
      try {
        const ThresholdResult res =
            upper ? upper_aikawa_threshold(pair.coarse.space, pair.coarse.set,
                                           pair.fine.space, pair.fine.set, params)
                  : lower_aikawa_threshold(pair.coarse.space, pair.coarse.set,
                                           pair.fine.space, pair.fine.set, params);
        emit(out_prefix, command, format, threshold_report(res, true, ""),
             threshold_csv(res));
        return kPass;
      } catch (const InconclusiveThreshold& e) {
        emit(out_prefix, command, format,
             threshold_report(e.result, false, e.what()),
             threshold_csv(e.result));
        return kCertifiedFailure;
      }
    }

    if (c_trunc->parsed()) {
      const GridSet set = read_gridset(input);
      const GridSet space = ambient_of(set);
      const auto cells = set.set_cells();
      if (center_rank < 0 || center_rank >= static_cast<std::int64_t>(cells.size()))
        throw std::runtime_error("center-rank out of range");
      const Truncation t = truncate(
          space, set, set.center(cells[static_cast<std::size_t>(center_rank)]),
          r_value);
      for (std::size_t k = 0; k < t.stages.size(); ++k)
        write_gridset(t.stages[k], out_prefix + ".stage" + std::to_string(k));
      json j = {{"stages", t.stages.size()},
                {"cells", t.F.popcount()},
                {"r", t.r},
                {"z", t.z}};
      std::string csv = "stage,cells\n";
      for (std::size_t k = 0; k < t.stages.size(); ++k)
        csv += std::to_string(k) + "," + std::to_string(t.stages[k].popcount()) +
               "\n";
      emit(out_prefix, "truncate", format, j, csv);
      return kPass;
    }

    if (c_mazya->parsed()) {
      GridSet space = GridSet::full({grid_side}, 1.0 / static_cast<double>(grid_side),
                                    {0.0});
      const Ball ball{{0.5}, 2.0};
      Rng rng(seed);
      json certs = json::array();
      std::string csv = "trial,lhs,rhs_raw,constant,pass\n";
      bool all_pass = true;
      for (std::int64_t i = 0; i < trials; ++i) {
        Rng trial_rng = rng.child(static_cast<std::uint64_t>(i) + 1);
        GridFunction u = make_grid_function(space);
        double acc = trial_rng.uniform(-2.0, 2.0);
        for (double& v : u.values) {
          v = acc;
          acc += trial_rng.uniform(-1.0, 1.0) * space.cell() * 30.0;
        }
        const InequalityCertificate cert =
            mazya_check(space, u, ball, {s, p, 0.0});
        all_pass = all_pass && cert.pass;
        certs.push_back(certificate_json(cert));
        csv += std::to_string(i) + "," + std::to_string(cert.lhs) + "," +
               std::to_string(cert.rhs_raw) + "," + std::to_string(cert.constant) +
               "," + (cert.pass ? "1" : "0") + "\n";
      }
      json j = {{"certificates", certs}, {"all_pass", all_pass}, {"seed", seed}};
      emit(out_prefix, "mazya", format, j, csv);
      return all_pass ? kPass : kCertifiedFailure;
    }

    if (c_hole->parsed()) {
      const GridSet set = read_gridset(input);
      const GridSet space = ambient_of(set);
      const auto z = set.center(set.set_cells().front());
      const Truncation t = truncate(space, set, z, r_value);
      const DistanceField dist = distance_field(space, t.F);
      Rng rng(seed);
      json certs = json::array();
      std::string csv = "trial,lhs,rhs_raw,pass,constants\n";
      bool all_pass = true;
      for (std::int64_t i = 0; i < trials; ++i) {
        Rng trial_rng = rng.child(static_cast<std::uint64_t>(i) + 1);
        const double slope =
            (1.0 / r_value) * std::pow(2.0, trial_rng.uniform(-1.0, 2.0));
        GridFunction u = make_grid_function(space);
        for (std::int64_t c = 0; c < space.cells(); ++c)
          u.values[static_cast<std::size_t>(c)] =
              std::min(1.0, slope * dist.value(c));
        const InequalityCertificate cert =
            holefill_check(space, set, u, z, r_value, sigma, kappa, {s, p, 0.0});
        all_pass = all_pass && cert.pass;
        certs.push_back(certificate_json(cert));
        csv += std::to_string(i) + "," + std::to_string(cert.lhs) + "," +
               std::to_string(cert.rhs_raw) + "," + (cert.pass ? "1" : "0") +
               ",\"" + cert.worst_case + "\"\n";
      }
      json j = {{"certificates", certs}, {"all_pass", all_pass}, {"seed", seed}};
      emit(out_prefix, "holefill", format, j, csv);
      return all_pass ? kPass : kCertifiedFailure;
    }

    if (c_hardy->parsed()) {
      const DepthPairInput pair = resolve_pair(input, second_input, depth_pair);
      auto run = [&](const Generated& g) {
        const double diam = set_diameter(g.set);
        const double budget = 40000.0;
        double r = diam / 8.0;
        r = std::min(r, g.space.cell() *
                            std::pow(budget, 1.0 / g.space.dim()) / 16.0);
        r = std::max(r, 2.5 * g.space.cell());
        const auto z = g.set.center(g.set.set_cells().front());
        return hardy_check(g.space, g.set, z, r, {s, p, q}, trials, seed);
      };
      const InequalityCertificate coarse = run(pair.coarse);
      const InequalityCertificate fine = run(pair.fine);
      const InequalityCertificate drift = hardy_stability(coarse, fine);
      json j = {{"coarse", certificate_json(coarse)},
                {"fine", certificate_json(fine)},
                {"stability", certificate_json(drift)},
                {"seed", seed}};
      std::string csv = "depth,constant\ncoarse," +
                        std::to_string(coarse.constant) + "\nfine," +
                        std::to_string(fine.constant) + "\n";
      emit(out_prefix, "hardy", format, j, csv);
      return drift.pass ? kPass : kCertifiedFailure;
    }

    if (c_main->parsed()) {
      const DepthPairInput pair = resolve_pair(input, second_input, depth_pair);
      MainTheoremParams params;
      params.sampling.seed = seed;
      params.threshold.seed = seed;
      if (centers > 0) {
        params.sampling.centers = centers;
        params.threshold.centers = centers;
      }
      if (cutoff >= 0.0) params.threshold.growth_cutoff = cutoff;
      params.tolerance = tol;
      const MainTheoremReport report = main_theorem_report(
          pair.coarse.space, pair.coarse.set, pair.fine.space, pair.fine.set,
          params);
      emit(out_prefix, "verify-main", format, main_theorem_json(report),
           threshold_csv(report.threshold));
      return report.pass ? kPass : kCertifiedFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
