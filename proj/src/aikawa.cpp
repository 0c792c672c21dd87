#include "aikawa/aikawa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aikawa/rng.hpp"

namespace aikawa {

namespace {

// Sorted run-length encoding of the exact squared index distances to E
// over the cells of one ball. d2 == 0 means the clamped E-cell value.
struct BallProfile {
  std::vector<std::pair<std::int64_t, std::int64_t>> runs;
  std::int64_t total = 0;
  double R = 0.0;
};

BallProfile ball_profile(const GridSet& space, const DistanceField& dist,
                         const std::vector<double>& z, double R) {
  std::vector<std::int64_t> d2s;
  visit_ball_cells(space, {z, R}, [&](std::int64_t idx) {
    if (space.test(idx)) d2s.push_back(dist.squared(idx));
  });
  std::sort(d2s.begin(), d2s.end());
  BallProfile p;
  p.R = R;
  p.total = static_cast<std::int64_t>(d2s.size());
  for (std::size_t i = 0; i < d2s.size();) {
    std::size_t j = i;
    while (j < d2s.size() && d2s[j] == d2s[i]) ++j;
    p.runs.emplace_back(d2s[i], static_cast<std::int64_t>(j - i));
    i = j;
  }
  return p;
}

double integrand_value(std::int64_t d2, double alpha, double h) {
  if (alpha == 0.0) return 1.0;
  const double d = d2 == 0 ? h / 2.0 : h * std::sqrt(static_cast<double>(d2));
  return std::pow(d, -alpha);
}

// Untrimmed ball average of the integrand.
double profile_average(const BallProfile& p, double alpha, double h) {
  if (alpha == 0.0) return 1.0;
  double sum = 0.0;
  for (const auto& [d2, n] : p.runs)
    sum += static_cast<double>(n) * integrand_value(d2, alpha, h);
  return sum / static_cast<double>(p.total);
}

// Greedy-exact trimmed ball average. Runs are sorted by ascending distance,
// i.e. descending integrand, so a single pass realizes both extremes.
double profile_trimmed(const BallProfile& p, double alpha, double h,
                       double delta, TrimSpec::Mode mode) {
  const double cut = delta * static_cast<double>(p.total);  // cells to move
  double moved = 0.0;       // cells removed (or kept) so far
  double moved_sum = 0.0;   // integrand mass over those cells
  double total_sum = 0.0;
  for (const auto& [d2, n] : p.runs) {
    const double v = integrand_value(d2, alpha, h);
    const double cn = static_cast<double>(n);
    total_sum += cn * v;
    if (moved < cut) {
      const double take = std::min(cn, cut - moved);
      moved += take;
      moved_sum += take * v;
    }
  }
  const double denom = static_cast<double>(p.total);
  if (mode == TrimSpec::Mode::kRemoveWorst) return (total_sum - moved_sum) / denom;
  return moved_sum / denom;
}

std::vector<double> cell_center_of(const GridSet& E, const std::vector<double>& z,
                                   const char* who) {
  const double h = E.cell();
  std::vector<std::int64_t> c(z.size());
  for (std::size_t a = 0; a < z.size(); ++a) {
    const double x = (z[a] - E.origin()[a]) / h - 0.5;
    c[a] = static_cast<std::int64_t>(std::llround(x));
    if (c[a] < 0 || c[a] >= E.shape()[a] || std::abs(x - static_cast<double>(c[a])) > 1e-9)
      throw std::invalid_argument(std::string(who) + ": z is not a cell center");
  }
  if (!E.test(E.index(c)))
    throw std::invalid_argument(std::string(who) + ": z is not a cell of E");
  return E.center(E.index(c));
}

double effective_diameter(const GridSet& E, std::optional<double> diam_override) {
  const double d = set_diameter(E);
  if (d > 0.0) return d;
  if (diam_override) return *diam_override;
  throw std::invalid_argument("degenerate set: supply ambient diameter");
}

void check_scale(double R, double diam, const char* who) {
  if (!(R > 0.0) || !(R < diam))
    throw std::invalid_argument(std::string(who) + ": R out of range (0, diam)");
}

std::vector<std::int64_t> sample_cells(const std::vector<std::int64_t>& cells,
                                       std::int64_t count, std::uint64_t seed) {
  if (count >= static_cast<std::int64_t>(cells.size())) return cells;
  Rng rng(seed);
  std::vector<std::int64_t> pool = cells;
  for (std::int64_t i = 0; i < count; ++i) {
    const std::int64_t j = i + rng.below(static_cast<std::int64_t>(pool.size()) - i);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

}  // namespace

double aikawa_integral(const GridSet& space, const DistanceField& dist_to_E,
                       const std::vector<double>& z, double R, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("aikawa_integral: alpha must be >= 0");
  if (alpha == 0.0) return 1.0;
  const BallProfile p = ball_profile(space, dist_to_E, z, R);
  if (p.total == 0)
    throw std::invalid_argument("aikawa_integral: empty ball");
  return profile_average(p, alpha, space.cell());
}

double aikawa_integral(const GridSet& space, const GridSet& E,
                       const std::vector<double>& z, double R, double alpha,
                       std::optional<double> diam_override) {
  const auto zc = cell_center_of(E, z, "aikawa_integral");
  check_scale(R, effective_diameter(E, diam_override), "aikawa_integral");
  return aikawa_integral(space, distance_field(space, E), zc, R, alpha);
}

double trimmed_integral(const GridSet& space, const DistanceField& dist_to_E,
                        const std::vector<double>& z, double R, double alpha,
                        const TrimSpec& trim) {
  if (trim.delta < 0.0 || trim.delta > 1.0)
    throw std::invalid_argument("trimmed_integral: delta must be in [0,1]");
  if (alpha < 0.0) throw std::invalid_argument("trimmed_integral: alpha must be >= 0");
  const BallProfile p = ball_profile(space, dist_to_E, z, R);
  if (p.total == 0)
    throw std::invalid_argument("trimmed_integral: empty ball");
  return profile_trimmed(p, alpha, space.cell(), trim.delta, trim.mode);
}

double trimmed_integral(const GridSet& space, const GridSet& E,
                        const std::vector<double>& z, double R, double alpha,
                        const TrimSpec& trim, std::optional<double> diam_override) {
  const auto zc = cell_center_of(E, z, "trimmed_integral");
  check_scale(R, effective_diameter(E, diam_override), "trimmed_integral");
  return trimmed_integral(space, distance_field(space, E), zc, R, alpha, trim);
}

namespace {

// Shared sampling for the score / threshold statistics: z over E cells,
// R a dyadic ladder. Evaluates f(profile) for every sample.
template <typename Fn>
void for_each_profile(const GridSet& space, const GridSet& E,
                      const std::vector<double>& ladder, std::int64_t centers,
                      std::uint64_t seed, Fn&& fn) {
  const auto zs = sample_cells(E.set_cells(), centers, seed);
  const DistanceField dist = distance_field(space, E);
  struct Task {
    std::vector<double> z;
    double R;
  };
  std::vector<Task> tasks;
  for (const auto zidx : zs)
    for (const double R : ladder) tasks.push_back({E.center(zidx), R});
  std::vector<BallProfile> profiles(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(tasks.size()); ++i) {
    const auto& t = tasks[static_cast<std::size_t>(i)];
    profiles[static_cast<std::size_t>(i)] = ball_profile(space, dist, t.z, t.R);
  }
  for (std::size_t i = 0; i < profiles.size(); ++i)
    if (profiles[i].total > 0) fn(tasks[i].z, profiles[i]);
}

std::vector<double> dyadic_ladder(double top, double bottom, std::int64_t max_len) {
  std::vector<double> ladder;
  for (double R = top; R >= bottom; R /= 2.0) {
    ladder.push_back(R);
    if (static_cast<std::int64_t>(ladder.size()) >= max_len) break;
  }
  return ladder;
}

}  // namespace

double upper_aikawa_score(const GridSet& space, const GridSet& E, double alpha,
                          double delta, const ScoreParams& params) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("upper_aikawa_score: alpha must be > 0");
  if (delta < 0.0 || delta >= 1.0)
    throw std::invalid_argument("upper_aikawa_score: delta must be in [0,1)");
  const double h = space.cell();
  const double diam = effective_diameter(E, params.ambient_diameter);
  const auto ladder = dyadic_ladder(params.r_max.value_or(diam / 2.0),
                                    params.r_min.value_or(8.0 * h), params.scales);
  if (ladder.empty())
    throw std::invalid_argument("upper_aikawa_score: empty R ladder");
  double score = std::numeric_limits<double>::infinity();
  for_each_profile(space, E, ladder, params.centers, params.seed,
                   [&](const std::vector<double>&, const BallProfile& p) {
                     const double v = std::pow(p.R, alpha) *
                                      profile_trimmed(p, alpha, h, delta,
                                                      TrimSpec::Mode::kRemoveWorst);
                     score = std::min(score, v);
                   });
  return score;
}

double lower_aikawa_sup(const GridSet& space, const GridSet& E, double alpha,
                        const ScoreParams& params) {
  if (alpha < 0.0)
    throw std::invalid_argument("lower_aikawa_sup: alpha must be >= 0");
  const double h = space.cell();
  const double diam = effective_diameter(E, params.ambient_diameter);
  const auto ladder = dyadic_ladder(params.r_max.value_or(diam / 2.0),
                                    params.r_min.value_or(8.0 * h), params.scales);
  if (ladder.empty())
    throw std::invalid_argument("lower_aikawa_sup: empty R ladder");
  double sup = 0.0;
  for_each_profile(space, E, ladder, params.centers, params.seed,
                   [&](const std::vector<double>&, const BallProfile& p) {
                     const double v =
                         std::pow(p.R, alpha) * profile_average(p, alpha, h);
                     sup = std::max(sup, v);
                   });
  return sup;
}

std::vector<double> default_alpha_grid(int dim, int points) {
  std::vector<double> grid;
  for (int i = 1; i <= points; ++i)
    grid.push_back(static_cast<double>(dim) * static_cast<double>(i) /
                   static_cast<double>(points));
  return grid;
}

ExponentFit ThresholdResult::as_fit() const {
  ExponentFit fit;
  fit.slope = alpha_hat;
  fit.intercept = 0.0;
  fit.residual_rms = 0.0;
  fit.theta_min = alpha_grid.empty() ? 0.0 : alpha_grid.front();
  fit.theta_max = alpha_grid.empty() ? 0.0 : alpha_grid.back();
  fit.sample_count = static_cast<std::int64_t>(table.size());
  return fit;
}

namespace {

struct DepthStats {
  // stats[a][d]: extremal R^alpha * integral over samples, per alpha and
  // delta-grid entry (d == delta_grid.size() is the untrimmed column).
  std::vector<std::vector<double>> stats;
};

// One pass per depth: every (alpha, delta) statistic from shared profiles.
DepthStats depth_statistics(const GridSet& space, const GridSet& E,
                            const std::vector<double>& ladder,
                            const ThresholdParams& params, bool take_inf) {
  const double h = space.cell();
  const std::size_t na = params.alpha_grid.size();
  const std::size_t nd = params.delta_grid.size();
  DepthStats out;
  out.stats.assign(na, std::vector<double>(
                           nd + 1, take_inf ? std::numeric_limits<double>::infinity()
                                            : 0.0));
  for_each_profile(
      space, E, ladder, params.centers, params.seed,
      [&](const std::vector<double>&, const BallProfile& p) {
        // per-alpha single pass over the runs, all delta cuts at once
        std::vector<double> cuts(nd);
        for (std::size_t d = 0; d < nd; ++d)
          cuts[d] = params.delta_grid[d] * static_cast<double>(p.total);
        for (std::size_t a = 0; a < na; ++a) {
          const double alpha = params.alpha_grid[a];
          const double ra = std::pow(p.R, alpha);
          double total_sum = 0.0;
          std::vector<double> removed(nd, 0.0);
          std::vector<double> moved(nd, 0.0);
          for (const auto& [d2, n] : p.runs) {
            const double v = integrand_value(d2, alpha, h);
            const double cn = static_cast<double>(n);
            total_sum += cn * v;
            for (std::size_t d = 0; d < nd; ++d) {
              if (moved[d] < cuts[d]) {
                const double take = std::min(cn, cuts[d] - moved[d]);
                moved[d] += take;
                removed[d] += take * v;
              }
            }
          }
          const double denom = static_cast<double>(p.total);
          auto fold = [&](double& slot, double value) {
            slot = take_inf ? std::min(slot, value) : std::max(slot, value);
          };
          for (std::size_t d = 0; d < nd; ++d)
            fold(out.stats[a][d], ra * (total_sum - removed[d]) / denom);
          fold(out.stats[a][nd], ra * total_sum / denom);
        }
      });
  return out;
}

std::vector<double> threshold_ladder(const GridSet& space_c, const GridSet& E_c,
                                     const GridSet& E_f,
                                     const ThresholdParams& params) {
  double diam_c = set_diameter(E_c);
  double diam_f = set_diameter(E_f);
  if (diam_c == 0.0 || diam_f == 0.0) {
    if (!params.ambient_diameter)
      throw std::invalid_argument("degenerate set: supply ambient diameter");
    diam_c = diam_f = *params.ambient_diameter;
  }
  const double base = std::min(diam_c, diam_f);
  // fixed physical ladder, bounded below by the coarse grid's resolution
  return dyadic_ladder(base / 2.0, 8.0 * space_c.cell(), params.scales);
}

}  // namespace

ThresholdResult lower_aikawa_threshold(const GridSet& space_coarse,
                                       const GridSet& E_coarse,
                                       const GridSet& space_fine,
                                       const GridSet& E_fine,
                                       const ThresholdParams& params) {
  ThresholdParams p = params;
  if (p.alpha_grid.empty()) p.alpha_grid = default_alpha_grid(space_fine.dim());
  p.delta_grid.clear();  // untrimmed condition
  const auto ladder = threshold_ladder(space_coarse, E_coarse, E_fine, p);
  if (ladder.empty())
    throw std::invalid_argument("lower_aikawa_threshold: empty R ladder");
  const DepthStats coarse =
      depth_statistics(space_coarse, E_coarse, ladder, p, /*take_inf=*/false);
  const DepthStats fine =
      depth_statistics(space_fine, E_fine, ladder, p, /*take_inf=*/false);

  ThresholdResult res;
  res.alpha_grid = p.alpha_grid;
  res.growth_cutoff = p.growth_cutoff;
  res.refinement = space_coarse.cell() / space_fine.cell();
  const double logref = std::log(res.refinement);
  res.pass.assign(p.alpha_grid.size(), 0);
  bool still_bounded = true;
  res.alpha_hat = 0.0;
  for (std::size_t a = 0; a < p.alpha_grid.size(); ++a) {
    const double mc = coarse.stats[a][0];
    const double mf = fine.stats[a][0];
    res.table.push_back({p.alpha_grid[a], 0.0, 0, mc});
    res.table.push_back({p.alpha_grid[a], 0.0, 1, mf});
    const double growth = std::log(mf / mc) / logref;
    const bool bounded = growth < p.growth_cutoff;
    res.pass[a] = bounded ? 1 : 0;
    if (still_bounded && bounded)
      res.alpha_hat = p.alpha_grid[a];
    else
      still_bounded = false;
  }
  return res;
}

ThresholdResult upper_aikawa_threshold(const GridSet& space_coarse,
                                       const GridSet& E_coarse,
                                       const GridSet& space_fine,
                                       const GridSet& E_fine,
                                       const ThresholdParams& params) {
  ThresholdParams p = params;
  if (p.alpha_grid.empty()) p.alpha_grid = default_alpha_grid(space_fine.dim());
  if (p.delta_grid.empty())
    throw std::invalid_argument("upper_aikawa_threshold: empty delta grid");
  const auto ladder = threshold_ladder(space_coarse, E_coarse, E_fine, p);
  if (ladder.empty())
    throw std::invalid_argument("upper_aikawa_threshold: empty R ladder");
  const DepthStats coarse =
      depth_statistics(space_coarse, E_coarse, ladder, p, /*take_inf=*/true);
  const DepthStats fine =
      depth_statistics(space_fine, E_fine, ladder, p, /*take_inf=*/true);

  ThresholdResult res;
  res.alpha_grid = p.alpha_grid;
  res.growth_cutoff = p.growth_cutoff;
  res.refinement = space_coarse.cell() / space_fine.cell();
  const double logref = std::log(res.refinement);
  res.pass.assign(p.alpha_grid.size(), 0);
  for (std::size_t a = 0; a < p.alpha_grid.size(); ++a) {
    double growth = -std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d < p.delta_grid.size(); ++d) {
      const double sc = coarse.stats[a][d];
      const double sf = fine.stats[a][d];
      res.table.push_back({p.alpha_grid[a], p.delta_grid[d], 0, sc});
      res.table.push_back({p.alpha_grid[a], p.delta_grid[d], 1, sf});
      growth = std::max(growth, std::log(sf / sc) / logref);
    }
    res.pass[a] = growth >= p.growth_cutoff ? 1 : 0;
  }
  // passing alphas must form an up-set in the grid
  std::size_t first_pass = res.pass.size();
  for (std::size_t a = 0; a < res.pass.size(); ++a)
    if (res.pass[a]) {
      first_pass = a;
      break;
    }
  if (first_pass == res.pass.size()) {
    res.alpha_hat = std::numeric_limits<double>::infinity();
    return res;
  }
  for (std::size_t a = first_pass; a < res.pass.size(); ++a)
    if (!res.pass[a])
      throw InconclusiveThreshold("inconclusive threshold", res);
  res.alpha_hat = p.alpha_grid[first_pass];
  return res;
}

double porosity_constant(const GridSet& space, const GridSet& E,
                         const PorosityParams& params) {
  if (E.popcount() == 0)
    throw std::invalid_argument("porosity_constant: E is empty");
  const double h = space.cell();
  const auto ladder = dyadic_ladder(grid_diameter(space) / 4.0, 4.0 * h, 16);
  if (ladder.empty()) return 0.0;
  const DistanceField dist = distance_field(space, E);
  const auto cells = space.set_cells();
  Rng rng(params.seed);
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t c = 0; c < params.centers; ++c) {
    const std::int64_t idx = cells[static_cast<std::size_t>(
        rng.below(static_cast<std::int64_t>(cells.size())))];
    std::vector<double> x = space.center(idx);
    for (auto& v : x) v += h / 3.0;
    for (const double r : ladder) {
      double local = 0.0;
      visit_ball_cells(space, {x, r}, [&](std::int64_t yidx) {
        if (!space.test(yidx)) return;
        const double dxy = point_dist(space.center(yidx), x);
        local = std::max(local, std::min(dist.value(yidx), r - dxy));
      });
      best = std::min(best, local / r);
    }
  }
  return best == std::numeric_limits<double>::infinity() ? 0.0 : best;
}

}  // namespace aikawa
