#include "aikawa/assouad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "aikawa/rng.hpp"

namespace aikawa {

std::vector<ScaleSample> ratio_samples(const GridSet& space, const GridSet& E,
                                       const SamplingParams& params) {
  if (!E.is_subset_of(space))
    throw std::invalid_argument("ratio_samples: E must be a subset of space");
  const auto e_cells = E.set_cells();
  if (e_cells.empty()) throw std::invalid_argument("ratio_samples: E is empty");
  if (params.centers < 1 || params.scales < 1)
    throw std::invalid_argument("ratio_samples: centers and scales must be >= 1");

  const double h = space.cell();
  double diam = set_diameter(E);
  if (diam == 0.0) {
    if (!params.ambient_diameter)
      throw std::invalid_argument("degenerate set: supply ambient diameter");
    diam = *params.ambient_diameter;
  }
  if (diam <= 4.0 * h)
    throw std::invalid_argument("ratio_samples: diam(E) must exceed 4h");

  // dyadic R ladder in [8h, diam/2], largest first
  std::vector<double> ladder;
  for (double R = diam / 2.0; R >= 8.0 * h; R /= 2.0) {
    ladder.push_back(R);
    if (static_cast<std::int64_t>(ladder.size()) >= params.scales) break;
  }
  if (ladder.empty())
    throw std::invalid_argument("ratio_samples: no admissible R in [8h, diam/2]");

  // centers: all of E when it fits, else a distinct uniform draw
  std::vector<std::int64_t> zs;
  if (params.centers >= static_cast<std::int64_t>(e_cells.size())) {
    zs = e_cells;
  } else {
    Rng rng(params.seed);
    std::vector<std::int64_t> pool = e_cells;
    for (std::int64_t i = 0; i < params.centers; ++i) {
      const std::int64_t j =
          i + rng.below(static_cast<std::int64_t>(pool.size()) - i);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(params.centers));
    zs = std::move(pool);
  }

  const DistanceField dist = distance_field(space, E);

  std::vector<ScaleSample> out;
  for (const auto zidx : zs) {
    const std::vector<double> z = space.center(zidx);
    for (const double R : ladder) {
      // radii r = R/2^m down to 2h
      std::vector<double> rs;
      for (double r = R / 2.0; r >= 2.0 * h; r /= 2.0) rs.push_back(r);
      if (rs.empty()) continue;
      std::vector<std::int64_t> counts(rs.size(), 0);
      std::int64_t total = 0;
      visit_ball_cells(space, {z, R}, [&](std::int64_t idx) {
        if (!space.test(idx)) return;
        ++total;
        const double d = dist.value(idx);
        for (std::size_t m = 0; m < rs.size(); ++m)
          if (d < rs[m]) ++counts[m];
      });
      if (total == 0) continue;
      for (std::size_t m = 0; m < rs.size(); ++m) {
        ScaleSample s;
        s.z = z;
        s.r = rs[m];
        s.R = R;
        s.ratio = static_cast<double>(counts[m]) / static_cast<double>(total);
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

std::vector<std::pair<double, double>> envelope_points(
    const std::vector<ScaleSample>& samples, bool upper) {
  // bucket by dyadic theta = r/R; key is round(log2(R/r))
  std::map<std::int64_t, double> env;
  for (const auto& s : samples) {
    if (!(s.r > 0.0 && s.r < s.R) || !(s.ratio > 0.0 && s.ratio <= 1.0))
      throw std::invalid_argument("envelope_points: sample violates invariants");
    const std::int64_t key =
        static_cast<std::int64_t>(std::llround(std::log2(s.R / s.r)));
    auto [it, fresh] = env.emplace(key, s.ratio);
    if (!fresh)
      it->second = upper ? std::min(it->second, s.ratio)
                         : std::max(it->second, s.ratio);
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& [key, v] : env)
    pts.emplace_back(-static_cast<double>(key) * std::log(2.0), std::log(v));
  return pts;
}

namespace {

ExponentFit envelope_fit(const std::vector<ScaleSample>& samples, bool take_max) {
  const auto pts = envelope_points(samples, /*upper=*/!take_max);
  if (pts.size() < 3)
    throw std::invalid_argument("envelope_fit: need at least 3 distinct theta buckets");

  // least squares through (log theta, log envelope)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  ExponentFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double rss = 0;
  for (const auto& [x, y] : pts) {
    const double e = y - (fit.intercept + fit.slope * x);
    rss += e * e;
  }
  fit.residual_rms = std::sqrt(rss / n);
  fit.theta_min = std::exp(pts.back().first);   // most negative log theta
  fit.theta_max = std::exp(pts.front().first);
  fit.sample_count = static_cast<std::int64_t>(samples.size());
  return fit;
}

}  // namespace

ExponentFit lower_codim(const std::vector<ScaleSample>& samples) {
  return envelope_fit(samples, /*take_max=*/true);
}

ExponentFit upper_codim(const std::vector<ScaleSample>& samples) {
  return envelope_fit(samples, /*take_max=*/false);
}

}  // namespace aikawa
