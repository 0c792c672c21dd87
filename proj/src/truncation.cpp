#include "aikawa/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "aikawa/aikawa.hpp"
#include "aikawa/distance.hpp"
#include "aikawa/rng.hpp"

namespace aikawa {

namespace {

// Squared index-distance cutoff realizing the closed ball of radius r.
// Grid distances are exact integers, so the relative slack only absorbs
// the division r/h.
double closed_cut(double r, double h) {
  const double t = r / h;
  return t * t * (1.0 + 1e-12);
}

void for_closed_ball(const GridSet& geom, const std::vector<double>& center,
                     double radius, const std::function<void(std::int64_t)>& fn) {
  const double rr = radius * (1.0 + 1e-12);
  visit_ball_cells(geom, {center, radius * (1.0 + 1e-9) + geom.cell()},
                   [&](std::int64_t idx) {
                     if (point_dist(geom.center(idx), center) <= rr) fn(idx);
                   });
}

}  // namespace

Truncation truncate(const GridSet& space, const GridSet& E,
                    const std::vector<double>& z, double r) {
  if (!E.same_geometry(space))
    throw std::invalid_argument("truncate: E and space geometry mismatch");
  const double h = space.cell();
  if (!(r > 2.0 * h)) throw std::invalid_argument("truncate: r must exceed 2h");
  const std::int64_t zidx = cell_at(E, z);
  if (!E.test(zidx)) throw std::invalid_argument("truncate: z is not a cell of E");

  // candidate pool: E restricted to the closed ball B(z, r) the recursion
  // can never leave (stage radii sum to r)
  std::vector<std::int64_t> pool;
  const double pool_cut = closed_cut(r, h);
  for (const std::int64_t e : E.set_cells())
    if (static_cast<double>(E.index_dist2(e, zidx)) <= pool_cut)
      pool.push_back(e);

  Truncation t;
  t.E = E;
  t.z = E.center(zidx);
  t.r = r;

  GridSet stage = GridSet::empty_like(E);
  const double cut0 = closed_cut(r / 2.0, h);
  for (const std::int64_t e : pool)
    if (static_cast<double>(E.index_dist2(e, zidx)) <= cut0) stage.set(e);
  t.stages.push_back(stage);

  double rho = r / 4.0;  // 2^{-j-1} r at j = 1
  while (true) {
    const DistanceField dist = distance_field(space, stage);
    GridSet next = stage;
    const double cut = closed_cut(rho, h);
    for (const std::int64_t e : pool)
      if (static_cast<double>(dist.squared(e)) <= cut) next.set(e);
    if (next.same_bits(stage)) break;
    stage = next;
    t.stages.push_back(stage);
    rho /= 2.0;
  }
  t.F = stage;
  return t;
}

BigPieceBall find_big_piece_ball(const Truncation& t,
                                 const std::vector<double>& x, int m) {
  const GridSet& E = t.E;
  const GridSet& F = t.F;
  if (m < 0) throw std::invalid_argument("find_big_piece_ball: m must be >= 0");
  const double r_m = std::ldexp(t.r, -m - 1);

  double dist_f = std::numeric_limits<double>::infinity();
  for (const std::int64_t f : F.set_cells())
    dist_f = std::min(dist_f, point_dist(F.center(f), x));
  if (!(dist_f < 4.0 * r_m * (1.0 + 1e-12)))
    throw std::invalid_argument(
        "find_big_piece_ball: dist(x, F) < 2^{-m+1} r required");

  // candidates with B(y, r_m) inside B(x, 8 r_m), nearest to x first
  struct Cand {
    double d;
    std::int64_t idx;
  };
  std::vector<Cand> cands;
  const double reach = 7.0 * r_m * (1.0 + 1e-12);
  for (const std::int64_t e : E.set_cells()) {
    const double d = point_dist(E.center(e), x);
    if (d <= reach) cands.push_back({d, e});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return a.d != b.d ? a.d < b.d : a.idx < b.idx;
  });

  for (const Cand& c : cands) {
    const std::vector<double> y = E.center(c.idx);
    bool equal = true;
    for_closed_ball(E, y, r_m / 2.0, [&](std::int64_t idx) {
      if (E.test(idx) != F.test(idx)) equal = false;
    });
    if (equal) {
      BigPieceBall b;
      b.x = x;
      b.m = m;
      b.r_m = r_m;
      b.y = y;
      return b;
    }
  }
  throw std::runtime_error(
      "big-piece ball missing: no candidate within 7 r_m agrees with the "
      "truncation on its half-radius ball");
}

InequalityCertificate check_truncated_aikawa(const GridSet& space,
                                             const Truncation& t, double alpha,
                                             double epsilon, double delta,
                                             std::int64_t trials,
                                             std::uint64_t seed) {
  if (trials < 1)
    throw std::invalid_argument("check_truncated_aikawa: trials must be >= 1");
  const double h = space.cell();
  const DistanceField dist = distance_field(space, t.F);
  const auto f_cells = t.F.set_cells();
  const double diam_cap = grid_diameter(space) / 2.0;
  const int m_max =
      std::max(0, static_cast<int>(std::floor(std::log2(t.r / (2.0 * h)))) - 1);

  struct Trial {
    bool skipped = false;
    double margin = 0.0;  // lhs / raw rhs
    std::vector<double> x;
    int m = 0;
  };
  std::vector<Trial> results(static_cast<std::size_t>(trials));
  Rng master(seed);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < trials; ++i) {
    Rng rng = master.child(static_cast<std::uint64_t>(i) + 1);
    Trial& out = results[static_cast<std::size_t>(i)];
    const std::int64_t f = f_cells[static_cast<std::size_t>(
        rng.below(static_cast<std::int64_t>(f_cells.size())))];
    const int m = static_cast<int>(rng.below(m_max + 1));
    const double r_m = std::ldexp(t.r, -m - 1);
    out.m = m;
    if (r_m < 2.0 * h || 8.0 * r_m > diam_cap) {  // scale precondition
      out.skipped = true;
      continue;
    }
    // x within 4 r_m of F, satisfying the lemma hypothesis by construction
    std::vector<std::int64_t> near;
    visit_ball_cells(space, {t.F.center(f), 4.0 * r_m}, [&](std::int64_t idx) {
      if (space.test(idx)) near.push_back(idx);
    });
    out.x = space.center(
        near[static_cast<std::size_t>(rng.below(static_cast<std::int64_t>(near.size())))]);
    const double rhs = trimmed_integral(space, dist, out.x, 8.0 * r_m, alpha,
                                        {delta, TrimSpec::Mode::kRemoveWorst});
    out.margin = std::pow(r_m, -alpha) / rhs;
  }

  InequalityCertificate cert;
  cert.name = "truncated-aikawa";
  cert.constant = epsilon;
  cert.rhs_raw = 1.0;
  cert.resolution = h;
  std::int64_t skipped = 0;
  const Trial* worst = nullptr;
  for (const Trial& tr : results) {
    if (tr.skipped) {
      ++skipped;
      continue;
    }
    if (worst == nullptr || tr.margin > worst->margin) worst = &tr;
  }
  if (worst == nullptr) {
    cert.lhs = 0.0;
    cert.pass = false;
    cert.worst_case = "all trials skipped";
    return cert;
  }
  cert.lhs = worst->margin;
  cert.pass = cert.lhs <= epsilon;
  std::ostringstream os;
  os << "worst at m=" << worst->m << " x=(";
  for (std::size_t a = 0; a < worst->x.size(); ++a)
    os << (a ? "," : "") << worst->x[a];
  os << "), skipped=" << skipped;
  cert.worst_case = os.str();
  return cert;
}

}  // namespace aikawa
