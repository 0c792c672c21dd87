#include "aikawa/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aikawa/rng.hpp"

namespace aikawa {

DistanceField::DistanceField(const GridSet& geometry_like,
                             std::vector<double> values,
                             std::vector<std::int64_t> sq)
    : shape_(geometry_like.shape()),
      cell_(geometry_like.cell()),
      origin_(geometry_like.origin()),
      values_(std::move(values)),
      sq_(std::move(sq)) {}

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// 1-D squared distance transform (lower envelope of parabolas).
// f: squared distances along the line; d: output; v, zpos: scratch.
void edt_line(const std::int64_t* f, std::int64_t* d, std::int64_t n,
              std::int64_t stride, std::vector<std::int64_t>& v,
              std::vector<double>& zpos, std::vector<std::int64_t>& fbuf) {
  fbuf.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) fbuf[static_cast<std::size_t>(i)] = f[i * stride];
  v.resize(static_cast<std::size_t>(n));
  zpos.resize(static_cast<std::size_t>(n) + 1);
  std::int64_t k = 0;
  v[0] = 0;
  zpos[0] = -std::numeric_limits<double>::infinity();
  zpos[1] = std::numeric_limits<double>::infinity();
  for (std::int64_t q = 1; q < n; ++q) {
    const double fq = static_cast<double>(fbuf[static_cast<std::size_t>(q)]);
    double s;
    for (;;) {
      const std::int64_t p = v[static_cast<std::size_t>(k)];
      const double fp = static_cast<double>(fbuf[static_cast<std::size_t>(p)]);
      s = ((fq + static_cast<double>(q) * q) - (fp + static_cast<double>(p) * p)) /
          (2.0 * static_cast<double>(q - p));
      if (s > zpos[static_cast<std::size_t>(k)]) break;
      --k;
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    zpos[static_cast<std::size_t>(k)] = s;
    zpos[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (std::int64_t q = 0; q < n; ++q) {
    while (zpos[static_cast<std::size_t>(k) + 1] < static_cast<double>(q)) ++k;
    const std::int64_t p = v[static_cast<std::size_t>(k)];
    const std::int64_t dq = q - p;
    d[q * stride] = dq * dq + fbuf[static_cast<std::size_t>(p)];
  }
}

}  // namespace

DistanceField distance_field(const GridSet& ambient, const GridSet& target) {
  if (!ambient.same_geometry(target))
    throw std::invalid_argument("distance_field: mismatched geometry");
  if (target.popcount() == 0)
    throw std::invalid_argument("empty set has no distance field");
  if (!target.is_subset_of(ambient))
    throw std::invalid_argument("distance_field: target not a subset of ambient");

  const std::int64_t n = ambient.cells();
  std::vector<std::int64_t> sq(static_cast<std::size_t>(n), kInf);
  for (std::int64_t i = 0; i < n; ++i)
    if (target.test(i)) sq[static_cast<std::size_t>(i)] = 0;

  const auto& shape = ambient.shape();
  const int dim = ambient.dim();
  std::vector<std::int64_t> strides(static_cast<std::size_t>(dim), 1);
  for (int a = dim - 2; a >= 0; --a)
    strides[static_cast<std::size_t>(a)] =
        strides[static_cast<std::size_t>(a) + 1] * shape[static_cast<std::size_t>(a) + 1];

  for (int a = dim - 1; a >= 0; --a) {
    const std::int64_t len = shape[static_cast<std::size_t>(a)];
    const std::int64_t stride = strides[static_cast<std::size_t>(a)];
    const std::int64_t nlines = n / len;
#pragma omp parallel
    {
      std::vector<std::int64_t> v, fbuf;
      std::vector<double> zpos;
#pragma omp for schedule(static)
      for (std::int64_t line = 0; line < nlines; ++line) {
        // base index of this line: enumerate all cells with coord[a] == 0
        const std::int64_t outer = line / stride;
        const std::int64_t inner = line % stride;
        const std::int64_t base = outer * stride * len + inner;
        edt_line(sq.data() + base, sq.data() + base, len, stride, v, zpos, fbuf);
      }
    }
  }

  const double h = ambient.cell();
  std::vector<double> vals(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    vals[static_cast<std::size_t>(i)] =
        h * std::sqrt(static_cast<double>(sq[static_cast<std::size_t>(i)]));
  return DistanceField(ambient, std::move(vals), std::move(sq));
}

GridSet ball_members(const GridSet& space, const Ball& ball) {
  if (ball.radius <= 0.0)
    throw std::invalid_argument("ball_members: radius must be > 0");
  GridSet out = GridSet::empty_like(space);
  visit_ball_cells(space, ball, [&](std::int64_t idx) {
    if (space.test(idx)) out.set(idx);
  });
  return out;
}

std::int64_t ball_cell_count(const GridSet& space, const Ball& ball) {
  std::int64_t n = 0;
  visit_ball_cells(space, ball, [&](std::int64_t idx) {
    if (space.test(idx)) ++n;
  });
  return n;
}

std::vector<std::int64_t> ball_cells(const GridSet& space, const Ball& ball) {
  std::vector<std::int64_t> out;
  visit_ball_cells(space, ball, [&](std::int64_t idx) {
    if (space.test(idx)) out.push_back(idx);
  });
  return out;
}

GridSet neighborhood(const GridSet& space, const DistanceField& dist_to_E,
                     double r) {
  if (r <= 0.0) throw std::invalid_argument("neighborhood: r must be > 0");
  GridSet out = GridSet::empty_like(space);
  const std::int64_t n = space.cells();
  for (std::int64_t i = 0; i < n; ++i)
    if (space.test(i) && dist_to_E.value(i) < r) out.set(i);
  return out;
}

GridSet neighborhood(const GridSet& space, const GridSet& E, double r) {
  return neighborhood(space, distance_field(space, E), r);
}

DoublingReport doubling_report(const GridSet& space, std::int64_t sample_centers,
                               std::uint64_t seed) {
  if (sample_centers < 1)
    throw std::invalid_argument("doubling_report: sample_centers must be >= 1");
  const double h = space.cell();
  const double diam = grid_diameter(space);
  std::vector<double> radii;
  for (double r = 4.0 * h; r <= diam / 4.0; r *= 2.0) radii.push_back(r);
  if (radii.empty())
    throw std::invalid_argument("doubling_report: grid too small for any admissible radius");

  const auto cells = space.set_cells();
  if (cells.empty())
    throw std::invalid_argument("doubling_report: empty space");
  Rng rng(seed);
  DoublingReport rep;
  rep.c_mu_hat = 1.0;
  for (std::int64_t c = 0; c < sample_centers; ++c) {
    const std::int64_t idx = cells[static_cast<std::size_t>(
        rng.below(static_cast<std::int64_t>(cells.size())))];
    // centers offset by h/3 per axis to avoid exact-distance ties
    std::vector<double> x = space.center(idx);
    for (auto& v : x) v += h / 3.0;
    for (const double r : radii) {
      const std::int64_t small = ball_cell_count(space, {x, r});
      if (small == 0) continue;
      const std::int64_t big = ball_cell_count(space, {x, 2.0 * r});
      const double ratio = static_cast<double>(big) / static_cast<double>(small);
      ++rep.sample_count;
      if (ratio > rep.c_mu_hat) {
        rep.c_mu_hat = ratio;
        rep.worst_center = x;
        rep.worst_radius = r;
      }
    }
  }
  rep.s_hat = std::log2(rep.c_mu_hat);
  return rep;
}

}  // namespace aikawa
