#include "aikawa/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aikawa/distance.hpp"

namespace aikawa::reference {

std::vector<double> distance_field_bruteforce(const GridSet& ambient,
                                              const GridSet& target) {
  if (!target.same_geometry(ambient))
    throw std::invalid_argument("distance_field_bruteforce: geometry mismatch");
  const auto targets = target.set_cells();
  if (targets.empty())
    throw std::invalid_argument("distance_field_bruteforce: empty target");
  std::vector<double> out(static_cast<std::size_t>(ambient.cells()));
  for (std::int64_t c = 0; c < ambient.cells(); ++c) {
    const auto pc = ambient.center(c);
    double best = std::numeric_limits<double>::infinity();
    for (const std::int64_t t : targets)
      best = std::min(best, point_dist(pc, ambient.center(t)));
    out[static_cast<std::size_t>(c)] = best;
  }
  return out;
}

double gagliardo_energy_bruteforce(const GridSet& space, const GridFunction& u,
                                   const Ball& ball, const EnergyParams& params) {
  const auto cells = ball_cells(space, ball);
  if (cells.size() < 2) return 0.0;
  const double h = space.cell();
  const double hn = space.cell_volume();
  double total = 0.0;
  for (const std::int64_t x : cells) {
    for (const std::int64_t y : cells) {
      if (x == y) continue;
      const double du = std::abs(u.values[static_cast<std::size_t>(x)] -
                                 u.values[static_cast<std::size_t>(y)]);
      if (du == 0.0) continue;
      const std::int64_t d2 = space.index_dist2(x, y);
      const double d = h * std::sqrt(static_cast<double>(d2));
      // recount mu(B(x, d)) from scratch over the whole space; center
      // distances compare exactly in integer index space
      std::int64_t count = 0;
      for (const std::int64_t c : space.set_cells())
        if (space.index_dist2(c, x) < d2) ++count;
      total += std::pow(du, params.p) * hn /
               (std::pow(d, params.s * params.p) * static_cast<double>(count));
    }
  }
  return total;
}

double hardy_lhs_bruteforce(const GridSet& space, const GridFunction& u,
                            const GridSet& F, const Ball& ball,
                            const EnergyParams& params) {
  const auto f_cells = F.set_cells();
  if (f_cells.empty())
    throw std::invalid_argument("hardy_lhs_bruteforce: empty F");
  double total = 0.0;
  for (const std::int64_t c : ball_cells(space, ball)) {
    if (F.test(c)) continue;
    const auto pc = space.center(c);
    double d = std::numeric_limits<double>::infinity();
    for (const std::int64_t f : f_cells)
      d = std::min(d, point_dist(pc, space.center(f)));
    total += std::pow(std::abs(u.values[static_cast<std::size_t>(c)]), params.p) *
             std::pow(d, -params.s * params.p) * space.cell_volume();
  }
  return total;
}

double trimmed_integral_exhaustive(const GridSet& space, const GridSet& E,
                                   const std::vector<double>& z, double R,
                                   double alpha, double delta, bool remove_worst) {
  const auto cells = ball_cells(space, {z, R});
  const std::size_t n = cells.size();
  if (n == 0) throw std::invalid_argument("trimmed_integral_exhaustive: empty ball");
  if (n > 16)
    throw std::invalid_argument("trimmed_integral_exhaustive: > 16 ball cells");
  const DistanceField dist = distance_field(space, E);
  const double h = space.cell();
  std::vector<double> val(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = dist.value(cells[i]);
    val[i] = std::pow(d == 0.0 ? h / 2.0 : d, -alpha);
  }
  const double budget = delta * static_cast<double>(n) + 1e-12;
  double best = remove_worst ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    // mask marks the cells the adversary touches (removes / keeps)
    const int touched = __builtin_popcount(mask);
    if (static_cast<double>(touched) > budget) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool in_mask = (mask >> i) & 1u;
      if (remove_worst ? !in_mask : in_mask) sum += val[i];
    }
    const double avg = sum / static_cast<double>(n);
    best = remove_worst ? std::min(best, avg) : std::max(best, avg);
  }
  return best;
}

}  // namespace aikawa::reference
