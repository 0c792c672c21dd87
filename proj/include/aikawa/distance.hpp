// Exact Euclidean distance transforms on grids and the derived
// neighborhood / ball operations.
#pragma once

#include <cmath>

#include "aikawa/grid.hpp"

namespace aikawa {

/// Per-cell distance to a target set. Values are h * sqrt(k) with k the
/// exact integer squared index distance, so they are exact, 1-Lipschitz on
/// the grid graph, and zero exactly on target cells.
class DistanceField {
 public:
  DistanceField() = default;
  DistanceField(const GridSet& geometry_like, std::vector<double> values,
                std::vector<std::int64_t> sq);

  int dim() const { return static_cast<int>(shape_.size()); }
  const std::vector<std::int64_t>& shape() const { return shape_; }
  double cell() const { return cell_; }
  const std::vector<double>& origin() const { return origin_; }
  std::int64_t cells() const { return static_cast<std::int64_t>(values_.size()); }

  double value(std::int64_t idx) const {
    return values_[static_cast<std::size_t>(idx)];
  }
  /// Exact squared distance in index units.
  std::int64_t squared(std::int64_t idx) const {
    return sq_[static_cast<std::size_t>(idx)];
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<std::int64_t> shape_;
  double cell_ = 1.0;
  std::vector<double> origin_;
  std::vector<double> values_;
  std::vector<std::int64_t> sq_;
};

/// Exact Euclidean distance from every ambient cell center to the nearest
/// target cell center (dimension-by-dimension lower envelopes).
DistanceField distance_field(const GridSet& ambient, const GridSet& target);

/// Visit every cell of the grid (set or not) whose center lies strictly
/// inside `ball`, in ascending index order.
template <typename Fn>
void visit_ball_cells(const GridSet& geom, const Ball& ball, Fn&& fn) {
  const int dim = geom.dim();
  const double h = geom.cell();
  const double r = ball.radius;
  std::vector<std::int64_t> lo(static_cast<std::size_t>(dim)),
      hi(static_cast<std::size_t>(dim)), cur(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    const double c = (ball.center[static_cast<std::size_t>(a)] -
                      geom.origin()[static_cast<std::size_t>(a)]) / h - 0.5;
    std::int64_t l = static_cast<std::int64_t>(std::ceil(c - r / h));
    std::int64_t u = static_cast<std::int64_t>(std::floor(c + r / h));
    l = l < 0 ? 0 : l;
    const std::int64_t top = geom.shape()[static_cast<std::size_t>(a)] - 1;
    u = u > top ? top : u;
    if (l > u) return;
    lo[static_cast<std::size_t>(a)] = l;
    hi[static_cast<std::size_t>(a)] = u;
    cur[static_cast<std::size_t>(a)] = l;
  }
  const double r2 = r * r;
  for (;;) {
    double d2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double x = geom.origin()[static_cast<std::size_t>(a)] +
                       (static_cast<double>(cur[static_cast<std::size_t>(a)]) + 0.5) * h -
                       ball.center[static_cast<std::size_t>(a)];
      d2 += x * x;
    }
    if (d2 < r2) fn(geom.index(cur));
    int a = dim - 1;
    for (; a >= 0; --a) {
      if (++cur[static_cast<std::size_t>(a)] <= hi[static_cast<std::size_t>(a)]) break;
      cur[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)];
    }
    if (a < 0) break;
  }
}

/// Cells of `space` whose centers lie strictly within `ball`.
GridSet ball_members(const GridSet& space, const Ball& ball);

/// Number of `space` cells strictly inside the ball (no bitmask built).
std::int64_t ball_cell_count(const GridSet& space, const Ball& ball);

/// Set-cell indices of `space` strictly inside the ball, ascending.
std::vector<std::int64_t> ball_cells(const GridSet& space, const Ball& ball);

/// Open r-neighborhood E_r of E inside `space`.
GridSet neighborhood(const GridSet& space, const GridSet& E, double r);

/// Same, reusing a precomputed distance field of E over the ambient grid.
GridSet neighborhood(const GridSet& space, const DistanceField& dist_to_E,
                     double r);

struct DoublingReport {
  double c_mu_hat = 1.0;
  double s_hat = 0.0;  // log2(c_mu_hat)
  std::int64_t sample_count = 0;
  std::vector<double> worst_center;
  double worst_radius = 0.0;
};

/// Sampled doubling constant of the counting measure on `space`:
/// max over (x, r) of mu(B(x,2r)) / mu(B(x,r)), r dyadic in [4h, diam/4].
DoublingReport doubling_report(const GridSet& space, std::int64_t sample_centers,
                               std::uint64_t seed);

}  // namespace aikawa
