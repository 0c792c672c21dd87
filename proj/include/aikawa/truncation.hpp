// Recursive truncation of a set to a ball, big-piece ball location, and the
// inherited local trimmed-integral bound.
#pragma once

#include <cstdint>
#include <vector>

#include "aikawa/certificate.hpp"
#include "aikawa/grid.hpp"

namespace aikawa {

/// F grown from E ∩ closed B(z, r/2) by repeatedly absorbing E-cells within
/// geometrically shrinking radii of the previous stage, until a fixed point.
/// Invariants: z ∈ F ⊆ E ∩ closed B(z, r); stages are nested; the last
/// stage is F.
struct Truncation {
  GridSet E;
  std::vector<double> z;
  double r = 0.0;
  GridSet F;
  std::vector<GridSet> stages;  // F_0, F_1, ..., F
};

/// F_0 = E ∩ closed B(z, r/2); F_j = union over x in F_{j-1} of
/// E ∩ closed B(x, 2^{-j-1} r). Requires z a cell center of E and r > 2h.
Truncation truncate(const GridSet& space, const GridSet& E,
                    const std::vector<double>& z, double r);

/// Ball on which E and the truncation agree: a point y of E with
/// B(y, r_m) ⊆ B(x, 8 r_m) and E ∩ closed B(y, r_m/2) = F ∩ closed B(y, r_m/2).
struct BigPieceBall {
  std::vector<double> x;
  int m = 0;
  double r_m = 0.0;  // 2^{-m-1} r
  std::vector<double> y;
};

/// Nearest-to-x first search over E-cells with d(x,y) <= 7 r_m. Requires
/// dist(x, F) < 2^{-m+1} r; throws if no candidate satisfies the equality.
BigPieceBall find_big_piece_ball(const Truncation& t,
                                 const std::vector<double>& x, int m);

/// Randomized check that F inherits the local trimmed bound: for sampled
/// admissible (x, m) and the adversarial remove-worst subset K at level
/// delta in B(x, 8 r_m),
///   r_m^{-alpha} <= epsilon * avg over B(x, 8 r_m) of 1_K dist(.,F)^{-alpha}.
/// Scale-precondition violations are skipped and counted.
InequalityCertificate check_truncated_aikawa(const GridSet& space,
                                             const Truncation& t, double alpha,
                                             double epsilon, double delta,
                                             std::int64_t trials,
                                             std::uint64_t seed);

}  // namespace aikawa
