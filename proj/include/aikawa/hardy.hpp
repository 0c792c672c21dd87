// Discrete fractional Gagliardo energies, Hardy quotients, and certified
// inequality checks: level truncation, holefilling, local fractional Hardy.
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "aikawa/assouad.hpp"
#include "aikawa/certificate.hpp"
#include "aikawa/grid.hpp"

namespace aikawa {

/// Real-valued function on the cells of a grid (one value per cell of the
/// ambient geometry, row-major).
struct GridFunction {
  std::vector<std::int64_t> shape;
  double cell = 1.0;
  std::vector<double> origin;
  std::vector<double> values;
};

GridFunction make_grid_function(const GridSet& geometry, double fill = 0.0);

/// Max over axis-neighboring cells of |Δvalue| / h.
double lipschitz_bound(const GridFunction& u);

struct EnergyParams {
  double s = 0.5;  // fractional smoothness, in (0,1)
  double p = 2.0;  // integrability, > 1
  double q = 0.0;  // Hardy-theorem exponent, in (1,p) when used
};

/// Double sum over ordered pairs x != y of space-cells in the open ball of
///   |u(x)-u(y)|^p h^n / (d(x,y)^{sp} count(B(x, d(x,y)))),
/// with the ball-measure count exact. Balls with < 2 cells give 0 (sets
/// *warned* when provided).
double gagliardo_energy(const GridSet& space, const GridFunction& u,
                        const Ball& ball, const EnergyParams& params,
                        bool* warned = nullptr);

/// Sum over ball cells outside F of |u|^p dist(.,F)^{-sp} h^n. Requires
/// F nonempty and u = 0 on F.
double hardy_lhs(const GridSet& space, const GridFunction& u, const GridSet& F,
                 const Ball& ball, const EnergyParams& params);

/// Level truncations u_k(x) = clamp(|u(x)|/2^k - 1, 0, 1), for every k with
/// a nontrivial band on this grid (from one below the smallest positive
/// value up to the largest value).
std::map<int, GridFunction> mazya_levels(const GridFunction& u);

/// Sum_k 2^{kp} energy(u_k) <= C energy(u) with the exact constant
/// C = 2^{p+2} / (1 - 2^{-p}).
InequalityCertificate mazya_check(const GridSet& space, const GridFunction& u,
                                  const Ball& ball, const EnergyParams& params);

/// Holefilling: hardy_lhs over B(z, sigma kappa r) against
/// C1 * energy(B(z, sigma kappa r)) + C2 * hardy_lhs(B(z, kappa r)) with
/// F = truncate(E, z, r).F; reports the minimal (C1, C2) from a dyadic
/// sweep (C2 >= 1) and passes iff one exists below `cap`.
InequalityCertificate holefill_check(const GridSet& space, const GridSet& E,
                                     const GridFunction& u,
                                     const std::vector<double>& z, double r,
                                     double sigma, double kappa,
                                     const EnergyParams& params,
                                     double cap = 1048576.0);

/// Empirical local Hardy constant: max over a battery of admissible test
/// functions (the canonical distance hat plus random hats vanishing on F)
/// of hardy_lhs / gagliardo_energy over B(z, 8r). Passes iff finite.
InequalityCertificate hardy_check(const GridSet& space, const GridSet& E,
                                  const std::vector<double>& z, double r,
                                  const EnergyParams& params,
                                  std::int64_t trials, std::uint64_t seed);

/// Cross-resolution stability of the empirical Hardy constant: passes iff
/// both constants are finite and their ratio is within [1/2, 2].
InequalityCertificate hardy_stability(const InequalityCertificate& coarse,
                                      const InequalityCertificate& fine);

}  // namespace aikawa
