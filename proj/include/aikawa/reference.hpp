// Serial brute-force reference implementations. These are the oracles the
// test suites and the benchmark compare the production kernels against;
// they stay deliberately simple and single-threaded.
#pragma once

#include "aikawa/grid.hpp"
#include "aikawa/hardy.hpp"

namespace aikawa::reference {

/// O(N * |target|) distance field: minimum over all target cell centers.
std::vector<double> distance_field_bruteforce(const GridSet& ambient,
                                              const GridSet& target);

/// Direct double loop over ordered cell pairs, with mu(B(x,d)) recounted
/// from scratch for every pair.
double gagliardo_energy_bruteforce(const GridSet& space, const GridFunction& u,
                                   const Ball& ball, const EnergyParams& params);

/// Direct sum of |u|^p dist(.,F)^{-sp} over ball cells outside F.
double hardy_lhs_bruteforce(const GridSet& space, const GridFunction& u,
                            const GridSet& F, const Ball& ball,
                            const EnergyParams& params);

/// Exhaustive optimum over cell subsets for the trimmed Aikawa integral
/// (<= 16 ball cells). remove_worst: min over subsets keeping >= (1-delta)
/// of the ball measure; keep-worst: max over subsets with <= delta mass.
double trimmed_integral_exhaustive(const GridSet& space, const GridSet& E,
                                   const std::vector<double>& z, double R,
                                   double alpha, double delta, bool remove_worst);

}  // namespace aikawa::reference
