// Timing harness: OpenMP-parallel kernels against the serial reference
// implementations, with a result cross-check on each case.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "aikawa/distance.hpp"
#include "aikawa/fractal.hpp"
#include "aikawa/grid.hpp"
#include "aikawa/hardy.hpp"
#include "aikawa/reference.hpp"

using namespace aikawa;
using namespace aikawa::reference;

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const std::string& name, double parallel_ms, double serial_ms,
         bool agree) {
  std::printf("%-38s %10.2f ms %10.2f ms %7.2fx  %s\n", name.c_str(),
              parallel_ms, serial_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
              agree ? "match" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("%-38s %13s %13s %8s  %s\n", "case", "parallel", "serial",
              "speedup", "check");

  {
    const Generated g = make_sierpinski_carpet(4);
    DistanceField fast;
    std::vector<double> slow;
    const double tp = time_ms([&] { fast = distance_field(g.space, g.set); });
    const double ts =
        time_ms([&] { slow = distance_field_bruteforce(g.space, g.set); });
    bool agree = true;
    for (std::int64_t i = 0; i < g.space.cells(); ++i)
      agree = agree && std::abs(fast.value(i) -
                                slow[static_cast<std::size_t>(i)]) < 1e-9;
    row("distance field, carpet(4) 324^2", tp, ts, agree);
  }

  {
    const Generated g = make_cantor(7);
    const DistanceField dist = distance_field(g.space, g.set);
    GridFunction u = make_grid_function(g.space);
    for (std::int64_t i = 0; i < g.space.cells(); ++i)
      u.values[static_cast<std::size_t>(i)] =
          std::min(1.0, 4.0 * dist.value(i));
    const Ball ball{g.set.center(g.set.set_cells().front()), 0.05};
    const EnergyParams params{0.5, 2.0, 0.0};
    double fast = 0.0, slow = 0.0;
    const double tp =
        time_ms([&] { fast = gagliardo_energy(g.space, u, ball, params); });
    const double ts = time_ms(
        [&] { slow = gagliardo_energy_bruteforce(g.space, u, ball, params); });
    const bool agree = std::abs(fast - slow) <= 1e-9 * std::max(1.0, slow);
    row("gagliardo energy, cantor(7) ball", tp, ts, agree);
  }

  return 0;
}
