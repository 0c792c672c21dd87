#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "aikawa/distance.hpp"
#include "aikawa/fractal.hpp"
#include "aikawa/hardy.hpp"
#include "aikawa/reference.hpp"
#include "aikawa/rng.hpp"
#include "aikawa/truncation.hpp"

using namespace aikawa;

namespace {

GridFunction random_function(const GridSet& geometry, Rng& rng, double amp) {
  GridFunction u = make_grid_function(geometry);
  for (double& v : u.values) v = rng.uniform(-amp, amp);
  return u;
}

Ball whole_grid_ball(const GridSet& space) {
  std::vector<double> c(static_cast<std::size_t>(space.dim()));
  for (int a = 0; a < space.dim(); ++a)
    c[static_cast<std::size_t>(a)] =
        space.origin()[static_cast<std::size_t>(a)] +
        0.5 * static_cast<double>(space.shape()[static_cast<std::size_t>(a)]) *
            space.cell();
  return {c, 2.0 * grid_diameter(space)};
}

}  // namespace

TEST_CASE("two-cell energy matches the hand computation") {
  GridSet space = GridSet::full({2}, 1.0, {0.0});
  GridFunction u = make_grid_function(space);
  u.values = {0.0, 1.0};
  const EnergyParams params{0.5, 2.0, 0.0};
  // one pair in both orders: |1|^2 * 1 / (1^1 * mu(B(x,1))), mu = 1 cell
  const double e = gagliardo_energy(space, u, whole_grid_ball(space), params);
  CHECK(e == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("constant functions have zero energy; degenerate balls warn") {
  GridSet space = GridSet::full({8, 8}, 0.5, {0.0, 0.0});
  const GridFunction u = make_grid_function(space, 3.7);
  const EnergyParams params{0.4, 2.5, 0.0};
  CHECK(gagliardo_energy(space, u, whole_grid_ball(space), params) == 0.0);
  bool warned = false;
  const Ball tiny{space.center(0), 0.1};
  CHECK(gagliardo_energy(space, u, tiny, params, &warned) == 0.0);
  CHECK(warned);
}

TEST_CASE("energy shift invariance and p-homogeneity") {
  Rng rng(3);
  GridSet space = GridSet::full({24}, 0.25, {0.0});
  const GridFunction u = random_function(space, rng, 2.0);
  const Ball ball = whole_grid_ball(space);
  for (const double p : {1.5, 2.0, 3.0}) {
    const EnergyParams params{0.5, p, 0.0};
    const double base = gagliardo_energy(space, u, ball, params);
    GridFunction shifted = u;
    for (double& v : shifted.values) v += 11.25;
    CHECK(gagliardo_energy(space, shifted, ball, params) ==
          doctest::Approx(base).epsilon(1e-12));
    GridFunction scaled = u;
    for (double& v : scaled.values) v *= -2.0;
    CHECK(gagliardo_energy(space, scaled, ball, params) ==
          doctest::Approx(std::pow(2.0, p) * base).epsilon(1e-12));
  }
}

TEST_CASE("energy matches brute force on small random instances") {
  Rng rng(21);
  for (int trial = 0; trial < 6; ++trial) {
    const int dim = 1 + static_cast<int>(rng.below(2));
    GridSet space =
        dim == 1 ? GridSet::full({30}, 0.5, {0.0})
                 : GridSet::full({9, 9}, 0.5, {0.0, 0.0});
    if (trial % 3 == 2) {
      // non-full ambient set exercises the generic counting path
      GridSet holes = GridSet::empty_like(space);
      for (std::int64_t i = 0; i < space.cells(); ++i)
        if (rng.unit() < 0.8) holes.set(i);
      holes.set(0);
      holes.set(space.cells() - 1);
      space = holes;
    }
    const GridFunction u = random_function(space, rng, 1.5);
    const EnergyParams params{0.3 + 0.1 * trial, 1.5 + 0.5 * (trial % 3), 0.0};
    const Ball ball{space.center(space.cells() / 2),
                    0.4 * grid_diameter(space)};
    const double fast = gagliardo_energy(space, u, ball, params);
    const double slow = reference::gagliardo_energy_bruteforce(space, u, ball, params);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-10));
  }
}

TEST_CASE("hardy lhs: single-term sum and vanishing enforcement") {
  GridSet space = GridSet::full({16}, 1.0, {0.0});
  GridSet f = GridSet::empty_like(space);
  f.set(4);
  GridFunction u = make_grid_function(space);
  u.values[7] = 1.0;  // distance 3 from F
  const EnergyParams params{0.5, 2.0, 0.0};
  const Ball ball{space.center(7), 1.4};
  CHECK(hardy_lhs(space, u, f, ball, params) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  GridFunction bad = u;
  bad.values[4] = 0.25;
  CHECK_THROWS_WITH_AS(
      static_cast<void>(hardy_lhs(space, bad, f, ball, params)),
      "test function must vanish on F", std::invalid_argument);
}

TEST_CASE("hardy lhs matches brute force") {
  Rng rng(8);
  GridSet space = GridSet::full({12, 12}, 0.5, {0.0, 0.0});
  GridSet f = GridSet::empty_like(space);
  for (int k = 0; k < 6; ++k) f.set(rng.below(space.cells()));
  GridFunction u = random_function(space, rng, 2.0);
  for (const auto c : f.set_cells()) u.values[static_cast<std::size_t>(c)] = 0.0;
  const EnergyParams params{0.45, 2.2, 0.0};
  const Ball ball{space.center(space.index({6, 6})), 2.2};
  CHECK(hardy_lhs(space, u, f, ball, params) ==
        doctest::Approx(reference::hardy_lhs_bruteforce(space, u, f, ball, params))
            .epsilon(1e-12));
}

TEST_CASE("mazya level functions follow the case formula") {
  GridSet space = GridSet::full({4}, 1.0, {0.0});
  CHECK(mazya_levels(make_grid_function(space, 0.0)).empty());

  const auto family = mazya_levels(make_grid_function(space, 3.0));
  REQUIRE(family.count(0) == 1);
  REQUIRE(family.count(1) == 1);
  CHECK(family.at(1).values[0] == doctest::Approx(0.5));  // 3/2 - 1
  CHECK(family.at(0).values[0] == doctest::Approx(1.0));  // 3 >= 2
}

TEST_CASE("level bands are consistent and monotone in k") {
  Rng rng(14);
  GridSet space = GridSet::full({32}, 1.0, {0.0});
  const GridFunction u = random_function(space, rng, 10.0);
  const auto family = mazya_levels(u);
  REQUIRE(!family.empty());
  for (const auto& [k, uk] : family) {
    const double pk = std::ldexp(1.0, k);
    for (std::size_t i = 0; i < uk.values.size(); ++i) {
      const double v = uk.values[i];
      const double a = std::abs(u.values[i]);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      if (v < 1.0) CHECK(a <= 2.0 * pk * (1.0 + 1e-12));
      if (v > 0.0) CHECK(a > pk * (1.0 - 1e-12));
    }
    if (family.count(k + 1)) {
      for (std::size_t i = 0; i < uk.values.size(); ++i)
        CHECK(family.at(k + 1).values[i] <= uk.values[i] + 1e-12);
    }
  }
}

TEST_CASE("mazya constant is 64/3 at p = 2 and the estimate always holds") {
  GridSet space = GridSet::full({64}, 1.0 / 64.0, {0.0});
  Rng rng(1);
  const Ball ball = whole_grid_ball(space);
  for (const double p : {1.5, 2.0, 3.0}) {
    for (int trial = 0; trial < 25; ++trial) {
      Rng trial_rng = rng.child(static_cast<std::uint64_t>(100 * p) + trial);
      GridFunction u = make_grid_function(space);
      // random Lipschitz profile: cumulative bounded increments
      double acc = trial_rng.uniform(-1.0, 1.0);
      for (double& v : u.values) {
        v = acc;
        acc += trial_rng.uniform(-1.0, 1.0) * space.cell() * 20.0;
      }
      const EnergyParams params{0.5, p, 0.0};
      const InequalityCertificate cert = mazya_check(space, u, ball, params);
      CHECK(cert.pass);
      if (p == 2.0) CHECK(cert.constant == doctest::Approx(64.0 / 3.0));
    }
  }
}

TEST_CASE("holefill trivial and shared-domain cases") {
  const Generated g = make_cantor(5);
  const double h = g.space.cell();
  const auto z = g.set.center(g.set.set_cells().front());
  const double r = 4.0 * h;
  const EnergyParams params{0.5, 2.0, 0.0};

  const GridFunction zero = make_grid_function(g.space);
  const InequalityCertificate c0 =
      holefill_check(g.space, g.set, zero, z, r, 2.0, 2.0, params);
  CHECK(c0.pass);
  CHECK(c0.lhs == 0.0);
  CHECK(c0.worst_case == "C1=0 C2=1");

  // sigma = 1: both hardy terms share B(z, kappa r), so (0,1) suffices
  const Truncation t = truncate(g.space, g.set, z, r);
  const DistanceField dist = distance_field(g.space, t.F);
  GridFunction u = make_grid_function(g.space);
  for (std::int64_t i = 0; i < g.space.cells(); ++i)
    u.values[static_cast<std::size_t>(i)] = std::min(1.0, dist.value(i) / r);
  const InequalityCertificate c1 =
      holefill_check(g.space, g.set, u, z, r, 1.0, 2.0, params);
  CHECK(c1.pass);
  CHECK(c1.worst_case == "C1=0 C2=1");

  CHECK_THROWS(holefill_check(g.space, g.set, zero, z, r, 0.5, 2.0, params));
  CHECK_THROWS(holefill_check(g.space, g.set, zero, z, r, 1.0, 1.0, params));
}

TEST_CASE("hardy quotient is finite and positive on cantor(6)") {
  const Generated g = make_cantor(6);
  const auto z = g.set.center(g.set.set_cells().front());
  const double r = set_diameter(g.set) / 8.0;
  const EnergyParams params{0.5, 2.0, 1.2};
  const InequalityCertificate cert =
      hardy_check(g.space, g.set, z, r, params, 3, 2);
  CHECK(cert.pass);
  CHECK(cert.constant > 0.0);
  CHECK(std::isfinite(cert.constant));
}

TEST_CASE("hardy check validates exponents") {
  const Generated g = make_cantor(5);
  const auto z = g.set.center(g.set.set_cells().front());
  const double r = set_diameter(g.set) / 8.0;
  CHECK_THROWS(static_cast<void>(
      hardy_check(g.space, g.set, z, r, {0.5, 2.0, 2.5}, 1, 1)));  // q > p
  CHECK_THROWS(static_cast<void>(
      hardy_check(g.space, g.set, z, r, {0.5, 2.0, 0.8}, 1, 1)));  // q < 1
}

TEST_CASE("energies are identical across thread counts") {
  // the kernel reduces per-cell partials in fixed order; repeated parallel
  // runs must produce the same bits
  Rng rng(55);
  GridSet space = GridSet::full({40, 40}, 0.1, {0.0, 0.0});
  const GridFunction u = random_function(space, rng, 1.0);
  const EnergyParams params{0.5, 2.0, 0.0};
  const Ball ball{space.center(space.index({20, 20})), 1.5};
  const double first = gagliardo_energy(space, u, ball, params);
  for (int rep = 0; rep < 3; ++rep)
    CHECK(gagliardo_energy(space, u, ball, params) == first);
}
