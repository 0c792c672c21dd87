#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "aikawa/distance.hpp"
#include "aikawa/fractal.hpp"
#include "aikawa/rng.hpp"
#include "aikawa/truncation.hpp"

using namespace aikawa;

namespace {

// Straightforward fixed-point re-implementation of the recursion, O(|E|^2)
// per stage, used as the independent oracle.
GridSet truncate_oracle(const GridSet& E, std::int64_t zidx, double r) {
  const double h = E.cell();
  auto within = [&](std::int64_t a, std::int64_t b, double rad) {
    const double t = rad / h;
    return static_cast<double>(E.index_dist2(a, b)) <= t * t * (1.0 + 1e-12);
  };
  GridSet f = GridSet::empty_like(E);
  for (const auto e : E.set_cells())
    if (within(e, zidx, r / 2.0)) f.set(e);
  double rho = r / 4.0;
  for (;;) {
    GridSet next = f;
    for (const auto e : E.set_cells()) {
      if (next.test(e)) continue;
      for (const auto x : f.set_cells())
        if (within(e, x, rho)) {
          next.set(e);
          break;
        }
    }
    if (next.same_bits(f)) break;
    f = next;
    rho /= 2.0;
  }
  return f;
}

void check_invariants(const GridSet& space, const Truncation& t) {
  const std::int64_t zidx = cell_at(space, t.z);
  CHECK(t.F.test(zidx));
  CHECK(t.F.is_subset_of(t.E));
  const double cut = (t.r / space.cell()) * (t.r / space.cell()) * (1.0 + 1e-12);
  for (const auto c : t.F.set_cells())
    CHECK(static_cast<double>(space.index_dist2(c, zidx)) <= cut);
  REQUIRE(!t.stages.empty());
  for (std::size_t j = 1; j < t.stages.size(); ++j)
    CHECK(t.stages[j - 1].is_subset_of(t.stages[j]));
  CHECK(t.stages.back().same_bits(t.F));
  CHECK(static_cast<double>(t.stages.size()) <=
        std::log2(t.r / space.cell()) + 2.0);
}

}  // namespace

TEST_CASE("truncating a single point returns the point in one stage") {
  const Generated g = make_point(1, 64);
  const auto z = g.set.center(g.set.set_cells().front());
  const Truncation t = truncate(g.space, g.set, z, 8.0 * g.space.cell());
  CHECK(t.F.same_bits(g.set));
  CHECK(t.stages.size() == 1);
}

TEST_CASE("full line at r = 8h fills the whole closed ball") {
  const Generated g = make_full(1, 64);
  const double h = g.space.cell();
  const auto z = g.space.center(32);
  const Truncation t = truncate(g.space, g.set, z, 8.0 * h);
  check_invariants(g.space, t);
  // The shrinking radii sum toward r = 8h, but stages with radius < h stop
  // adding cells, so the discrete fixed point reaches 4h + 2h + h = 7h.
  for (std::int64_t i = 0; i < g.space.cells(); ++i)
    CHECK(t.F.test(i) == (std::abs(i - 32) <= 7));
  CHECK(t.F.same_bits(truncate_oracle(g.set, 32, 8.0 * h)));
}

TEST_CASE("cantor(6) truncation matches the independent oracle") {
  const Generated g = make_cantor(6);
  const std::int64_t zidx = g.set.set_cells().front();
  const double r = set_diameter(g.set) / 3.0;
  const Truncation t = truncate(g.space, g.set, g.set.center(zidx), r);
  check_invariants(g.space, t);
  CHECK(t.F.same_bits(truncate_oracle(g.set, zidx, r)));
}

TEST_CASE("truncation invariants hold on randomized cases") {
  Rng rng(12);
  for (int trial = 0; trial < 12; ++trial) {
    const Generated g =
        trial % 2 ? make_cantor(4 + trial % 3) : make_sierpinski_carpet(2 + trial % 2);
    const auto cells = g.set.set_cells();
    const std::int64_t zidx = cells[static_cast<std::size_t>(
        rng.below(static_cast<std::int64_t>(cells.size())))];
    const double r =
        rng.uniform(3.0, 10.0) * g.space.cell() * std::pow(2.0, rng.below(3));
    const Truncation t = truncate(g.space, g.set, g.set.center(zidx), r);
    check_invariants(g.space, t);
  }
}

TEST_CASE("truncate is monotone in E") {
  const Generated g = make_cantor(5);
  GridSet smaller = GridSet::empty_like(g.set);
  Rng rng(77);
  for (const auto c : g.set.set_cells())
    if (rng.unit() < 0.6) smaller.set(c);
  const std::int64_t zidx = g.set.set_cells().front();
  smaller.set(zidx);
  const double r = set_diameter(g.set) / 3.0;
  const Truncation big = truncate(g.space, g.set, g.set.center(zidx), r);
  const Truncation small = truncate(g.space, smaller, g.set.center(zidx), r);
  CHECK(small.F.is_subset_of(big.F));
}

TEST_CASE("truncate rejects bad input") {
  const Generated g = make_cantor(4);
  const auto z = g.set.center(g.set.set_cells().front());
  CHECK_THROWS(truncate(g.space, g.set, z, g.space.cell()));  // r <= 2h
  const auto not_in_e = g.space.center(0);
  CHECK_THROWS(truncate(g.space, g.set, not_in_e, 8.0 * g.space.cell()));
}

TEST_CASE("big piece ball when E equals F accepts the nearest cell") {
  // set with diam <= r/2 truncates to itself, so the equality always holds
  const Generated g = make_cantor(4);
  const double r = 2.5 * set_diameter(g.set);
  const std::int64_t zidx = g.set.set_cells().front();
  const Truncation t = truncate(g.space, g.set, g.set.center(zidx), r);
  REQUIRE(t.F.same_bits(g.set));
  for (int m = 0; m < 3; ++m) {
    const auto x = g.set.center(zidx);
    const BigPieceBall b = find_big_piece_ball(t, x, m);
    CHECK(b.y == g.set.center(zidx));  // nearest E-cell to x is x itself
    CHECK(b.r_m == doctest::Approx(std::ldexp(r, -m - 1)));
  }
}

TEST_CASE("big piece ball on the full line verified by enumeration") {
  const Generated g = make_full(1, 128);
  const double h = g.space.cell();
  const auto z = g.space.center(64);
  const Truncation t = truncate(g.space, g.set, z, 16.0 * h);
  const BigPieceBall b = find_big_piece_ball(t, z, 0);
  // invariant 1: B(y, r_m) inside B(x, 8 r_m)
  CHECK(point_dist(b.y, b.x) <= 7.0 * b.r_m * (1.0 + 1e-12));
  // invariant 2: E and F agree on the closed ball B(y, r_m/2)
  for (std::int64_t i = 0; i < g.space.cells(); ++i)
    if (point_dist(g.space.center(i), b.y) <= b.r_m / 2.0)
      CHECK(g.set.test(i) == t.F.test(i));
}

TEST_CASE("big piece balls exist for 100 random pairs on cantor(6)") {
  const Generated g = make_cantor(6);
  const std::int64_t zidx = g.set.set_cells().front();
  const double r = set_diameter(g.set) / 3.0;
  const Truncation t = truncate(g.space, g.set, g.set.center(zidx), r);
  Rng rng(5);
  const auto f_cells = t.F.set_cells();
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = static_cast<int>(rng.below(4));
    const double r_m = std::ldexp(r, -m - 1);
    // admissible x: within 4 r_m of F
    const std::int64_t f = f_cells[static_cast<std::size_t>(
        rng.below(static_cast<std::int64_t>(f_cells.size())))];
    const auto near = ball_cells(g.space, {t.F.center(f), 4.0 * r_m});
    const auto x = g.space.center(near[static_cast<std::size_t>(
        rng.below(static_cast<std::int64_t>(near.size())))]);
    const BigPieceBall b = find_big_piece_ball(t, x, m);
    CHECK(point_dist(b.y, b.x) <= 7.0 * b.r_m * (1.0 + 1e-12));
    ++found;
  }
  CHECK(found == 100);
}

TEST_CASE("trivial truncated-aikawa certificate with constant integrand") {
  const Generated g = make_full(1, 256);
  const double h = g.space.cell();
  const auto z = g.space.center(128);
  const Truncation t = truncate(g.space, g.set, z, 32.0 * h);
  const InequalityCertificate cert =
      check_truncated_aikawa(g.space, t, 0.5, 100.0, 0.0, 50, 9);
  CHECK(cert.pass);
  CHECK(cert.lhs <= 100.0);
}

TEST_CASE("adversarial delta above the admissible level can fail, with audit") {
  const Generated g = make_cantor(6);
  const std::int64_t zidx = g.set.set_cells().front();
  const double r = set_diameter(g.set) / 3.0;
  const Truncation t = truncate(g.space, g.set, g.set.center(zidx), r);
  // delta close to 1 lets the adversary remove nearly everything
  const InequalityCertificate cert =
      check_truncated_aikawa(g.space, t, 0.5, 1.5, 0.95, 50, 9);
  if (!cert.pass) CHECK(!cert.worst_case.empty());
  CHECK(cert.constant == 1.5);
}
