#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "aikawa/fractal.hpp"
#include "aikawa/grid.hpp"

using namespace aikawa;

TEST_CASE("measure is bit count times cell volume") {
  GridSet g({4, 4}, 0.5, {0.0, 0.0});
  CHECK(g.measure() == 0.0);
  g.set(0);
  g.set(5);
  g.set(15);
  CHECK(g.popcount() == 3);
  CHECK(g.measure() == doctest::Approx(3 * 0.25).epsilon(1e-15));
  CHECK(g.cell_volume() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("index round trip and centers") {
  GridSet g({3, 5}, 1.0, {-1.0, 2.0});
  for (std::int64_t i = 0; i < g.cells(); ++i)
    CHECK(g.index(g.coords(i)) == i);
  const auto c = g.center(g.index({2, 4}));
  CHECK(c[0] == doctest::Approx(-1.0 + 2.5));
  CHECK(c[1] == doctest::Approx(2.0 + 4.5));
}

TEST_CASE("cell_at inverts center and rejects non-centers") {
  GridSet g({8}, 0.25, {1.0});
  for (std::int64_t i = 0; i < g.cells(); ++i)
    CHECK(cell_at(g, g.center(i)) == i);
  CHECK_THROWS(cell_at(g, {1.0}));          // a cell corner
  CHECK_THROWS(cell_at(g, {100.0}));        // outside
  CHECK_THROWS(cell_at(g, {1.125, 1.125})); // wrong dimension
}

TEST_CASE("set algebra and containment") {
  GridSet a({16}, 1.0, {0.0});
  GridSet b = a;
  a.set(3);
  a.set(7);
  b.set(7);
  b.set(9);
  const GridSet u = a.set_union(b);
  const GridSet i = a.set_intersection(b);
  CHECK(u.popcount() == 3);
  CHECK(i.popcount() == 1);
  CHECK(i.test(7));
  CHECK(i.is_subset_of(a));
  CHECK(i.is_subset_of(b));
  CHECK(a.is_subset_of(u));
  CHECK(!u.is_subset_of(a));
}

TEST_CASE("diameter of simple sets") {
  // 1-D: two endpoints of a 10-cell line, h=1 -> distance 9
  GridSet g({10}, 1.0, {0.0});
  g.set(0);
  g.set(9);
  CHECK(set_diameter(g) == doctest::Approx(9.0));

  // 2-D 3-4-5 triangle between cell centers
  GridSet q({8, 8}, 1.0, {0.0, 0.0});
  q.set(q.index({0, 0}));
  q.set(q.index({3, 4}));
  CHECK(set_diameter(q) == doctest::Approx(5.0));

  // single cell
  GridSet s({5}, 1.0, {0.0});
  s.set(2);
  CHECK(set_diameter(s) == 0.0);
}

TEST_CASE("diameter agrees with the quadratic scan on a large 2-D set") {
  // forces the convex-hull path and cross-checks it pairwise
  const Generated carp = make_sierpinski_carpet(3);
  const auto cells = carp.set.set_cells();
  double brute = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = i + 1; j < cells.size(); ++j)
      brute = std::max(brute, point_dist(carp.set.center(cells[i]),
                                         carp.set.center(cells[j])));
  CHECK(set_diameter(carp.set) == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("cantor prefix bit patterns") {
  const Generated c2 = make_cantor(2);
  // 9-cell segment inside the ambient line: offsets {0,2,6,8}
  const auto cells = c2.set.set_cells();
  REQUIRE(cells.size() == 4);
  const std::int64_t base = cells[0];
  CHECK(cells[1] == base + 2);
  CHECK(cells[2] == base + 6);
  CHECK(cells[3] == base + 8);
  CHECK(make_cantor(8).set.popcount() == 256);
}

TEST_CASE("sierpinski carpet counts") {
  const Generated c1 = make_sierpinski_carpet(1);
  CHECK(c1.set.popcount() == 8);
  CHECK(make_sierpinski_carpet(3).set.popcount() == 512);
  // depth-1 center cell is empty
  const auto cells = c1.set.set_cells();
  const auto c0 = c1.set.coords(cells.front());
  bool center_set = false;
  for (const auto idx : cells) {
    const auto c = c1.set.coords(idx);
    if (c[0] == c0[0] + 1 && c[1] == c0[1] + 1) center_set = true;
  }
  CHECK(!center_set);
}

TEST_CASE("generators embed in full ambient grids") {
  for (const char* kind : {"cantor(4)", "sierpinski_carpet(2)",
                           "hyperplane(2,64)", "point(2,32)"}) {
    const Generated g = generate(kind);
    CHECK(g.set.is_subset_of(g.space));
    CHECK(g.space.popcount() == g.space.cells());  // ambient grid is full
  }
  // the compact fractals get a 4x diameter margin so estimator balls fit
  for (const char* kind : {"cantor(4)", "sierpinski_carpet(2)"}) {
    const Generated g = generate(kind);
    CHECK(grid_diameter(g.space) >= 4.0 * set_diameter(g.set) * 0.99);
  }
}

TEST_CASE("spec string parser handles nesting and rejects junk") {
  const Generated u = generate("union(hyperplane(2,64),point(2,64))");
  const Generated hp = make_hyperplane(2, 64);
  const Generated pt = make_point(2, 64);
  CHECK(u.set.popcount() == hp.set.set_union(pt.set).popcount());

  const Generated pr = generate("product(cantor(2),cantor(2))");
  CHECK(pr.set.popcount() == 16);
  CHECK(pr.set.dim() == 2);

  CHECK_THROWS(generate("cantor"));
  CHECK_THROWS(generate("cantor(2) trailing"));
  CHECK_THROWS(generate("nope(3)"));
  CHECK_THROWS(generate("cantor(0)"));
}

TEST_CASE("gridset file io round trip is bit exact") {
  const Generated g = make_cantor(5);
  const std::string path = "io_roundtrip.agrd";
  write_gridset(g.set, path);
  const GridSet back = read_gridset(path);
  CHECK(back.same_geometry(g.set));
  CHECK(back.same_bits(g.set));

  // byte-identical re-serialization
  write_gridset(back, path + ".2");
  std::ifstream a(path, std::ios::binary), b(path + ".2", std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(a)), {});
  std::string sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);
  std::remove(path.c_str());
  std::remove((path + ".2").c_str());
}

TEST_CASE("malformed gridset files name the byte offset") {
  const std::string path = "io_bad.agrd";
  {
    std::ofstream f(path, std::ios::binary);
    f << "AGRD1\ndim 1\nshape bogus\n";
  }
  try {
    read_gridset(path);
    CHECK(false);
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
  std::remove(path.c_str());
}
