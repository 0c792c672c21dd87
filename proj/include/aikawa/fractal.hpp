// Ground-truth test sets: self-similar fractal prefixes and elementary
// sets embedded in ambient full grids with room for the balls the
// estimators need (margin >= 4x set diameter).
#pragma once

#include "aikawa/grid.hpp"

namespace aikawa {

/// Ambient space plus the subset living in it.
struct Generated {
  GridSet space;
  GridSet set;
};

/// Middle-thirds Cantor set prefix at depth k on a 3^k-cell segment,
/// embedded in a 4*3^k-cell line; cell size 3^-k.
Generated make_cantor(int depth);

/// Sierpinski carpet prefix at depth k (8^k cells on a 3^k x 3^k block),
/// embedded in a (4*3^k)^2 grid; cell size 3^-k.
Generated make_sierpinski_carpet(int depth);

/// One slab of a full dim-grid with `side` cells per axis, perpendicular
/// to `axis`; cell size 1/side.
Generated make_hyperplane(int dim, std::int64_t side, int axis = 0);

/// Single cell at coordinate floor(3*side/4) per axis in a full grid.
Generated make_point(int dim, std::int64_t side);

/// The full grid itself (E = X).
Generated make_full(int dim, std::int64_t side);

Generated make_union(const Generated& a, const Generated& b);
Generated make_product(const Generated& a, const Generated& b);

/// Parse a fractal-spec string, e.g. "cantor(8)", "sierpinski_carpet(5)",
/// "hyperplane(2,512)", "point(2,64)", "full(1,64)",
/// "union(hyperplane(2,512),point(2,512))", "product(cantor(3),cantor(3))".
Generated generate(const std::string& kind);

}  // namespace aikawa
