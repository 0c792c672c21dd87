#include "aikawa/fractal.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace aikawa {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > kMaxCells / base)
      throw std::invalid_argument("fractal depth exceeds addressable bound");
    v *= base;
  }
  return v;
}

// Digits of i in base 3; true when no digit equals 1 (kept by the middle
// thirds removal at every level up to `depth`).
bool cantor_kept(std::int64_t i, int depth) {
  for (int d = 0; d < depth; ++d) {
    if (i % 3 == 1) return false;
    i /= 3;
  }
  return true;
}

// Carpet keeps (i,j) unless both base-3 digits equal 1 at some level.
bool carpet_kept(std::int64_t i, std::int64_t j, int depth) {
  for (int d = 0; d < depth; ++d) {
    if (i % 3 == 1 && j % 3 == 1) return false;
    i /= 3;
    j /= 3;
  }
  return true;
}

}  // namespace

Generated make_cantor(int depth) {
  if (depth < 1) throw std::invalid_argument("cantor: depth must be >= 1");
  const std::int64_t n = ipow(3, depth);
  const std::int64_t ambient = 4 * n;
  const double h = 1.0 / static_cast<double>(n);
  GridSet space = GridSet::full({ambient}, h, {0.0});
  GridSet set = GridSet::empty_like(space);
  const std::int64_t off = (ambient - n) / 2;
  for (std::int64_t i = 0; i < n; ++i)
    if (cantor_kept(i, depth)) set.set(off + i);
  return {std::move(space), std::move(set)};
}

Generated make_sierpinski_carpet(int depth) {
  if (depth < 1)
    throw std::invalid_argument("sierpinski_carpet: depth must be >= 1");
  const std::int64_t n = ipow(3, depth);
  const std::int64_t ambient = 4 * n;
  if (ambient > kMaxCells / ambient)
    throw std::invalid_argument("fractal depth exceeds addressable bound");
  const double h = 1.0 / static_cast<double>(n);
  GridSet space = GridSet::full({ambient, ambient}, h, {0.0, 0.0});
  GridSet set = GridSet::empty_like(space);
  const std::int64_t off = (ambient - n) / 2;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j)
      if (carpet_kept(i, j, depth))
        set.set((off + i) * ambient + (off + j));
  return {std::move(space), std::move(set)};
}

Generated make_hyperplane(int dim, std::int64_t side, int axis) {
  if (dim < 1 || side < 2 || axis < 0 || axis >= dim)
    throw std::invalid_argument("hyperplane: bad parameters");
  std::vector<std::int64_t> shape(static_cast<std::size_t>(dim), side);
  const double h = 1.0 / static_cast<double>(side);
  GridSet space = GridSet::full(shape, h, std::vector<double>(dim, 0.0));
  GridSet set = GridSet::empty_like(space);
  const std::int64_t mid = side / 2;
  for (std::int64_t i = 0; i < space.cells(); ++i)
    if (space.coords(i)[static_cast<std::size_t>(axis)] == mid) set.set(i);
  return {std::move(space), std::move(set)};
}

Generated make_point(int dim, std::int64_t side) {
  if (dim < 1 || side < 2) throw std::invalid_argument("point: bad parameters");
  std::vector<std::int64_t> shape(static_cast<std::size_t>(dim), side);
  const double h = 1.0 / static_cast<double>(side);
  GridSet space = GridSet::full(shape, h, std::vector<double>(dim, 0.0));
  GridSet set = GridSet::empty_like(space);
  std::vector<std::int64_t> c(static_cast<std::size_t>(dim), 3 * side / 4);
  set.set(set.index(c));
  return {std::move(space), std::move(set)};
}

Generated make_full(int dim, std::int64_t side) {
  if (dim < 1 || side < 1) throw std::invalid_argument("full: bad parameters");
  std::vector<std::int64_t> shape(static_cast<std::size_t>(dim), side);
  const double h = 1.0 / static_cast<double>(side);
  GridSet space = GridSet::full(shape, h, std::vector<double>(dim, 0.0));
  GridSet set = space;
  return {std::move(space), std::move(set)};
}

Generated make_union(const Generated& a, const Generated& b) {
  if (!a.space.same_geometry(b.space))
    throw std::invalid_argument("union: ambient geometry mismatch");
  return {a.space, a.set.set_union(b.set)};
}

Generated make_product(const Generated& a, const Generated& b) {
  if (a.space.cell() != b.space.cell())
    throw std::invalid_argument("product: cell size mismatch");
  std::vector<std::int64_t> shape = a.space.shape();
  shape.insert(shape.end(), b.space.shape().begin(), b.space.shape().end());
  std::vector<double> origin = a.space.origin();
  origin.insert(origin.end(), b.space.origin().begin(), b.space.origin().end());
  GridSet space = GridSet::full(shape, a.space.cell(), origin);
  GridSet set = GridSet::empty_like(space);
  const auto ca = a.set.set_cells();
  const auto cb = b.set.set_cells();
  const std::int64_t nb = b.space.cells();
  for (auto ia : ca)
    for (auto ib : cb) set.set(ia * nb + ib);
  return {std::move(space), std::move(set)};
}

namespace {

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c))
      throw std::invalid_argument("fractal spec: expected '" +
                                  std::string(1, c) + "' in \"" + s + "\"");
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (start == pos)
      throw std::invalid_argument("fractal spec: expected name in \"" + s + "\"");
    return s.substr(start, pos - start);
  }
  std::int64_t integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (start == pos)
      throw std::invalid_argument("fractal spec: expected integer in \"" + s +
                                  "\"");
    return std::stoll(s.substr(start, pos - start));
  }

  Generated parse() {
    const std::string name = ident();
    expect('(');
    Generated out = dispatch(name);
    expect(')');
    return out;
  }

  Generated dispatch(const std::string& name) {
    if (name == "cantor") return make_cantor(static_cast<int>(integer()));
    if (name == "sierpinski_carpet" || name == "carpet")
      return make_sierpinski_carpet(static_cast<int>(integer()));
    if (name == "hyperplane") {
      const int dim = static_cast<int>(integer());
      expect(',');
      const std::int64_t side = integer();
      int axis = 0;
      if (eat(',')) axis = static_cast<int>(integer());
      return make_hyperplane(dim, side, axis);
    }
    if (name == "point") {
      const int dim = static_cast<int>(integer());
      expect(',');
      return make_point(dim, integer());
    }
    if (name == "full") {
      const int dim = static_cast<int>(integer());
      expect(',');
      return make_full(dim, integer());
    }
    if (name == "union" || name == "product") {
      Generated a = parse();
      expect(',');
      Generated b = parse();
      return name == "union" ? make_union(a, b) : make_product(a, b);
    }
    throw std::invalid_argument("fractal spec: unknown kind \"" + name + "\"");
  }
};

}  // namespace

Generated generate(const std::string& kind) {
  Parser p{kind};
  Generated g = p.parse();
  p.skip_ws();
  if (p.pos != kind.size())
    throw std::invalid_argument("fractal spec: trailing input in \"" + kind +
                                "\"");
  return g;
}

}  // namespace aikawa
