#include "aikawa/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace aikawa {

GridSet::GridSet(std::vector<std::int64_t> shape, double cell,
                 std::vector<double> origin)
    : shape_(std::move(shape)), cell_(cell), origin_(std::move(origin)) {
  if (shape_.empty()) throw std::invalid_argument("grid: empty shape");
  if (cell_ <= 0.0) throw std::invalid_argument("grid: cell size must be > 0");
  if (origin_.size() != shape_.size())
    throw std::invalid_argument("grid: origin/shape dim mismatch");
  cells_ = 1;
  for (auto s : shape_) {
    if (s < 1) throw std::invalid_argument("grid: shape entries must be >= 1");
    if (cells_ > kMaxCells / s)
      throw std::invalid_argument("grid: cell count exceeds addressable bound");
    cells_ *= s;
  }
  if (cells_ >= kMaxCells)
    throw std::invalid_argument("grid: cell count exceeds addressable bound");
  strides_.assign(shape_.size(), 1);
  for (int a = static_cast<int>(shape_.size()) - 2; a >= 0; --a)
    strides_[a] = strides_[a + 1] * shape_[a + 1];
  bits_.assign(static_cast<std::size_t>((cells_ + 63) / 64), 0);
}

std::int64_t GridSet::popcount() const {
  std::int64_t n = 0;
  for (auto w : bits_) n += std::popcount(w);
  return n;
}

double GridSet::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= cell_;
  return v;
}

double GridSet::measure() const {
  return static_cast<double>(popcount()) * cell_volume();
}

std::vector<std::int64_t> GridSet::coords(std::int64_t idx) const {
  std::vector<std::int64_t> c(shape_.size());
  for (std::size_t a = 0; a < shape_.size(); ++a) {
    c[a] = idx / strides_[a];
    idx %= strides_[a];
  }
  return c;
}

std::int64_t GridSet::index(const std::vector<std::int64_t>& c) const {
  std::int64_t idx = 0;
  for (std::size_t a = 0; a < shape_.size(); ++a) idx += c[a] * strides_[a];
  return idx;
}

std::vector<double> GridSet::center(std::int64_t idx) const {
  auto c = coords(idx);
  std::vector<double> p(c.size());
  for (std::size_t a = 0; a < c.size(); ++a)
    p[a] = origin_[a] + (static_cast<double>(c[a]) + 0.5) * cell_;
  return p;
}

std::int64_t GridSet::index_dist2(std::int64_t a, std::int64_t b) const {
  auto ca = coords(a), cb = coords(b);
  std::int64_t d2 = 0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    const std::int64_t d = ca[i] - cb[i];
    d2 += d * d;
  }
  return d2;
}

std::vector<std::int64_t> GridSet::set_cells() const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(popcount()));
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    std::uint64_t word = bits_[w];
    while (word) {
      const int b = std::countr_zero(word);
      out.push_back(static_cast<std::int64_t>(w) * 64 + b);
      word &= word - 1;
    }
  }
  return out;
}

bool GridSet::same_geometry(const GridSet& other) const {
  return shape_ == other.shape_ && cell_ == other.cell_ &&
         origin_ == other.origin_;
}

bool GridSet::is_subset_of(const GridSet& other) const {
  if (!same_geometry(other)) return false;
  for (std::size_t w = 0; w < bits_.size(); ++w)
    if (bits_[w] & ~other.bits_[w]) return false;
  return true;
}

bool GridSet::same_bits(const GridSet& other) const {
  return same_geometry(other) && bits_ == other.bits_;
}

GridSet GridSet::set_union(const GridSet& other) const {
  if (!same_geometry(other))
    throw std::invalid_argument("set_union: geometry mismatch");
  GridSet g = *this;
  for (std::size_t w = 0; w < bits_.size(); ++w) g.bits_[w] |= other.bits_[w];
  return g;
}

GridSet GridSet::set_intersection(const GridSet& other) const {
  if (!same_geometry(other))
    throw std::invalid_argument("set_intersection: geometry mismatch");
  GridSet g = *this;
  for (std::size_t w = 0; w < bits_.size(); ++w) g.bits_[w] &= other.bits_[w];
  return g;
}

GridSet GridSet::full(std::vector<std::int64_t> shape, double cell,
                      std::vector<double> origin) {
  GridSet g(std::move(shape), cell, std::move(origin));
  const std::int64_t n = g.cells();
  for (std::size_t w = 0; w < g.bits_.size(); ++w) g.bits_[w] = ~std::uint64_t{0};
  // clear the tail past the last cell
  const int tail = static_cast<int>(n & 63);
  if (tail != 0) g.bits_.back() &= (std::uint64_t{1} << tail) - 1;
  return g;
}

GridSet GridSet::empty_like(const GridSet& like) {
  return GridSet(like.shape(), like.cell(), like.origin());
}

double point_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::sqrt(d2);
}

std::int64_t cell_at(const GridSet& g, const std::vector<double>& p) {
  if (static_cast<int>(p.size()) != g.dim())
    throw std::invalid_argument("cell_at: dimension mismatch");
  std::vector<std::int64_t> c(p.size());
  for (std::size_t a = 0; a < p.size(); ++a) {
    const double x = (p[a] - g.origin()[a]) / g.cell() - 0.5;
    c[a] = static_cast<std::int64_t>(std::llround(x));
    if (c[a] < 0 || c[a] >= g.shape()[a] ||
        std::abs(x - static_cast<double>(c[a])) > 1e-9)
      throw std::invalid_argument("cell_at: point is not a cell center");
  }
  return g.index(c);
}

double grid_diameter(const GridSet& space) {
  double d2 = 0.0;
  for (int a = 0; a < space.dim(); ++a) {
    const double d = static_cast<double>(space.shape()[a] - 1) * space.cell();
    d2 += d * d;
  }
  return std::sqrt(d2);
}

namespace {

// Max squared index distance over point set, O(K^2).
std::int64_t max_pair_dist2(const std::vector<std::vector<std::int64_t>>& pts) {
  std::int64_t best = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      std::int64_t d2 = 0;
      for (std::size_t a = 0; a < pts[i].size(); ++a) {
        const std::int64_t d = pts[i][a] - pts[j][a];
        d2 += d * d;
      }
      best = std::max(best, d2);
    }
  return best;
}

// Andrew monotone chain; input must be lexicographically sorted and unique.
std::vector<std::vector<std::int64_t>> hull2d(
    std::vector<std::vector<std::int64_t>> pts) {
  const auto cross = [](const std::vector<std::int64_t>& o,
                        const std::vector<std::int64_t>& a,
                        const std::vector<std::int64_t>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<std::vector<std::int64_t>> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace

double set_diameter(const GridSet& set) {
  const auto cells = set.set_cells();
  if (cells.empty()) throw std::invalid_argument("set_diameter: empty set");
  if (cells.size() == 1) return 0.0;
  if (set.dim() == 1) {
    return static_cast<double>(cells.back() - cells.front()) * set.cell();
  }
  std::vector<std::vector<std::int64_t>> pts;
  pts.reserve(cells.size());
  for (auto c : cells) pts.push_back(set.coords(c));
  std::int64_t d2;
  if (pts.size() <= (std::size_t{1} << 12) || set.dim() != 2) {
    if (pts.size() > (std::size_t{1} << 20))
      throw std::invalid_argument("set_diameter: set too large for exact diameter");
    d2 = max_pair_dist2(pts);
  } else {
    d2 = max_pair_dist2(hull2d(std::move(pts)));
  }
  return std::sqrt(static_cast<double>(d2)) * set.cell();
}

// --- AGRD1 I/O ---

void write_gridset(const GridSet& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "AGRD1\n";
  out << "dim " << g.dim() << "\n";
  out << "shape";
  for (auto s : g.shape()) out << " " << s;
  out << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", g.cell());
  out << "cell " << buf << "\n";
  out << "origin";
  for (auto o : g.origin()) {
    std::snprintf(buf, sizeof buf, "%.17g", o);
    out << " " << buf;
  }
  out << "\n";
  out << "data\n";
  const std::int64_t nbytes = (g.cells() + 7) / 8;
  std::vector<unsigned char> bytes(static_cast<std::size_t>(nbytes), 0);
  // row-major cell order, LSB-first within each byte
  for (std::int64_t i = 0; i < g.cells(); ++i)
    if (g.test(i))
      bytes[static_cast<std::size_t>(i >> 3)] |=
          static_cast<unsigned char>(1u << (i & 7));
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {
[[noreturn]] void parse_fail(const std::string& path, std::int64_t offset,
                             const std::string& what) {
  std::ostringstream os;
  os << "malformed GridSet file " << path << " at byte offset " << offset
     << ": " << what;
  throw std::runtime_error(os.str());
}
}  // namespace

GridSet read_gridset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  auto expect_line = [&](const std::string& what) -> std::string {
    const std::int64_t off = in.tellg();
    std::string line;
    if (!std::getline(in, line)) parse_fail(path, off, "missing " + what);
    return line;
  };
  {
    const std::int64_t off = in.tellg();
    if (expect_line("magic") != "AGRD1") parse_fail(path, off, "bad magic");
  }
  int dim = 0;
  {
    const std::int64_t off = in.tellg();
    std::istringstream is(expect_line("dim"));
    std::string tag;
    if (!(is >> tag >> dim) || tag != "dim" || dim < 1)
      parse_fail(path, off, "bad dim line");
  }
  std::vector<std::int64_t> shape(static_cast<std::size_t>(dim));
  {
    const std::int64_t off = in.tellg();
    std::istringstream is(expect_line("shape"));
    std::string tag;
    is >> tag;
    if (tag != "shape") parse_fail(path, off, "bad shape line");
    for (auto& s : shape)
      if (!(is >> s)) parse_fail(path, off, "bad shape line");
  }
  double cell = 0.0;
  {
    const std::int64_t off = in.tellg();
    std::istringstream is(expect_line("cell"));
    std::string tag;
    if (!(is >> tag >> cell) || tag != "cell")
      parse_fail(path, off, "bad cell line");
  }
  std::vector<double> origin(static_cast<std::size_t>(dim));
  {
    const std::int64_t off = in.tellg();
    std::istringstream is(expect_line("origin"));
    std::string tag;
    is >> tag;
    if (tag != "origin") parse_fail(path, off, "bad origin line");
    for (auto& o : origin)
      if (!(is >> o)) parse_fail(path, off, "bad origin line");
  }
  {
    const std::int64_t off = in.tellg();
    if (expect_line("data") != "data") parse_fail(path, off, "bad data line");
  }
  GridSet g(shape, cell, origin);
  const std::int64_t nbytes = (g.cells() + 7) / 8;
  std::vector<unsigned char> bytes(static_cast<std::size_t>(nbytes));
  const std::int64_t off = in.tellg();
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(nbytes));
  if (in.gcount() != nbytes) parse_fail(path, off + in.gcount(), "truncated data");
  for (std::int64_t i = 0; i < g.cells(); ++i)
    if ((bytes[static_cast<std::size_t>(i >> 3)] >> (i & 7)) & 1u) g.set(i);
  return g;
}

}  // namespace aikawa
