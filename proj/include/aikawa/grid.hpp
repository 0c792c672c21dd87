// Discrete metric measure spaces: n-dimensional bitmask grids with
// counting measure scaled by cell volume.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace aikawa {

/// Hard cap on addressable cells per grid.
inline constexpr std::int64_t kMaxCells = std::int64_t{1} << 48;

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};

/// Bitmask subset of a uniform grid. Carries both ambient spaces and the
/// sets living inside them; measure of the set is popcount() * cell^dim.
class GridSet {
 public:
  GridSet() = default;
  GridSet(std::vector<std::int64_t> shape, double cell,
          std::vector<double> origin);

  int dim() const { return static_cast<int>(shape_.size()); }
  const std::vector<std::int64_t>& shape() const { return shape_; }
  double cell() const { return cell_; }
  const std::vector<double>& origin() const { return origin_; }
  std::int64_t cells() const { return cells_; }

  bool test(std::int64_t idx) const {
    return (bits_[static_cast<std::size_t>(idx >> 6)] >> (idx & 63)) & 1u;
  }
  void set(std::int64_t idx, bool value = true) {
    auto& w = bits_[static_cast<std::size_t>(idx >> 6)];
    const std::uint64_t m = std::uint64_t{1} << (idx & 63);
    if (value) w |= m; else w &= ~m;
  }

  std::int64_t popcount() const;
  bool empty() const { return popcount() == 0; }

  /// Set measure: popcount * h^n. Strictly positive when any bit is set.
  double measure() const;
  double cell_volume() const;

  /// Linear index <-> per-axis coordinates (row-major).
  std::vector<std::int64_t> coords(std::int64_t idx) const;
  std::int64_t index(const std::vector<std::int64_t>& c) const;

  /// Physical center of a cell: origin + (coord + 1/2) h per axis.
  std::vector<double> center(std::int64_t idx) const;

  /// Squared center-to-center distance in index units (exact integer).
  std::int64_t index_dist2(std::int64_t a, std::int64_t b) const;

  /// Indices of all set cells, ascending.
  std::vector<std::int64_t> set_cells() const;

  bool same_geometry(const GridSet& other) const;
  bool is_subset_of(const GridSet& other) const;
  bool same_bits(const GridSet& other) const;

  GridSet set_union(const GridSet& other) const;
  GridSet set_intersection(const GridSet& other) const;

  /// Full ambient grid with every bit set, same geometry.
  static GridSet full(std::vector<std::int64_t> shape, double cell,
                      std::vector<double> origin);

  /// Empty set with the geometry of `like`.
  static GridSet empty_like(const GridSet& like);

  const std::vector<std::uint64_t>& words() const { return bits_; }
  std::vector<std::uint64_t>& words() { return bits_; }

 private:
  std::vector<std::int64_t> shape_;
  double cell_ = 1.0;
  std::vector<double> origin_;
  std::vector<std::int64_t> strides_;
  std::int64_t cells_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Max pairwise cell-center distance over set cells. Exact; uses a convex
/// hull for large 2-D sets. Zero for single-cell sets.
double set_diameter(const GridSet& set);

/// Diameter of the ambient grid (full box), corner cell center to corner.
double grid_diameter(const GridSet& space);

/// Euclidean distance between two physical points.
double point_dist(const std::vector<double>& a, const std::vector<double>& b);

/// Index of the cell whose center is p; throws when p is not a cell center
/// of the grid (tolerance 1e-9 cells).
std::int64_t cell_at(const GridSet& g, const std::vector<double>& p);

// --- AGRD1 file format (bit-exact) ---
void write_gridset(const GridSet& g, const std::string& path);
GridSet read_gridset(const std::string& path);

}  // namespace aikawa
