#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rbfpu/point_set.hpp"

namespace rbfpu {

/// Axis-aligned hull of a point set. `l_box` is the edge of the bounding
/// cube: the largest per-axis maximum minus the smallest per-axis minimum.
struct BoundingBox {
  std::vector<double> mins;
  std::vector<double> maxs;
  double l_box = 0.0;

  std::size_t dim() const noexcept { return mins.size(); }
  bool degenerate() const noexcept { return !(l_box > 0.0); }
  /// Hypervolume of the hyperrectangle spanned by mins/maxs.
  double volume() const;
  bool contains(std::span<const double> x, double tolerance = 0.0) const;
};

BoundingBox bounding_box(const PointSet& points);

/// Strip index k_m = ceil((coordinate - min) / delta), clamped to [1, q].
std::size_t strip_index(double coordinate, double min, double delta, std::size_t q);

/// Linear block number in {1..q^M} of the block at the given strips.
/// Throws InputError when a strip lies outside [1, q].
std::size_t block_index(std::span<const std::size_t> strips, std::size_t q);

/// Neighbour-shell half width (in blocks) that encloses a ball of the given
/// radius around any point of the centre block: max(1, ceil(radius/delta)).
std::size_t shell_half_width(double radius, double delta);

struct QueryStats {
  std::size_t blocks_visited = 0;
  std::size_t candidates = 0;
};

/// Integer-based partitioning structure: the box is cut into q^M cubic
/// blocks of edge `delta` and every point index is stored in its block.
///
/// The grid keeps a reference to the point set it was built from; the set
/// must outlive the grid. After construction the grid is immutable and
/// range queries may run concurrently.
class BlockGrid {
 public:
  BlockGrid(const PointSet& points, BoundingBox box, double delta);

  const BoundingBox& box() const noexcept { return box_; }
  double delta() const noexcept { return delta_; }
  std::size_t q() const noexcept { return q_; }
  std::size_t dim() const noexcept { return box_.dim(); }
  std::size_t block_count() const noexcept { return offsets_.size() - 1; }
  const PointSet& points() const noexcept { return *points_; }

  /// Point indices stored in block k (1-based, as in block_index).
  std::span<const std::size_t> bucket(std::size_t k) const;

  /// Number of strip/block index evaluations performed while building.
  std::size_t index_computations() const noexcept { return index_computations_; }

  /// Indices of points with |x_i - centre| <= radius, ascending.
  std::vector<std::size_t> range_query(std::span<const double> centre, double radius,
                                       QueryStats* stats = nullptr) const;

  std::size_t count_in_ball(std::span<const double> centre, double radius) const;

 private:
  template <class Visit>
  void for_each_candidate(std::span<const double> centre, double radius, Visit&& visit,
                          QueryStats* stats) const;

  const PointSet* points_;
  BoundingBox box_;
  double delta_;
  std::size_t q_ = 1;
  std::vector<std::size_t> offsets_;  // CSR: bucket k-1 spans [offsets_[k-1], offsets_[k])
  std::vector<std::size_t> indices_;
  std::size_t index_computations_ = 0;
};

inline BlockGrid build_ips(const PointSet& points, const BoundingBox& box, double delta) {
  return BlockGrid(points, box, delta);
}

}  // namespace rbfpu
