#pragma once

#include <cstddef>
#include <vector>

#include "rbfpu/partition.hpp"
#include "rbfpu/point_set.hpp"

namespace rbfpu::tools {

/// Sort-based block partition, the O(N log N) baseline the integer-based
/// grid replaces. Points are sorted along each axis in turn and cut into
/// strips at the block edges. Only used for benchmarking and as a test
/// reference.
struct SortedBuckets {
  std::size_t q = 1;
  std::vector<std::vector<std::size_t>> buckets;  // bucket k-1 holds block k
};

SortedBuckets sort_partition(const PointSet& points, const BoundingBox& box, double delta);

}  // namespace rbfpu::tools
