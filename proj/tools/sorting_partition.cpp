#include "sorting_partition.hpp"

#include <algorithm>
#include <cmath>

#include "rbfpu/errors.hpp"

namespace rbfpu::tools {

namespace {

void split(const PointSet& points, const BoundingBox& box, double delta, std::size_t q,
           std::vector<std::size_t>::iterator first, std::vector<std::size_t>::iterator last,
           std::size_t axis, std::size_t block_prefix, SortedBuckets& out) {
  std::sort(first, last, [&](std::size_t a, std::size_t b) {
    return points.coord(a, axis) < points.coord(b, axis);
  });
  auto begin = first;
  for (std::size_t s = 1; s <= q; ++s) {
    auto end = last;
    if (s < q) {
      const double edge = box.mins[axis] + static_cast<double>(s) * delta;
      end = std::upper_bound(begin, last, edge, [&](double e, std::size_t i) {
        return e < points.coord(i, axis);
      });
    }
    const std::size_t block = block_prefix * q + (s - 1);
    if (axis + 1 == box.dim()) {
      auto& bucket = out.buckets[block];
      bucket.assign(begin, end);
      std::sort(bucket.begin(), bucket.end());
    } else if (begin != end) {
      split(points, box, delta, q, begin, end, axis + 1, block, out);
    }
    begin = end;
  }
}

}  // namespace

SortedBuckets sort_partition(const PointSet& points, const BoundingBox& box, double delta) {
  if (!(delta > 0.0)) throw InputError("block edge must be positive");
  SortedBuckets out;
  out.q = box.degenerate() ? 1
                           : std::max<std::size_t>(
                                 1, static_cast<std::size_t>(std::ceil(box.l_box / delta)));
  std::size_t blocks = 1;
  for (std::size_t m = 0; m < box.dim(); ++m) blocks *= out.q;
  out.buckets.resize(blocks);
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  split(points, box, delta, out.q, order.begin(), order.end(), 0, 0, out);
  return out;
}

}  // namespace rbfpu::tools
