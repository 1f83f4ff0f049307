#include "rbfpu/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rbfpu/errors.hpp"

namespace rbfpu {

namespace {

constexpr std::size_t kMaxBlocks = std::size_t{1} << 24;

// Relative widening of the query extent so that rounding in c +- r can
// never exclude a block holding a point that passes the distance test.
constexpr double kExtentSlack = 1e-12;

}  // namespace

double BoundingBox::volume() const {
  double v = 1.0;
  for (std::size_t m = 0; m < dim(); ++m) v *= maxs[m] - mins[m];
  return v;
}

bool BoundingBox::contains(std::span<const double> x, double tolerance) const {
  for (std::size_t m = 0; m < dim(); ++m) {
    if (x[m] < mins[m] - tolerance || x[m] > maxs[m] + tolerance) return false;
  }
  return true;
}

BoundingBox bounding_box(const PointSet& points) {
  if (points.empty()) throw InputError("bounding box of an empty point set");
  const std::size_t dim = points.dim();
  BoundingBox box;
  box.mins.assign(dim, std::numeric_limits<double>::infinity());
  box.maxs.assign(dim, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t m = 0; m < dim; ++m) {
      box.mins[m] = std::min(box.mins[m], points.coord(i, m));
      box.maxs[m] = std::max(box.maxs[m], points.coord(i, m));
    }
  }
  box.l_box = *std::max_element(box.maxs.begin(), box.maxs.end()) -
              *std::min_element(box.mins.begin(), box.mins.end());
  return box;
}

std::size_t strip_index(double coordinate, double min, double delta, std::size_t q) {
  const double k = std::ceil((coordinate - min) / delta);
  if (!(k >= 1.0)) return 1;
  if (k >= static_cast<double>(q)) return q;
  return static_cast<std::size_t>(k);
}

std::size_t block_index(std::span<const std::size_t> strips, std::size_t q) {
  std::size_t k = 0;
  for (std::size_t s : strips) {
    if (s < 1 || s > q) {
      throw InputError("strip index " + std::to_string(s) + " outside [1, " +
                       std::to_string(q) + "]");
    }
    k = k * q + (s - 1);
  }
  return k + 1;
}

std::size_t shell_half_width(double radius, double delta) {
  const double n = std::ceil(radius / delta);
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

BlockGrid::BlockGrid(const PointSet& points, BoundingBox box, double delta)
    : points_(&points), box_(std::move(box)), delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InputError("block edge must be positive and finite");
  }
  if (points.dim() != box_.dim()) throw InputError("box and points differ in dimension");
  const std::size_t dim = box_.dim();

  q_ = box_.degenerate() ? 1
                         : std::max<std::size_t>(
                               1, static_cast<std::size_t>(std::ceil(box_.l_box / delta)));
  std::size_t blocks = 1;
  for (std::size_t m = 0; m < dim; ++m) {
    if (blocks > kMaxBlocks / q_) {
      throw ConfigError("block grid too large: q = " + std::to_string(q_) + " in " +
                        std::to_string(dim) + " dimensions");
    }
    blocks *= q_;
  }

  const double tolerance = 1e-9 * std::max(1.0, box_.l_box);
  const std::size_t n = points.size();
  std::vector<std::size_t> block_of(n);
  std::vector<std::size_t> strips(dim);
  for (std::size_t i = 0; i < n; ++i) {
    auto x = points.point(i);
    if (!box_.contains(x, tolerance)) {
      throw InputError("point " + std::to_string(i) + " lies outside the bounding box");
    }
    if (box_.degenerate()) {
      block_of[i] = 1;
    } else {
      for (std::size_t m = 0; m < dim; ++m) strips[m] = strip_index(x[m], box_.mins[m], delta_, q_);
      block_of[i] = block_index(strips, q_);
    }
    ++index_computations_;
  }

  offsets_.assign(blocks + 1, 0);
  for (std::size_t k : block_of) ++offsets_[k];
  for (std::size_t k = 1; k <= blocks; ++k) offsets_[k] += offsets_[k - 1];
  indices_.resize(n);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) indices_[fill[block_of[i] - 1]++] = i;
}

std::span<const std::size_t> BlockGrid::bucket(std::size_t k) const {
  if (k < 1 || k > block_count()) throw InputError("block index out of range");
  return {indices_.data() + offsets_[k - 1], offsets_[k] - offsets_[k - 1]};
}

template <class Visit>
void BlockGrid::for_each_candidate(std::span<const double> centre, double radius, Visit&& visit,
                                   QueryStats* stats) const {
  const std::size_t dim = box_.dim();
  if (centre.size() != dim) throw InputError("query centre has the wrong dimension");
  auto visit_block = [&](std::size_t k) {
    for (std::size_t idx : bucket(k)) visit(idx);
    if (stats) {
      ++stats->blocks_visited;
      stats->candidates += offsets_[k] - offsets_[k - 1];
    }
  };
  if (box_.degenerate()) {
    visit_block(1);
    return;
  }

  const double reach = radius * (1.0 + kExtentSlack);
  std::vector<std::size_t> lo(dim), hi(dim), cur(dim);
  for (std::size_t m = 0; m < dim; ++m) {
    lo[m] = strip_index(centre[m] - reach, box_.mins[m], delta_, q_);
    hi[m] = strip_index(centre[m] + reach, box_.mins[m], delta_, q_);
  }
  cur = lo;
  while (true) {
    visit_block(block_index(cur, q_));
    std::size_t m = dim;
    while (m > 0) {
      --m;
      if (cur[m] < hi[m]) {
        ++cur[m];
        break;
      }
      cur[m] = lo[m];
      if (m == 0) return;
    }
  }
}

std::vector<std::size_t> BlockGrid::range_query(std::span<const double> centre, double radius,
                                                QueryStats* stats) const {
  std::vector<std::size_t> found;
  for_each_candidate(
      centre, radius,
      [&](std::size_t i) {
        if (distance(points_->point(i), centre) <= radius) found.push_back(i);
      },
      stats);
  std::sort(found.begin(), found.end());
  return found;
}

std::size_t BlockGrid::count_in_ball(std::span<const double> centre, double radius) const {
  std::size_t count = 0;
  for_each_candidate(
      centre, radius,
      [&](std::size_t i) {
        if (distance(points_->point(i), centre) <= radius) ++count;
      },
      nullptr);
  return count;
}

}  // namespace rbfpu
