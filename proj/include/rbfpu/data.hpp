#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rbfpu/partition.hpp"
#include "rbfpu/point_set.hpp"

namespace rbfpu {

/// First N Halton points in [0,1]^M (bases = first M primes, M <= 10),
/// starting at sequence index 1 so the origin is excluded.
PointSet halton(std::size_t n, std::size_t dim);

/// Deterministic rings around `focus` inside the unit box. Ring levels shrink
/// geometrically from 1 (the box boundary) to `ratio` (innermost ring), so
/// points crowd around the focus. The first point is the focus itself.
PointSet clustered(std::size_t n, std::span<const double> focus, double ratio = 0.02);

/// side^M points on a regular grid over [lo_m, hi_m], last axis fastest.
PointSet uniform_grid(std::size_t side, std::span<const double> lo, std::span<const double> hi);

enum class TestFunction { f1, f2 };

TestFunction parse_test_function(std::string_view name);

/// f1 = 16 x1 x2 (1-x1)(1-x2); f2 = x2/2 * cos(4 x1^2 + x2^2 - 1)^4. 2-D only.
double test_function(TestFunction id, std::span<const double> x);

/// Sets values[i] = f(point i).
void sample(PointSet& points, TestFunction id);

struct ErrorMetrics {
  double rmse = 0.0;
  double mae = 0.0;  // maximum absolute error
};

ErrorMetrics rmse_mae(std::span<const double> predicted, std::span<const double> truth);

struct Regularity {
  double fill = 0.0;        // h, discretized sup of the nearest-node distance
  double separation = 0.0;  // q, half the minimal pairwise distance
};

/// q exactly; h as the max over a probe_side^M grid on `region` (default:
/// the bounding box of the points) of the distance to the nearest node.
Regularity fill_separation(const PointSet& points, std::size_t probe_side = 101,
                           const std::optional<BoundingBox>& region = std::nullopt);

/// Every k-th point (1-based positions k, 2k, ...) goes to validation.
struct Split {
  PointSet train;
  PointSet validation;
};
Split holdout_every_kth(const PointSet& points, std::size_t k);

/// Point files: header `# dim=M n=N values=yes|no`, then one point per line
/// (M coordinates, then the value when present). Whitespace or commas
/// separate fields; blank lines and further `#` lines are ignored.
PointSet read_points(const std::filesystem::path& path);
void write_points(const std::filesystem::path& path, const PointSet& points);

/// `x y value` triples for plotting tools; a blank line follows every
/// `row_length` points (gnuplot grid layout). Other dimensions write all
/// coordinates then the value.
void write_grid(const std::filesystem::path& path, const PointSet& points,
                std::span<const double> values, std::size_t row_length);

}  // namespace rbfpu
