#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "rbfpu/kernels.hpp"
#include "rbfpu/partition.hpp"
#include "rbfpu/point_set.hpp"
#include "rbfpu/pu.hpp"

namespace rbfpu {

enum class EpsilonSpacing { log, linear };

/// Q shape parameters spanning [lo, hi], both ends included.
std::vector<double> epsilon_range(double lo, double hi, std::size_t count,
                                  EpsilonSpacing spacing = EpsilonSpacing::log);

/// Candidate radii and shape parameters searched on every patch.
struct SearchGrid {
  std::size_t radius_count = 6;  // P
  double radius_growth = 2.0;    // h: radii span [delta_j1, h * delta_j1]
  std::vector<double> epsilons = epsilon_range(0.1, 10.0, 30);
  double growth_step = 0.5;      // t in delta_j1 = delta (1 + m t)
  bool grow = true;              // disable to pin delta_j1 to the covering radius
  // Cells whose solve leaves a relative residual max|A c - f| / max(1, max|f|)
  // above this are treated as numerically singular (+inf), unless no cell of
  // the patch meets it. Since the Shepard weights form a convex combination,
  // this also bounds the error at the nodes.
  double max_residual = 5e-9;

  /// Throws ConfigError unless P >= 1, h > 1 (h = 1 allowed only for P = 1),
  /// 0 < t < 1, max_residual > 0 and the epsilons are positive and
  /// strictly increasing.
  void validate() const;
};

/// P x Q leave-one-out errors; +inf marks cells whose local system failed or
/// exceeded the residual limit. When every solvable cell exceeds the limit,
/// all of them are kept and `relaxed` is set.
struct ErrorMatrix {
  std::vector<double> radii;
  std::vector<double> epsilons;
  std::vector<double> entries;  // row-major, P rows
  bool relaxed = false;

  double at(std::size_t p, std::size_t q) const { return entries[p * epsilons.size() + q]; }
  double& at(std::size_t p, std::size_t q) { return entries[p * epsilons.size() + q]; }
};

/// Rippa's residuals e_i = c_i / (A^-1)_ii. Returns nullopt if a diagonal
/// entry is zero or the result is not finite.
std::optional<std::vector<double>> loocv_errors(std::span<const double> coefficients,
                                                std::span<const double> inv_diagonal);

/// Hypervolume of the M-ball of the given radius.
double ball_volume(std::size_t dim, double radius);

/// Points expected in a ball of radius delta under uniform density N/volume.
double expected_local_count(std::size_t n, double volume, double delta, std::size_t dim);

/// First radius delta (1 + m t), m = 0, 1, ..., whose ball holds at least
/// expected_local_count(n, volume, base_delta) points. Throws
/// DegenerateDataError once the radius passes l_box * sqrt(M).
double grow_radius(const BlockGrid& grid, std::span<const double> centre, double base_delta,
                   double t, std::size_t n, double volume);

/// Fills the error matrix over radii equispaced in [delta_j1, h delta_j1].
/// Throws PatchFitError when every cell is infeasible or a radius gathers
/// more than `max_local_points` nodes.
ErrorMatrix error_matrix(std::span<const double> centre, const BlockGrid& grid,
                         const PointSet& data, KernelFamily family, const SearchGrid& search,
                         double delta_j1,
                         std::size_t max_local_points = std::numeric_limits<std::size_t>::max());

struct Couple {
  double radius = 0.0;
  double epsilon = 0.0;
  std::size_t p = 0;
  std::size_t q = 0;
  double error = 0.0;
};

/// Cell with the smallest error; ties go to the smaller radius, then the
/// smaller shape parameter. Throws PatchFitError on an all-infinite matrix.
Couple select_couple(const ErrorMatrix& errors);

/// What the search chose on one patch.
struct PatchReport {
  std::vector<double> centre;
  double delta_j1 = 0.0;
  double radius = 0.0;
  double epsilon = 0.0;
  std::size_t local_count = 0;
  double loocv_error = 0.0;
  bool relaxed = false;  // no cell met the residual limit
};

struct BloocvConfig {
  KernelFamily family = KernelFamily::imq;
  SearchGrid search;
  DomainSpec domain;
  std::size_t max_local_points = 2000;
  unsigned threads = 1;
};

struct BloocvFit {
  PuModel model;
  std::vector<PatchReport> reports;
};

BloocvFit fit_bloocv(const PointSet& data, const BloocvConfig& config);

/// Comma-separated report: centre coordinates, delta_j1, radius, epsilon,
/// local count, minimal LOOCV error; one header line, one line per patch.
void write_report(std::ostream& out, std::span<const PatchReport> reports);

}  // namespace rbfpu
