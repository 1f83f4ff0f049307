#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rbfpu/kernels.hpp"
#include "rbfpu/partition.hpp"
#include "rbfpu/point_set.hpp"

namespace rbfpu {

using DomainTest = std::function<bool(std::span<const double>)>;

/// The interpolation domain. Both fields default to the bounding
/// hyperrectangle of the data; a custom membership test needs a volume.
struct DomainSpec {
  DomainTest contains;
  std::optional<double> volume;
};

/// Subdomain centres and the common minimal radius that makes the patches
/// a covering of the domain.
struct Covering {
  PointSet centres;
  std::size_t d_pu = 0;     // centres per axis before trimming to the domain
  double min_radius = 0.0;  // l_box / d_pu
  double volume = 0.0;
};

/// Grid of d_pu^M candidate centres on the box, d_pu = floor(l_box/2 * (n/volume)^(1/M)).
/// Candidates rejected by `domain_test` are dropped. Throws ConfigError when
/// d_pu would be zero.
Covering make_covering(const BoundingBox& box, std::size_t n, double volume,
                       const DomainTest& domain_test = {});

/// Box, volume and covering of a data set under a domain spec.
struct PuLayout {
  BoundingBox box;
  Covering covering;
};

PuLayout plan_layout(const PointSet& data, const DomainSpec& domain);

struct LocalSolution {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd inv_diagonal;  // diagonal of the inverse Gram matrix
  double residual = 0.0;         // max |A c - f| relative to max(1, max |f|)
};

/// Solves A c = f through one Cholesky factorization and recovers the
/// diagonal of A^-1 from the same factor. Returns nullopt when the
/// factorization meets a non-positive pivot or produces non-finite values.
std::optional<LocalSolution> solve_local(const Kernel& kernel, const PointSet& local_points,
                                         std::span<const double> local_values);
std::optional<LocalSolution> solve_gram(const Eigen::MatrixXd& gram,
                                        std::span<const double> local_values);

/// One hyperspherical patch and its local interpolant.
struct Subdomain {
  std::vector<double> centre;
  double radius = 0.0;
  double epsilon = 0.0;
  std::vector<std::size_t> node_indices;
  std::vector<double> coefficients;
  bool solvable = false;
  bool used_fallback = false;  // coefficients came from the pivoted LU solve
};

/// Unnormalized weight of a patch: Wendland C2 with support equal to the patch.
double patch_weight(double dist, double radius);

struct Weight {
  std::size_t subdomain;
  double value;
};

/// Shepard weights of every patch containing x, in subdomain order.
/// Throws CoverageError when no patch contains x.
std::vector<Weight> shepard_weights(std::span<const double> x,
                                    std::span<const Subdomain> subdomains);

/// A fitted partition-of-unity interpolant.
class PuModel {
 public:
  PuModel() = default;
  PuModel(KernelFamily family, PointSet data, std::vector<Subdomain> subdomains,
          double min_radius);

  KernelFamily family() const noexcept { return family_; }
  const PointSet& data() const noexcept { return data_; }
  const std::vector<Subdomain>& subdomains() const noexcept { return subdomains_; }
  double min_radius() const noexcept { return min_radius_; }
  std::size_t dim() const noexcept { return data_.dim(); }

  /// Local interpolant R_j at x.
  double local_value(std::size_t j, std::span<const double> x) const;

 private:
  KernelFamily family_ = KernelFamily::imq;
  PointSet data_;
  std::vector<Subdomain> subdomains_;
  double min_radius_ = 0.0;
};

/// Evaluates the global interpolant. Evaluation points are stored in their
/// own block grid so each patch only visits the points it overlaps.
/// Throws CoverageError naming the first uncovered point.
std::vector<double> evaluate(const PuModel& model, const PointSet& eval_points,
                             unsigned threads = 1);

/// Classical PU fit: every patch has the covering radius and the same
/// shape parameter. Patches that reject the Cholesky factorization are
/// solved by pivoted LU; empty patches contribute a zero local interpolant.
PuModel fit_classic(const PointSet& data, KernelFamily family, double epsilon,
                    const DomainSpec& domain = {}, unsigned threads = 1);

}  // namespace rbfpu
