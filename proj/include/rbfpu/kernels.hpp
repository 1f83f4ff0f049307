#pragma once

#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "rbfpu/point_set.hpp"

namespace rbfpu {

enum class KernelFamily { imq, matern_c2, wendland_c2, wendland_c6 };

std::string_view to_string(KernelFamily family);

/// Accepts the canonical names (imq, matern_c2, wendland_c2, wendland_c6)
/// and the short aliases matern, wendland2, wendland6. Throws ConfigError.
KernelFamily parse_kernel_family(std::string_view name);

/// A strictly positive definite radial kernel with shape parameter epsilon.
/// phi(0) = 1 for every family; Wendland kernels vanish for r >= 1/epsilon.
class Kernel {
 public:
  Kernel(KernelFamily family, double epsilon);

  KernelFamily family() const noexcept { return family_; }
  double epsilon() const noexcept { return epsilon_; }
  bool compactly_supported() const noexcept;

  double operator()(double r) const noexcept;

 private:
  KernelFamily family_;
  double epsilon_;
};

inline double eval_kernel(const Kernel& kernel, double r) { return kernel(r); }

/// Symmetric matrix of pairwise Euclidean distances.
Eigen::MatrixXd distance_matrix(const PointSet& points);

/// Kernel applied entrywise to a precomputed distance matrix.
Eigen::MatrixXd gram_from_distances(const Kernel& kernel, const Eigen::MatrixXd& distances);

/// Local interpolation matrix, entry (i,k) = phi(|x_i - x_k|).
Eigen::MatrixXd gram_matrix(const Kernel& kernel, const PointSet& points);

}  // namespace rbfpu
