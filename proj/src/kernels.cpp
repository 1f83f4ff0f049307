#include "rbfpu/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rbfpu/errors.hpp"

namespace rbfpu {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::imq: return "imq";
    case KernelFamily::matern_c2: return "matern_c2";
    case KernelFamily::wendland_c2: return "wendland_c2";
    case KernelFamily::wendland_c6: return "wendland_c6";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "imq") return KernelFamily::imq;
  if (name == "matern_c2" || name == "matern") return KernelFamily::matern_c2;
  if (name == "wendland_c2" || name == "wendland2") return KernelFamily::wendland_c2;
  if (name == "wendland_c6" || name == "wendland6") return KernelFamily::wendland_c6;
  throw ConfigError("unknown kernel family '" + std::string(name) +
                    "' (expected imq, matern_c2, wendland_c2 or wendland_c6)");
}

Kernel::Kernel(KernelFamily family, double epsilon) : family_(family), epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("shape parameter must be positive and finite, got " +
                      std::to_string(epsilon));
  }
}

bool Kernel::compactly_supported() const noexcept {
  return family_ == KernelFamily::wendland_c2 || family_ == KernelFamily::wendland_c6;
}

double Kernel::operator()(double r) const noexcept {
  const double er = epsilon_ * r;
  switch (family_) {
    case KernelFamily::imq:
      return 1.0 / std::sqrt(1.0 + er * er);
    case KernelFamily::matern_c2:
      return std::exp(-er) * (1.0 + er);
    case KernelFamily::wendland_c2: {
      // (.)_+ before the power
      const double s = std::max(0.0, 1.0 - er);
      const double s2 = s * s;
      return s2 * s2 * (4.0 * er + 1.0);
    }
    case KernelFamily::wendland_c6: {
      const double s = std::max(0.0, 1.0 - er);
      const double s2 = s * s;
      const double s4 = s2 * s2;
      return s4 * s4 * (((32.0 * er + 25.0) * er + 8.0) * er + 1.0);
    }
  }
  return 0.0;
}

Eigen::MatrixXd distance_matrix(const PointSet& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index k = i + 1; k < n; ++k) {
      const double r = distance(points.point(i), points.point(k));
      d(i, k) = r;
      d(k, i) = r;
    }
  }
  return d;
}

Eigen::MatrixXd gram_from_distances(const Kernel& kernel, const Eigen::MatrixXd& distances) {
  const Eigen::Index n = distances.rows();
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    a(k, k) = kernel(distances(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double v = kernel(distances(i, k));
      a(i, k) = v;
      a(k, i) = v;
    }
  }
  return a;
}

Eigen::MatrixXd gram_matrix(const Kernel& kernel, const PointSet& points) {
  return gram_from_distances(kernel, distance_matrix(points));
}

}  // namespace rbfpu
