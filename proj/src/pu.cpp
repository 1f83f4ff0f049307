#include "rbfpu/pu.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "parallel.hpp"
#include "rbfpu/errors.hpp"
#include "rbfpu/text.hpp"

namespace rbfpu {

Covering make_covering(const BoundingBox& box, std::size_t n, double volume,
                       const DomainTest& domain_test) {
  if (n < 2) throw ConfigError("a covering needs at least two data points");
  if (!(volume > 0.0) || !std::isfinite(volume)) {
    throw ConfigError("domain volume must be positive; supply it explicitly when the data "
                      "span a lower-dimensional box");
  }
  const std::size_t dim = box.dim();
  const double per_axis = 0.5 * box.l_box *
                          std::pow(static_cast<double>(n) / volume, 1.0 / static_cast<double>(dim));
  const auto d_pu = static_cast<std::size_t>(std::floor(per_axis));
  if (d_pu == 0) {
    throw ConfigError("too few points for the bounding box (d_pu = 0); supply the domain "
                      "volume or more data");
  }

  Covering cov;
  cov.d_pu = d_pu;
  cov.min_radius = box.l_box / static_cast<double>(d_pu);
  cov.volume = volume;
  cov.centres = PointSet(dim);

  std::vector<std::vector<double>> axis(dim);
  for (std::size_t m = 0; m < dim; ++m) {
    axis[m].resize(d_pu);
    for (std::size_t i = 0; i < d_pu; ++i) {
      axis[m][i] = d_pu == 1 ? 0.5 * (box.mins[m] + box.maxs[m])
                             : box.mins[m] + (box.maxs[m] - box.mins[m]) *
                                                 static_cast<double>(i) /
                                                 static_cast<double>(d_pu - 1);
    }
  }
  std::size_t total = 1;
  for (std::size_t m = 0; m < dim; ++m) total *= d_pu;
  std::vector<double> c(dim);
  for (std::size_t lin = 0; lin < total; ++lin) {
    // first axis slowest, matching the block numbering
    std::size_t rest = lin;
    for (std::size_t m = dim; m-- > 0;) {
      c[m] = axis[m][rest % d_pu];
      rest /= d_pu;
    }
    if (!domain_test || domain_test(c)) cov.centres.push_back(c);
  }
  if (cov.centres.empty()) throw ConfigError("no subdomain centre lies inside the domain");
  return cov;
}

PuLayout plan_layout(const PointSet& data, const DomainSpec& domain) {
  if (domain.contains && !domain.volume) {
    throw ConfigError("a custom domain needs its volume");
  }
  PuLayout layout;
  layout.box = bounding_box(data);
  const double volume = domain.volume.value_or(layout.box.volume());
  DomainTest test = domain.contains;
  if (!test) {
    const BoundingBox box = layout.box;
    const double tolerance = 1e-12 * std::max(1.0, box.l_box);
    test = [box, tolerance](std::span<const double> x) { return box.contains(x, tolerance); };
  }
  layout.covering = make_covering(layout.box, data.size(), volume, test);
  return layout;
}

std::optional<LocalSolution> solve_gram(const Eigen::MatrixXd& gram,
                                        std::span<const double> local_values) {
  const Eigen::Index n = gram.rows();
  if (n == 0 || static_cast<std::size_t>(n) != local_values.size()) return std::nullopt;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) return std::nullopt;

  const Eigen::Map<const Eigen::VectorXd> f(local_values.data(), n);
  LocalSolution sol;
  sol.coefficients = llt.solve(f);

  // column i of L^-1 has squared norm (A^-1)_ii
  Eigen::MatrixXd linv = Eigen::MatrixXd::Identity(n, n);
  llt.matrixL().solveInPlace(linv);
  sol.inv_diagonal = linv.colwise().squaredNorm().transpose();
  sol.residual = (gram * sol.coefficients - f).lpNorm<Eigen::Infinity>() /
                 std::max(1.0, f.lpNorm<Eigen::Infinity>());

  if (!sol.coefficients.allFinite() || !sol.inv_diagonal.allFinite()) return std::nullopt;
  return sol;
}

std::optional<LocalSolution> solve_local(const Kernel& kernel, const PointSet& local_points,
                                         std::span<const double> local_values) {
  if (local_points.size() != local_values.size()) {
    throw InputError("local values do not match local points");
  }
  return solve_gram(gram_matrix(kernel, local_points), local_values);
}

double patch_weight(double dist, double radius) {
  if (!(dist < radius)) return 0.0;
  return Kernel(KernelFamily::wendland_c2, 1.0 / radius)(dist);
}

std::vector<Weight> shepard_weights(std::span<const double> x,
                                    std::span<const Subdomain> subdomains) {
  std::vector<Weight> weights;
  double total = 0.0;
  for (std::size_t j = 0; j < subdomains.size(); ++j) {
    const double w = patch_weight(distance(x, subdomains[j].centre), subdomains[j].radius);
    if (w > 0.0) {
      weights.push_back({j, w});
      total += w;
    }
  }
  if (weights.empty()) throw CoverageError("point lies in no subdomain");
  for (auto& w : weights) w.value /= total;
  return weights;
}

PuModel::PuModel(KernelFamily family, PointSet data, std::vector<Subdomain> subdomains,
                 double min_radius)
    : family_(family),
      data_(std::move(data)),
      subdomains_(std::move(subdomains)),
      min_radius_(min_radius) {
  if (!(min_radius > 0.0)) throw InputError("model minimal radius must be positive");
  for (std::size_t j = 0; j < subdomains_.size(); ++j) {
    const auto& s = subdomains_[j];
    if (s.centre.size() != data_.dim()) throw InputError("subdomain centre dimension mismatch");
    if (s.coefficients.size() != s.node_indices.size()) {
      throw InputError("subdomain " + std::to_string(j) + ": coefficient count mismatch");
    }
    for (std::size_t i : s.node_indices) {
      if (i >= data_.size()) {
        throw InputError("subdomain " + std::to_string(j) + ": node index out of range");
      }
    }
  }
}

double PuModel::local_value(std::size_t j, std::span<const double> x) const {
  const Subdomain& s = subdomains_[j];
  if (s.node_indices.empty()) return 0.0;
  const Kernel kernel(family_, s.epsilon);
  double v = 0.0;
  for (std::size_t k = 0; k < s.node_indices.size(); ++k) {
    v += s.coefficients[k] * kernel(distance(x, data_.point(s.node_indices[k])));
  }
  return v;
}

std::vector<double> evaluate(const PuModel& model, const PointSet& eval_points,
                             unsigned threads) {
  if (eval_points.empty()) return {};
  if (eval_points.dim() != model.dim()) {
    throw InputError("evaluation points have dimension " + std::to_string(eval_points.dim()) +
                     ", model has " + std::to_string(model.dim()));
  }
  const BlockGrid grid(eval_points, bounding_box(eval_points), model.min_radius());

  struct Contribution {
    std::size_t point;
    double weight;
    double weighted_value;
  };
  const auto& subs = model.subdomains();
  std::vector<std::vector<Contribution>> parts(subs.size());
  detail::parallel_for(subs.size(), threads, [&](std::size_t j) {
    const Subdomain& s = subs[j];
    for (std::size_t i : grid.range_query(s.centre, s.radius)) {
      auto x = eval_points.point(i);
      const double w = patch_weight(distance(x, s.centre), s.radius);
      if (w > 0.0) parts[j].push_back({i, w, w * model.local_value(j, x)});
    }
  });

  std::vector<double> num(eval_points.size(), 0.0), den(eval_points.size(), 0.0);
  for (const auto& part : parts) {
    for (const auto& c : part) {
      num[c.point] += c.weighted_value;
      den[c.point] += c.weight;
    }
  }
  for (std::size_t i = 0; i < num.size(); ++i) {
    if (!(den[i] > 0.0)) {
      std::string where;
      for (double v : eval_points.point(i)) where += (where.empty() ? "" : ", ") + format_real(v);
      throw CoverageError("evaluation point " + std::to_string(i) + " (" + where +
                          ") lies in no subdomain");
    }
    num[i] /= den[i];
  }
  return num;
}

PuModel fit_classic(const PointSet& data, KernelFamily family, double epsilon,
                    const DomainSpec& domain, unsigned threads) {
  if (data.size() < 2) throw InputError("classic fit needs at least two data points");
  if (!data.has_values()) throw InputError("classic fit needs sampled values");
  const Kernel kernel(family, epsilon);
  const PuLayout layout = plan_layout(data, domain);
  const double delta = layout.covering.min_radius;
  const BlockGrid grid(data, layout.box, delta);

  const PointSet& centres = layout.covering.centres;
  std::vector<Subdomain> subs(centres.size());
  detail::parallel_for(centres.size(), threads, [&](std::size_t j) {
    Subdomain& s = subs[j];
    auto c = centres.point(j);
    s.centre.assign(c.begin(), c.end());
    s.radius = delta;
    s.epsilon = epsilon;
    s.node_indices = grid.range_query(c, delta);
    s.solvable = true;
    if (s.node_indices.empty()) return;

    const PointSet local = data.subset(s.node_indices);
    const Eigen::MatrixXd a = gram_matrix(kernel, local);
    if (auto sol = solve_gram(a, local.values())) {
      s.coefficients.assign(sol->coefficients.begin(), sol->coefficients.end());
      return;
    }
    const Eigen::Map<const Eigen::VectorXd> f(local.values().data(),
                                              static_cast<Eigen::Index>(local.size()));
    const Eigen::VectorXd coef = a.partialPivLu().solve(f);
    if (!coef.allFinite()) {
      throw PatchFitError("classic patch " + std::to_string(j) + " has a singular system");
    }
    s.coefficients.assign(coef.begin(), coef.end());
    s.used_fallback = true;
  });
  return PuModel(family, data, std::move(subs), delta);
}

}  // namespace rbfpu
