#include "rbfpu/bloocv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "parallel.hpp"
#include "rbfpu/errors.hpp"
#include "rbfpu/text.hpp"

namespace rbfpu {

namespace {

std::string describe(std::span<const double> centre) {
  std::string s = "(";
  for (std::size_t m = 0; m < centre.size(); ++m) {
    if (m) s += ", ";
    s += format_real(centre[m]);
  }
  return s + ")";
}

}  // namespace

std::vector<double> epsilon_range(double lo, double hi, std::size_t count,
                                  EpsilonSpacing spacing) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw ConfigError("shape parameter range needs 0 < lo <= hi and at least one value");
  }
  std::vector<double> eps(count);
  if (count == 1) {
    eps[0] = lo;
    return eps;
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(count - 1);
    eps[i] = spacing == EpsilonSpacing::log ? lo * std::pow(hi / lo, s) : lo + (hi - lo) * s;
  }
  eps.front() = lo;
  eps.back() = hi;
  return eps;
}

void SearchGrid::validate() const {
  if (radius_count == 0) throw ConfigError("need at least one candidate radius");
  if (!(radius_growth > 1.0) && !(radius_growth == 1.0 && radius_count == 1)) {
    throw ConfigError("radius growth h must exceed 1 (h = 1 only with a single radius)");
  }
  if (!(growth_step > 0.0 && growth_step < 1.0)) {
    throw ConfigError("growth step t must lie in (0, 1)");
  }
  if (!(max_residual > 0.0)) throw ConfigError("residual limit must be positive");
  if (epsilons.empty()) throw ConfigError("need at least one shape parameter");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || !std::isfinite(epsilons[i])) {
      throw ConfigError("shape parameters must be positive");
    }
    if (i > 0 && !(epsilons[i] > epsilons[i - 1])) {
      throw ConfigError("shape parameters must be strictly increasing");
    }
  }
}

std::optional<std::vector<double>> loocv_errors(std::span<const double> coefficients,
                                                std::span<const double> inv_diagonal) {
  if (coefficients.size() != inv_diagonal.size() || coefficients.empty()) {
    throw InputError("coefficient and inverse-diagonal vectors must match and be non-empty");
  }
  std::vector<double> e(coefficients.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (inv_diagonal[i] == 0.0) return std::nullopt;
    e[i] = coefficients[i] / inv_diagonal[i];
    if (!std::isfinite(e[i])) return std::nullopt;
  }
  return e;
}

double ball_volume(std::size_t dim, double radius) {
  const double half = 0.5 * static_cast<double>(dim);
  return std::pow(std::numbers::pi, half) * std::pow(radius, static_cast<double>(dim)) /
         std::tgamma(half + 1.0);
}

double expected_local_count(std::size_t n, double volume, double delta, std::size_t dim) {
  return static_cast<double>(n) * ball_volume(dim, delta) / volume;
}

double grow_radius(const BlockGrid& grid, std::span<const double> centre, double base_delta,
                   double t, std::size_t n, double volume) {
  if (!(t > 0.0 && t < 1.0)) throw ConfigError("growth step t must lie in (0, 1)");
  if (!(base_delta > 0.0)) throw ConfigError("base radius must be positive");
  const std::size_t dim = grid.dim();
  const double target = expected_local_count(n, volume, base_delta, dim);
  const double limit = grid.box().l_box * std::sqrt(static_cast<double>(dim));
  for (std::size_t m = 0;; ++m) {
    const double r = base_delta * (1.0 + static_cast<double>(m) * t);
    if (static_cast<double>(grid.count_in_ball(centre, r)) >= target) return r;
    if (r > limit) {
      throw DegenerateDataError("radius growth at centre " + describe(centre) +
                                " passed the box diagonal without reaching " +
                                format_real(target) + " points");
    }
  }
}

ErrorMatrix error_matrix(std::span<const double> centre, const BlockGrid& grid,
                         const PointSet& data, KernelFamily family, const SearchGrid& search,
                         double delta_j1, std::size_t max_local_points) {
  search.validate();
  if (!data.has_values()) throw InputError("error matrix needs sampled values");
  const std::size_t P = search.radius_count;
  const std::size_t Q = search.epsilons.size();

  ErrorMatrix em;
  em.epsilons = search.epsilons;
  em.radii.resize(P);
  for (std::size_t p = 0; p < P; ++p) {
    em.radii[p] = P == 1 ? delta_j1
                         : delta_j1 + (search.radius_growth - 1.0) * delta_j1 *
                                          static_cast<double>(p) / static_cast<double>(P - 1);
  }
  em.radii.back() = P == 1 ? delta_j1 : search.radius_growth * delta_j1;
  em.entries.assign(P * Q, std::numeric_limits<double>::infinity());
  std::vector<char> accurate(P * Q, 0);

  std::vector<Kernel> kernels;
  kernels.reserve(Q);
  for (double eps : search.epsilons) kernels.emplace_back(family, eps);

  std::vector<std::size_t> previous;
  for (std::size_t p = 0; p < P; ++p) {
    auto nodes = grid.range_query(centre, em.radii[p]);
    if (nodes.size() > max_local_points) {
      throw PatchFitError("patch at " + describe(centre) + " gathers " +
                          std::to_string(nodes.size()) + " points at radius " +
                          format_real(em.radii[p]) + " (cap " +
                          std::to_string(max_local_points) +
                          "); raise the cap or lower the radius growth h");
    }
    if (nodes.empty()) continue;
    if (p > 0 && nodes == previous) {
      std::copy_n(em.entries.begin() + static_cast<std::ptrdiff_t>((p - 1) * Q), Q,
                  em.entries.begin() + static_cast<std::ptrdiff_t>(p * Q));
      std::copy_n(accurate.begin() + static_cast<std::ptrdiff_t>((p - 1) * Q), Q,
                  accurate.begin() + static_cast<std::ptrdiff_t>(p * Q));
      continue;
    }
    const PointSet local = data.subset(nodes);
    const Eigen::MatrixXd dist = distance_matrix(local);
    for (std::size_t q = 0; q < Q; ++q) {
      auto sol = solve_gram(gram_from_distances(kernels[q], dist), local.values());
      if (!sol) continue;
      auto e = loocv_errors(std::span<const double>(sol->coefficients.data(), nodes.size()),
                            std::span<const double>(sol->inv_diagonal.data(), nodes.size()));
      if (!e) continue;
      double worst = 0.0;
      for (double v : *e) worst = std::max(worst, std::abs(v));
      em.at(p, q) = worst;
      accurate[p * Q + q] = sol->residual <= search.max_residual;
    }
    previous = std::move(nodes);
  }

  if (std::find(accurate.begin(), accurate.end(), 1) != accurate.end()) {
    for (std::size_t k = 0; k < P * Q; ++k) {
      if (!accurate[k]) em.entries[k] = std::numeric_limits<double>::infinity();
    }
  } else {
    em.relaxed = true;
  }
  if (std::none_of(em.entries.begin(), em.entries.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw PatchFitError("no feasible (radius, shape parameter) cell for the patch at " +
                        describe(centre));
  }
  return em;
}

Couple select_couple(const ErrorMatrix& errors) {
  Couple best;
  bool found = false;
  for (std::size_t p = 0; p < errors.radii.size(); ++p) {
    for (std::size_t q = 0; q < errors.epsilons.size(); ++q) {
      const double v = errors.at(p, q);
      if (!std::isfinite(v)) continue;
      if (!found || v < best.error) {
        best = {errors.radii[p], errors.epsilons[q], p, q, v};
        found = true;
      }
    }
  }
  if (!found) throw PatchFitError("error matrix has no finite entry");
  return best;
}

BloocvFit fit_bloocv(const PointSet& data, const BloocvConfig& config) {
  if (data.size() < 2) throw InputError("BLOOCV fit needs at least two data points");
  if (!data.has_values()) throw InputError("BLOOCV fit needs sampled values");
  config.search.validate();

  const PuLayout layout = plan_layout(data, config.domain);
  const Covering& cov = layout.covering;
  const BlockGrid grid(data, layout.box, cov.min_radius);

  const std::size_t d = cov.centres.size();
  std::vector<Subdomain> subs(d);
  std::vector<PatchReport> reports(d);
  detail::parallel_for(d, config.threads, [&](std::size_t j) {
    auto c = cov.centres.point(j);
    const double delta_j1 =
        config.search.grow
            ? grow_radius(grid, c, cov.min_radius, config.search.growth_step, data.size(),
                          cov.volume)
            : cov.min_radius;
    const ErrorMatrix em = error_matrix(c, grid, data, config.family, config.search, delta_j1,
                                        config.max_local_points);
    const Couple best = select_couple(em);

    Subdomain& s = subs[j];
    s.centre.assign(c.begin(), c.end());
    s.radius = best.radius;
    s.epsilon = best.epsilon;
    s.node_indices = grid.range_query(c, best.radius);
    const PointSet local = data.subset(s.node_indices);
    auto sol = solve_local(Kernel(config.family, best.epsilon), local, local.values());
    if (!sol) {
      throw PatchFitError("final solve failed for the patch at " + describe(c));
    }
    s.coefficients.assign(sol->coefficients.begin(), sol->coefficients.end());
    s.solvable = true;

    PatchReport& rep = reports[j];
    rep.centre = s.centre;
    rep.delta_j1 = delta_j1;
    rep.radius = best.radius;
    rep.epsilon = best.epsilon;
    rep.local_count = s.node_indices.size();
    rep.loocv_error = best.error;
    rep.relaxed = em.relaxed;
  });

  return {PuModel(config.family, data, std::move(subs), cov.min_radius), std::move(reports)};
}

void write_report(std::ostream& out, std::span<const PatchReport> reports) {
  const std::size_t dim = reports.empty() ? 0 : reports.front().centre.size();
  for (std::size_t m = 0; m < dim; ++m) out << "centre_" << (m + 1) << ',';
  out << "delta_j1,radius,epsilon,local_count,loocv_error\n";
  for (const auto& r : reports) {
    for (double c : r.centre) out << format_real(c) << ',';
    out << format_real(r.delta_j1) << ',' << format_real(r.radius) << ','
        << format_real(r.epsilon) << ',' << r.local_count << ',' << format_real(r.loocv_error)
        << '\n';
  }
}

}  // namespace rbfpu
