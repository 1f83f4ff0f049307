#include "rbfpu/data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>

#include "rbfpu/errors.hpp"
#include "rbfpu/text.hpp"

namespace rbfpu {

namespace {

constexpr std::array<unsigned, 10> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

double radical_inverse(std::size_t i, unsigned base) {
  double r = 0.0;
  double f = 1.0 / base;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f /= base;
  }
  return r;
}

}  // namespace

PointSet halton(std::size_t n, std::size_t dim) {
  if (n == 0) throw InputError("halton: need at least one point");
  if (dim == 0 || dim > kPrimes.size()) throw InputError("halton: dimension must be in [1, 10]");
  PointSet set(dim);
  set.reserve(n);
  std::vector<double> x(dim);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t m = 0; m < dim; ++m) x[m] = radical_inverse(i, kPrimes[m]);
    set.push_back(x);
  }
  return set;
}

PointSet clustered(std::size_t n, std::span<const double> focus, double ratio) {
  if (n == 0) throw InputError("clustered: need at least one point");
  if (!(ratio > 0.0 && ratio < 1.0)) throw InputError("clustered: ratio must lie in (0, 1)");
  const std::size_t dim = focus.size();
  if (dim == 0) throw InputError("clustered: empty focus");
  for (double f : focus) {
    if (!(f > 0.0 && f < 1.0)) throw InputError("clustered: focus must lie inside (0,1)^M");
  }

  PointSet set(dim);
  set.reserve(n);
  set.push_back(focus);
  const std::size_t rest = n - 1;
  if (rest == 0) return set;

  const std::size_t rings =
      dim == 1 ? (rest + 1) / 2
               : std::max<std::size_t>(1, static_cast<std::size_t>(
                                              std::lround(std::sqrt(static_cast<double>(rest)))));
  const std::size_t per_ring = dim == 1 ? 2 : (rest + rings - 1) / rings;

  std::vector<double> u(dim), x(dim);
  std::size_t placed = 0;
  for (std::size_t k = 0; placed < rest; ++k) {
    const double level =
        rings == 1 ? 1.0
                   : std::pow(ratio, static_cast<double>(k) / static_cast<double>(rings - 1));
    for (std::size_t i = 0; i < per_ring && placed < rest; ++i, ++placed) {
      if (dim == 1) {
        u[0] = i == 0 ? 1.0 : -1.0;
      } else if (dim == 2) {
        const double theta = 2.0 * std::numbers::pi *
                             (static_cast<double>(i) + 0.5 * static_cast<double>(k % 2)) /
                             static_cast<double>(per_ring);
        u[0] = std::cos(theta);
        u[1] = std::sin(theta);
      } else {
        // directions from the Halton sequence mapped onto the sphere
        double norm = 0.0;
        for (std::size_t m = 0; m < dim; ++m) {
          u[m] = 2.0 * radical_inverse(k * per_ring + i + 1, kPrimes[m % kPrimes.size()]) - 1.0;
          norm += u[m] * u[m];
        }
        norm = std::sqrt(norm);
        for (double& v : u) v = norm > 0.0 ? v / norm : 1.0 / std::sqrt(double(dim));
      }
      // distance from the focus to the unit-box boundary along u
      double reach = std::numeric_limits<double>::infinity();
      for (std::size_t m = 0; m < dim; ++m) {
        if (std::abs(u[m]) > 1e-15) {
          reach = std::min(reach, (u[m] > 0.0 ? 1.0 - focus[m] : focus[m]) / std::abs(u[m]));
        }
      }
      for (std::size_t m = 0; m < dim; ++m) {
        x[m] = std::clamp(focus[m] + level * reach * u[m], 0.0, 1.0);
      }
      set.push_back(x);
    }
  }
  return set;
}

PointSet uniform_grid(std::size_t side, std::span<const double> lo, std::span<const double> hi) {
  if (side == 0) throw InputError("grid side must be positive");
  if (lo.size() != hi.size() || lo.empty()) throw InputError("grid bounds dimension mismatch");
  const std::size_t dim = lo.size();
  std::size_t total = 1;
  for (std::size_t m = 0; m < dim; ++m) total *= side;
  PointSet set(dim);
  set.reserve(total);
  std::vector<double> x(dim);
  for (std::size_t lin = 0; lin < total; ++lin) {
    std::size_t rest = lin;
    for (std::size_t m = dim; m-- > 0;) {
      const std::size_t i = rest % side;
      rest /= side;
      x[m] = side == 1 ? 0.5 * (lo[m] + hi[m])
                       : lo[m] + (hi[m] - lo[m]) * static_cast<double>(i) /
                                     static_cast<double>(side - 1);
    }
    set.push_back(x);
  }
  return set;
}

TestFunction parse_test_function(std::string_view name) {
  if (name == "f1") return TestFunction::f1;
  if (name == "f2") return TestFunction::f2;
  throw ConfigError("unknown test function '" + std::string(name) + "' (expected f1 or f2)");
}

double test_function(TestFunction id, std::span<const double> x) {
  if (x.size() != 2) throw InputError("test functions are defined in two dimensions");
  const double x1 = x[0], x2 = x[1];
  switch (id) {
    case TestFunction::f1:
      return 16.0 * x1 * x2 * (1.0 - x1) * (1.0 - x2);
    case TestFunction::f2: {
      const double c = std::cos(4.0 * x1 * x1 + x2 * x2 - 1.0);
      const double c2 = c * c;
      return 0.5 * x2 * c2 * c2;
    }
  }
  return 0.0;
}

void sample(PointSet& points, TestFunction id) {
  std::vector<double> v(points.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = test_function(id, points.point(i));
  points.set_values(std::move(v));
}

ErrorMetrics rmse_mae(std::span<const double> predicted, std::span<const double> truth) {
  if (predicted.size() != truth.size()) {
    throw InputError("predicted and true vectors differ in length");
  }
  if (predicted.empty()) throw InputError("error metrics of empty vectors");
  ErrorMetrics m;
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double e = std::abs(truth[i] - predicted[i]);
    m.mae = std::max(m.mae, e);
    sum += e * e;
  }
  m.rmse = std::sqrt(sum / static_cast<double>(truth.size()));
  return m;
}

Regularity fill_separation(const PointSet& points, std::size_t probe_side,
                           const std::optional<BoundingBox>& region) {
  if (points.size() < 2) throw InputError("fill/separation needs at least two points");
  Regularity r;
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = i + 1; k < points.size(); ++k) {
      closest = std::min(closest, distance(points.point(i), points.point(k)));
    }
  }
  r.separation = 0.5 * closest;

  const BoundingBox box = region ? *region : bounding_box(points);
  const PointSet probes = uniform_grid(probe_side, box.mins, box.maxs);
  for (std::size_t p = 0; p < probes.size(); ++p) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      nearest = std::min(nearest, distance(probes.point(p), points.point(i)));
    }
    r.fill = std::max(r.fill, nearest);
  }
  return r;
}

Split holdout_every_kth(const PointSet& points, std::size_t k) {
  if (k < 2) throw ConfigError("holdout stride must be at least 2");
  std::vector<std::size_t> train, validation;
  for (std::size_t i = 0; i < points.size(); ++i) ((i + 1) % k == 0 ? validation : train).push_back(i);
  return {points.subset(train), points.subset(validation)};
}

PointSet read_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open point file " + path.string());

  std::string line;
  std::size_t number = 0;
  std::size_t dim = 0, expected = 0;
  bool with_values = false, header = false;
  PointSet set;
  std::vector<double> x;
  while (std::getline(in, line)) {
    ++number;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.front().starts_with('#')) {
      if (header) continue;
      bool got_dim = false, got_n = false, got_values = false;
      for (auto f : fields) {
        if (f == "#") continue;
        if (f.starts_with('#')) f.remove_prefix(1);
        auto eq = f.find('=');
        if (eq == std::string_view::npos) continue;
        auto key = f.substr(0, eq), val = f.substr(eq + 1);
        if (key == "dim" || key == "n") {
          auto v = parse_real(val);
          if (!v || *v < 0 || *v != std::floor(*v)) throw ParseError(number, "bad header " + std::string(key));
          (key == "dim" ? dim : expected) = static_cast<std::size_t>(*v);
          (key == "dim" ? got_dim : got_n) = true;
        } else if (key == "values") {
          if (val != "yes" && val != "no") throw ParseError(number, "values must be yes or no");
          with_values = val == "yes";
          got_values = true;
        }
      }
      if (!got_dim || !got_n || !got_values || dim == 0) {
        throw ParseError(number, "header must read '# dim=M n=N values=yes|no'");
      }
      header = true;
      set = PointSet(dim);
      set.reserve(expected);
      x.resize(dim);
      continue;
    }
    if (!header) throw ParseError(number, "data before the '# dim=M n=N values=yes|no' header");
    const std::size_t want = dim + (with_values ? 1 : 0);
    if (fields.size() != want) {
      throw ParseError(number, "expected " + std::to_string(want) + " fields, got " +
                                   std::to_string(fields.size()));
    }
    std::vector<double> row(want);
    for (std::size_t m = 0; m < want; ++m) {
      auto v = parse_real(fields[m]);
      if (!v) throw ParseError(number, "not a number: '" + std::string(fields[m]) + "'");
      row[m] = *v;
    }
    std::copy_n(row.begin(), dim, x.begin());
    if (with_values) {
      set.push_back(x, row[dim]);
    } else {
      set.push_back(x);
    }
  }
  if (!header) throw ParseError(number, "missing '# dim=M n=N values=yes|no' header");
  if (set.size() != expected) {
    throw ParseError(number, "header announces " + std::to_string(expected) + " points, found " +
                                 std::to_string(set.size()));
  }
  if (set.empty()) throw InputError("point file " + path.string() + " holds no points");
  return set;
}

void write_points(const std::filesystem::path& path, const PointSet& points) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write " + path.string());
  out << "# dim=" << points.dim() << " n=" << points.size()
      << " values=" << (points.has_values() ? "yes" : "no") << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto x = points.point(i);
    for (std::size_t m = 0; m < x.size(); ++m) out << (m ? " " : "") << format_real(x[m]);
    if (points.has_values()) out << ' ' << format_real(points.value(i));
    out << '\n';
  }
  if (!out) throw FileError("write failed: " + path.string());
}

void write_grid(const std::filesystem::path& path, const PointSet& points,
                std::span<const double> values, std::size_t row_length) {
  if (values.size() != points.size()) throw InputError("grid values do not match grid points");
  std::ofstream out(path);
  if (!out) throw FileError("cannot write " + path.string());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (double c : points.point(i)) out << format_real(c) << ' ';
    out << format_real(values[i]) << '\n';
    if (points.dim() == 2 && row_length > 0 && (i + 1) % row_length == 0) out << '\n';
  }
  if (!out) throw FileError("write failed: " + path.string());
}

}  // namespace rbfpu
