#include "rbfpu/model_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include "rbfpu/errors.hpp"
#include "rbfpu/text.hpp"

namespace rbfpu {

namespace {

constexpr std::string_view kMagic = "rbfpu-model";

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty line split into fields; the first must equal `keyword`.
  std::vector<std::string_view> expect(std::string_view keyword) {
    fields_ = next();
    if (fields_.empty() || fields_.front() != keyword) {
      fail("expected '" + std::string(keyword) + "'");
    }
    fields_.erase(fields_.begin());
    return fields_;
  }

  std::vector<std::string_view> next() {
    while (std::getline(in_, line_)) {
      ++number_;
      auto f = split_fields(line_);
      if (!f.empty()) return f;
    }
    fail("unexpected end of model");
  }

  double real(std::string_view token) {
    auto v = parse_real(token);
    if (!v) fail("not a number: '" + std::string(token) + "'");
    return *v;
  }

  std::size_t count(std::string_view token) {
    const double v = real(token);
    if (!(v >= 0.0) || v != std::floor(v)) fail("not a count: '" + std::string(token) + "'");
    return static_cast<std::size_t>(v);
  }

  void need(const std::vector<std::string_view>& f, std::size_t n) {
    if (f.size() != n) {
      fail("expected " + std::to_string(n) + " fields, got " + std::to_string(f.size()));
    }
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(number_, what); }

 private:
  std::istream& in_;
  std::string line_;
  std::vector<std::string_view> fields_;
  std::size_t number_ = 0;
};

}  // namespace

void write_model(std::ostream& out, const PuModel& model) {
  const PointSet& data = model.data();
  out << kMagic << " 1\n";
  out << "dim " << model.dim() << '\n';
  out << "kernel " << to_string(model.family()) << '\n';
  out << "weight wendland_c2\n";
  out << "min_radius " << format_real(model.min_radius()) << '\n';
  out << "subdomains " << model.subdomains().size() << '\n';
  out << "nodes " << data.size() << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double x : data.point(i)) out << format_real(x) << ' ';
    out << format_real(data.value(i)) << '\n';
  }
  for (const Subdomain& s : model.subdomains()) {
    out << "patch";
    for (double c : s.centre) out << ' ' << format_real(c);
    out << ' ' << format_real(s.radius) << ' ' << format_real(s.epsilon) << ' '
        << s.node_indices.size() << ' ' << int{s.solvable} << ' ' << int{s.used_fallback}
        << '\n';
    out << "indices";
    for (std::size_t i : s.node_indices) out << ' ' << i;
    out << "\ncoefficients";
    for (double c : s.coefficients) out << ' ' << format_real(c);
    out << '\n';
  }
}

PuModel read_model(std::istream& in) {
  LineReader r(in);
  auto magic = r.next();
  if (magic.size() != 2 || magic[0] != kMagic || magic[1] != "1") {
    r.fail("not an rbfpu model (version 1)");
  }
  auto f = r.expect("dim");
  r.need(f, 1);
  const std::size_t dim = r.count(f[0]);
  if (dim == 0) r.fail("dimension must be positive");
  f = r.expect("kernel");
  r.need(f, 1);
  KernelFamily family;
  try {
    family = parse_kernel_family(f[0]);
  } catch (const ConfigError& e) {
    r.fail(e.what());
  }
  f = r.expect("weight");
  r.need(f, 1);
  if (f[0] != "wendland_c2") r.fail("unsupported weight function");
  f = r.expect("min_radius");
  r.need(f, 1);
  const double min_radius = r.real(f[0]);
  f = r.expect("subdomains");
  r.need(f, 1);
  const std::size_t d = r.count(f[0]);
  f = r.expect("nodes");
  r.need(f, 1);
  const std::size_t n = r.count(f[0]);

  PointSet data(dim);
  data.reserve(n);
  std::vector<double> x(dim);
  for (std::size_t i = 0; i < n; ++i) {
    f = r.next();
    r.need(f, dim + 1);
    for (std::size_t m = 0; m < dim; ++m) x[m] = r.real(f[m]);
    data.push_back(x, r.real(f[dim]));
  }

  std::vector<Subdomain> subs(d);
  for (Subdomain& s : subs) {
    f = r.expect("patch");
    r.need(f, dim + 5);
    s.centre.resize(dim);
    for (std::size_t m = 0; m < dim; ++m) s.centre[m] = r.real(f[m]);
    s.radius = r.real(f[dim]);
    s.epsilon = r.real(f[dim + 1]);
    const std::size_t count = r.count(f[dim + 2]);
    s.solvable = r.count(f[dim + 3]) != 0;
    s.used_fallback = r.count(f[dim + 4]) != 0;
    f = r.expect("indices");
    r.need(f, count);
    for (auto tok : f) {
      const std::size_t i = r.count(tok);
      if (i >= n) r.fail("node index out of range");
      s.node_indices.push_back(i);
    }
    f = r.expect("coefficients");
    r.need(f, count);
    for (auto tok : f) s.coefficients.push_back(r.real(tok));
  }
  return PuModel(family, std::move(data), std::move(subs), min_radius);
}

void save_model(const std::filesystem::path& path, const PuModel& model) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw FileError("cannot write " + tmp.string());
    write_model(out, model);
    out.flush();
    if (!out) throw FileError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw FileError("cannot move model into place: " + path.string());
  }
}

PuModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open model " + path.string());
  return read_model(in);
}

}  // namespace rbfpu
