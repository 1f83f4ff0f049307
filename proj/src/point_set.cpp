#include "rbfpu/point_set.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include "rbfpu/errors.hpp"
#include "rbfpu/text.hpp"

namespace rbfpu {

PointSet::PointSet(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InputError("point dimension must be positive");
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows,
                             std::vector<double> values) {
  if (rows.empty()) throw InputError("empty point list");
  PointSet set(rows.front().size());
  set.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != set.dim_) {
      throw InputError("point " + std::to_string(i) + " has dimension " +
                       std::to_string(rows[i].size()) + ", expected " +
                       std::to_string(set.dim_));
    }
    set.push_back(rows[i]);
  }
  if (!values.empty()) set.set_values(std::move(values));
  return set;
}

void PointSet::set_values(std::vector<double> values) {
  if (!values.empty() && values.size() != size()) {
    throw InputError("got " + std::to_string(values.size()) + " values for " +
                     std::to_string(size()) + " points");
  }
  values_ = std::move(values);
}

void PointSet::push_back(std::span<const double> x) {
  if (x.size() != dim_) throw InputError("point dimension mismatch");
  if (has_values()) throw InputError("point set carries values; push a value too");
  coords_.insert(coords_.end(), x.begin(), x.end());
}

void PointSet::push_back(std::span<const double> x, double value) {
  if (x.size() != dim_) throw InputError("point dimension mismatch");
  if (!empty() && !has_values()) throw InputError("point set carries no values");
  coords_.insert(coords_.end(), x.begin(), x.end());
  values_.push_back(value);
}

void PointSet::reserve(std::size_t n) { coords_.reserve(n * dim_); }

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  PointSet out(dim_);
  out.coords_.reserve(indices.size() * dim_);
  for (std::size_t i : indices) {
    auto x = point(i);
    out.coords_.insert(out.coords_.end(), x.begin(), x.end());
    if (has_values()) out.values_.push_back(values_[i]);
  }
  return out;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    const double d = a[m] - b[m];
    s += d * d;
  }
  return std::sqrt(s);
}

std::string format_real(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf, end);
}

std::optional<double> parse_real(std::string_view token) {
  if (token.empty()) return std::nullopt;
  if (token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

}  // namespace rbfpu
