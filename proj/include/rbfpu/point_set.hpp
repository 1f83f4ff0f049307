#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rbfpu {

/// N points in M dimensions, stored row-major, with optional sampled values.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim);

  /// Builds a set from explicit rows; throws InputError on ragged rows or
  /// when `values` is non-empty and does not match the row count.
  static PointSet from_rows(const std::vector<std::vector<double>>& rows,
                            std::vector<double> values = {});

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double coord(std::size_t i, std::size_t m) const { return coords_[i * dim_ + m]; }
  const std::vector<double>& coords() const noexcept { return coords_; }

  bool has_values() const noexcept { return !values_.empty(); }
  const std::vector<double>& values() const noexcept { return values_; }
  double value(std::size_t i) const { return values_[i]; }
  void set_values(std::vector<double> values);

  void push_back(std::span<const double> x);
  void push_back(std::span<const double> x, double value);
  void reserve(std::size_t n);

  /// Copies the listed points (and values, when present) into a new set.
  PointSet subset(std::span<const std::size_t> indices) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> values_;
};

double distance(std::span<const double> a, std::span<const double> b);

}  // namespace rbfpu
