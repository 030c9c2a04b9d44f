#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace graphfix {

/// Real values sampled on nodes of [0,1], measured in the supremum norm.
///
/// The uniform-grid constructor places node j at j/m; operator iterations
/// that use non-uniform nodes (q-Bernstein) carry only the values.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(std::vector<double> values);

  /// m+1 zeros on the uniform grid j/m.
  static GridFunction zeros(std::size_t m);

  /// Samples fn(j/m) for j = 0..m.
  template <typename Fn>
  static GridFunction sample(std::size_t m, Fn&& fn) {
    std::vector<double> v(m + 1);
    for (std::size_t j = 0; j <= m; ++j) v[j] = fn(uniform_node(j, m));
    return GridFunction(std::move(v));
  }

  static double uniform_node(std::size_t j, std::size_t m) {
    return static_cast<double>(j) / static_cast<double>(m);
  }

  std::size_t size() const { return values_.size(); }
  /// Number of uniform intervals (size() - 1).
  std::size_t intervals() const { return values_.empty() ? 0 : values_.size() - 1; }

  double operator[](std::size_t j) const { return values_[j]; }
  double& operator[](std::size_t j) { return values_[j]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double sup_norm() const;

  friend GridFunction operator-(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator+(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator*(double s, const GridFunction& a);

 private:
  std::vector<double> values_;
};

/// ||a - b|| in the supremum norm. Sizes must agree.
double sup_distance(const GridFunction& a, const GridFunction& b);

}  // namespace graphfix
