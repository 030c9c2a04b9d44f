#pragma once

// Finite metric spaces, reflexive edge structures, gauges and closed sets:
// the shared vocabulary of the coincidence solvers and the brute-force
// verifiers.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "graphfix/grid_function.hpp"

namespace graphfix {

using PointIndex = std::size_t;
using Coord = std::vector<double>;

/// Slack allowed on the triangle inequality when validating a distance matrix.
inline constexpr double kTriangleTolerance = 1e-9;
/// Comparison slack for inequalities between computed reals.
inline constexpr double kValueTolerance = 1e-12;

enum class Norm { euclidean, manhattan, max };

std::string_view norm_name(Norm n);
Norm parse_norm(std::string_view name);

/// ||a - b|| under the selected norm; dimensions must agree.
double norm_distance(std::span<const double> a, std::span<const double> b, Norm norm);

/// lhs <= rhs up to kValueTolerance (relative for |rhs| > 1).
inline bool leq_tol(double lhs, double rhs, double tol = kValueTolerance) {
  const double scale = rhs > 1.0 ? rhs : (rhs < -1.0 ? -rhs : 1.0);
  return lhs <= rhs + tol * scale;
}

/// Labeled points with a validated distance matrix. Immutable after construction.
class FiniteMetricSpace {
 public:
  /// Validates: square, zero diagonal, nonnegative, symmetric to 1e-12,
  /// triangle inequality to kTriangleTolerance, unique non-empty labels.
  static FiniteMetricSpace from_matrix(std::vector<std::string> labels,
                                       const std::vector<std::vector<double>>& distances);

  static FiniteMetricSpace from_coordinates(std::vector<std::string> labels,
                                            std::vector<Coord> coords,
                                            Norm norm = Norm::euclidean);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(PointIndex i) const;

  /// Throws InputError for an unknown label.
  PointIndex index_of(std::string_view label) const;
  bool contains(std::string_view label) const;

  /// Throws InputError when either index is out of range.
  double distance(PointIndex i, PointIndex j) const;
  double unchecked_distance(PointIndex i, PointIndex j) const { return d_[i * size() + j]; }

  /// Throws InputError when i is out of range.
  void check_index(PointIndex i) const;

  const std::optional<std::vector<Coord>>& coordinates() const { return coords_; }
  std::optional<Norm> norm() const { return norm_; }

 private:
  FiniteMetricSpace() = default;
  void build_index();
  void validate() const;

  std::vector<std::string> labels_;
  std::vector<double> d_;
  std::optional<std::vector<Coord>> coords_;
  std::optional<Norm> norm_;
  std::unordered_map<std::string, PointIndex> index_;
};

/// Directed reflexive graph without parallel edges. The adjacency relation is
/// materialized at construction, so the structure does not reference the space.
class EdgeStructure {
 public:
  enum class Mode { explicit_pairs, metric_ball, complete };

  /// The diagonal is added; duplicate pairs collapse.
  static EdgeStructure from_pairs(const FiniteMetricSpace& space,
                                  const std::vector<std::pair<PointIndex, PointIndex>>& pairs);
  /// (u, v) is an edge iff d(u, v) < radius, plus the diagonal.
  static EdgeStructure metric_ball(const FiniteMetricSpace& space, double radius);
  static EdgeStructure complete(const FiniteMetricSpace& space);

  bool is_edge(PointIndex u, PointIndex v) const;

  Mode mode() const { return mode_; }
  double radius() const { return radius_; }
  std::size_t point_count() const { return n_; }
  /// All ordered pairs in the edge set, row-major order.
  std::vector<std::pair<PointIndex, PointIndex>> pairs() const;

 private:
  EdgeStructure(Mode mode, std::size_t n, double radius)
      : mode_(mode), n_(n), radius_(radius), adjacent_(n * n, false) {}

  Mode mode_;
  std::size_t n_;
  double radius_;
  std::vector<bool> adjacent_;
};

/// A function k : [0, inf) -> [0, 1) with a user-certified uniform bound below 1.
/// Piecewise gauges use half-open intervals [b_i, b_{i+1}); the first breakpoint is 0.
class Gauge {
 public:
  /// certified_sup defaults to c.
  static Gauge constant(double c, std::optional<double> certified_sup = std::nullopt);
  static Gauge piecewise(std::vector<double> breakpoints, std::vector<double> values,
                         double certified_sup);

  /// Throws InputError for t < 0 or NaN.
  double operator()(double t) const;
  double certified_sup() const { return sup_; }

  bool is_constant() const { return breakpoints_.size() == 1; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

 private:
  Gauge(std::vector<double> breakpoints, std::vector<double> values, double sup);

  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double sup_;
};

/// A non-empty closed set: a finite list of points of a FiniteMetricSpace, or
/// the singleton image of a set-valued map on a function space.
class ClosedSet {
 public:
  /// Members are sorted and deduplicated. Throws DomainError when empty.
  static ClosedSet finite(std::vector<PointIndex> members);
  static ClosedSet singleton(GridFunction element);

  bool is_finite() const { return std::holds_alternative<std::vector<PointIndex>>(data_); }
  /// Throws DomainError on a singleton-image set.
  std::span<const PointIndex> members() const;
  /// Throws DomainError on a finite set.
  const GridFunction& element() const;
  bool contains(PointIndex p) const;

 private:
  explicit ClosedSet(std::variant<std::vector<PointIndex>, GridFunction> data)
      : data_(std::move(data)) {}
  std::variant<std::vector<PointIndex>, GridFunction> data_;
};

/// D(u, Z) = min over z in Z of d(u, z).
double point_to_set_distance(PointIndex u, const ClosedSet& z, const FiniteMetricSpace& space);

/// D(u, Z) for a singleton-image set: ||u - z|| in the sup norm.
double point_to_set_distance(const GridFunction& u, const ClosedSet& z);

/// H(Y, Z): the larger of the two directed suprema of point-to-set distances.
double hausdorff_distance(const ClosedSet& y, const ClosedSet& z, const FiniteMetricSpace& space);

/// Throws InputError when u or v is outside the structure's space.
bool is_edge(const EdgeStructure& edges, PointIndex u, PointIndex v);

double gauge_eval(const Gauge& k, double t);

}  // namespace graphfix
