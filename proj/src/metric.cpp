#include "graphfix/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "graphfix/errors.hpp"
#include "graphfix/kernels.hpp"

namespace graphfix {

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    if (!std::isfinite(v)) throw InputError("GridFunction values must be finite");
}

GridFunction GridFunction::zeros(std::size_t m) { return GridFunction(std::vector<double>(m + 1, 0.0)); }

double GridFunction::sup_norm() const { return kernels::max_abs(values_); }

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size()) throw InputError("GridFunction size mismatch");
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.values_[i] - b.values_[i];
  return GridFunction(std::move(r));
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size()) throw InputError("GridFunction size mismatch");
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.values_[i] + b.values_[i];
  return GridFunction(std::move(r));
}

GridFunction operator*(double s, const GridFunction& a) {
  std::vector<double> r(a.values_);
  for (double& v : r) v *= s;
  return GridFunction(std::move(r));
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size()) throw InputError("GridFunction size mismatch");
  return kernels::max_abs_diff(a.values(), b.values());
}

// ---------------------------------------------------------------------------
// Norms

std::string_view norm_name(Norm n) {
  switch (n) {
    case Norm::euclidean: return "euclidean";
    case Norm::manhattan: return "manhattan";
    case Norm::max: return "max";
  }
  return "euclidean";
}

Norm parse_norm(std::string_view name) {
  if (name == "euclidean" || name == "l2") return Norm::euclidean;
  if (name == "manhattan" || name == "l1") return Norm::manhattan;
  if (name == "max" || name == "linf") return Norm::max;
  throw InputError(fmt::format("unknown norm '{}'", name));
}

double norm_distance(std::span<const double> a, std::span<const double> b, Norm norm) {
  if (a.size() != b.size()) throw InputError("coordinate dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::abs(a[i] - b[i]);
    switch (norm) {
      case Norm::euclidean: acc += diff * diff; break;
      case Norm::manhattan: acc += diff; break;
      case Norm::max: acc = std::max(acc, diff); break;
    }
  }
  return norm == Norm::euclidean ? std::sqrt(acc) : acc;
}

// ---------------------------------------------------------------------------
// FiniteMetricSpace

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::vector<std::string> labels,
                                                 const std::vector<std::vector<double>>& distances) {
  const std::size_t n = labels.size();
  if (n == 0) throw InputError("metric space needs at least one point");
  if (distances.size() != n) throw InputError("distance matrix row count differs from label count");
  FiniteMetricSpace s;
  s.labels_ = std::move(labels);
  s.d_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (distances[i].size() != n) throw InputError(fmt::format("distance row {} has wrong length", i));
    for (std::size_t j = 0; j < n; ++j) {
      const double v = distances[i][j];
      if (!std::isfinite(v)) throw InputError("distances must be finite");
      s.d_[i * n + j] = v;
    }
  }
  // Symmetry is checked first, then the upper triangle is mirrored so the
  // stored matrix is exactly symmetric.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(s.d_[i * n + j] - s.d_[j * n + i]) > kValueTolerance)
        throw InputError(fmt::format("distance matrix not symmetric at ({}, {})", s.labels_[i], s.labels_[j]));
      s.d_[j * n + i] = s.d_[i * n + j];
    }
  s.build_index();
  s.validate();
  return s;
}

FiniteMetricSpace FiniteMetricSpace::from_coordinates(std::vector<std::string> labels,
                                                      std::vector<Coord> coords, Norm norm) {
  const std::size_t n = labels.size();
  if (n == 0) throw InputError("metric space needs at least one point");
  if (coords.size() != n) throw InputError("coordinate count differs from label count");
  for (const auto& c : coords) {
    if (c.size() != coords.front().size()) throw InputError("coordinates must share one dimension");
    for (double x : c)
      if (!std::isfinite(x)) throw InputError("coordinates must be finite");
  }
  FiniteMetricSpace s;
  s.labels_ = std::move(labels);
  s.d_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = norm_distance(coords[i], coords[j], norm);
      s.d_[i * n + j] = d;
      s.d_[j * n + i] = d;
    }
  s.coords_ = std::move(coords);
  s.norm_ = norm;
  s.build_index();
  s.validate();
  return s;
}

void FiniteMetricSpace::build_index() {
  index_.clear();
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw InputError("point labels must be non-empty");
    if (!index_.emplace(labels_[i], i).second)
      throw InputError(fmt::format("duplicate point label '{}'", labels_[i]));
  }
}

void FiniteMetricSpace::validate() const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (d_[i * n + i] != 0.0)
      throw InputError(fmt::format("distance from '{}' to itself is not zero", labels_[i]));
    for (std::size_t j = 0; j < n; ++j)
      if (d_[i * n + j] < 0.0) throw InputError("distances must be nonnegative");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (d_[i * n + j] > d_[i * n + k] + d_[k * n + j] + kTriangleTolerance)
          throw InputError(fmt::format("triangle inequality fails for ({}, {}, {})", labels_[i],
                                       labels_[j], labels_[k]));
}

const std::string& FiniteMetricSpace::label(PointIndex i) const {
  check_index(i);
  return labels_[i];
}

PointIndex FiniteMetricSpace::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) throw InputError(fmt::format("unknown point label '{}'", label));
  return it->second;
}

bool FiniteMetricSpace::contains(std::string_view label) const {
  return index_.contains(std::string(label));
}

void FiniteMetricSpace::check_index(PointIndex i) const {
  if (i >= size()) throw InputError(fmt::format("point index {} outside space of {} points", i, size()));
}

double FiniteMetricSpace::distance(PointIndex i, PointIndex j) const {
  check_index(i);
  check_index(j);
  return unchecked_distance(i, j);
}

// ---------------------------------------------------------------------------
// EdgeStructure

EdgeStructure EdgeStructure::from_pairs(const FiniteMetricSpace& space,
                                        const std::vector<std::pair<PointIndex, PointIndex>>& pairs) {
  const std::size_t n = space.size();
  EdgeStructure e(Mode::explicit_pairs, n, 0.0);
  for (auto [u, v] : pairs) {
    space.check_index(u);
    space.check_index(v);
    e.adjacent_[u * n + v] = true;
  }
  for (std::size_t i = 0; i < n; ++i) e.adjacent_[i * n + i] = true;
  return e;
}

EdgeStructure EdgeStructure::metric_ball(const FiniteMetricSpace& space, double radius) {
  if (!(radius > 0.0)) throw InputError("ball radius must be positive");
  const std::size_t n = space.size();
  EdgeStructure e(Mode::metric_ball, n, radius);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      e.adjacent_[i * n + j] = (i == j) || space.unchecked_distance(i, j) < radius;
  return e;
}

EdgeStructure EdgeStructure::complete(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  EdgeStructure e(Mode::complete, n, std::numeric_limits<double>::infinity());
  e.adjacent_.assign(n * n, true);
  return e;
}

bool EdgeStructure::is_edge(PointIndex u, PointIndex v) const {
  if (u >= n_ || v >= n_) throw InputError(fmt::format("edge query ({}, {}) outside space of {} points", u, v, n_));
  return adjacent_[u * n_ + v];
}

std::vector<std::pair<PointIndex, PointIndex>> EdgeStructure::pairs() const {
  std::vector<std::pair<PointIndex, PointIndex>> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (adjacent_[i * n_ + j]) out.emplace_back(i, j);
  return out;
}

bool is_edge(const EdgeStructure& edges, PointIndex u, PointIndex v) { return edges.is_edge(u, v); }

// ---------------------------------------------------------------------------
// Gauge

Gauge::Gauge(std::vector<double> breakpoints, std::vector<double> values, double sup)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), sup_(sup) {
  if (breakpoints_.empty() || breakpoints_.size() != values_.size())
    throw InputError("gauge needs one value per breakpoint");
  if (breakpoints_.front() != 0.0) throw InputError("first gauge breakpoint must be 0");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] > breakpoints_[i - 1]) || !std::isfinite(breakpoints_[i]))
      throw InputError("gauge breakpoints must be finite and strictly ascending");
  if (!(sup_ >= 0.0 && sup_ < 1.0)) throw InputError("gauge certified_sup must lie in [0, 1)");
  for (double v : values_) {
    if (!(v >= 0.0 && v < 1.0)) throw InputError(fmt::format("gauge value {} outside [0, 1)", v));
    if (v > sup_) throw InputError(fmt::format("gauge value {} exceeds certified_sup {}", v, sup_));
  }
}

Gauge Gauge::constant(double c, std::optional<double> certified_sup) {
  return Gauge({0.0}, {c}, certified_sup.value_or(c));
}

Gauge Gauge::piecewise(std::vector<double> breakpoints, std::vector<double> values, double certified_sup) {
  return Gauge(std::move(breakpoints), std::move(values), certified_sup);
}

double Gauge::operator()(double t) const {
  if (!(t >= 0.0)) throw InputError(fmt::format("gauge argument {} is negative", t));
  // Last breakpoint <= t.
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double gauge_eval(const Gauge& k, double t) { return k(t); }

// ---------------------------------------------------------------------------
// ClosedSet and distances

ClosedSet ClosedSet::finite(std::vector<PointIndex> members) {
  if (members.empty()) throw DomainError("closed set must be non-empty");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return ClosedSet(std::move(members));
}

ClosedSet ClosedSet::singleton(GridFunction element) { return ClosedSet(std::move(element)); }

std::span<const PointIndex> ClosedSet::members() const {
  if (!is_finite()) throw DomainError("singleton-image set has no point members");
  return std::get<std::vector<PointIndex>>(data_);
}

const GridFunction& ClosedSet::element() const {
  if (is_finite()) throw DomainError("finite set has no function element");
  return std::get<GridFunction>(data_);
}

bool ClosedSet::contains(PointIndex p) const {
  if (!is_finite()) return false;
  const auto& m = std::get<std::vector<PointIndex>>(data_);
  return std::binary_search(m.begin(), m.end(), p);
}

double point_to_set_distance(PointIndex u, const ClosedSet& z, const FiniteMetricSpace& space) {
  space.check_index(u);
  const auto members = z.members();
  if (members.empty()) throw DomainError("distance to an empty set");
  double best = std::numeric_limits<double>::infinity();
  for (PointIndex m : members) best = std::min(best, space.distance(u, m));
  return best;
}

double point_to_set_distance(const GridFunction& u, const ClosedSet& z) {
  return sup_distance(u, z.element());
}

double hausdorff_distance(const ClosedSet& y, const ClosedSet& z, const FiniteMetricSpace& space) {
  double forward = 0.0;
  for (PointIndex u : y.members()) forward = std::max(forward, point_to_set_distance(u, z, space));
  double backward = 0.0;
  for (PointIndex v : z.members()) backward = std::max(backward, point_to_set_distance(v, y, space));
  return std::max(forward, backward);
}

}  // namespace graphfix
