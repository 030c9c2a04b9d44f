#include "graphfix/qbernstein.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "graphfix/errors.hpp"
#include "graphfix/kernels.hpp"

namespace graphfix::qbernstein {

namespace {

// Above this degree products of q-integers and q^{i(i-1)/2} are formed in log space.
constexpr int kDirectDegreeLimit = 20;

double log_q_integer(int i, double q) { return std::log(q_integer(i, q)); }

double log_q_binomial(int n, int i, double q) {
  double s = 0.0;
  for (int k = 1; k <= i; ++k) s += log_q_integer(n - i + k, q) - log_q_integer(k, q);
  return s;
}

void check_unit(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw InputError(fmt::format("argument {} outside [0, 1]", a));
}

}  // namespace

void QParams::validate() const {
  if (n < 1) throw InputError(fmt::format("degree n = {} must be >= 1", n));
  if (!(q > 0.0) || !std::isfinite(q)) throw InputError(fmt::format("q = {} must be positive", q));
}

double q_integer(int i, double q) {
  if (i < 0) throw InputError("q-integer needs i >= 0");
  if (!(q > 0.0)) throw InputError("q-integer needs q > 0");
  double s = 0.0;
  double power = 1.0;
  for (int k = 0; k < i; ++k) {
    s += power;
    power *= q;
  }
  return s;
}

double q_binomial(int n, int i, double q) {
  if (n < 0 || i < 0 || i > n) throw InputError(fmt::format("q-binomial ({}, {}) out of range", n, i));
  if (n > kDirectDegreeLimit) return std::exp(log_q_binomial(n, i, q));
  double r = 1.0;
  for (int k = 1; k <= i; ++k) r *= q_integer(n - i + k, q) / q_integer(k, q);
  return r;
}

double basis(const QParams& params, int i, double a) {
  params.validate();
  const int n = params.n;
  const double q = params.q;
  if (i < 0 || i > n) throw InputError(fmt::format("basis index {} outside [0, {}]", i, n));
  check_unit(a);
  if (a == 0.0) return i == 0 ? 1.0 : 0.0;
  if (a == 1.0) return i == n ? 1.0 : 0.0;

  const double half_ii = 0.5 * static_cast<double>(i) * static_cast<double>(i - 1);
  if (n <= kDirectDegreeLimit) {
    double denom = 1.0;
    double qj = 1.0;
    for (int j = 0; j < n; ++j) {
      denom *= 1.0 - a + qj * a;
      qj *= q;
    }
    return q_binomial(n, i, q) * std::pow(q, half_ii) * std::pow(a, i) * std::pow(1.0 - a, n - i) / denom;
  }
  double log_denom = 0.0;
  for (int j = 0; j < n; ++j) log_denom += std::log(1.0 - a + std::pow(q, j) * a);
  const double log_num = log_q_binomial(n, i, q) + half_ii * std::log(q) + i * std::log(a) +
                         (n - i) * std::log1p(-a);
  return std::exp(log_num - log_denom);
}

std::vector<double> basis_row(const QParams& params, double a) {
  std::vector<double> row(static_cast<std::size_t>(params.n) + 1);
  for (int i = 0; i <= params.n; ++i) row[static_cast<std::size_t>(i)] = basis(params, i, a);
  return row;
}

std::vector<double> nodes(const QParams& params) {
  params.validate();
  const double top = q_integer(params.n, params.q);
  std::vector<double> t(static_cast<std::size_t>(params.n) + 1);
  for (int i = 0; i <= params.n; ++i) t[static_cast<std::size_t>(i)] = q_integer(i, params.q) / top;
  t.front() = 0.0;
  t.back() = 1.0;
  return t;
}

NodeVector::NodeVector(QParams params, std::vector<double> values)
    : params_(params), values_(std::move(values)) {
  params_.validate();
  if (values_.size() != static_cast<std::size_t>(params_.n) + 1)
    throw InputError(fmt::format("node vector needs {} values, got {}", params_.n + 1, values_.size()));
}

NodeVector NodeVector::sample(QParams params, const std::function<double(double)>& phi) {
  const auto t = nodes(params);
  std::vector<double> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) v[i] = phi(t[i]);
  return NodeVector(params, std::move(v));
}

double apply_operator(const QParams& params, const NodeVector& node_values, double a) {
  params.validate();
  check_unit(a);
  const auto& v = node_values.values();
  if (v.size() != static_cast<std::size_t>(params.n) + 1) throw InputError("node vector degree mismatch");
  if (a == 0.0) return std::abs(v.front());
  if (a == 1.0) return std::abs(v.back());
  double s = 0.0;
  for (int i = 0; i <= params.n; ++i) s += std::abs(v[static_cast<std::size_t>(i)]) * basis(params, i, a);
  return s;
}

std::vector<double> node_matrix(const QParams& params) {
  const auto t = nodes(params);
  const std::size_t size = t.size();
  std::vector<double> m(size * size);
  for (std::size_t r = 0; r < size; ++r) {
    const auto row = basis_row(params, t[r]);
    std::copy(row.begin(), row.end(), m.begin() + static_cast<std::ptrdiff_t>(r * size));
  }
  return m;
}

double contraction_constant(const QParams& params) {
  params.validate();
  const int n = params.n;
  const double q = params.q;
  if (n == 1) return 1.0;
  const double nm1 = static_cast<double>(n - 1);
  const double qh = std::pow(q, 0.5 * n);
  const double cap = std::pow(q, nm1 * nm1);
  if (std::isfinite(qh) && std::isfinite(cap) && qh > 0.0) {
    return std::pow(qh / (1.0 + qh), nm1) / std::max(1.0, cap);
  }
  const double log_q = std::log(q);
  const double log_ratio = 0.5 * n * log_q - std::log1p(std::exp(0.5 * n * log_q));
  return std::exp(nm1 * log_ratio - std::max(0.0, nm1 * nm1 * log_q));
}

double endpoint_mass_minimum(const QParams& params, std::size_t grid_points) {
  if (grid_points < 2) throw InputError("grid needs at least two points");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double a = static_cast<double>(k) / static_cast<double>(grid_points - 1);
    best = std::min(best, basis(params, params.n, a) + basis(params, 0, a));
  }
  return best;
}

double LimitResult::operator()(double a) const { return apply_operator(nodes.params(), nodes, a); }

LimitResult iterate_to_limit(const QParams& params, const std::function<double(double)>& phi, double tol,
                             std::size_t max_iter) {
  params.validate();
  const double b = contraction_constant(params);
  const double k = 1.0 - b;
  if (!(k < 1.0)) throw DomainError(fmt::format("1 - b_(n,q) rounds to 1 for n = {}, q = {}", params.n, params.q));

  const auto matrix = node_matrix(params);
  const std::size_t size = static_cast<std::size_t>(params.n) + 1;
  auto apply_nodes = [&matrix, size](const GridFunction& u) {
    std::vector<double> mag(u.values().begin(), u.values().end());
    for (double& x : mag) x = std::abs(x);
    std::vector<double> out(size);
    kernels::matvec(matrix, size, size, mag, out);
    return GridFunction(std::move(out));
  };
  // W0: node functions vanishing at both endpoints.
  auto in_W0 = [](const GridFunction& d) { return d[0] == 0.0 && d[d.size() - 1] == 0.0; };

  GridFunction start(NodeVector::sample(params, phi).values());
  bool pre_applied = false;
  if (start[0] < 0.0 || start[size - 1] < 0.0) {
    start = apply_nodes(start);
    pre_applied = true;
  }

  IterationConfig cfg;
  cfg.tol = tol;
  cfg.residual_tol = tol;
  cfg.max_iter = max_iter;
  const OperatorOutcome run = run_operator_iteration(apply_nodes, start, in_W0, Gauge::constant(k), cfg);

  std::vector<double> limit(run.limit.values().begin(), run.limit.values().end());
  return LimitResult{NodeVector(params, std::move(limit)), run.iterations, run.converged(), run.displacements,
                     b, pre_applied, run.status};
}

}  // namespace graphfix::qbernstein
