#pragma once

// Nonlinear q-analogue (Lupaş-type) Bernstein operator
//   (L u)(a) = sum_i |u([i]_q / [n]_q)| b_{n,i}(q, a),
// its contraction constant, and the limit of its iterates.

#include <cstddef>
#include <functional>
#include <vector>

#include "graphfix/engine.hpp"

namespace graphfix::qbernstein {

struct QParams {
  int n = 1;
  double q = 1.0;

  /// Throws InputError unless n >= 1 and q > 0 (finite).
  void validate() const;
};

/// [i]_q = 1 + q + ... + q^{i-1}; [0]_q = 0.
double q_integer(int i, double q);

/// [n choose i]_q. Throws InputError unless 0 <= i <= n.
double q_binomial(int n, int i, double q);

/// b_{n,i}(q, a). Throws InputError for a outside [0, 1] or i outside [0, n].
double basis(const QParams& params, int i, double a);

/// All n+1 basis values at a.
std::vector<double> basis_row(const QParams& params, double a);

/// The n+1 nodes [i]_q / [n]_q; t_0 = 0 and t_n = 1 exactly.
std::vector<double> nodes(const QParams& params);

/// Values attached to the nodes [i]_q / [n]_q.
class NodeVector {
 public:
  /// Throws InputError unless values.size() == n + 1.
  NodeVector(QParams params, std::vector<double> values);

  /// Samples phi at the nodes.
  static NodeVector sample(QParams params, const std::function<double(double)>& phi);

  const QParams& params() const { return params_; }
  const std::vector<double>& values() const { return values_; }

 private:
  QParams params_;
  std::vector<double> values_;
};

/// sum_i |values_i| b_{n,i}(q, a). Exact endpoint values at a = 0 and a = 1.
double apply_operator(const QParams& params, const NodeVector& node_values, double a);

/// The node-to-node map u -> (sum_j |u_j| b_{n,j}(q, t_i))_i as a dense
/// (n+1) x (n+1) row-major matrix.
std::vector<double> node_matrix(const QParams& params);

/// b_{n,q} = (q^{n/2} / (1 + q^{n/2}))^{n-1} / max{1, q^{(n-1)^2}}; 1 for n = 1.
double contraction_constant(const QParams& params);

/// min over a dense uniform grid of b_{n,n}(q,a) + b_{n,0}(q,a).
double endpoint_mass_minimum(const QParams& params, std::size_t grid_points = 2001);

struct LimitResult {
  NodeVector nodes;  // converged node values
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> displacements;  // ||u^(j) - L u^(j)|| on the nodes
  double contraction = 0.0;           // b_{n,q}
  bool pre_applied = false;           // phi had a negative endpoint value; one step taken first
  OperatorStatus status;

  /// The fixed point evaluated anywhere in [0, 1].
  double operator()(double a) const;
};

/// Iterates the node vector until the sup-change is <= tol.
///
/// The gauge handed to the iteration engine is k = 1 - b_{n,q}; the engine
/// checks the displacement inequality at every step. If phi(0) < 0 or
/// phi(1) < 0 one operator application is made first so that the iteration
/// starts inside the class where the displacement bound holds.
/// Throws DomainError when 1 - b_{n,q} rounds to 1.
LimitResult iterate_to_limit(const QParams& params, const std::function<double(double)>& phi, double tol,
                             std::size_t max_iter);

}  // namespace graphfix::qbernstein
