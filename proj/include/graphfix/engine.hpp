#pragma once

// Graph-constrained coincidence iteration for a single-valued f and a
// closed-valued F on a finite metric space, with the geometric a-priori stopping
// certificate, plus the single-valued specialization for operator iterates.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "graphfix/grid_function.hpp"
#include "graphfix/metric.hpp"

namespace graphfix {

/// f : W -> W and F : W -> CL(W) on a finite space, given point-wise.
///
/// A truncated point stands at the edge of a finite window cut from an
/// infinite space: its f-image may be missing and its F-image may have lost
/// members. Only resolved points take part in checks and in iteration.
struct SetValuedPair {
  std::vector<std::optional<PointIndex>> f;
  std::vector<std::optional<ClosedSet>> F;
  std::vector<bool> truncated;

  /// Both maps total, nothing truncated.
  static SetValuedPair total(std::vector<PointIndex> f, std::vector<ClosedSet> F);

  std::size_t size() const { return f.size(); }
  bool resolved(PointIndex u) const { return !truncated[u] && f[u].has_value() && F[u].has_value(); }

  /// Throws InputError on size mismatch, out-of-range indices, or a missing
  /// image at a point not marked truncated.
  void validate(const FiniteMetricSpace& space) const;

  /// Sorted f(W) over all points with a defined image.
  std::vector<PointIndex> image() const;
};

struct IterationConfig {
  double tol = 1e-10;
  std::size_t max_iter = 1000;
  double residual_tol = 1e-10;

  /// tol, residual_tol > 0. max_iter = 0 is accepted and means "no steps".
  void validate() const;
};

/// A validated coincidence problem: space, maps, graph, gauge, admissible start.
class CoincidenceProblem {
 public:
  /// Checks the range condition F(u) ⊆ f(W) at every resolved u, that w0 is
  /// resolved, p0 ∈ F(w0), and (f(w0), p0) is an edge. Throws InputError.
  static CoincidenceProblem create(FiniteMetricSpace space, SetValuedPair maps, EdgeStructure edges,
                                   Gauge gauge, PointIndex w0, PointIndex p0,
                                   IterationConfig config = {});

  const FiniteMetricSpace& space() const { return space_; }
  const SetValuedPair& maps() const { return maps_; }
  const EdgeStructure& edges() const { return edges_; }
  const Gauge& gauge() const { return gauge_; }
  PointIndex w0() const { return w0_; }
  PointIndex p0() const { return p0_; }
  const IterationConfig& config() const { return config_; }

  PointIndex f(PointIndex u) const { return *maps_.f[u]; }
  const ClosedSet& F(PointIndex u) const { return *maps_.F[u]; }

  /// Same problem with a different iteration configuration.
  CoincidenceProblem with_config(IterationConfig config) const;

 private:
  CoincidenceProblem(FiniteMetricSpace space, SetValuedPair maps, EdgeStructure edges, Gauge gauge,
                     PointIndex w0, PointIndex p0, IterationConfig config)
      : space_(std::move(space)), maps_(std::move(maps)), edges_(std::move(edges)),
        gauge_(std::move(gauge)), w0_(w0), p0_(p0), config_(config) {}

  FiniteMetricSpace space_;
  SetValuedPair maps_;
  EdgeStructure edges_;
  Gauge gauge_;
  PointIndex w0_;
  PointIndex p0_;
  IterationConfig config_;
};

struct TraceStep {
  std::size_t n;
  PointIndex w;
  PointIndex fw;
  double step;        // d(f(w_{n-1}), f(w_n)); 0 at n = 0
  double residual;    // D(f(w_n), F(w_n))
  double tail_bound;  // a-priori bound on d(f(w_n), limit)
  bool edge_ok;
};

using IterationTrace = std::vector<TraceStep>;

/// Geometric tail bound data: with a globally certified gauge, alpha is the
/// certified supremum, the bound applies from index 1 and B = alpha^{-1/2}.
struct ConvergenceCertificate {
  double alpha;
  double B;
  std::size_t M_index;

  /// Throws DomainError if alpha >= 1. For alpha = 0, B = 1.
  static ConvergenceCertificate from_gauge(const Gauge& gauge);
};

/// B * alpha^{n/2} / (1 - alpha^{1/2}) * d0: bounds d(f(w_n), f(w_{n+m})) for all m.
double tail_bound(const ConvergenceCertificate& cert, double d0, std::size_t n);

enum class Condition { i, ii, edge, range };
std::string_view condition_name(Condition c);

struct Converged {
  PointIndex w_star;
  PointIndex fw_star;
  std::size_t step;  // index of the trace row at which stopping fired
  bool limit_identified;  // w_star found as an exact coincidence inside the certified ball
};

struct HypothesisViolated {
  Condition condition;
  std::size_t step;
  std::string detail;
};

struct MaxIterExceeded {
  std::size_t iterations;
};

using IterationStatus = std::variant<Converged, HypothesisViolated, MaxIterExceeded>;

struct IterationOutcome {
  IterationStatus status;
  IterationTrace trace;
  ConvergenceCertificate certificate;
  std::optional<PointIndex> common_fixed_point;
  double final_residual = 0.0;

  bool converged() const { return std::holds_alternative<Converged>(status); }
  /// Number of successor steps taken.
  std::size_t iterations() const { return trace.empty() ? 0 : trace.back().n; }
};

/// Picks the successor f(w_{n+1}) from F(w_n): the member nearest to fw_n, lowest
/// index on ties. It satisfies d(fw_n, y) <= D(fw_n, Fw_n) / sqrt(k(prev_step)).
///
/// Throws HypothesisError when k(prev_step) = 0 but D(fw_n, Fw_n) > 0, and
/// InputError when prev_step <= 0 with a positive residual.
PointIndex select_successor(double prev_step, PointIndex fw_n, const ClosedSet& Fw_n,
                            const Gauge& gauge, const FiniteMetricSpace& space);

IterationOutcome run_coincidence_iteration(const CoincidenceProblem& problem);

// ---------------------------------------------------------------------------
// Operator iterates w_{n+1} = T(w_n) on grid functions.

using GridOperator = std::function<GridFunction(const GridFunction&)>;
using SubspacePredicate = std::function<bool(const GridFunction&)>;

struct OperatorConverged {
  std::size_t step;
  bool limit_in_start_coset;  // in_W0(w0 - limit)
};

using OperatorStatus = std::variant<OperatorConverged, HypothesisViolated, MaxIterExceeded>;

struct OperatorOutcome {
  OperatorStatus status;
  GridFunction limit;  // last iterate computed
  std::vector<double> displacements;  // ||w_n - T w_n|| for n = 0, 1, ...
  std::size_t iterations = 0;

  bool converged() const { return std::holds_alternative<OperatorConverged>(status); }
};

/// Iterates T from w0 while checking ||Tw - T^2 w|| <= k(||w - Tw||) ||w - Tw||
/// and w_n - w_{n+1} ∈ W0 at every step. Stops when ||w_n - w_{n+1}|| <= tol.
/// Reports HypothesisViolated{edge, 0} when w0 - T(w0) ∉ W0.
OperatorOutcome run_operator_iteration(const GridOperator& T, const GridFunction& w0,
                                       const SubspacePredicate& in_W0, const Gauge& gauge,
                                       const IterationConfig& config);

}  // namespace graphfix
