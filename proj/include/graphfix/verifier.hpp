#pragma once

// Exhaustive checks on finite spaces: the graph-contraction hypotheses, the
// Hausdorff-type inequality of the classical single/set-valued theorem used for
// comparison, coincidence enumeration, and best approximation.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphfix/engine.hpp"
#include "graphfix/metric.hpp"

namespace graphfix {

/// One violated inequality or missing object, with both sides recorded.
struct Witness {
  std::string check;  // condition_i, condition_ii, range, start
  std::optional<PointIndex> v;
  std::optional<PointIndex> w;
  std::optional<PointIndex> p;  // the member of F(w) involved, when any
  double lhs = 0.0;
  double rhs = 0.0;
  double d = 0.0;  // d(f(v), f(w)) for conditions (i) and (ii)
  std::string detail;
};

struct HypothesisReport {
  bool condition_i_ok = true;
  bool condition_ii_ok = true;
  bool range_ok = true;
  bool start_exists = false;
  std::optional<std::pair<PointIndex, PointIndex>> start;  // admissible (w0, p0)
  std::vector<Witness> witnesses;
  std::size_t pairs_checked = 0;
  std::size_t pairs_skipped = 0;  // pairs touching a truncated point

  bool all_ok() const { return condition_i_ok && condition_ii_ok && range_ok && start_exists; }
};

/// Checks, for every v and w with f(w) ∈ F(v) and (f(v), f(w)) an edge:
///   (i)  D(f(w), F(w)) <= k(d) d,  d = d(f(v), f(w));
///   (ii) every y ∈ F(w) with d(f(w), y) <= d gives an edge (f(w), y).
/// Also checks F(u) ⊆ f(W) and the existence of an admissible start. When
/// `start` is given only that pair is examined. Pairs involving truncated points
/// are skipped and counted.
HypothesisReport verify_graph_contraction(const FiniteMetricSpace& space, const SetValuedPair& maps,
                                         const EdgeStructure& edges, const Gauge& gauge,
                                         std::optional<std::pair<PointIndex, PointIndex>> start = std::nullopt);

struct KamranWitness {
  PointIndex v;
  PointIndex w;
  double H;      // H(F(v), F(w))
  double d;      // d(f(v), f(w))
  double k;      // k(d)
  double D;      // D(f(v), F(w))
  double rhs;    // k d + M D
};

struct KamranReport {
  bool holds = true;
  double M = 0.0;
  std::vector<KamranWitness> witnesses;
};

/// H(Fv, Fw) <= k(d(fv, fw)) d(fv, fw) + M D(fv, Fw) over all ordered pairs of
/// resolved points; every violation is reported.
KamranReport verify_kamran_inequality(const FiniteMetricSpace& space, const SetValuedPair& maps,
                                      const Gauge& gauge, double M);

struct CoincidenceSets {
  std::vector<PointIndex> coincidence;   // f(w) ∈ F(w)
  std::vector<PointIndex> common_fixed;  // w = f(w) ∈ F(w)
};

/// Scans resolved points only.
CoincidenceSets enumerate_coincidence_points(const FiniteMetricSpace& space, const SetValuedPair& maps);

/// Indices of the members of Q nearest to z (ties within 1e-12 all included).
/// Throws DomainError for empty Q.
std::vector<std::size_t> best_approximant_set(const std::vector<Coord>& Q, const Coord& z, Norm norm);

struct ApproxReport {
  bool condition_i_ok = true;
  bool condition_ii_ok = true;
  bool condition_iii_ok = true;
  std::vector<std::size_t> best;  // B_Q(z)
  std::vector<Witness> witnesses;

  bool all_ok() const { return condition_i_ok && condition_ii_ok && condition_iii_ok; }
};

/// Maps on Q given by index: f[i] ∈ Q, F[i] ⊆ Q.
struct IndexedMaps {
  std::vector<std::size_t> f;
  std::vector<std::vector<std::size_t>> F;
};

/// Invariant best approximation hypotheses on B = B_Q(z):
///   (i)   for v ∈ B and f(w) ∈ F(v): D(fw, Fw) <= k(||fv - fw||) ||fv - fw||;
///   (ii)  f(B) = B;
///   (iii) sup_{u ∈ F(p)} ||u - z|| <= ||f(p) - z|| for p ∈ B.
ApproxReport verify_invariant_approx_hypotheses(const std::vector<Coord>& Q, const Coord& z,
                                                const IndexedMaps& maps, const Gauge& gauge, Norm norm);

/// The coincidence problem on B_Q(z) with the complete graph, started at the
/// first best approximant. Requires verify_invariant_approx_hypotheses to pass;
/// throws HypothesisError otherwise.
CoincidenceProblem restrict_to_best_approximants(const std::vector<Coord>& Q, const Coord& z,
                                                 const IndexedMaps& maps, const Gauge& gauge, Norm norm,
                                                 IterationConfig config = {});

}  // namespace graphfix
