#include "graphfix/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "graphfix/errors.hpp"

namespace graphfix {

HypothesisReport verify_graph_contraction(const FiniteMetricSpace& space, const SetValuedPair& maps,
                                         const EdgeStructure& edges, const Gauge& gauge,
                                         std::optional<std::pair<PointIndex, PointIndex>> start) {
  maps.validate(space);
  if (edges.point_count() != space.size()) throw InputError("edge structure built for another space");
  const std::size_t n = space.size();
  HypothesisReport report;

  for (PointIndex v = 0; v < n; ++v) {
    if (!maps.resolved(v)) continue;
    const PointIndex fv = *maps.f[v];
    for (PointIndex w = 0; w < n; ++w) {
      if (!maps.f[w] || !maps.F[v]->contains(*maps.f[w])) continue;
      const PointIndex fw = *maps.f[w];
      if (!edges.is_edge(fv, fw)) continue;
      if (!maps.resolved(w)) {
        ++report.pairs_skipped;
        continue;
      }
      ++report.pairs_checked;
      const ClosedSet& Fw = *maps.F[w];
      const double d = space.unchecked_distance(fv, fw);
      const double D = point_to_set_distance(fw, Fw, space);
      const double rhs = gauge(d) * d;
      if (!leq_tol(D, rhs)) {
        report.condition_i_ok = false;
        report.witnesses.push_back({"condition_i", v, w, std::nullopt, D, rhs, d,
                                    "D(f(w), F(w)) > k(d) d"});
      }
      for (PointIndex y : Fw.members()) {
        const double dy = space.unchecked_distance(fw, y);
        if (dy <= d && !edges.is_edge(fw, y)) {
          report.condition_ii_ok = false;
          report.witnesses.push_back({"condition_ii", v, w, y, dy, d, d,
                                      "d(f(w), y) <= d(f(v), f(w)) but (f(w), y) is not an edge"});
        }
      }
    }
  }

  const auto img = maps.image();
  for (PointIndex u = 0; u < n; ++u) {
    if (!maps.resolved(u)) continue;
    for (PointIndex m : maps.F[u]->members())
      if (!std::binary_search(img.begin(), img.end(), m)) {
        report.range_ok = false;
        report.witnesses.push_back({"range", std::nullopt, u, m, 0.0, 0.0, 0.0, "member of F(u) outside f(W)"});
      }
  }

  auto admissible = [&](PointIndex w0, PointIndex p0) {
    return w0 < n && p0 < n && maps.resolved(w0) && maps.F[w0]->contains(p0) && edges.is_edge(*maps.f[w0], p0);
  };
  if (start) {
    report.start_exists = admissible(start->first, start->second);
    if (report.start_exists) report.start = start;
  } else {
    for (PointIndex w0 = 0; w0 < n && !report.start_exists; ++w0) {
      if (!maps.resolved(w0)) continue;
      for (PointIndex p0 : maps.F[w0]->members())
        if (admissible(w0, p0)) {
          report.start_exists = true;
          report.start = std::make_pair(w0, p0);
          break;
        }
    }
  }
  if (!report.start_exists) {
    Witness wit{"start", std::nullopt, std::nullopt, std::nullopt, 0.0, 0.0, 0.0,
                "no w0, p0 ∈ F(w0) with (f(w0), p0) an edge"};
    if (start) {
      wit.w = start->first;
      wit.p = start->second;
      wit.detail = "given (w0, p0) is not admissible";
    }
    report.witnesses.push_back(std::move(wit));
  }
  return report;
}

KamranReport verify_kamran_inequality(const FiniteMetricSpace& space, const SetValuedPair& maps,
                                      const Gauge& gauge, double M) {
  maps.validate(space);
  if (!(M >= 0.0)) throw InputError("M must be nonnegative");
  KamranReport report;
  report.M = M;
  const std::size_t n = space.size();
  for (PointIndex v = 0; v < n; ++v) {
    if (!maps.resolved(v)) continue;
    for (PointIndex w = 0; w < n; ++w) {
      if (!maps.resolved(w)) continue;
      const double H = hausdorff_distance(*maps.F[v], *maps.F[w], space);
      const double d = space.unchecked_distance(*maps.f[v], *maps.f[w]);
      const double k = gauge(d);
      const double D = point_to_set_distance(*maps.f[v], *maps.F[w], space);
      const double rhs = k * d + M * D;
      if (!leq_tol(H, rhs)) {
        report.holds = false;
        report.witnesses.push_back({v, w, H, d, k, D, rhs});
      }
    }
  }
  return report;
}

CoincidenceSets enumerate_coincidence_points(const FiniteMetricSpace& space, const SetValuedPair& maps) {
  maps.validate(space);
  CoincidenceSets out;
  for (PointIndex w = 0; w < space.size(); ++w) {
    if (!maps.resolved(w)) continue;
    const PointIndex fw = *maps.f[w];
    if (!maps.F[w]->contains(fw)) continue;
    out.coincidence.push_back(w);
    if (fw == w) out.common_fixed.push_back(w);
  }
  return out;
}

std::vector<std::size_t> best_approximant_set(const std::vector<Coord>& Q, const Coord& z, Norm norm) {
  if (Q.empty()) throw DomainError("best approximation over an empty set");
  std::vector<double> dist(Q.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < Q.size(); ++i) {
    dist[i] = norm_distance(Q[i], z, norm);
    best = std::min(best, dist[i]);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < Q.size(); ++i)
    if (dist[i] <= best + kValueTolerance) out.push_back(i);
  return out;
}

namespace {

void validate_indexed(const std::vector<Coord>& Q, const IndexedMaps& maps) {
  if (maps.f.size() != Q.size() || maps.F.size() != Q.size())
    throw InputError("f and F must have one entry per member of Q");
  for (std::size_t i = 0; i < Q.size(); ++i) {
    if (maps.f[i] >= Q.size()) throw InputError("f maps outside Q");
    if (maps.F[i].empty()) throw DomainError("F-images must be non-empty");
    for (std::size_t m : maps.F[i])
      if (m >= Q.size()) throw InputError("F maps outside Q");
  }
}

double set_distance(const std::vector<Coord>& Q, std::size_t u, const std::vector<std::size_t>& Z, Norm norm) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t m : Z) best = std::min(best, norm_distance(Q[u], Q[m], norm));
  return best;
}

}  // namespace

ApproxReport verify_invariant_approx_hypotheses(const std::vector<Coord>& Q, const Coord& z,
                                                const IndexedMaps& maps, const Gauge& gauge, Norm norm) {
  validate_indexed(Q, maps);
  ApproxReport report;
  report.best = best_approximant_set(Q, z, norm);
  const auto& B = report.best;
  auto in_best = [&](std::size_t i) { return std::find(B.begin(), B.end(), i) != B.end(); };

  for (std::size_t v : B) {
    const std::size_t fv = maps.f[v];
    const auto& Fv = maps.F[v];
    for (std::size_t w = 0; w < Q.size(); ++w) {
      const std::size_t fw = maps.f[w];
      if (std::find(Fv.begin(), Fv.end(), fw) == Fv.end()) continue;
      const double d = norm_distance(Q[fv], Q[fw], norm);
      const double D = set_distance(Q, fw, maps.F[w], norm);
      const double rhs = gauge(d) * d;
      if (!leq_tol(D, rhs)) {
        report.condition_i_ok = false;
        report.witnesses.push_back({"condition_i", v, w, std::nullopt, D, rhs, d, "D(f(w), F(w)) > k(d) d"});
      }
    }
  }

  // f(B) = B: f maps B into B and hits every member.
  std::vector<bool> hit(Q.size(), false);
  for (std::size_t p : B) {
    if (!in_best(maps.f[p])) {
      report.condition_ii_ok = false;
      report.witnesses.push_back({"condition_ii", std::nullopt, p, maps.f[p], 0.0, 0.0, 0.0,
                                  "f maps a best approximant outside B_Q(z)"});
    } else {
      hit[maps.f[p]] = true;
    }
  }
  for (std::size_t p : B)
    if (!hit[p]) {
      report.condition_ii_ok = false;
      report.witnesses.push_back({"condition_ii", std::nullopt, std::nullopt, p, 0.0, 0.0, 0.0,
                                  "best approximant not in f(B_Q(z))"});
    }

  for (std::size_t p : B) {
    double sup = 0.0;
    for (std::size_t u : maps.F[p]) sup = std::max(sup, norm_distance(Q[u], z, norm));
    const double rhs = norm_distance(Q[maps.f[p]], z, norm);
    if (!leq_tol(sup, rhs)) {
      report.condition_iii_ok = false;
      report.witnesses.push_back({"condition_iii", std::nullopt, p, std::nullopt, sup, rhs, 0.0,
                                  "sup_{u ∈ F(p)} ||u - z|| > ||f(p) - z||"});
    }
  }
  return report;
}

CoincidenceProblem restrict_to_best_approximants(const std::vector<Coord>& Q, const Coord& z,
                                                 const IndexedMaps& maps, const Gauge& gauge, Norm norm,
                                                 IterationConfig config) {
  const ApproxReport report = verify_invariant_approx_hypotheses(Q, z, maps, gauge, norm);
  if (!report.all_ok()) throw HypothesisError("invariant approximation hypotheses do not hold");
  const auto& B = report.best;
  std::vector<std::size_t> position(Q.size(), Q.size());
  for (std::size_t i = 0; i < B.size(); ++i) position[B[i]] = i;

  std::vector<std::string> labels;
  std::vector<Coord> coords;
  for (std::size_t q : B) {
    labels.push_back(fmt::format("q{}", q));
    coords.push_back(Q[q]);
  }
  auto space = FiniteMetricSpace::from_coordinates(std::move(labels), std::move(coords), norm);

  std::vector<PointIndex> f;
  std::vector<ClosedSet> F;
  for (std::size_t q : B) {
    f.push_back(position[maps.f[q]]);
    std::vector<PointIndex> members;
    for (std::size_t m : maps.F[q]) {
      if (position[m] == Q.size()) throw HypothesisError("F(p) leaves B_Q(z)");
      members.push_back(position[m]);
    }
    F.push_back(ClosedSet::finite(std::move(members)));
  }
  auto edges = EdgeStructure::complete(space);
  const PointIndex w0 = 0;
  const PointIndex p0 = F[0].members().front();
  return CoincidenceProblem::create(std::move(space), SetValuedPair::total(std::move(f), std::move(F)),
                                    std::move(edges), gauge, w0, p0, config);
}

}  // namespace graphfix
