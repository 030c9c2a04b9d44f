#include "graphfix/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "graphfix/errors.hpp"

namespace graphfix {

// ---------------------------------------------------------------------------
// SetValuedPair

SetValuedPair SetValuedPair::total(std::vector<PointIndex> f, std::vector<ClosedSet> F) {
  if (f.size() != F.size()) throw InputError("f and F must have one entry per point");
  SetValuedPair p;
  p.f.assign(f.begin(), f.end());
  p.F.assign(F.begin(), F.end());
  p.truncated.assign(f.size(), false);
  return p;
}

void SetValuedPair::validate(const FiniteMetricSpace& space) const {
  const std::size_t n = space.size();
  if (f.size() != n || F.size() != n || truncated.size() != n)
    throw InputError("f, F and truncation flags must have one entry per point");
  for (std::size_t u = 0; u < n; ++u) {
    if (f[u]) space.check_index(*f[u]);
    if (F[u]) {
      if (!F[u]->is_finite()) throw InputError("F-images on a finite space must be finite sets");
      for (PointIndex m : F[u]->members()) space.check_index(m);
    }
    if (!truncated[u] && (!f[u] || !F[u]))
      throw InputError(fmt::format("point '{}' lacks an f- or F-image but is not marked truncated",
                                   space.label(u)));
  }
}

std::vector<PointIndex> SetValuedPair::image() const {
  std::vector<PointIndex> img;
  for (const auto& v : f)
    if (v) img.push_back(*v);
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  return img;
}

// ---------------------------------------------------------------------------
// Config and problem

void IterationConfig::validate() const {
  if (!(tol > 0.0)) throw InputError("tol must be positive");
  if (!(residual_tol > 0.0)) throw InputError("residual_tol must be positive");
}

CoincidenceProblem CoincidenceProblem::create(FiniteMetricSpace space, SetValuedPair maps,
                                              EdgeStructure edges, Gauge gauge, PointIndex w0,
                                              PointIndex p0, IterationConfig config) {
  maps.validate(space);
  config.validate();
  if (edges.point_count() != space.size()) throw InputError("edge structure built for another space");
  space.check_index(w0);
  space.check_index(p0);

  const auto img = maps.image();
  for (PointIndex u = 0; u < space.size(); ++u) {
    if (!maps.resolved(u)) continue;
    for (PointIndex m : maps.F[u]->members())
      if (!std::binary_search(img.begin(), img.end(), m))
        throw InputError(fmt::format("range condition fails: '{}' ∈ F({}) is not in f(W)",
                                     space.label(m), space.label(u)));
  }
  if (!maps.resolved(w0)) throw InputError(fmt::format("start point '{}' is truncated", space.label(w0)));
  if (!maps.F[w0]->contains(p0))
    throw InputError(fmt::format("p0 '{}' is not in F(w0)", space.label(p0)));
  if (!edges.is_edge(*maps.f[w0], p0))
    throw InputError(fmt::format("(f(w0), p0) = ({}, {}) is not an edge", space.label(*maps.f[w0]),
                                 space.label(p0)));
  return CoincidenceProblem(std::move(space), std::move(maps), std::move(edges), std::move(gauge), w0, p0,
                            config);
}

CoincidenceProblem CoincidenceProblem::with_config(IterationConfig config) const {
  config.validate();
  CoincidenceProblem copy = *this;
  copy.config_ = config;
  return copy;
}

// ---------------------------------------------------------------------------
// Certificate

ConvergenceCertificate ConvergenceCertificate::from_gauge(const Gauge& gauge) {
  const double alpha = gauge.certified_sup();
  if (!(alpha < 1.0)) throw DomainError("certificate needs alpha < 1");
  // alpha = 0 makes alpha^{-1/2} infinite; the sharper B = 1 form is exact there.
  const double B = alpha > 0.0 ? 1.0 / std::sqrt(alpha) : 1.0;
  return {alpha, B, 1};
}

double tail_bound(const ConvergenceCertificate& cert, double d0, std::size_t n) {
  if (!(cert.alpha >= 0.0 && cert.alpha < 1.0)) throw DomainError("tail bound needs 0 <= alpha < 1");
  if (!(cert.B > 0.0)) throw DomainError("tail bound needs B > 0");
  if (!(d0 >= 0.0)) throw InputError("tail bound needs d0 >= 0");
  if (d0 == 0.0) return 0.0;
  const double root = std::sqrt(cert.alpha);
  return cert.B * std::pow(cert.alpha, static_cast<double>(n) / 2.0) / (1.0 - root) * d0;
}

std::string_view condition_name(Condition c) {
  switch (c) {
    case Condition::i: return "i";
    case Condition::ii: return "ii";
    case Condition::edge: return "edge";
    case Condition::range: return "range";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Successor selection

namespace {

// Nearest member of Z to u; ties go to the lowest index (members are sorted).
PointIndex nearest_member(PointIndex u, const ClosedSet& z, const FiniteMetricSpace& space) {
  PointIndex best = z.members().front();
  double best_d = std::numeric_limits<double>::infinity();
  for (PointIndex m : z.members()) {
    const double d = space.distance(u, m);
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

}  // namespace

PointIndex select_successor(double prev_step, PointIndex fw_n, const ClosedSet& Fw_n, const Gauge& gauge,
                            const FiniteMetricSpace& space) {
  const double D = point_to_set_distance(fw_n, Fw_n, space);
  if (D == 0.0) return nearest_member(fw_n, Fw_n, space);
  if (!(prev_step > 0.0)) throw InputError("select_successor needs a positive previous step");
  const double k = gauge(prev_step);
  if (k == 0.0)
    throw HypothesisError(fmt::format("k({}) = 0 but D(fw, Fw) = {} > 0", prev_step, D));
  return nearest_member(fw_n, Fw_n, space);
}

// ---------------------------------------------------------------------------
// Coincidence iteration

namespace {

struct Preimage {
  std::optional<PointIndex> resolved;
  bool exists_unresolved = false;
};

// Lowest-label preimage of y under f, preferring points whose images are complete.
Preimage find_preimage(const CoincidenceProblem& p, PointIndex y) {
  Preimage out;
  const auto& maps = p.maps();
  for (PointIndex u = 0; u < maps.size(); ++u) {
    if (!maps.f[u] || *maps.f[u] != y) continue;
    if (maps.resolved(u)) {
      out.resolved = u;
      return out;
    }
    out.exists_unresolved = true;
  }
  return out;
}

double residual_at(const CoincidenceProblem& p, PointIndex u) {
  return point_to_set_distance(p.f(u), p.F(u), p.space());
}

// The a-priori certificate places the limit of f(w_n) within `radius` of
// f(w_n). Prefer an exact coincidence point inside that ball, nearest first,
// then the current point itself, then the lowest index.
std::optional<PointIndex> identify_limit(const CoincidenceProblem& p, PointIndex w_n, double radius) {
  const auto& space = p.space();
  const PointIndex y = p.f(w_n);
  std::optional<PointIndex> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (PointIndex u = 0; u < space.size(); ++u) {
    if (!p.maps().resolved(u)) continue;
    if (residual_at(p, u) > kValueTolerance) continue;
    const double d = space.unchecked_distance(p.f(u), y);
    if (!leq_tol(d, radius)) continue;
    if (d < best_d || (d == best_d && u == w_n)) {
      best = u;
      best_d = d;
    }
  }
  return best;
}

}  // namespace

IterationOutcome run_coincidence_iteration(const CoincidenceProblem& problem) {
  const auto& space = problem.space();
  const auto& gauge = problem.gauge();
  const auto& cfg = problem.config();

  IterationOutcome out{MaxIterExceeded{0}, {}, ConvergenceCertificate::from_gauge(gauge), std::nullopt, 0.0};

  auto finish = [&](PointIndex w_star, std::size_t step, bool identified) {
    const PointIndex a = problem.f(w_star);
    out.status = Converged{w_star, a, step, identified};
    out.final_residual = residual_at(problem, w_star);
    // Common fixed point a = f(w*) when f(a) = a and f(a) ∈ F(a).
    if (problem.maps().resolved(a) && problem.f(a) == a && problem.F(a).contains(a))
      out.common_fixed_point = a;
  };
  auto violate = [&](Condition c, std::size_t step, std::string detail) {
    out.status = HypothesisViolated{c, step, std::move(detail)};
  };

  PointIndex w = problem.w0();
  PointIndex fw = problem.f(w);
  double residual = residual_at(problem, w);
  out.trace.push_back({0, w, fw, 0.0, residual, 0.0, true});

  if (residual <= cfg.residual_tol && residual <= cfg.tol) {
    finish(w, 0, false);
    return out;
  }

  double first_step = 0.0;
  double prev_step = 0.0;
  for (std::size_t n = 1;; ++n) {
    if (n > cfg.max_iter) {
      out.status = MaxIterExceeded{n - 1};
      return out;
    }

    PointIndex y;
    double k_prev = 0.0;
    if (n == 1) {
      y = problem.p0();
    } else {
      k_prev = gauge(prev_step);
      try {
        y = select_successor(prev_step, fw, problem.F(w), gauge, space);
      } catch (const HypothesisError& e) {
        violate(Condition::i, n, e.what());
        return out;
      }
    }

    const Preimage pre = find_preimage(problem, y);
    if (!pre.resolved) {
      violate(Condition::range, n,
              pre.exists_unresolved
                  ? fmt::format("successor '{}' has only truncated preimages", space.label(y))
                  : fmt::format("successor '{}' is not in f(W)", space.label(y)));
      return out;
    }

    const double step = space.unchecked_distance(fw, y);
    if (!problem.edges().is_edge(fw, y)) {
      violate(n == 1 ? Condition::edge : Condition::ii, n,
              fmt::format("({}, {}) is not an edge", space.label(fw), space.label(y)));
      return out;
    }
    if (n >= 2 && !leq_tol(step, std::sqrt(k_prev) * prev_step)) {
      violate(Condition::i, n,
              fmt::format("step {} exceeds sqrt(k) * previous step = {}", step, std::sqrt(k_prev) * prev_step));
      return out;
    }

    w = *pre.resolved;
    fw = y;
    residual = residual_at(problem, w);
    if (!leq_tol(residual, gauge(step) * step)) {
      violate(Condition::i, n,
              fmt::format("D(fw, Fw) = {} exceeds k(d) d = {}", residual, gauge(step) * step));
      return out;
    }

    if (n == 1) {
      first_step = step;
      out.trace.front().tail_bound = tail_bound(out.certificate, first_step, 0);
    }
    const double bound = tail_bound(out.certificate, first_step, n);
    out.trace.push_back({n, w, fw, step, residual, bound, true});

    const bool a_posteriori = step <= cfg.tol && residual <= cfg.residual_tol;
    const bool a_priori = bound <= cfg.tol;
    if (a_posteriori || a_priori) {
      if (auto limit = identify_limit(problem, w, bound)) {
        finish(*limit, n, true);
        return out;
      }
      if (residual <= cfg.residual_tol) {
        finish(w, n, false);
        return out;
      }
      // Certificate fired but nothing in the ball meets the residual target; keep going.
    }
    prev_step = step;
  }
}

// ---------------------------------------------------------------------------
// Operator iteration

OperatorOutcome run_operator_iteration(const GridOperator& T, const GridFunction& w0,
                                       const SubspacePredicate& in_W0, const Gauge& gauge,
                                       const IterationConfig& config) {
  config.validate();
  OperatorOutcome out{MaxIterExceeded{0}, w0, {}, 0};

  GridFunction w = w0;
  for (std::size_t n = 0;; ++n) {
    GridFunction next = T(w);
    const GridFunction diff = w - next;
    const double disp = diff.sup_norm();
    out.displacements.push_back(disp);

    if (!in_W0(diff)) {
      out.status = HypothesisViolated{n == 0 ? Condition::edge : Condition::ii, n,
                                      "w_n - T(w_n) is outside W0"};
      out.limit = std::move(w);
      out.iterations = n;
      return out;
    }
    if (n >= 1) {
      const double prev = out.displacements[n - 1];
      const double bound = gauge(prev) * prev;
      if (!leq_tol(disp, bound)) {
        out.status = HypothesisViolated{Condition::i, n,
                                        fmt::format("displacement {} exceeds k(d) d = {}", disp, bound)};
        out.limit = std::move(w);
        out.iterations = n;
        return out;
      }
    }
    if (disp <= config.tol) {
      out.limit = std::move(next);
      out.iterations = n;
      const bool in_coset = in_W0(w0 - out.limit);
      if (!in_coset) {
        out.status = HypothesisViolated{Condition::ii, n, "limit is outside w0 + W0"};
      } else {
        out.status = OperatorConverged{n, true};
      }
      return out;
    }
    if (n + 1 >= config.max_iter) {
      out.status = MaxIterExceeded{n + 1};
      out.limit = std::move(next);
      out.iterations = n + 1;
      return out;
    }
    w = std::move(next);
  }
}

}  // namespace graphfix
