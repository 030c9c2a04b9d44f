#include "graphfix/fbvp.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "graphfix/errors.hpp"
#include "graphfix/kernels.hpp"

namespace graphfix::fbvp {

GreenKernel::GreenKernel(double beta) : beta_(beta), gamma_beta_(0.0) {
  if (!(beta > 1.0) || !std::isfinite(beta)) throw InputError(fmt::format("beta = {} must exceed 1", beta));
  gamma_beta_ = gamma_function(beta);
}

double GreenKernel::operator()(double b, double a) const {
  if (!(b >= 0.0 && b <= 1.0 && a >= 0.0 && a <= 1.0))
    throw InputError(fmt::format("Green kernel argument ({}, {}) outside [0,1]^2", b, a));
  const double e = beta_ - 1.0;
  const double outer = std::pow(b * (1.0 - a), e);
  if (a <= b) return (outer - std::pow(b - a, e)) / gamma_beta_;
  return outer / gamma_beta_;
}

double green_kernel(const GreenKernel& kernel, double b, double a) { return kernel(b, a); }

namespace {

void add_segment(std::vector<double>& w, std::size_t start, std::size_t count, double h) {
  if (count == 0) return;
  if (count == 1) {
    w[start] += 0.5 * h;
    w[start + 1] += 0.5 * h;
    return;
  }
  std::size_t simpson = count % 2 == 0 ? count : count - 3;
  for (std::size_t k = 0; k < simpson; k += 2) {
    w[start + k] += h / 3.0;
    w[start + k + 1] += 4.0 * h / 3.0;
    w[start + k + 2] += h / 3.0;
  }
  if (simpson != count) {
    const std::size_t s = start + simpson;
    const double c = 3.0 * h / 8.0;
    w[s] += c;
    w[s + 1] += 3.0 * c;
    w[s + 2] += 3.0 * c;
    w[s + 3] += c;
  }
}

}  // namespace

std::vector<double> split_quadrature_weights(std::size_t m, std::size_t split) {
  if (m == 0) throw InputError("quadrature grid needs m >= 1");
  if (split > m) throw InputError("split node outside the grid");
  const double h = 1.0 / static_cast<double>(m);
  std::vector<double> w(m + 1, 0.0);
  add_segment(w, 0, split, h);
  add_segment(w, split, m - split, h);
  return w;
}

void FbvpProblem::validate() const {
  if (!(beta > 1.0) || !std::isfinite(beta)) throw InputError(fmt::format("beta = {} must exceed 1", beta));
  if (grid_m < 2 || grid_m % 2 != 0) throw InputError(fmt::format("grid m = {} must be even and >= 2", grid_m));
  if (!(tol > 0.0)) throw InputError("tol must be positive");
  if (!g) throw InputError("forcing g is not set");
  if (static_cast<bool>(f_apply) != static_cast<bool>(f_inverse))
    throw InputError("f_apply and f_inverse must be supplied together");
  if (f_apply) {
    const std::vector<GridFunction> probes = {
        GridFunction::zeros(grid_m),
        GridFunction::sample(grid_m, [](double b) { return std::sin(std::numbers::pi * b); }),
        GridFunction::sample(grid_m, [](double b) { return b * (1.0 - b) - 0.3; }),
    };
    for (const auto& u : probes)
      if (sup_distance(f_apply(f_inverse(u)), u) > 1e-10)
        throw InputError("f_apply(f_inverse(u)) differs from u");
  }
}

IntegralOperator::IntegralOperator(const FbvpProblem& problem) : problem_(problem), m_(problem.grid_m), kappa_(0.0) {
  problem_.validate();
  const GreenKernel kernel(problem_.beta);
  const std::size_t n = m_ + 1;
  k_.assign(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double b = GridFunction::uniform_node(j, m_);
    const auto weights = split_quadrature_weights(m_, j);
    double row_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = weights[i] * kernel(b, GridFunction::uniform_node(i, m_));
      k_[j * n + i] = v;
      row_abs += std::abs(v);
    }
    kappa_ = std::max(kappa_, row_abs);
  }
}

GridFunction IntegralOperator::apply(const GridFunction& w) const {
  if (w.size() != m_ + 1) throw InputError(fmt::format("grid function has {} nodes, expected {}", w.size(), m_ + 1));
  const GridFunction fw = problem_.apply_f(w);
  std::vector<double> forcing(m_ + 1);
  for (std::size_t i = 0; i <= m_; ++i) forcing[i] = problem_.g(GridFunction::uniform_node(i, m_), fw[i]);
  std::vector<double> out(m_ + 1);
  kernels::matvec(k_, m_ + 1, m_ + 1, forcing, out);
  // The kernel rows at b = 0 and b = 1 are exactly zero; keep the boundary exact.
  out.front() = 0.0;
  out.back() = 0.0;
  return GridFunction(std::move(out));
}

GridFunction apply_integral_operator(const FbvpProblem& problem, const GridFunction& w) {
  return IntegralOperator(problem).apply(w);
}

PicardResult picard_solve(const FbvpProblem& problem, std::optional<GridFunction> initial) {
  const IntegralOperator op(problem);
  PicardResult result{initial.value_or(GridFunction::zeros(problem.grid_m)), {}};
  auto& rep = result.report;
  rep.kappa = op.kappa();
  rep.effective_factor = rep.kappa * problem.gauge.certified_sup();
  rep.contraction_warning = rep.effective_factor >= 1.0;

  GridFunction u = std::move(result.solution);
  if (u.size() != problem.grid_m + 1) throw InputError("initial guess has the wrong number of nodes");
  for (std::size_t it = 0;; ++it) {
    GridFunction next = op.apply(problem.apply_f_inverse(u));
    const double disp = sup_distance(next, u);
    rep.displacements.push_back(disp);
    if (disp <= problem.tol) {
      rep.converged = true;
      rep.iterations = it;
      u = std::move(next);
      break;
    }
    if (it + 1 >= problem.max_iter) {
      rep.iterations = it + 1;
      u = std::move(next);
      break;
    }
    u = std::move(next);
  }
  rep.residual = sup_distance(u, op.apply(problem.apply_f_inverse(u)));
  result.solution = std::move(u);
  return result;
}

ConditionIReport verify_condition_i(const FbvpProblem& problem,
                                    const std::vector<std::pair<GridFunction, GridFunction>>& samples) {
  if (samples.empty()) throw InputError("condition (i) check needs at least one sample pair");
  if (!problem.g) throw InputError("forcing g is not set");
  ConditionIReport rep;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const GridFunction fv = problem.apply_f(samples[s].first);
    const GridFunction fw = problem.apply_f(samples[s].second);
    if (fv.size() != fw.size() || fv.size() < 2) throw InputError("sample pair sizes disagree");
    const double k = problem.gauge(sup_distance(fv, fw));
    const std::size_t m = fv.size() - 1;
    for (std::size_t j = 0; j <= m; ++j) {
      const double b = GridFunction::uniform_node(j, m);
      const double lhs = std::abs(problem.g(b, fv[j]) - problem.g(b, fw[j]));
      const double delta = std::abs(fv[j] - fw[j]);
      const double rhs = k * delta;
      if (delta > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / delta);
      if (!leq_tol(lhs, rhs)) {
        rep.holds = false;
        rep.violations.push_back({s, j, lhs, rhs});
      }
    }
  }
  return rep;
}

}  // namespace graphfix::fbvp
