// Acceptance run: one PASS/FAIL line per criterion with its wall time.
// Exits nonzero when any criterion fails.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "graphfix/engine.hpp"
#include "graphfix/fbvp.hpp"
#include "graphfix/problem_io.hpp"
#include "graphfix/qbernstein.hpp"
#include "graphfix/verifier.hpp"

using namespace graphfix;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Check geometric_reproduction() {
  Check c;
  const auto data = geometric_example(12);
  const auto rep = verify_graph_contraction(data.space, data.maps, data.edges, data.gauge);
  c.require(rep.condition_i_ok && rep.condition_ii_ok && rep.range_ok && rep.start_exists,
            "hypothesis flags not all true");
  const auto out = run_coincidence_iteration(data.to_problem());
  c.require(data.start && data.space.label(data.start->first) == "1/3" && data.space.label(data.start->second) == "1/27",
            "start is not (1/3, 1/27)");
  const auto* conv = std::get_if<Converged>(&out.status);
  c.require(conv != nullptr, "iteration did not converge");
  if (!conv) return c;
  const PointIndex zero = data.space.index_of("0");
  c.require(conv->w_star == zero, "w* is " + data.space.label(conv->w_star));
  c.require(data.maps.F[zero]->contains(*data.maps.f[zero]), "f(0) not in F(0)");
  c.require(out.common_fixed_point == zero, "common fixed point is not 0");
  c.detail = c.ok ? fmt::format("w* = 0 after {} steps, common fixed point 0", out.iterations()) : c.detail;
  return c;
}

Check kamran_counterexample() {
  Check c;
  auto data = geometric_example(12);
  data.gauge = Gauge::constant(0.999);
  const auto rep = verify_kamran_inequality(data.space, data.maps, data.gauge, 0.0);
  c.require(!rep.holds, "inequality reported as holding");
  const PointIndex zero = data.space.index_of("0"), one = data.space.index_of("1");
  bool found = false;
  for (const auto& w : rep.witnesses) {
    if (w.v != zero || w.w != one) continue;
    found = true;
    c.require(near(w.H, 1.0 / 3, 1e-12), fmt::format("H = {}", w.H));
    c.require(near(w.d, 1.0 / 3, 1e-12), fmt::format("d = {}", w.d));
    c.require(near(w.D, 0.0, 1e-12), fmt::format("D = {}", w.D));
  }
  c.require(found, "no witness for the pair (0, 1)");
  if (c.ok) c.detail = "pair (0,1): H = d = 1/3, D = 0";
  return c;
}

Check random_problem_certificates() {
  Check c;
  std::size_t steps = 0;
  for (std::uint64_t seed = 0; seed < 200 && c.ok; ++seed) {
    const auto data = random_problem(seed, 12);
    const auto tag = fmt::format("seed {}: ", seed);
    c.require(data.space.size() <= 12, tag + "too many points");
    c.require(verify_graph_contraction(data.space, data.maps, data.edges, data.gauge, data.start).all_ok(),
              tag + "verifier rejects the problem");
    const auto out = run_coincidence_iteration(data.to_problem());
    const auto* conv = std::get_if<Converged>(&out.status);
    c.require(conv != nullptr, tag + "did not converge");
    if (!conv) break;
    steps += out.iterations();
    const double root = std::sqrt(data.gauge.certified_sup());
    const auto& t = out.trace;
    for (std::size_t j = 2; j < t.size(); ++j)
      c.require(t[j].step <= root * t[j - 1].step + 1e-12, tag + fmt::format("step increase at n = {}", j));
    if (t.size() >= 2)
      for (const auto& s : t)
        c.require(data.space.distance(s.fw, conv->fw_star) <= tail_bound(out.certificate, t[1].step, s.n) + 1e-10,
                  tag + fmt::format("tail bound exceeded at n = {}", s.n));
    // Brute-force coincidence set.
    std::vector<PointIndex> coincident;
    for (PointIndex u = 0; u < data.space.size(); ++u)
      if (data.maps.resolved(u) && data.maps.F[u]->contains(*data.maps.f[u])) coincident.push_back(u);
    c.require(std::find(coincident.begin(), coincident.end(), conv->w_star) != coincident.end(),
              tag + "limit outside the coincidence set");
  }
  if (c.ok) c.detail = fmt::format("200 problems, {} total steps", steps);
  return c;
}

Check bernstein_limits() {
  Check c;
  using namespace qbernstein;
  c.require(contraction_constant({1, 0.5}) == 1.0 && contraction_constant({1, 2.0}) == 1.0, "b_{1,q} != 1");
  c.require(contraction_constant({2, 1.0}) == 0.5, "b_{2,1} != 0.5");
  double worst = 0.0;
  for (const QParams p : {QParams{3, 0.5}, QParams{5, 0.9}, QParams{5, 1.0}, QParams{8, 2.0}}) {
    const auto tag = fmt::format("(n, q) = ({}, {}): ", p.n, p.q);
    const auto lim = iterate_to_limit(p, [](double a) { return a * a; }, 1e-12, 1000000);
    c.require(lim.converged, tag + "not converged");
    for (int i = 0; i <= 100; ++i) {
      const double a = i / 100.0;
      const double err = std::abs(lim(a) - a);
      worst = std::max(worst, err);
      c.require(err <= 1e-8, tag + fmt::format("error {} at a = {}", err, a));
    }
    const double bound = 1.0 - lim.contraction + 1e-12;
    for (std::size_t j = 0; j + 1 < lim.displacements.size(); ++j)
      if (lim.displacements[j] > 0.0)
        c.require(lim.displacements[j + 1] / lim.displacements[j] <= bound, tag + "displacement ratio above 1 - b");
  }
  if (c.ok) c.detail = fmt::format("max |limit - a| = {:.3g}", worst);
  return c;
}

Check partition_of_unity() {
  Check c;
  double worst_sum = 0.0, worst_classical = 0.0;
  for (int n = 1; n <= 10; ++n)
    for (double q : {0.5, 0.9, 1.0, 1.5, 3.0})
      for (int s = 0; s <= 2000; ++s) {
        const double a = s / 2000.0;
        const auto row = qbernstein::basis_row({n, q}, a);
        double sum = 0.0;
        for (double v : row) sum += v;
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        if (q == 1.0)
          for (int i = 0; i <= n; ++i) {
            double binom = 1.0;
            for (int k = 1; k <= i; ++k) binom = binom * (n - i + k) / k;
            const double classical = binom * std::pow(a, i) * std::pow(1.0 - a, n - i);
            worst_classical = std::max(worst_classical, std::abs(row[i] - classical));
          }
      }
  c.require(worst_sum <= 1e-12, fmt::format("partition of unity off by {}", worst_sum));
  c.require(worst_classical <= 1e-12, fmt::format("q = 1 basis off by {}", worst_classical));
  if (c.ok) c.detail = fmt::format("max |sum - 1| = {:.3g}, max classical gap = {:.3g}", worst_sum, worst_classical);
  return c;
}

Check fbvp_classical() {
  Check c;
  constexpr double pi = std::numbers::pi;
  fbvp::FbvpProblem sine;
  sine.beta = 2.0;
  sine.grid_m = 200;
  sine.g = [](double b, double) { return pi * pi * std::sin(pi * b); };
  const auto s = fbvp::picard_solve(sine);
  double err = 0.0;
  for (std::size_t j = 0; j <= 200; ++j) err = std::max(err, std::abs(s.solution[j] - std::sin(pi * j / 200.0)));
  c.require(s.report.converged, "sine forcing did not converge");
  c.require(err <= 1e-5, fmt::format("sine error {}", err));

  fbvp::FbvpProblem lin;
  lin.beta = 2.0;
  lin.grid_m = 200;
  lin.gauge = Gauge::constant(0.5);
  lin.g = [](double, double w) { return 0.5 * w + 1.0; };
  const auto l = fbvp::picard_solve(lin);
  c.require(l.report.converged, "linear forcing did not converge");
  const fbvp::IntegralOperator op(lin);
  const std::size_t n = op.m() + 1;
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> K(
      op.matrix().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - 0.5 * K;
  const Eigen::VectorXd u = A.partialPivLu().solve(K * Eigen::VectorXd::Ones(n));
  double gap = 0.0;
  for (std::size_t j = 0; j < n; ++j) gap = std::max(gap, std::abs(l.solution[j] - u(j)));
  c.require(gap <= 1e-8, fmt::format("Picard vs elimination gap {}", gap));
  if (c.ok) c.detail = fmt::format("sine error {:.3g}, elimination gap {:.3g}", err, gap);
  return c;
}

Check fbvp_fractional() {
  Check c;
  double worst_ratio = 0.0;
  for (double beta : {1.25, 1.5, 1.9}) {
    const auto tag = fmt::format("beta = {}: ", beta);
    fbvp::FbvpProblem p;
    p.beta = beta;
    p.gauge = Gauge::constant(0.25);
    p.g = [](double b, double w) { return 0.25 * std::sin(w) + b; };
    const auto r = fbvp::picard_solve(p);
    c.require(r.report.converged, tag + "not converged");
    c.require(r.report.residual <= 1e-8, tag + fmt::format("residual {}", r.report.residual));
    const auto& d = r.report.displacements;
    for (std::size_t j = 0; j + 1 < d.size(); ++j)
      if (d[j] > 1e-13) {
        const double ratio = d[j + 1] / d[j];
        worst_ratio = std::max(worst_ratio, ratio / r.report.kappa);
        c.require(ratio <= r.report.kappa / 4 + 1e-12, tag + fmt::format("ratio {} above kappa/4", ratio));
      }

    const fbvp::GreenKernel g(beta);
    for (int i = 0; i <= 1000; ++i) {
      const double t = i / 1000.0;
      c.require(g(0.0, t) == 0.0 && g(1.0, t) == 0.0, tag + "kernel nonzero on the boundary");
      // g(t, t) uses the a <= b branch; just above the diagonal the other branch applies.
      const double above = t < 1.0 ? g(t, std::nextafter(t, 2.0)) : g(t, t);
      c.require(std::abs(g(t, t) - above) <= 1e-12, tag + fmt::format("branches disagree at {}", t));
    }
  }
  if (c.ok) c.detail = fmt::format("max ratio / kappa = {:.3g}", worst_ratio);
  return c;
}

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Check()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "geometric example reproduction", 1.0, geometric_reproduction},
      {2, "Hausdorff-inequality counterexample", 1.0, kamran_counterexample},
      {3, "random finite problems: step decrease, tail bound, oracle", 30.0, random_problem_certificates},
      {4, "q-Lupas limits and contraction ratios", 5.0, bernstein_limits},
      {5, "partition of unity and q = 1 reduction", 5.0, partition_of_unity},
      {6, "FBVP classical limit", 5.0, fbvp_classical},
      {7, "FBVP fractional self-consistency", 10.0, fbvp_fractional},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Check result;
    try {
      result = cr.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= cr.budget_s) {
      if (result.ok) result.detail = fmt::format("over time budget of {} s", cr.budget_s);
      result.ok = false;
    }
    if (!result.ok) ++failures;
    std::printf("%s  criterion %d  %-58s %8.3f s  %s\n", result.ok ? "PASS" : "FAIL", cr.id, cr.name.c_str(), secs,
                result.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
