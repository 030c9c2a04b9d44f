#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <future>
#include <numbers>
#include <sstream>
#include <thread>

#include "graphfix/cli.hpp"
#include "graphfix/errors.hpp"
#include "graphfix/fbvp.hpp"
#include "graphfix/qbernstein.hpp"
#include "graphfix/verifier.hpp"

namespace graphfix::cli {

using nlohmann::json;

std::string ProblemSource::describe() const {
  if (file) return *file;
  if (builtin) return "builtin:" + *builtin;
  return "";
}

FiniteProblemData load_source(const ProblemSource& source) {
  if (static_cast<bool>(source.file) == static_cast<bool>(source.builtin))
    throw InputError("give exactly one of --problem FILE or --builtin NAME");
  if (source.file) return load_problem(*source.file);
  return builtin_problem(*source.builtin);
}

namespace {

json optional_label(const FiniteMetricSpace& space, const std::optional<PointIndex>& p) {
  return p ? json(space.label(*p)) : json(nullptr);
}

json witness_json(const Witness& w, const FiniteMetricSpace& space) {
  return json{{"check", w.check}, {"v", optional_label(space, w.v)}, {"w", optional_label(space, w.w)},
              {"p", optional_label(space, w.p)}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"d", w.d},
              {"detail", w.detail}};
}

json hypothesis_json(const HypothesisReport& r, const FiniteMetricSpace& space) {
  json witnesses = json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(witness_json(w, space));
  json start = nullptr;
  if (r.start) start = {{"w0", space.label(r.start->first)}, {"p0", space.label(r.start->second)}};
  return json{{"condition_i_ok", r.condition_i_ok}, {"condition_ii_ok", r.condition_ii_ok},
              {"range_ok", r.range_ok},             {"start_exists", r.start_exists},
              {"start", start},                     {"pairs_checked", r.pairs_checked},
              {"pairs_skipped", r.pairs_skipped},   {"witnesses", std::move(witnesses)}};
}

json kamran_json(const KamranReport& r, const FiniteMetricSpace& space) {
  json witnesses = json::array();
  for (const auto& w : r.witnesses)
    witnesses.push_back({{"v", space.label(w.v)}, {"w", space.label(w.w)}, {"H", w.H}, {"d", w.d}, {"k", w.k},
                         {"D", w.D}, {"rhs", w.rhs}});
  return json{{"holds", r.holds}, {"M", r.M}, {"witnesses", std::move(witnesses)}};
}

json with_manifest(json report, const RunManifest& manifest) {
  report["manifest"] = manifest.to_json();
  return report;
}

// Samples "x,value" per line (a header line is skipped) and interpolates linearly.
std::function<double(double)> load_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open sample file '{}'", path));
  std::vector<std::pair<double, double>> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x = 0.0, y = 0.0;
    if (!(ss >> x >> y)) {
      if (lineno == 1) continue;
      throw InputError(fmt::format("{}:{}: expected 'x,value'", path, lineno));
    }
    if (!std::isfinite(x) || !std::isfinite(y)) throw InputError(fmt::format("{}:{}: non-finite value", path, lineno));
    pts.emplace_back(x, y);
  }
  std::sort(pts.begin(), pts.end());
  if (pts.size() < 2 || pts.front().first > 0.0 || pts.back().first < 1.0)
    throw InputError(fmt::format("'{}' must hold at least two samples covering [0, 1]", path));
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].first == pts[i - 1].first) throw InputError(fmt::format("'{}' repeats x = {}", path, pts[i].first));
  return [pts = std::move(pts)](double x) {
    auto it = std::lower_bound(pts.begin(), pts.end(), x, [](const auto& pt, double v) { return pt.first < v; });
    if (it == pts.begin()) return it->second;
    if (it == pts.end()) return pts.back().second;
    if (it->first == x) return it->second;
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
  };
}

}  // namespace

CommandResult cmd_verify(const VerifyOptions& options, const RunManifest& manifest) {
  prepare_output_dir(manifest.out_dir);
  const FiniteProblemData data = load_source(options.source);
  const auto report = verify_graph_contraction(data.space, data.maps, data.edges, data.gauge, data.start);
  const auto sets = enumerate_coincidence_points(data.space, data.maps);

  CommandResult result;
  json out = hypothesis_json(report, data.space);
  out["problem"] = data.name;
  json coincidence = json::array(), common = json::array();
  for (PointIndex p : sets.coincidence) coincidence.push_back(data.space.label(p));
  for (PointIndex p : sets.common_fixed) common.push_back(data.space.label(p));
  out["coincidence_points"] = std::move(coincidence);
  out["common_fixed_points"] = std::move(common);
  bool ok = report.all_ok();
  if (options.kamran) {
    const auto k = verify_kamran_inequality(data.space, data.maps, data.gauge, options.M);
    out["kamran"] = kamran_json(k, data.space);
    ok = ok && k.holds;
  }
  out["all_ok"] = ok;
  result.exit_code = ok ? kSuccess : kHypothesisFailure;
  result.report = with_manifest(std::move(out), manifest);
  result.files.push_back(write_report(manifest.out_dir, "verify_report", result.report));
  result.summary = ok ? fmt::format("verify {}: all checks passed", data.name)
                      : fmt::format("verify {}: hypothesis check failed", data.name);
  return result;
}

CommandResult cmd_iterate(const IterateOptions& options, const RunManifest& manifest) {
  prepare_output_dir(manifest.out_dir);
  FiniteProblemData data = load_source(options.source);
  if (options.tol) data.config.tol = *options.tol;
  if (options.residual_tol) data.config.residual_tol = *options.residual_tol;
  if (options.max_iter) data.config.max_iter = *options.max_iter;
  data.config.validate();
  if (options.w0 || options.p0) {
    if (!options.w0 || !options.p0) throw InputError("--w0 and --p0 go together");
    data.start = std::make_pair(data.space.index_of(*options.w0), data.space.index_of(*options.p0));
  }
  const CoincidenceProblem problem = data.to_problem();
  const IterationOutcome outcome = run_coincidence_iteration(problem);
  const auto& space = problem.space();

  Table trace{{"n", "w", "fw", "step", "residual", "tail_bound", "edge_ok"}, {}};
  for (const auto& s : outcome.trace)
    trace.rows.push_back({s.n, space.label(s.w), space.label(s.fw), s.step, s.residual, s.tail_bound, s.edge_ok});

  json out{{"problem", data.name},
           {"iterations", outcome.iterations()},
           {"final_residual", outcome.final_residual},
           {"certificate",
            {{"alpha", outcome.certificate.alpha},
             {"B", outcome.certificate.B},
             {"M_index", outcome.certificate.M_index}}},
           {"common_fixed_point", optional_label(space, outcome.common_fixed_point)},
           {"config",
            {{"tol", data.config.tol}, {"residual_tol", data.config.residual_tol}, {"max_iter", data.config.max_iter}}}};
  CommandResult result;
  if (const auto* c = std::get_if<Converged>(&outcome.status)) {
    out["status"] = "converged";
    out["w_star"] = space.label(c->w_star);
    out["fw_star"] = space.label(c->fw_star);
    out["stop_step"] = c->step;
    out["limit_identified"] = c->limit_identified;
    result.exit_code = kSuccess;
    result.summary = fmt::format("iterate {}: converged to {} after {} steps", data.name, space.label(c->w_star),
                                 outcome.iterations());
  } else if (const auto* h = std::get_if<HypothesisViolated>(&outcome.status)) {
    out["status"] = "hypothesis_violated";
    out["condition"] = std::string(condition_name(h->condition));
    out["violation_step"] = h->step;
    out["detail"] = h->detail;
    result.exit_code = kHypothesisFailure;
    result.summary = fmt::format("iterate {}: condition {} violated at step {}: {}", data.name,
                                 condition_name(h->condition), h->step, h->detail);
  } else {
    const auto& m = std::get<MaxIterExceeded>(outcome.status);
    out["status"] = "max_iter_exceeded";
    out["iterations"] = m.iterations;
    result.exit_code = kBudgetExhausted;
    result.summary = fmt::format("iterate {}: no convergence within {} steps", data.name, data.config.max_iter);
  }
  result.report = with_manifest(std::move(out), manifest);
  result.files.push_back(write_table(manifest.out_dir, "trace", trace, manifest.format));
  result.files.push_back(write_report(manifest.out_dir, "outcome", result.report));
  return result;
}

CommandResult cmd_bernstein(const BernsteinOptions& options, const RunManifest& manifest) {
  prepare_output_dir(manifest.out_dir);
  if (options.grid < 2) throw InputError("--grid needs at least 2 points");
  if (!(options.tol > 0.0)) throw InputError("--tol must be positive");
  const qbernstein::QParams params{options.n, options.q};
  params.validate();

  std::function<double(double)> phi;
  if (options.phi == "square") phi = [](double a) { return a * a; };
  else if (options.phi == "cube") phi = [](double a) { return a * a * a; };
  else if (options.phi == "sin") phi = [](double a) { return std::sin(0.5 * std::numbers::pi * a); };
  else if (options.phi == "file") {
    if (!options.phi_file) throw InputError("--phi file needs --phi-file PATH");
    phi = load_samples(*options.phi_file);
  } else {
    throw InputError(fmt::format("unknown --phi '{}'", options.phi));
  }

  const auto limit = qbernstein::iterate_to_limit(params, phi, options.tol, options.max_iter);
  const double phi0 = phi(0.0), phi1 = phi(1.0);
  const bool formula_applies = phi0 >= 0.0 && phi1 >= 0.0;

  Table table{{"a", "limit", "interpolant", "abs_error"}, {}};
  double max_error = 0.0;
  for (std::size_t i = 0; i < options.grid; ++i) {
    const double a = static_cast<double>(i) / static_cast<double>(options.grid - 1);
    const double lim = limit(a);
    const double interp = phi0 * (1.0 - a) + phi1 * a;
    const double err = std::abs(lim - interp);
    max_error = std::max(max_error, err);
    table.rows.push_back({a, lim, interp, err});
  }
  double max_ratio = 0.0;
  for (std::size_t j = 0; j + 1 < limit.displacements.size(); ++j)
    if (limit.displacements[j] > 0.0)
      max_ratio = std::max(max_ratio, limit.displacements[j + 1] / limit.displacements[j]);

  json out{{"n", options.n},
           {"q", options.q},
           {"phi", options.phi},
           {"converged", limit.converged},
           {"iterations", limit.iterations},
           {"final_displacement", limit.displacements.empty() ? 0.0 : limit.displacements.back()},
           {"b_nq", limit.contraction},
           {"endpoint_mass_minimum", qbernstein::endpoint_mass_minimum(params)},
           {"max_displacement_ratio", max_ratio},
           {"pre_applied", limit.pre_applied},
           {"formula_applies", formula_applies},
           {"max_abs_error", max_error},
           {"node_values", limit.nodes.values()},
           {"displacements", limit.displacements}};

  CommandResult result;
  if (limit.converged) {
    result.exit_code = kSuccess;
  } else if (const auto* h = std::get_if<HypothesisViolated>(&limit.status)) {
    out["condition"] = std::string(condition_name(h->condition));
    out["detail"] = h->detail;
    result.exit_code = kHypothesisFailure;
  } else {
    result.exit_code = kBudgetExhausted;
  }
  result.summary = fmt::format("bernstein n={} q={}: {} after {} iterations, max |limit - interpolant| = {}",
                               options.n, format_real(options.q), limit.converged ? "converged" : "not converged",
                               limit.iterations, format_real(max_error));
  result.report = with_manifest(std::move(out), manifest);
  result.files.push_back(write_table(manifest.out_dir, "bernstein_limit", table, manifest.format));
  result.files.push_back(write_report(manifest.out_dir, "bernstein_summary", result.report));
  return result;
}

CommandResult cmd_fbvp(const FbvpOptions& options, const RunManifest& manifest) {
  prepare_output_dir(manifest.out_dir);
  fbvp::FbvpProblem problem;
  problem.beta = options.beta;
  problem.grid_m = options.m;
  problem.tol = options.tol;
  problem.max_iter = options.max_iter;
  std::function<double(double)> reference;  // exact solution when one is known
  const double pi = std::numbers::pi;
  if (options.forcing == "sin-pi") {
    problem.g = [pi](double b, double) { return pi * pi * std::sin(pi * b); };
    if (options.beta == 2.0) reference = [pi](double b) { return std::sin(pi * b); };
  } else if (options.forcing == "const") {
    const double c = options.const_value;
    if (!std::isfinite(c)) throw InputError("--const-value must be finite");
    problem.g = [c](double, double) { return c; };
    if (options.beta == 2.0) reference = [c](double b) { return 0.5 * c * b * (1.0 - b); };
  } else if (options.forcing == "linear-w") {
    problem.g = [](double, double w) { return 0.5 * w + 1.0; };
    problem.gauge = Gauge::constant(0.5);
  } else if (options.forcing == "file") {
    if (!options.forcing_file) throw InputError("--forcing file needs --forcing-file PATH");
    auto samples = load_samples(*options.forcing_file);
    problem.g = [samples](double b, double) { return samples(b); };
  } else {
    throw InputError(fmt::format("unknown --forcing '{}'", options.forcing));
  }
  problem.validate();

  const auto solved = fbvp::picard_solve(problem);
  const auto& rep = solved.report;
  Table table{{"b", "u"}, {}};
  double ref_error = 0.0;
  for (std::size_t j = 0; j <= options.m; ++j) {
    const double b = GridFunction::uniform_node(j, options.m);
    table.rows.push_back({b, solved.solution[j]});
    if (reference) ref_error = std::max(ref_error, std::abs(solved.solution[j] - reference(b)));
  }
  json out{{"beta", options.beta},
           {"forcing", options.forcing},
           {"m", options.m},
           {"converged", rep.converged},
           {"iterations", rep.iterations},
           {"residual", rep.residual},
           {"kappa", rep.kappa},
           {"effective_factor", rep.effective_factor},
           {"contraction_warning", rep.contraction_warning},
           {"displacements", rep.displacements}};
  if (reference) out["reference_sup_error"] = ref_error;

  CommandResult result;
  result.exit_code = rep.converged ? kSuccess : kBudgetExhausted;
  result.summary = fmt::format("fbvp beta={} forcing={}: {} after {} iterations, residual {}", format_real(options.beta),
                               options.forcing, rep.converged ? "converged" : "not converged", rep.iterations,
                               format_real(rep.residual));
  if (rep.contraction_warning)
    result.summary += fmt::format(" (warning: kappa * k = {} >= 1)", format_real(rep.effective_factor));
  result.report = with_manifest(std::move(out), manifest);
  result.files.push_back(write_table(manifest.out_dir, "fbvp_solution", table, manifest.format));
  result.files.push_back(write_report(manifest.out_dir, "fbvp_report", result.report));
  return result;
}

namespace {

struct SweepRow {
  std::uint64_t seed = 0;
  std::size_t points = 0;
  std::string status;
  std::size_t iterations = 0;
  std::string w_star;
  bool in_coincidence_set = false;
  std::string error;
};

SweepRow sweep_one(std::uint64_t seed, const SweepOptions& options) {
  SweepRow row;
  row.seed = seed;
  try {
    const auto data = random_problem(seed, options.max_points, options.gauge);
    row.points = data.space.size();
    const auto outcome = run_coincidence_iteration(data.to_problem());
    row.iterations = outcome.iterations();
    if (const auto* c = std::get_if<Converged>(&outcome.status)) {
      row.status = "converged";
      row.w_star = data.space.label(c->w_star);
      const auto sets = enumerate_coincidence_points(data.space, data.maps);
      row.in_coincidence_set =
          std::find(sets.coincidence.begin(), sets.coincidence.end(), c->w_star) != sets.coincidence.end();
    } else if (std::holds_alternative<HypothesisViolated>(outcome.status)) {
      row.status = "hypothesis_violated";
    } else {
      row.status = "max_iter_exceeded";
    }
  } catch (const std::exception& e) {
    row.status = "error";
    row.error = e.what();
  }
  return row;
}

}  // namespace

CommandResult cmd_sweep(const SweepOptions& options, const RunManifest& manifest) {
  prepare_output_dir(manifest.out_dir);
  if (options.count == 0) throw InputError("--count must be positive");
  std::size_t jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, options.count);

  std::vector<SweepRow> rows(options.count);
  std::vector<std::future<void>> workers;
  for (std::size_t t = 0; t < jobs; ++t)
    workers.push_back(std::async(std::launch::async, [&, t] {
      for (std::size_t i = t; i < options.count; i += jobs) rows[i] = sweep_one(manifest.seed + i, options);
    }));
  for (auto& w : workers) w.get();

  Table table{{"seed", "points", "status", "iterations", "w_star", "in_coincidence_set", "error"}, {}};
  std::size_t good = 0;
  for (const auto& r : rows) {
    table.rows.push_back({r.seed, r.points, r.status, r.iterations, r.w_star, r.in_coincidence_set, r.error});
    if (r.status == "converged" && r.in_coincidence_set) ++good;
  }
  json out{{"runs", options.count}, {"converged_in_oracle_set", good}, {"jobs", jobs},
           {"max_points", options.max_points}, {"gauge", options.gauge}};
  CommandResult result;
  result.exit_code = good == options.count ? kSuccess : kHypothesisFailure;
  result.summary = fmt::format("sweep: {}/{} runs converged to a brute-force coincidence point", good, options.count);
  result.report = with_manifest(std::move(out), manifest);
  result.files.push_back(write_table(manifest.out_dir, "sweep", table, manifest.format));
  result.files.push_back(write_report(manifest.out_dir, "sweep_summary", result.report));
  return result;
}

}  // namespace graphfix::cli
