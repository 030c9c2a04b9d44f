#include <CLI11.hpp>
#include <fmt/format.h>

#include <ostream>

#include "graphfix/cli.hpp"
#include "graphfix/errors.hpp"

namespace graphfix::cli {

using nlohmann::json;

namespace {

void add_source(CLI::App* cmd, ProblemSource& src) {
  cmd->add_option("--problem", src.file, "Problem JSON file");
  cmd->add_option("--builtin", src.builtin, "Embedded problem")
      ->check(CLI::IsMember(builtin_names()));
}

json source_json(const ProblemSource& s) {
  json j = json::object();
  if (s.file) j["problem"] = *s.file;
  if (s.builtin) j["builtin"] = *s.builtin;
  return j;
}

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph-constrained coincidence iteration, q-Bernstein iterates and fractional BVP solver"};
  app.require_subcommand(1);
  app.fallthrough();

  RunManifest manifest;
  std::string out_dir = ".";
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", manifest.seed, "Seed recorded in reports; base seed for sweep")->capture_default_str();
  app.add_option("--format", manifest.format, "Tabular output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Check the graph-contraction hypotheses on a finite problem");
  add_source(verify, vo.source);
  verify->add_flag("--kamran", vo.kamran, "Also check the Hausdorff-type inequality over all pairs");
  verify->add_option("--M", vo.M, "Coefficient of D(fv, Fw) in that inequality")->capture_default_str();

  IterateOptions io;
  auto* iterate = app.add_subcommand("iterate", "Run the coincidence iteration and write its trace");
  add_source(iterate, io.source);
  iterate->add_option("--tol", io.tol, "Stopping tolerance");
  iterate->add_option("--residual-tol", io.residual_tol, "Residual tolerance");
  iterate->add_option("--max-iter", io.max_iter, "Step budget");
  iterate->add_option("--w0", io.w0, "Start point label");
  iterate->add_option("--p0", io.p0, "Start member of F(w0)");

  BernsteinOptions bo;
  auto* bern = app.add_subcommand("bernstein", "Iterate the nonlinear q-Bernstein operator to its limit");
  bern->add_option("--n", bo.n, "Degree")->capture_default_str();
  bern->add_option("--q", bo.q, "q > 0")->capture_default_str();
  bern->add_option("--phi", bo.phi, "square | cube | sin (sin(pi a / 2)) | file")
      ->check(CLI::IsMember({"square", "cube", "sin", "file"}))
      ->capture_default_str();
  bern->add_option("--phi-file", bo.phi_file, "CSV of a,phi(a) samples for --phi file");
  bern->add_option("--tol", bo.tol, "Sup-change tolerance")->capture_default_str();
  bern->add_option("--max-iter", bo.max_iter, "Iteration budget")->capture_default_str();
  bern->add_option("--grid", bo.grid, "Output grid points")->capture_default_str();

  FbvpOptions fo;
  auto* fb = app.add_subcommand("fbvp", "Solve the fractional boundary value problem by Picard iteration");
  fb->add_option("--beta", fo.beta, "Order, > 1")->capture_default_str();
  fb->add_option("--forcing", fo.forcing, "sin-pi | const | linear-w | file")
      ->check(CLI::IsMember({"sin-pi", "const", "linear-w", "file"}))
      ->capture_default_str();
  fb->add_option("--forcing-file", fo.forcing_file, "CSV of b,g(b) samples for --forcing file");
  fb->add_option("--const-value", fo.const_value, "Value for --forcing const")->capture_default_str();
  fb->add_option("--m", fo.m, "Grid intervals (even)")->capture_default_str();
  fb->add_option("--tol", fo.tol, "Sup-change tolerance")->capture_default_str();
  fb->add_option("--max-iter", fo.max_iter, "Iteration budget")->capture_default_str();

  SweepOptions so;
  auto* sweep = app.add_subcommand("sweep", "Iterate many seeded random finite problems concurrently");
  sweep->add_option("--count", so.count, "Number of problems")->capture_default_str();
  sweep->add_option("--max-points", so.max_points, "Points per problem, at most")->capture_default_str();
  sweep->add_option("--gauge", so.gauge, "Constant gauge value")->capture_default_str();
  sweep->add_option("--jobs", so.jobs, "Worker threads, 0 for all cores")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  manifest.out_dir = out_dir;
  try {
    CommandResult result;
    if (*verify) {
      manifest.subcommand = "verify";
      manifest.source = vo.source.describe();
      manifest.parameters = source_json(vo.source);
      manifest.parameters["kamran"] = vo.kamran;
      manifest.parameters["M"] = vo.M;
      result = cmd_verify(vo, manifest);
    } else if (*iterate) {
      manifest.subcommand = "iterate";
      manifest.source = io.source.describe();
      manifest.parameters = source_json(io.source);
      put(manifest.parameters, "tol", io.tol);
      put(manifest.parameters, "residual_tol", io.residual_tol);
      put(manifest.parameters, "max_iter", io.max_iter);
      put(manifest.parameters, "w0", io.w0);
      put(manifest.parameters, "p0", io.p0);
      result = cmd_iterate(io, manifest);
    } else if (*bern) {
      manifest.subcommand = "bernstein";
      manifest.parameters = {{"n", bo.n}, {"q", bo.q}, {"phi", bo.phi}, {"tol", bo.tol},
                             {"max_iter", bo.max_iter}, {"grid", bo.grid}};
      put(manifest.parameters, "phi_file", bo.phi_file);
      result = cmd_bernstein(bo, manifest);
    } else if (*fb) {
      manifest.subcommand = "fbvp";
      manifest.parameters = {{"beta", fo.beta}, {"forcing", fo.forcing}, {"const_value", fo.const_value},
                             {"m", fo.m},       {"tol", fo.tol},         {"max_iter", fo.max_iter}};
      put(manifest.parameters, "forcing_file", fo.forcing_file);
      result = cmd_fbvp(fo, manifest);
    } else {
      manifest.subcommand = "sweep";
      manifest.parameters = {{"count", so.count}, {"max_points", so.max_points}, {"gauge", so.gauge},
                             {"jobs", so.jobs}};
      result = cmd_sweep(so, manifest);
    }
    out << result.summary << '\n';
    for (const auto& f : result.files) out << "  wrote " << f.string() << '\n';
    return result.exit_code;
  } catch (const HypothesisError& e) {
    err << "hypothesis failure: " << e.what() << '\n';
    return kHypothesisFailure;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace graphfix::cli
