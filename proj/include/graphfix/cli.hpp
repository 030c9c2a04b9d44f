#pragma once

// Command-line front end: one function per subcommand plus the argument
// parser. Every command writes its files into the manifest's output directory
// and embeds the manifest in its JSON report.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphfix/problem_io.hpp"

namespace graphfix::cli {

enum ExitCode : int { kSuccess = 0, kHypothesisFailure = 1, kInputError = 2, kBudgetExhausted = 3 };

struct RunManifest {
  std::string subcommand;
  std::string source;  // problem file, builtin:<name>, or empty
  nlohmann::json parameters = nlohmann::json::object();
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 0;
  std::string format = "csv";  // tabular files: csv or json

  nlohmann::json to_json() const;
};

struct CommandResult {
  int exit_code = kSuccess;
  nlohmann::json report;
  std::vector<std::filesystem::path> files;
  std::string summary;  // one line for the terminal
};

/// Exactly one of file or builtin.
struct ProblemSource {
  std::optional<std::string> file;
  std::optional<std::string> builtin;

  std::string describe() const;
};

/// Throws InputError when neither or both are set, or loading fails.
FiniteProblemData load_source(const ProblemSource& source);

struct VerifyOptions {
  ProblemSource source;
  bool kamran = false;
  double M = 0.0;
};

struct IterateOptions {
  ProblemSource source;
  std::optional<double> tol;
  std::optional<double> residual_tol;
  std::optional<std::size_t> max_iter;
  std::optional<std::string> w0;
  std::optional<std::string> p0;
};

struct BernsteinOptions {
  int n = 5;
  double q = 0.9;
  std::string phi = "square";  // square | cube | sin | file
  std::optional<std::string> phi_file;
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  std::size_t grid = 101;
};

struct FbvpOptions {
  double beta = 2.0;
  std::string forcing = "sin-pi";  // sin-pi | const | linear-w | file
  std::optional<std::string> forcing_file;
  double const_value = 1.0;
  std::size_t m = 200;
  double tol = 1e-10;
  std::size_t max_iter = 10000;
};

struct SweepOptions {
  std::size_t count = 20;
  std::size_t max_points = 12;
  double gauge = 0.5;
  std::size_t jobs = 0;  // 0: hardware concurrency
};

CommandResult cmd_verify(const VerifyOptions& options, const RunManifest& manifest);
CommandResult cmd_iterate(const IterateOptions& options, const RunManifest& manifest);
CommandResult cmd_bernstein(const BernsteinOptions& options, const RunManifest& manifest);
CommandResult cmd_fbvp(const FbvpOptions& options, const RunManifest& manifest);
/// Random finite problems with seeds seed, seed+1, ...: generate, iterate, and
/// compare each limit against the brute-force coincidence set. Runs fan out
/// over worker threads; the result table is written once at the end.
CommandResult cmd_sweep(const SweepOptions& options, const RunManifest& manifest);

/// Full command line. Messages go to out/err; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Report helpers.

/// 17 significant digits.
std::string format_real(double x);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

/// Writes dir/stem.csv or dir/stem.json and returns the path.
std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& stem, const Table& table,
                                  const std::string& format);
std::filesystem::path write_report(const std::filesystem::path& dir, const std::string& stem,
                                   const nlohmann::json& report);
/// Creates the directory if needed. Throws InputError when it cannot be written.
void prepare_output_dir(const std::filesystem::path& dir);

}  // namespace graphfix::cli
