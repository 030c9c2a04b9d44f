#pragma once

// Finite-space problem files (JSON), embedded reference problems, and the
// seeded random problem generator used by the property suites.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "graphfix/engine.hpp"
#include "graphfix/metric.hpp"

namespace graphfix {

/// Everything a finite problem file describes. The start pair is optional:
/// verification does not need one.
struct FiniteProblemData {
  std::string name;
  FiniteMetricSpace space;
  SetValuedPair maps;
  EdgeStructure edges;
  Gauge gauge;
  std::optional<std::pair<PointIndex, PointIndex>> start;
  IterationConfig config;

  /// Throws InputError when no start pair is present or it is not admissible.
  CoincidenceProblem to_problem() const;
};

/// Parses the problem JSON schema:
///   points: [{label, coord?}], distances?: [[...]], norm?: euclidean|manhattan|max,
///   edges: {mode: ball, radius} | {mode: list, pairs: [[u, v]]} | {mode: complete},
///   gauge: {form: constant, value, sup?} | {form: piecewise, breakpoints, values, sup},
///   f: {label: label}, F: {label: [labels]}, truncated?: [labels],
///   start?: {w0, p0}, config?: {tol, residual_tol, max_iter}
/// Throws InputError for anything malformed or violating an invariant.
FiniteProblemData parse_problem(const nlohmann::json& doc);
FiniteProblemData load_problem(const std::filesystem::path& path);
nlohmann::json problem_to_json(const FiniteProblemData& data);

/// The two-sided geometric example on W = {0, 1} ∪ {3^-n : 1 <= n <= depth}:
/// f(3^-n) = 3^-(n+1), f(0) = 0, F(0) = {0, 1/3}, F(3^-n) = {1/3, 3^-(n+2)},
/// F(1) = {0}, ball edges d < 1/9, gauge ≡ 1/3, start (1/3, 1/27).
/// Points whose images fall past the window are marked truncated.
FiniteProblemData geometric_example(int depth = 12);

/// Names accepted by builtin_problem.
std::vector<std::string> builtin_names();

/// geometric-thirds, geometric-thirds-complete, kamran-counterexample, identity.
/// Throws InputError for an unknown name.
FiniteProblemData builtin_problem(std::string_view name);

/// A random problem on <= max_points points that passes verify_graph_contraction,
/// with a constant gauge and an admissible start; deterministic in the seed.
FiniteProblemData random_problem(std::uint64_t seed, std::size_t max_points = 12, double gauge_value = 0.5);

}  // namespace graphfix
