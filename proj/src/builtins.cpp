#include <cmath>
#include <fmt/format.h>

#include "graphfix/errors.hpp"
#include "graphfix/problem_io.hpp"

namespace graphfix {

namespace {

std::string power_label(int n) {
  if (n == 0) return "1";
  return fmt::format("1/{}", static_cast<long long>(std::llround(std::pow(3.0, n))));
}

FiniteProblemData identity_problem() {
  std::vector<std::string> labels = {"a", "b", "c"};
  std::vector<Coord> coords = {{0.0}, {0.5}, {1.0}};
  auto space = FiniteMetricSpace::from_coordinates(labels, coords, Norm::max);
  std::vector<PointIndex> f = {0, 1, 2};
  std::vector<ClosedSet> F = {ClosedSet::finite({0}), ClosedSet::finite({1}), ClosedSet::finite({2})};
  auto edges = EdgeStructure::complete(space);
  return FiniteProblemData{"identity", std::move(space), SetValuedPair::total(std::move(f), std::move(F)),
                           std::move(edges), Gauge::constant(0.5), std::make_pair(PointIndex{1}, PointIndex{1}),
                           IterationConfig{}};
}

}  // namespace

FiniteProblemData geometric_example(int depth) {
  if (depth < 3 || depth > 30) throw InputError(fmt::format("depth {} outside [3, 30]", depth));
  // Index layout: 0 -> "0", 1 -> "1", 1 + n -> 3^-n.
  std::vector<std::string> labels = {"0", "1"};
  std::vector<Coord> coords = {{0.0}, {1.0}};
  for (int n = 1; n <= depth; ++n) {
    labels.push_back(power_label(n));
    coords.push_back({std::pow(3.0, -n)});
  }
  auto space = FiniteMetricSpace::from_coordinates(labels, coords, Norm::max);
  const std::size_t size = space.size();
  auto pow_index = [](int n) -> PointIndex { return n == 0 ? 1 : static_cast<PointIndex>(1 + n); };

  SetValuedPair maps;
  maps.f.assign(size, std::nullopt);
  maps.F.assign(size, std::nullopt);
  maps.truncated.assign(size, false);
  maps.f[0] = 0;
  maps.F[0] = ClosedSet::finite({0, pow_index(1)});
  maps.f[1] = pow_index(1);
  maps.F[1] = ClosedSet::finite({0});
  for (int n = 1; n <= depth; ++n) {
    const PointIndex u = pow_index(n);
    if (n + 1 <= depth) maps.f[u] = pow_index(n + 1);
    if (n + 2 <= depth)
      maps.F[u] = ClosedSet::finite({pow_index(1), pow_index(n + 2)});
    else
      maps.truncated[u] = true;
  }
  maps.validate(space);

  auto edges = EdgeStructure::metric_ball(space, 1.0 / 9.0);
  IterationConfig cfg;
  cfg.tol = 1e-4;
  cfg.residual_tol = 1e-4;
  cfg.max_iter = 100;
  return FiniteProblemData{"geometric-thirds", std::move(space), std::move(maps), std::move(edges),
                           Gauge::constant(1.0 / 3.0), std::make_pair(pow_index(1), pow_index(3)), cfg};
}

std::vector<std::string> builtin_names() {
  return {"geometric-thirds", "geometric-thirds-complete", "kamran-counterexample", "identity"};
}

FiniteProblemData builtin_problem(std::string_view name) {
  if (name == "geometric-thirds") return geometric_example();
  if (name == "geometric-thirds-complete") {
    auto p = geometric_example();
    p.name = std::string(name);
    p.edges = EdgeStructure::complete(p.space);
    return p;
  }
  if (name == "kamran-counterexample") {
    auto p = geometric_example();
    p.name = "kamran-counterexample";
    p.gauge = Gauge::constant(0.999);
    return p;
  }
  if (name == "identity") return identity_problem();
  throw InputError(fmt::format("unknown builtin problem '{}'", name));
}

}  // namespace graphfix
