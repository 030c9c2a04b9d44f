#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <random>

#include "graphfix/errors.hpp"
#include "graphfix/problem_io.hpp"
#include "graphfix/verifier.hpp"

namespace graphfix {

namespace {

constexpr int kMaxAttempts = 20000;

struct Draw {
  std::mt19937_64 rng;

  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
  bool coin(double p) { return unit() < p; }
};

struct Drawn {
  FiniteMetricSpace space;
  SetValuedPair maps;
};

// Unstructured: random points, f onto a random image set, F random subsets of it.
Drawn draw_scattered(Draw& r, std::size_t max_points) {
  const std::size_t n = r.index(2, max_points);
  const std::size_t dim = r.coin(0.5) ? 1 : 2;
  std::vector<std::string> labels;
  std::vector<Coord> coords;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(fmt::format("p{}", i));
    Coord c(dim);
    for (double& x : c) x = r.unit();
    coords.push_back(std::move(c));
  }
  const Norm norm = dim == 1 ? Norm::max : static_cast<Norm>(r.index(0, 2));
  auto space = FiniteMetricSpace::from_coordinates(labels, coords, norm);

  // f onto a random image set, every image point hit at least once.
  std::vector<PointIndex> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), r.rng);
  const std::size_t m = r.index(1, std::min<std::size_t>(n, 5));
  std::vector<PointIndex> image(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<PointIndex> f(n);
  std::shuffle(order.begin(), order.end(), r.rng);
  for (std::size_t i = 0; i < n; ++i) f[order[i]] = i < m ? image[i] : image[r.index(0, m - 1)];

  std::vector<ClosedSet> F;
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<PointIndex> members;
    const std::size_t k = r.index(1, std::min<std::size_t>(m, 3));
    for (std::size_t j = 0; j < k; ++j) members.push_back(image[r.index(0, m - 1)]);
    if (r.coin(0.3)) members.push_back(f[u]);
    F.push_back(ClosedSet::finite(std::move(members)));
  }
  return {std::move(space), SetValuedPair::total(std::move(f), std::move(F))};
}

// A chain y_0, y_1, ... closing in on y* with f(y_j) = y_{j+1} and
// F(y_j) ∋ y_{j+2}, so iteration has somewhere to go; a few scattered extra
// points and extra F-members are mixed in and may break the hypotheses.
Drawn draw_chain(Draw& r, std::size_t max_points, double gauge_value) {
  const std::size_t n = r.index(3, max_points);
  const std::size_t chain = r.index(2, n - 1);  // y_0 .. y_{chain-1}, then y*
  const std::size_t dim = r.coin(0.5) ? 1 : 2;
  const double rho_max = gauge_value / (1.0 + gauge_value);

  Coord centre(dim);
  for (double& x : centre) x = r.unit();
  std::vector<Coord> coords = {centre};  // index 0 is y*
  double t = 0.2 + 0.8 * r.unit();
  Coord dir(dim, 0.0);
  dir[0] = r.coin(0.5) ? 1.0 : -1.0;
  for (std::size_t j = 0; j < chain; ++j) {
    if (dim == 2 && r.coin(0.3)) {
      const double angle = 0.2 * (r.unit() - 0.5);
      dir = {std::cos(angle) * dir[0] - std::sin(angle) * dir[1], std::sin(angle) * dir[0] + std::cos(angle) * dir[1]};
    }
    Coord y = centre;
    for (std::size_t k = 0; k < dim; ++k) y[k] += t * dir[k];
    coords.push_back(std::move(y));
    t *= rho_max * (0.1 + 0.89 * r.unit());
  }
  for (std::size_t e = chain + 1; e < n; ++e) {
    Coord c(dim);
    for (double& x : c) x = r.unit();
    coords.push_back(std::move(c));
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < coords.size(); ++i) labels.push_back(fmt::format("p{}", i));
  auto space = FiniteMetricSpace::from_coordinates(labels, coords, dim == 1 ? Norm::max : Norm::euclidean);

  auto y = [](std::size_t j) -> PointIndex { return 1 + j; };
  std::vector<PointIndex> f(coords.size());
  std::vector<std::vector<PointIndex>> members(coords.size());
  f[0] = 0;
  members[0] = {0};
  for (std::size_t j = 0; j < chain; ++j) {
    f[y(j)] = j + 1 < chain ? y(j + 1) : 0;
    members[y(j)] = {j + 2 < chain ? y(j + 2) : 0};
  }
  std::vector<PointIndex> image(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(chain + 1));
  for (std::size_t e = chain + 1; e < coords.size(); ++e) {
    f[e] = image[r.index(0, image.size() - 1)];
    members[e] = {image[r.index(0, image.size() - 1)]};
  }
  for (auto& m : members)
    if (r.coin(0.2)) m.push_back(image[r.index(0, image.size() - 1)]);
  std::vector<ClosedSet> F;
  for (auto& m : members) F.push_back(ClosedSet::finite(std::move(m)));
  return {std::move(space), SetValuedPair::total(std::move(f), std::move(F))};
}

std::optional<FiniteProblemData> attempt(Draw& r, std::size_t max_points, double gauge_value,
                                         std::uint64_t seed) {
  auto [space, maps] =
      max_points >= 3 && r.coin(0.75) ? draw_chain(r, max_points, gauge_value) : draw_scattered(r, max_points);
  const std::size_t n = space.size();

  double diameter = 0.0;
  for (PointIndex i = 0; i < n; ++i)
    for (PointIndex j = 0; j < n; ++j) diameter = std::max(diameter, space.unchecked_distance(i, j));
  auto edges = r.coin(0.5) ? EdgeStructure::complete(space)
                           : EdgeStructure::metric_ball(space, (0.2 + 0.8 * r.unit()) * diameter + 1e-12);
  const Gauge gauge = Gauge::constant(gauge_value);

  const auto report = verify_graph_contraction(space, maps, edges, gauge);
  if (!report.all_ok()) return std::nullopt;

  // Prefer a start that is not already a coincidence point.
  auto moving_start = [&]() -> std::optional<std::pair<PointIndex, PointIndex>> {
    for (PointIndex w = 0; w < n; ++w) {
      const PointIndex fw = *maps.f[w];
      if (maps.F[w]->contains(fw)) continue;
      for (PointIndex p : maps.F[w]->members())
        if (edges.is_edge(fw, p)) return std::make_pair(w, p);
    }
    return std::nullopt;
  };
  auto start = moving_start();
  if (!start) start = report.start;
  return FiniteProblemData{fmt::format("random-{}", seed), std::move(space), std::move(maps), std::move(edges),
                           gauge, start, IterationConfig{}};
}

}  // namespace

FiniteProblemData random_problem(std::uint64_t seed, std::size_t max_points, double gauge_value) {
  if (max_points < 2) throw InputError("random problems need at least 2 points");
  if (!(gauge_value >= 0.0 && gauge_value < 1.0)) throw InputError("gauge value must lie in [0, 1)");
  Draw r{std::mt19937_64(seed)};
  for (int i = 0; i < kMaxAttempts; ++i)
    if (auto p = attempt(r, max_points, gauge_value, seed)) return std::move(*p);
  throw DomainError(fmt::format("no admissible random problem found for seed {}", seed));
}

}  // namespace graphfix
