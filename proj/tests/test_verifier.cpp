#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "graphfix/errors.hpp"
#include "graphfix/problem_io.hpp"
#include "graphfix/verifier.hpp"

using namespace graphfix;

namespace {

bool has_witness_for(const HypothesisReport& r, const std::string& check) {
  for (const auto& w : r.witnesses)
    if (w.check == check) return true;
  return false;
}

void expect_flags_have_witnesses(const HypothesisReport& r) {
  if (!r.condition_i_ok) EXPECT_TRUE(has_witness_for(r, "condition_i"));
  if (!r.condition_ii_ok) EXPECT_TRUE(has_witness_for(r, "condition_ii"));
  if (!r.range_ok) EXPECT_TRUE(has_witness_for(r, "range"));
  if (!r.start_exists) EXPECT_TRUE(has_witness_for(r, "start"));
}

}  // namespace

TEST(GraphContraction, GeometricExamplePasses) {
  const auto d = builtin_problem("geometric-thirds");
  const auto r = verify_graph_contraction(d.space, d.maps, d.edges, d.gauge, d.start);
  EXPECT_TRUE(r.all_ok());
  EXPECT_TRUE(r.witnesses.empty());
  EXPECT_GT(r.pairs_checked, 0u);
  EXPECT_GT(r.pairs_skipped, 0u);
  ASSERT_TRUE(r.start);
  EXPECT_EQ(d.space.label(r.start->first), "1/3");
  EXPECT_EQ(d.space.label(r.start->second), "1/27");
}

TEST(GraphContraction, IdentityPasses) {
  const auto d = builtin_problem("identity");
  EXPECT_TRUE(verify_graph_contraction(d.space, d.maps, d.edges, d.gauge).all_ok());
  const auto ball = EdgeStructure::metric_ball(d.space, 0.1);
  EXPECT_TRUE(verify_graph_contraction(d.space, d.maps, ball, d.gauge).all_ok());
}

TEST(GraphContraction, SmallGaugeWitness) {
  const auto d = builtin_problem("geometric-thirds");
  const auto r = verify_graph_contraction(d.space, d.maps, d.edges, Gauge::constant(0.01));
  EXPECT_FALSE(r.condition_i_ok);
  expect_flags_have_witnesses(r);
  const auto& s = d.space;
  bool found = false;
  for (const auto& w : r.witnesses) {
    if (w.check != "condition_i" || s.label(*w.v) != "1/3" || s.label(*d.maps.f[*w.w]) != "1/27") continue;
    found = true;
    // f(1/3) = 1/9 and f(1/9) = 1/27, so d = 2/27; D(1/27, {1/3, 1/81}) = 2/81.
    EXPECT_NEAR(w.lhs, 2.0 / 81, 1e-15);
    EXPECT_NEAR(w.d, 2.0 / 27, 1e-15);
    EXPECT_NEAR(w.rhs, 0.01 * 2.0 / 27, 1e-15);
    EXPECT_GT(w.lhs, w.rhs);
  }
  EXPECT_TRUE(found);
}

TEST(GraphContraction, CompleteGraphBreaksConditionOne) {
  const auto d = builtin_problem("geometric-thirds-complete");
  const auto r = verify_graph_contraction(d.space, d.maps, d.edges, d.gauge);
  EXPECT_FALSE(r.condition_i_ok);
  expect_flags_have_witnesses(r);
  bool found = false;
  for (const auto& w : r.witnesses)
    if (w.check == "condition_i" && d.space.label(*w.v) == "0" && d.space.label(*w.w) == "1") {
      found = true;
      EXPECT_NEAR(w.lhs, 1.0 / 3, 1e-15);
      EXPECT_NEAR(w.rhs, 1.0 / 9, 1e-15);
    }
  EXPECT_TRUE(found);
}

TEST(GraphContraction, RangeAndStartFailures) {
  auto s = FiniteMetricSpace::from_coordinates({"a", "b", "c"}, {{0.0}, {1.0}, {2.0}}, Norm::max);
  auto maps = SetValuedPair::total({0, 0, 0}, {ClosedSet::finite({2}), ClosedSet::finite({0}), ClosedSet::finite({0})});
  auto edges = EdgeStructure::from_pairs(s, {});
  const auto r = verify_graph_contraction(s, maps, edges, Gauge::constant(0.5));
  EXPECT_FALSE(r.range_ok);
  expect_flags_have_witnesses(r);
  const auto r2 = verify_graph_contraction(s, maps, edges, Gauge::constant(0.5), std::make_pair(PointIndex{0}, PointIndex{2}));
  EXPECT_FALSE(r2.start_exists);
  expect_flags_have_witnesses(r2);
}

TEST(Kamran, GeometricExampleViolatesAtZeroOne) {
  for (double k : {1.0 / 3, 0.5, 0.999}) {
    const auto d = builtin_problem("geometric-thirds");
    const auto r = verify_kamran_inequality(d.space, d.maps, Gauge::constant(k), 0.0);
    EXPECT_FALSE(r.holds);
    bool found = false;
    for (const auto& w : r.witnesses) {
      // Witness values reproduce the violated inequality.
      EXPECT_NEAR(w.rhs, w.k * w.d + r.M * w.D, 1e-15);
      EXPECT_GT(w.H, w.rhs);
      if (d.space.label(w.v) == "0" && d.space.label(w.w) == "1") {
        found = true;
        EXPECT_NEAR(w.H, 1.0 / 3, 1e-12);
        EXPECT_NEAR(w.d, 1.0 / 3, 1e-12);
        EXPECT_EQ(w.D, 0.0);
      }
    }
    EXPECT_TRUE(found) << k;
  }
}

TEST(Kamran, HoldingCases) {
  auto s = FiniteMetricSpace::from_coordinates({"a", "b", "c", "d"}, {{0.0}, {0.3}, {0.5}, {1.0}}, Norm::max);
  // Constant F: H = 0 everywhere.
  auto constant = SetValuedPair::total({0, 1, 2, 3}, std::vector<ClosedSet>(4, ClosedSet::finite({1, 3})));
  EXPECT_TRUE(verify_kamran_inequality(s, constant, Gauge::constant(0.0), 0.0).holds);
  // F(v) = {g(v)} with g(0) = g(0.4) = 0, g(1) = 0.4: a 2/3-contraction along f = id.
  auto s2 = FiniteMetricSpace::from_coordinates({"0", "0.4", "1"}, {{0.0}, {0.4}, {1.0}}, Norm::max);
  auto contraction = SetValuedPair::total({0, 1, 2}, {ClosedSet::finite({0}), ClosedSet::finite({0}), ClosedSet::finite({1})});
  EXPECT_TRUE(verify_kamran_inequality(s2, contraction, Gauge::constant(0.7), 0.0).holds);
  EXPECT_FALSE(verify_kamran_inequality(s2, contraction, Gauge::constant(0.6), 0.0).holds);
  EXPECT_THROW(verify_kamran_inequality(s2, contraction, Gauge::constant(0.5), -1.0), InputError);
}

TEST(Coincidence, ExampleAndIdentity) {
  const auto d = builtin_problem("geometric-thirds");
  const auto sets = enumerate_coincidence_points(d.space, d.maps);
  ASSERT_EQ(sets.coincidence.size(), 1u);
  EXPECT_EQ(d.space.label(sets.coincidence[0]), "0");
  ASSERT_EQ(sets.common_fixed.size(), 1u);
  EXPECT_EQ(d.space.label(sets.common_fixed[0]), "0");
  const auto id = builtin_problem("identity");
  EXPECT_EQ(enumerate_coincidence_points(id.space, id.maps).coincidence.size(), id.space.size());
  EXPECT_EQ(enumerate_coincidence_points(id.space, id.maps).common_fixed.size(), id.space.size());
}

TEST(Coincidence, MatchesIndependentScan) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 9;
    std::vector<std::string> labels;
    std::vector<Coord> coords;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back("p" + std::to_string(i));
      coords.push_back({static_cast<double>(i)});
    }
    auto s = FiniteMetricSpace::from_coordinates(labels, coords);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> f(n);
    std::vector<std::vector<std::size_t>> F(n);
    std::vector<ClosedSet> Fs;
    for (std::size_t u = 0; u < n; ++u) {
      f[u] = pick(rng);
      for (int k = 0; k < 3; ++k) F[u].push_back(pick(rng));
      Fs.push_back(ClosedSet::finite(std::vector<PointIndex>(F[u].begin(), F[u].end())));
    }
    std::vector<PointIndex> fi(f.begin(), f.end());
    const auto sets = enumerate_coincidence_points(s, SetValuedPair::total(fi, Fs));
    std::vector<PointIndex> coincidence, common;
    for (std::size_t w = 0; w < n; ++w) {
      bool in = false;
      for (std::size_t m : F[w]) in = in || m == f[w];
      if (in) coincidence.push_back(w);
      if (in && f[w] == w) common.push_back(w);
    }
    EXPECT_EQ(sets.coincidence, coincidence);
    EXPECT_EQ(sets.common_fixed, common);
  }
}

TEST(BestApproximation, Examples) {
  EXPECT_EQ(best_approximant_set({{0.0}, {1.0}, {0.25}}, {0.25}, Norm::euclidean), (std::vector<std::size_t>{2}));
  EXPECT_EQ(best_approximant_set({{0.0}, {1.0}}, {0.5}, Norm::euclidean), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(best_approximant_set({{0, 0}, {1, 0}, {0, 2}}, {0.4, 0}, Norm::euclidean), (std::vector<std::size_t>{0}));
  EXPECT_THROW(best_approximant_set({}, {0.0}, Norm::euclidean), DomainError);
}

TEST(BestApproximation, MembersShareTheMinimalDistance) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> grid(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Coord> Q;
    for (int i = 0; i < 6; ++i) Q.push_back({grid(rng) * 0.25, grid(rng) * 0.25});
    const Coord z = {grid(rng) * 0.25, grid(rng) * 0.25};
    for (Norm norm : {Norm::euclidean, Norm::manhattan, Norm::max}) {
      const auto best = best_approximant_set(Q, z, norm);
      ASSERT_FALSE(best.empty());
      double minimum = INFINITY;
      for (const auto& q : Q) minimum = std::min(minimum, norm_distance(q, z, norm));
      for (std::size_t i = 0; i < Q.size(); ++i) {
        const bool is_best = std::find(best.begin(), best.end(), i) != best.end();
        EXPECT_EQ(is_best, std::abs(norm_distance(Q[i], z, norm) - minimum) <= 1e-12);
      }
    }
  }
}

TEST(InvariantApproximation, IdentityOnBestSet) {
  const std::vector<Coord> Q = {{0.0}, {1.0}, {3.0}};
  const Coord z = {0.5};
  IndexedMaps maps{{0, 1, 2}, {{0}, {1}, {2}}};
  const auto r = verify_invariant_approx_hypotheses(Q, z, maps, Gauge::constant(0.5), Norm::euclidean);
  EXPECT_TRUE(r.all_ok());
  EXPECT_EQ(r.best, (std::vector<std::size_t>{0, 1}));
  const auto p = restrict_to_best_approximants(Q, z, maps, Gauge::constant(0.5), Norm::euclidean);
  EXPECT_EQ(p.space().size(), 2u);
  const auto sets = enumerate_coincidence_points(p.space(), p.maps());
  EXPECT_EQ(sets.coincidence.size(), 2u);
  EXPECT_TRUE(run_coincidence_iteration(p).converged());
}

TEST(InvariantApproximation, MapLeavingBestSet) {
  const std::vector<Coord> Q = {{0.0}, {1.0}, {3.0}};
  IndexedMaps maps{{2, 1, 2}, {{0}, {1}, {2}}};
  const auto r = verify_invariant_approx_hypotheses(Q, {0.5}, maps, Gauge::constant(0.5), Norm::euclidean);
  EXPECT_FALSE(r.condition_ii_ok);
  EXPECT_FALSE(r.witnesses.empty());
  EXPECT_THROW(restrict_to_best_approximants(Q, {0.5}, maps, Gauge::constant(0.5), Norm::euclidean), HypothesisError);
}

TEST(InvariantApproximation, PlanarExampleFixesOrigin) {
  const std::vector<Coord> Q = {{0, 0}, {1, 0}, {0, 2}};
  IndexedMaps maps{{0, 1, 2}, {{0}, {1}, {2}}};
  const auto r = verify_invariant_approx_hypotheses(Q, {0.4, 0}, maps, Gauge::constant(0.5), Norm::euclidean);
  EXPECT_TRUE(r.all_ok());
  const auto p = restrict_to_best_approximants(Q, {0.4, 0}, maps, Gauge::constant(0.5), Norm::euclidean);
  const auto sets = enumerate_coincidence_points(p.space(), p.maps());
  ASSERT_EQ(sets.common_fixed.size(), 1u);
  EXPECT_EQ((*p.space().coordinates())[sets.common_fixed[0]], (Coord{0, 0}));
}

TEST(InvariantApproximation, SupInequalityViolation) {
  // B = {0, 1} for z = 0.5 and F(0) reaches 3: ||3 - z|| = 2.5 > ||f(0) - z|| = 0.5.
  const std::vector<Coord> Q = {{0.0}, {1.0}, {3.0}};
  IndexedMaps maps{{0, 1, 2}, {{0, 2}, {1}, {2}}};
  const auto r = verify_invariant_approx_hypotheses(Q, {0.5}, maps, Gauge::constant(0.5), Norm::euclidean);
  EXPECT_FALSE(r.condition_iii_ok);
}
