#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "graphfix/errors.hpp"
#include "graphfix/problem_io.hpp"
#include "graphfix/verifier.hpp"

using namespace graphfix;
using nlohmann::json;

namespace {

json small_problem() {
  return json::parse(R"({
    "name": "three",
    "points": [{"label": "a", "coord": [0.0]}, {"label": "b", "coord": [0.5]}, {"label": "c", "coord": [1.0]}],
    "edges": {"mode": "ball", "radius": 0.6},
    "gauge": {"form": "constant", "value": 0.5},
    "f": {"a": "a", "b": "a", "c": "b"},
    "F": {"a": ["a"], "b": ["a"], "c": ["a"]},
    "start": {"w0": "c", "p0": "a"},
    "config": {"tol": 1e-9, "max_iter": 50}
  })");
}

void expect_same(const FiniteProblemData& x, const FiniteProblemData& y) {
  ASSERT_EQ(x.space.size(), y.space.size());
  EXPECT_EQ(x.space.labels(), y.space.labels());
  for (PointIndex i = 0; i < x.space.size(); ++i) {
    EXPECT_EQ(x.maps.f[i], y.maps.f[i]);
    EXPECT_EQ(x.maps.truncated[i], y.maps.truncated[i]);
    ASSERT_EQ(x.maps.F[i].has_value(), y.maps.F[i].has_value());
    if (x.maps.F[i])
      EXPECT_TRUE(std::equal(x.maps.F[i]->members().begin(), x.maps.F[i]->members().end(),
                             y.maps.F[i]->members().begin(), y.maps.F[i]->members().end()));
    for (PointIndex j = 0; j < x.space.size(); ++j) {
      EXPECT_EQ(x.space.distance(i, j), y.space.distance(i, j));
      EXPECT_EQ(x.edges.is_edge(i, j), y.edges.is_edge(i, j));
    }
  }
  EXPECT_EQ(x.gauge.breakpoints(), y.gauge.breakpoints());
  EXPECT_EQ(x.gauge.values(), y.gauge.values());
  EXPECT_EQ(x.gauge.certified_sup(), y.gauge.certified_sup());
  EXPECT_EQ(x.start, y.start);
  EXPECT_EQ(x.config.tol, y.config.tol);
  EXPECT_EQ(x.config.residual_tol, y.config.residual_tol);
  EXPECT_EQ(x.config.max_iter, y.config.max_iter);
}

}  // namespace

TEST(ProblemFile, ParsesCoordinateForm) {
  const auto p = parse_problem(small_problem());
  EXPECT_EQ(p.name, "three");
  EXPECT_EQ(p.space.size(), 3u);
  EXPECT_EQ(p.config.tol, 1e-9);
  EXPECT_EQ(p.config.max_iter, 50u);
  EXPECT_TRUE(p.edges.is_edge(0, 1));
  EXPECT_FALSE(p.edges.is_edge(0, 2));
  EXPECT_TRUE(run_coincidence_iteration(p.to_problem()).converged());
}

TEST(ProblemFile, ParsesMatrixListAndPiecewiseForms) {
  const auto doc = json::parse(R"({
    "points": [{"label": "u"}, {"label": "v"}],
    "distances": [[0, 2], [2, 0]],
    "edges": {"mode": "list", "pairs": [["u", "v"]]},
    "gauge": {"form": "piecewise", "breakpoints": [0, 1], "values": [0.2, 0.5], "sup": 0.5},
    "f": {"u": "u", "v": "v"},
    "F": {"u": ["u"], "v": ["u", "v"]}
  })");
  const auto p = parse_problem(doc);
  EXPECT_EQ(p.space.distance(0, 1), 2.0);
  EXPECT_TRUE(p.edges.is_edge(0, 1));
  EXPECT_FALSE(p.edges.is_edge(1, 0));
  EXPECT_EQ(p.gauge(1.5), 0.5);
  EXPECT_FALSE(p.start);
  EXPECT_THROW(p.to_problem(), InputError);
}

TEST(ProblemFile, RoundTrips) {
  for (const auto& name : builtin_names()) {
    const auto p = builtin_problem(name);
    expect_same(p, parse_problem(problem_to_json(p)));
  }
  for (std::uint64_t seed : {1u, 2u, 3u, 40u}) {
    const auto p = random_problem(seed);
    expect_same(p, parse_problem(problem_to_json(p)));
  }
  const auto p = parse_problem(small_problem());
  expect_same(p, parse_problem(json::parse(problem_to_json(p).dump())));
}

TEST(ProblemFile, RejectsMalformedInput) {
  auto broken = [](auto mutate) {
    json doc = small_problem();
    mutate(doc);
    return doc;
  };
  EXPECT_THROW(parse_problem(json::array()), InputError);
  EXPECT_THROW(parse_problem(broken([](json& d) { d.erase("points"); })), InputError);
  EXPECT_THROW(parse_problem(broken([](json& d) { d["f"]["a"] = "zz"; })), InputError);
  EXPECT_THROW(parse_problem(broken([](json& d) { d["F"]["a"] = json::array(); })), InputError);
  EXPECT_THROW(parse_problem(broken([](json& d) { d["F"].erase("b"); })), InputError);
  EXPECT_THROW(parse_problem(broken([](json& d) { d["gauge"]["value"] = 1.0; })), InputError);
  EXPECT_THROW(parse_problem(broken([](json& d) { d["gauge"]["form"] = "wavy"; })), InputError);
  EXPECT_THROW(parse_problem(broken([](json& d) { d["edges"]["mode"] = "ring"; })), InputError);
  EXPECT_THROW(parse_problem(broken([](json& d) { d["points"][1]["label"] = "a"; })), InputError);
  EXPECT_THROW(parse_problem(broken([](json& d) { d["points"][1].erase("coord"); })), InputError);
  EXPECT_THROW(parse_problem(broken([](json& d) { d["config"]["max_iter"] = -1; })), InputError);
  EXPECT_THROW(parse_problem(broken([](json& d) { d["config"]["tol"] = 0; })), InputError);
  EXPECT_THROW(parse_problem(broken([](json& d) { d["points"][0]["coord"] = {"x"}; })), InputError);
  EXPECT_THROW(parse_problem(broken([](json& d) {
                 d.erase("points");
                 d["points"] = {{{"label", "a"}}, {{"label", "b"}}, {{"label", "c"}}};
                 d["distances"] = {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}};
               })),
               InputError);
  // A parsed start that is not admissible fails when the problem is built.
  EXPECT_THROW(parse_problem(broken([](json& d) { d["start"]["p0"] = "c"; })).to_problem(), InputError);
}

TEST(ProblemFile, LoadFromDisk) {
  const auto dir = std::filesystem::temp_directory_path() / "graphfix_problem_io";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "ok.json") << small_problem().dump();
    std::ofstream(dir / "bad.json") << "{ not json";
  }
  EXPECT_EQ(load_problem(dir / "ok.json").space.size(), 3u);
  EXPECT_THROW(load_problem(dir / "bad.json"), InputError);
  EXPECT_THROW(load_problem(dir / "missing.json"), InputError);
}

TEST(Builtins, GeometricWindow) {
  const auto p = geometric_example(12);
  EXPECT_EQ(p.space.size(), 14u);
  EXPECT_TRUE(p.space.contains("1/531441"));
  EXPECT_TRUE(p.maps.truncated[p.space.index_of("1/531441")]);
  EXPECT_TRUE(p.maps.truncated[p.space.index_of("1/177147")]);
  EXPECT_FALSE(p.maps.truncated[p.space.index_of("1/59049")]);
  EXPECT_EQ(p.space.label(*p.maps.f[p.space.index_of("1")]), "1/3");
  EXPECT_THROW(geometric_example(2), InputError);
  EXPECT_THROW(builtin_problem("example-9-9"), InputError);
  EXPECT_EQ(builtin_problem("kamran-counterexample").gauge.certified_sup(), 0.999);
}

TEST(RandomProblems, DeterministicAndAdmissible) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto a = random_problem(seed);
    const auto b = random_problem(seed);
    expect_same(a, b);
    EXPECT_LE(a.space.size(), 12u);
    EXPECT_TRUE(verify_graph_contraction(a.space, a.maps, a.edges, a.gauge, a.start).all_ok());
  }
  EXPECT_THROW(random_problem(1, 1), InputError);
  EXPECT_THROW(random_problem(1, 5, 1.0), InputError);
}
