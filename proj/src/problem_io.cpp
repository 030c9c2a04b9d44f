#include <fmt/format.h>

#include <fstream>

#include "graphfix/errors.hpp"
#include "graphfix/problem_io.hpp"

namespace graphfix {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError(fmt::format("missing required field '{}'", key));
  return obj.at(key);
}

double number(const json& v, std::string_view what) {
  if (!v.is_number()) throw InputError(fmt::format("field '{}' must be a number", what));
  return v.get<double>();
}

std::string text(const json& v, std::string_view what) {
  if (!v.is_string()) throw InputError(fmt::format("field '{}' must be a string", what));
  return v.get<std::string>();
}

FiniteMetricSpace parse_space(const json& doc) {
  const json& points = require(doc, "points");
  if (!points.is_array() || points.empty()) throw InputError("'points' must be a non-empty array");
  std::vector<std::string> labels;
  std::vector<Coord> coords;
  bool all_coords = true;
  for (const json& p : points) {
    labels.push_back(text(require(p, "label"), "label"));
    if (p.contains("coord")) {
      Coord c;
      for (const json& x : p.at("coord")) c.push_back(number(x, "coord"));
      coords.push_back(std::move(c));
    } else {
      all_coords = false;
    }
  }
  if (doc.contains("distances")) {
    std::vector<std::vector<double>> d;
    for (const json& row : doc.at("distances")) {
      std::vector<double> r;
      for (const json& x : row) r.push_back(number(x, "distances"));
      d.push_back(std::move(r));
    }
    return FiniteMetricSpace::from_matrix(std::move(labels), d);
  }
  if (!all_coords) throw InputError("every point needs 'coord' unless 'distances' is given");
  const Norm norm = doc.contains("norm") ? parse_norm(text(doc.at("norm"), "norm")) : Norm::euclidean;
  return FiniteMetricSpace::from_coordinates(std::move(labels), std::move(coords), norm);
}

EdgeStructure parse_edges(const json& doc, const FiniteMetricSpace& space) {
  const json& e = require(doc, "edges");
  const std::string mode = text(require(e, "mode"), "edges.mode");
  if (mode == "ball") return EdgeStructure::metric_ball(space, number(require(e, "radius"), "edges.radius"));
  if (mode == "complete") return EdgeStructure::complete(space);
  if (mode == "list") {
    std::vector<std::pair<PointIndex, PointIndex>> pairs;
    for (const json& pr : require(e, "pairs")) {
      if (!pr.is_array() || pr.size() != 2) throw InputError("edge pairs must be [from, to]");
      pairs.emplace_back(space.index_of(text(pr[0], "edge")), space.index_of(text(pr[1], "edge")));
    }
    return EdgeStructure::from_pairs(space, pairs);
  }
  throw InputError(fmt::format("unknown edge mode '{}'", mode));
}

Gauge parse_gauge(const json& doc) {
  const json& g = require(doc, "gauge");
  const std::string form = text(require(g, "form"), "gauge.form");
  if (form == "constant") {
    const double c = number(require(g, "value"), "gauge.value");
    std::optional<double> sup;
    if (g.contains("sup")) sup = number(g.at("sup"), "gauge.sup");
    return Gauge::constant(c, sup);
  }
  if (form == "piecewise") {
    std::vector<double> bps, vals;
    for (const json& x : require(g, "breakpoints")) bps.push_back(number(x, "gauge.breakpoints"));
    for (const json& x : require(g, "values")) vals.push_back(number(x, "gauge.values"));
    return Gauge::piecewise(std::move(bps), std::move(vals), number(require(g, "sup"), "gauge.sup"));
  }
  throw InputError(fmt::format("unknown gauge form '{}'", form));
}

SetValuedPair parse_maps(const json& doc, const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  SetValuedPair maps;
  maps.f.assign(n, std::nullopt);
  maps.F.assign(n, std::nullopt);
  maps.truncated.assign(n, false);
  const json& f = require(doc, "f");
  if (!f.is_object()) throw InputError("'f' must map labels to labels");
  for (const auto& [from, to] : f.items()) maps.f[space.index_of(from)] = space.index_of(text(to, "f"));
  const json& F = require(doc, "F");
  if (!F.is_object()) throw InputError("'F' must map labels to label arrays");
  for (const auto& [from, members] : F.items()) {
    std::vector<PointIndex> idx;
    for (const json& m : members) idx.push_back(space.index_of(text(m, "F")));
    if (idx.empty()) throw InputError(fmt::format("F({}) is empty", from));
    maps.F[space.index_of(from)] = ClosedSet::finite(std::move(idx));
  }
  if (doc.contains("truncated"))
    for (const json& t : doc.at("truncated")) maps.truncated[space.index_of(text(t, "truncated"))] = true;
  maps.validate(space);
  return maps;
}

}  // namespace

CoincidenceProblem FiniteProblemData::to_problem() const {
  if (!start) throw InputError(fmt::format("problem '{}' has no start pair", name));
  return CoincidenceProblem::create(space, maps, edges, gauge, start->first, start->second, config);
}

FiniteProblemData parse_problem(const json& doc) {
  if (!doc.is_object()) throw InputError("problem file must hold a JSON object");
  FiniteMetricSpace space = parse_space(doc);
  EdgeStructure edges = parse_edges(doc, space);
  Gauge gauge = parse_gauge(doc);
  SetValuedPair maps = parse_maps(doc, space);

  std::optional<std::pair<PointIndex, PointIndex>> start;
  if (doc.contains("start")) {
    const json& s = doc.at("start");
    start = std::make_pair(space.index_of(text(require(s, "w0"), "start.w0")),
                           space.index_of(text(require(s, "p0"), "start.p0")));
  }
  IterationConfig cfg;
  if (doc.contains("config")) {
    const json& c = doc.at("config");
    if (c.contains("tol")) cfg.tol = number(c.at("tol"), "config.tol");
    if (c.contains("residual_tol")) cfg.residual_tol = number(c.at("residual_tol"), "config.residual_tol");
    if (c.contains("max_iter")) {
      if (!c.at("max_iter").is_number_integer() || c.at("max_iter").get<long long>() < 0)
        throw InputError("config.max_iter must be a nonnegative integer");
      cfg.max_iter = c.at("max_iter").get<std::size_t>();
    }
  }
  cfg.validate();
  std::string name = doc.contains("name") ? text(doc.at("name"), "name") : std::string("problem");
  return FiniteProblemData{std::move(name), std::move(space), std::move(maps), std::move(edges),
                           std::move(gauge), start, cfg};
}

FiniteProblemData load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open problem file '{}'", path.string()));
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("problem file '{}' is not valid JSON: {}", path.string(), e.what()));
  }
  return parse_problem(doc);
}

json problem_to_json(const FiniteProblemData& data) {
  const auto& space = data.space;
  json doc;
  doc["name"] = data.name;
  json points = json::array();
  for (PointIndex i = 0; i < space.size(); ++i) {
    json p{{"label", space.label(i)}};
    if (space.coordinates()) p["coord"] = (*space.coordinates())[i];
    points.push_back(std::move(p));
  }
  doc["points"] = std::move(points);
  if (space.coordinates()) {
    doc["norm"] = std::string(norm_name(*space.norm()));
  } else {
    json d = json::array();
    for (PointIndex i = 0; i < space.size(); ++i) {
      json row = json::array();
      for (PointIndex j = 0; j < space.size(); ++j) row.push_back(space.unchecked_distance(i, j));
      d.push_back(std::move(row));
    }
    doc["distances"] = std::move(d);
  }

  switch (data.edges.mode()) {
    case EdgeStructure::Mode::metric_ball:
      doc["edges"] = {{"mode", "ball"}, {"radius", data.edges.radius()}};
      break;
    case EdgeStructure::Mode::complete:
      doc["edges"] = {{"mode", "complete"}};
      break;
    case EdgeStructure::Mode::explicit_pairs: {
      json pairs = json::array();
      for (auto [u, v] : data.edges.pairs()) pairs.push_back({space.label(u), space.label(v)});
      doc["edges"] = {{"mode", "list"}, {"pairs", std::move(pairs)}};
      break;
    }
  }

  const Gauge& g = data.gauge;
  if (g.is_constant())
    doc["gauge"] = {{"form", "constant"}, {"value", g.values().front()}, {"sup", g.certified_sup()}};
  else
    doc["gauge"] = {{"form", "piecewise"}, {"breakpoints", g.breakpoints()}, {"values", g.values()},
                    {"sup", g.certified_sup()}};

  json f = json::object();
  json F = json::object();
  json truncated = json::array();
  for (PointIndex u = 0; u < space.size(); ++u) {
    if (data.maps.f[u]) f[space.label(u)] = space.label(*data.maps.f[u]);
    if (data.maps.F[u]) {
      json members = json::array();
      for (PointIndex m : data.maps.F[u]->members()) members.push_back(space.label(m));
      F[space.label(u)] = std::move(members);
    }
    if (data.maps.truncated[u]) truncated.push_back(space.label(u));
  }
  doc["f"] = std::move(f);
  doc["F"] = std::move(F);
  if (!truncated.empty()) doc["truncated"] = std::move(truncated);
  if (data.start)
    doc["start"] = {{"w0", space.label(data.start->first)}, {"p0", space.label(data.start->second)}};
  doc["config"] = {{"tol", data.config.tol},
                   {"residual_tol", data.config.residual_tol},
                   {"max_iter", data.config.max_iter}};
  return doc;
}

}  // namespace graphfix
