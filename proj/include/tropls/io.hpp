#pragma once
// JSON reading and writing. Rationals travel as "p/q" or "n" strings; floats are rejected.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tropls/morphisms.hpp"

namespace tropls {

using json = nlohmann::json;

namespace io {

inline Rational rational(const json& j, const std::string& what) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const input_error& e) {
      throw input_error(what + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw input_error(what + ": expected a rational string like \"3/2\"");
}

inline json str(const Rational& q) { return to_string(q); }

inline const json& field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw input_error(what + ": missing field '" + key + "'");
  return j.at(key);
}

inline std::string string_field(const json& j, const char* key, const std::string& what) {
  const json& v = field(j, key, what);
  if (!v.is_string()) throw input_error(what + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline long integer(const json& j, const std::string& what) {
  if (j.is_number_integer()) return j.get<long>();
  if (j.is_string()) {
    Rational q = rational(j, what);
    if (is_integer(q)) return to_long(q);
  }
  throw input_error(what + ": expected an integer");
}

inline json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

// Accept inline JSON text or a file path.
inline json load(const std::string& arg) {
  auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    try {
      return json::parse(arg);
    } catch (const json::parse_error& e) {
      throw input_error(std::string("inline JSON: ") + e.what());
    }
  }
  return load_file(arg);
}

}  // namespace io

// ---------------------------------------------------------------- graph

inline json to_json(const MetricGraph& g) {
  json j;
  j["vertices"] = g.vertex_names();
  j["edges"] = json::array();
  for (const Edge& e : g.edges())
    j["edges"].push_back(
        {{"id", e.id}, {"tail", g.vertex_name(e.tail)}, {"head", g.vertex_name(e.head)}, {"length", io::str(e.length)}});
  return j;
}

inline MetricGraph graph_from_json(const json& j) {
  const json& vs = io::field(j, "vertices", "graph");
  const json& es = io::field(j, "edges", "graph");
  if (!vs.is_array() || !es.is_array()) throw input_error("graph: 'vertices' and 'edges' must be arrays");
  std::vector<std::string> names;
  for (const auto& v : vs) {
    if (!v.is_string()) throw input_error("graph: vertex names must be strings");
    names.push_back(v.get<std::string>());
  }
  std::vector<std::tuple<std::string, std::string, std::string, Rational>> edges;
  for (const auto& e : es) {
    std::string id = io::string_field(e, "id", "graph edge");
    Rational len = io::rational(io::field(e, "length", "edge '" + id + "'"), "edge '" + id + "' length");
    if (len <= 0) throw input_error("edge '" + id + "': length must be positive");
    edges.emplace_back(id, io::string_field(e, "tail", "edge '" + id + "'"), io::string_field(e, "head", "edge '" + id + "'"),
                       len);
  }
  return MetricGraph::build(names, edges);
}

// ---------------------------------------------------------------- points, tangents, divisors

inline json to_json(const MetricGraph& g, const Point& p) {
  if (p.is_vertex()) return {{"vertex", g.vertex_name(p.vertex)}};
  return {{"edge", g.edge(p.edge).id}, {"t", io::str(p.t)}};
}

inline Point point_from_json(const MetricGraph& g, const json& j) {
  if (j.is_object() && j.contains("vertex")) {
    std::string v = io::string_field(j, "vertex", "point");
    if (!g.has_vertex(v)) throw input_error("point: unknown vertex '" + v + "'");
    return g.vertex(v);
  }
  std::string e = io::string_field(j, "edge", "point");
  Rational t = io::rational(io::field(j, "t", "point"), "point offset");
  return g.point_on_edge(e, t);
}

inline json to_json(const MetricGraph& g, const Tangent& z) {
  json j{{"at", to_json(g, z.base)}, {"label", describe_tangent(g, z)}};
  if (z.ray >= 0) {
    j["ray"] = z.ray;
  } else {
    j["edge"] = g.edge(z.edge).id;
    j["dir"] = z.dir;
  }
  return j;
}

inline Tangent tangent_from_json(const MetricGraph& g, const json& j) {
  Point p = point_from_json(g, io::field(j, "at", "tangent"));
  std::string e = io::string_field(j, "edge", "tangent");
  long dir = io::integer(io::field(j, "dir", "tangent"), "tangent dir");
  int ei = g.edge_index(e);
  for (const Tangent& z : g.tangents(p))
    if (z.edge == ei && z.dir == dir) return z;
  throw input_error("tangent: no tangent along edge '" + e + "' with that direction at " + g.describe(p));
}

inline json to_json(const MetricGraph& g, const Divisor& d) {
  json c = json::array();
  for (const auto& [p, n] : d.coeffs) c.push_back({{"at", to_json(g, p)}, {"n", n}});
  return {{"coeffs", c}};
}

inline Divisor divisor_from_json(const MetricGraph& g, const json& j) {
  const json& cs = io::field(j, "coeffs", "divisor");
  if (!cs.is_array()) throw input_error("divisor: 'coeffs' must be an array");
  Divisor d;
  for (const auto& c : cs) d.add(point_from_json(g, io::field(c, "at", "divisor term")), io::integer(io::field(c, "n", "divisor term"), "divisor coefficient"));
  return d;
}

// ---------------------------------------------------------------- functions and modules

inline json to_json(const PLFunction& f) {
  json es = json::object();
  const MetricGraph& g = f.graph();
  for (int e = 0; e < g.num_edges(); ++e) {
    json bp = json::array();
    for (const Breakpoint& b : f.on_edge(e)) bp.push_back({{"t", io::str(b.t)}, {"val", io::str(b.val)}});
    es[g.edge(e).id] = bp;
  }
  return {{"edges", es}};
}

inline PLFunction function_from_json(const GraphPtr& g, const json& j) {
  const json& es = io::field(j, "edges", "function");
  if (!es.is_object()) throw input_error("function: 'edges' must be an object keyed by edge id");
  std::vector<std::vector<Breakpoint>> pieces(g->num_edges());
  for (auto it = es.begin(); it != es.end(); ++it) {
    int e;
    try {
      e = g->edge_index(it.key());
    } catch (const input_error&) {
      throw input_error("function: unknown edge '" + it.key() + "'");
    }
    for (const auto& b : it.value()) {
      std::string what = "edge '" + it.key() + "'";
      pieces[e].push_back({io::rational(io::field(b, "t", what), what + " offset"), io::rational(io::field(b, "val", what), what + " value")});
    }
  }
  for (int e = 0; e < g->num_edges(); ++e)
    if (pieces[e].empty()) throw input_error("function: edge '" + g->edge(e).id + "' has no breakpoints");
  return PLFunction(g, pieces);
}

inline json to_json(const TropicalSubmodule& m) {
  json gens = json::array();
  for (const auto& f : m.generators) gens.push_back(to_json(f));
  return {{"divisor", to_json(*m.graph, m.divisor)}, {"generators", gens}};
}

inline TropicalSubmodule module_from_json(const GraphPtr& g, const json& j) {
  Divisor d = divisor_from_json(*g, io::field(j, "divisor", "module"));
  const json& gs = io::field(j, "generators", "module");
  if (!gs.is_array()) throw input_error("module: 'generators' must be an array");
  std::vector<PLFunction> gens;
  for (const auto& f : gs) gens.push_back(function_from_json(g, f));
  return TropicalSubmodule(g, d, gens);
}

inline std::vector<SubgraphSegment> subgraph_from_json(const MetricGraph& g, const json& j) {
  const json& ss = io::field(j, "segments", "subgraph");
  std::vector<SubgraphSegment> out;
  for (const auto& s : ss) {
    std::string e = io::string_field(s, "edge", "subgraph segment");
    int ei = g.edge_index(e);
    Rational from = s.contains("from") ? io::rational(s.at("from"), "segment start") : Rational(0);
    Rational to = s.contains("to") ? io::rational(s.at("to"), "segment end") : g.edge(ei).length;
    out.push_back({ei, from, to});
  }
  return out;
}

// ---------------------------------------------------------------- matroids

inline json to_json(const Matroid& m) {
  json cs = json::array();
  for (ElementSet c : m.circuits) {
    json one = json::array();
    for (int i = 0; i < m.size(); ++i)
      if ((c >> i) & 1) one.push_back(m.elements[i]);
    cs.push_back(one);
  }
  return {{"elements", m.elements}, {"circuits", cs}};
}

inline Matroid matroid_from_json(const json& j) {
  const json& es = io::field(j, "elements", "matroid");
  std::vector<std::string> elements;
  for (const auto& e : es) {
    if (!e.is_string()) throw input_error("matroid: element names must be strings");
    elements.push_back(e.get<std::string>());
  }
  auto sets = [&](const char* key) {
    std::vector<std::vector<std::string>> out;
    for (const auto& s : j.at(key)) {
      std::vector<std::string> one;
      for (const auto& e : s) {
        if (!e.is_string()) throw input_error(std::string("matroid: entries of '") + key + "' must be strings");
        one.push_back(e.get<std::string>());
      }
      out.push_back(one);
    }
    return out;
  };
  if (j.contains("lines")) return matroid_from_lines(elements, sets("lines"));
  if (j.contains("circuits")) return matroid_from_circuits(elements, sets("circuits"));
  throw input_error("matroid: need 'lines' or 'circuits'");
}

inline json trop_json(const TropValue& v) { return v ? json(io::str(*v)) : json("inf"); }

inline json to_json(const ValuatedMatroid& m) {
  json cs = json::array();
  for (const auto& c : m.circuits) {
    json one = json::array();
    for (const auto& v : c) one.push_back(trop_json(v));
    cs.push_back(one);
  }
  return {{"elements", m.elements}, {"rank", m.rank}, {"circuits", cs}};
}

inline ValuatedMatroid valuated_from_json(const json& j) {
  ValuatedMatroid m;
  for (const auto& e : io::field(j, "elements", "valuated matroid")) m.elements.push_back(e.get<std::string>());
  m.rank = static_cast<int>(io::integer(io::field(j, "rank", "valuated matroid"), "rank"));
  for (const auto& c : io::field(j, "circuits", "valuated matroid")) {
    std::vector<TropValue> v;
    for (const auto& x : c) {
      if (x.is_string() && x.get<std::string>() == "inf") v.push_back(std::nullopt);
      else v.push_back(io::rational(x, "circuit entry"));
    }
    if (v.size() != m.elements.size()) throw input_error("valuated matroid: circuit length differs from element count");
    m.add_circuit(v);
  }
  return m;
}

// ---------------------------------------------------------------- reports

inline json coefficients_json(const std::vector<std::optional<Rational>>& a) {
  json out = json::array();
  for (const auto& x : a) out.push_back(trop_json(x));
  return out;
}

inline json to_json(const MetricGraph& g, const CombinationVerdict& v) {
  json cells = json::array();
  for (const auto& c : v.cells)
    cells.push_back({{"at", to_json(g, c.sample)}, {"open", c.open}, {"achievers", c.achievers}});
  json j{{"kind", "combination"}, {"verdict", kind_name(v.kind)}, {"cells", cells}};
  if (v.violating_point) j["violating_point"] = to_json(g, *v.violating_point);
  return j;
}

inline json to_json(const MetricGraph& g, const DependenceAnswer& a) {
  json j{{"kind", "dependence"}, {"status", status_name(a.status)}, {"by_exhaustion", a.by_exhaustion}, {"iterations", a.iterations}};
  if (a.status == DependenceAnswer::Dependent) j["coefficients"] = coefficients_json(a.coefficients);
  if (!a.certificate_coefficients.empty()) {
    json c = json::array();
    for (const auto& x : a.certificate_coefficients) c.push_back(io::str(x));
    j["certificate"] = c;
  }
  if (a.witness) j["witness"] = to_json(g, *a.witness);
  j["log"] = a.log;
  return j;
}

inline json to_json(const MetricGraph& g, const AxiomVerdict& v) {
  json j{{"state", state_name(v.state)}, {"detail", v.detail}, {"sampled", v.sampled}};
  if (v.uncovered_point) j["uncovered_point"] = to_json(g, *v.uncovered_point);
  if (v.uncovered_divisor) j["uncovered_divisor"] = to_json(g, *v.uncovered_divisor);
  if (!v.independent_set.empty()) {
    j["independent_set"] = json::array();
    for (const auto& f : v.independent_set) j["independent_set"].push_back(to_json(f));
  }
  if (!v.certificate.empty()) {
    j["certificate"] = json::array();
    for (const auto& x : v.certificate) j["certificate"].push_back(io::str(x));
  }
  if (v.bad_tangent) j["bad_tangent"] = to_json(g, *v.bad_tangent);
  return j;
}

inline json to_json(const MetricGraph& g, const TLSReport& r) {
  json rows = json::array();
  for (const auto& row : r.slope_table) rows.push_back({{"tangent", to_json(g, row.tangent)}, {"slopes", row.slopes}});
  return {{"kind", "tls_report"},
          {"rank", r.rank},
          {"verdict", r.pass() ? "pass" : r.fail() ? "fail" : "unknown"},
          {"axiom1", to_json(g, r.axiom1)},
          {"axiom2", to_json(g, r.axiom2)},
          {"axiom3", to_json(g, r.axiom3)},
          {"slope_count", to_json(g, r.slope_count)},
          {"property4", r.property4},
          {"property5", to_json(g, r.property5)},
          {"slope_table", rows}};
}

inline json to_json(const MetricGraph& g, const CoveredLocus& c) {
  auto segs = [&](const std::vector<CoveredLocus::Segment>& ss) {
    json out = json::array();
    for (const auto& s : ss) out.push_back({{"edge", g.edge(s.edge).id}, {"from", io::str(s.from)}, {"to", io::str(s.to)}});
    return out;
  };
  auto pts = [&](const std::vector<Point>& ps) {
    json out = json::array();
    for (const auto& p : ps) out.push_back(to_json(g, p));
    return out;
  };
  return {{"kind", "covered_locus"},
          {"covers_graph", c.covers_graph()},
          {"incomplete", c.incomplete},
          {"segments", segs(c.segments)},
          {"points", pts(c.points)},
          {"uncovered_segments", segs(c.uncovered_segments)},
          {"uncovered_points", pts(c.uncovered_points)}};
}

inline json to_json(const ModifiedGraph& m) {
  json rays = json::array();
  for (const auto& r : m.rays) rays.push_back({{"id", r.id}, {"base", to_json(*m.base, r.base)}, {"slopes", r.slopes}});
  json gens = json::array();
  for (const auto& f : m.generators) gens.push_back(to_json(f));
  return {{"kind", "modification"}, {"graph", to_json(*m.base)}, {"divisor", to_json(*m.base, m.divisor)}, {"generators", gens}, {"rays", rays}};
}

inline json to_json(const TreeTarget& T) {
  json vs = json::array();
  for (const auto& v : T.vertices) {
    json c = json::array();
    for (const auto& x : v) c.push_back(io::str(x));
    vs.push_back(c);
  }
  json rays = json::array();
  for (const auto& r : T.graph.rays()) rays.push_back({{"element", r.id}, {"base", T.graph.vertex_name(r.base.vertex)}});
  json edges = json::array();
  for (const auto& e : T.graph.edges())
    edges.push_back({{"tail", T.graph.vertex_name(e.tail)}, {"head", T.graph.vertex_name(e.head)}, {"length", io::str(e.length)}});
  return {{"vertices", vs}, {"edges", edges}, {"rays", rays}};
}

inline json to_json(const MetricGraph& g, const BalanceReport& b) {
  json ds = json::array();
  for (const auto& d : b.degrees) {
    json z = d.tangent.ray >= 0 ? json{{"at", to_json(g, d.point)}, {"ray", d.tangent.ray}}
                                : to_json(g, d.tangent);
    ds.push_back({{"tangent", z}, {"direction", d.direction}, {"degree", d.degree}});
  }
  return {{"kind", "balance"},
          {"pass", b.pass},
          {"detail", b.detail},
          {"checked_points", b.checked_points},
          {"degrees_positive", b.degrees_positive},
          {"local_degrees", ds}};
}

}  // namespace tropls
