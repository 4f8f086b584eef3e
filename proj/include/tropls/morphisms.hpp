#pragma once
// Tropical modifications, the coordinate map to tropical projective space, the rank-2
// tree target and the balancing check.

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>
#include <bit>

#include "tropls/tls.hpp"

namespace tropls {

struct ModifiedGraph {
  struct RayInfo {
    std::string id;
    Point base;
    std::vector<long> slopes;  // outgoing slope of each generator along the ray
  };
  GraphPtr base;
  Divisor divisor;
  std::vector<PLFunction> generators;
  std::vector<RayInfo> rays;

  MetricGraph graph() const {
    std::vector<Ray> rs;
    for (const auto& r : rays) rs.push_back({r.id, r.base});
    return base->with_rays(rs);
  }
};

// One ray at every point of supp(D + div phi_i), for any i. Along the ray, phi_j changes at
// rate -ord_x(phi_j) per unit moving toward x, so its outgoing slope from x is ord_x(phi_j).
inline ModifiedGraph tropical_modification(const TropicalSubmodule& m) {
  ModifiedGraph out;
  out.base = m.graph;
  out.divisor = m.divisor;
  for (auto i : minimal_generator_indices(m.generators)) out.generators.push_back(m.generators[i]);
  std::set<Point> pts;
  for (const auto& f : out.generators)
    for (const Point& p : (m.divisor + f.divisor()).support()) pts.insert(p);
  int k = 0;
  for (const Point& p : pts) {
    ModifiedGraph::RayInfo r;
    r.id = "ray" + std::to_string(k++) + ":" + m.graph->describe(p);
    r.base = p;
    for (const auto& f : out.generators) r.slopes.push_back(f.ord(p));
    out.rays.push_back(r);
  }
  return out;
}

using TropVector = std::vector<Rational>;

struct PLMap {
  ModifiedGraph source;

  TropVector image(const Point& p) const {
    TropVector v;
    for (const auto& f : source.generators) v.push_back(f.evaluate(p));
    return v;
  }
  // Point at parameter s along ray k.
  TropVector ray_image(int k, const Rational& s) const {
    TropVector v = image(source.rays[k].base);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += s * source.rays[k].slopes[j];
    return v;
  }
  std::vector<long> slopes(const Tangent& z) const {
    std::vector<long> out;
    if (z.ray >= 0) {
      for (long s : source.rays[z.ray].slopes) out.push_back(s);
      return out;
    }
    for (const auto& f : source.generators) out.push_back(f.slope(z));
    return out;
  }
};

inline PLMap coordinate_map(const ModifiedGraph& m) { return PLMap{m}; }

inline std::vector<TropValue> as_trop_point(const TropVector& v) { return {v.begin(), v.end()}; }

// ---------------------------------------------------------------- tree target

namespace detail {

// Does q + eps * u stay in B(V) for all small eps > 0?
inline bool direction_in_bergman(const TropVector& q, const std::vector<long>& u, const ValuatedMatroid& V) {
  for (const auto& c : V.circuits) {
    std::optional<std::pair<Rational, long>> best;
    int count = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (!c[i]) continue;
      std::pair<Rational, long> s{*c[i] + q[i], u[i]};
      if (!best || s < *best) {
        best = s;
        count = 1;
      } else if (s == *best) {
        ++count;
      }
    }
    if (best && count < 2) return false;
  }
  return true;
}

inline std::vector<long> indicator(ElementSet s, int n) {
  std::vector<long> u(n);
  for (int i = 0; i < n; ++i) u[i] = (s >> i) & 1;
  return u;
}

// Write v as d * e_S modulo the all-ones vector; d = 0 for contracted tangents.
inline std::optional<std::pair<ElementSet, long>> split_direction(const std::vector<long>& v) {
  long lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
  if (lo == hi) return std::make_pair(ElementSet(0), 0L);
  ElementSet s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == hi) s |= ElementSet(1) << i;
    else if (v[i] != lo) return std::nullopt;
  }
  return std::make_pair(s, hi - lo);
}

inline TropVector normalized(TropVector v) {
  Rational m = *std::min_element(v.begin(), v.end());
  for (auto& x : v) x -= m;
  return v;
}

}  // namespace detail

// Directions of B(V) at q, as subsets S (direction e_S modulo the all-ones vector).
inline std::vector<ElementSet> bergman_star(const TropVector& q, const ValuatedMatroid& V) {
  int n = static_cast<int>(q.size());
  std::vector<ElementSet> out;
  ElementSet full = (ElementSet(1) << n) - 1;
  for (ElementSet s = 1; s < full; ++s)
    if (detail::direction_in_bergman(q, detail::indicator(s, n), V)) out.push_back(s);
  return out;
}

struct TreeTarget {
  MetricGraph graph;                  // vertices, bounded edges and one ray per element
  std::vector<TropVector> vertices;   // coordinates normalized to minimum 0
  std::vector<ElementSet> edge_directions;
  std::vector<int> ray_elements;
};

inline TreeTarget rank1_tree_target(const ValuatedMatroid& V) {
  if (V.rank != 2) throw input_error("tree target needs a valuated matroid of rank 2");
  const int n = V.size();
  if (n < 2 || n > 16) throw input_error("tree target needs between 2 and 16 elements");
  auto circuit_on = [&](ElementSet s) -> const std::vector<TropValue>* {
    for (const auto& c : V.circuits)
      if (V.support(c) == s) return &c;
    return nullptr;
  };
  std::vector<TropVector> verts;
  auto add_vertex = [&](TropVector v) {
    v = detail::normalized(std::move(v));
    if (std::find(verts.begin(), verts.end(), v) == verts.end()) verts.push_back(v);
  };
  if (n == 2 || V.circuits.empty()) add_vertex(TropVector(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const auto* c = circuit_on((ElementSet(1) << i) | (ElementSet(1) << j) | (ElementSet(1) << k));
        if (!c) continue;
        std::vector<std::optional<Rational>> x(n);
        x[i] = -*(*c)[i];
        x[j] = -*(*c)[j];
        x[k] = -*(*c)[k];
        bool ok = true;
        for (int m = 0; m < n && ok; ++m) {
          if (x[m]) continue;
          // Feasible set of x_m from the circuits through m and two of i, j, k.
          std::optional<Rational> lo, eq;
          for (auto [a, b] : {std::pair{i, j}, std::pair{i, k}, std::pair{j, k}}) {
            const auto* d = circuit_on((ElementSet(1) << a) | (ElementSet(1) << b) | (ElementSet(1) << m));
            if (!d) continue;
            Rational al = *(*d)[a] + *x[a], be = *(*d)[b] + *x[b];
            Rational t = std::min(al, be) - *(*d)[m];
            if (al == be) lo = lo ? std::max(*lo, t) : t;
            else if (eq && *eq != t) ok = false;
            else eq = t;
          }
          if (eq) {
            if (lo && *eq < *lo) ok = false;
            x[m] = eq;
          } else if (lo) {
            x[m] = lo;
          } else {
            ok = false;
          }
        }
        if (!ok) continue;
        TropVector v;
        for (auto& y : x) v.push_back(*y);
        if (bergman_membership(as_trop_point(v), V)) add_vertex(v);
      }
  TreeTarget T;
  T.vertices = verts;
  std::vector<std::string> names;
  for (std::size_t a = 0; a < verts.size(); ++a) names.push_back("t" + std::to_string(a));
  std::vector<std::tuple<std::string, std::string, std::string, Rational>> es;
  std::vector<Ray> rays;
  for (std::size_t a = 0; a < verts.size(); ++a) {
    for (ElementSet s : bergman_star(verts[a], V)) {
      // Nearest vertex along e_S.
      std::optional<std::pair<Rational, std::size_t>> hit;
      for (std::size_t b = 0; b < verts.size(); ++b) {
        if (b == a) continue;
        TropVector d(n);
        for (int i = 0; i < n; ++i) d[i] = verts[b][i] - verts[a][i];
        d = detail::normalized(d);
        std::optional<Rational> t;
        bool along = true;
        for (int i = 0; i < n && along; ++i) {
          bool in = (s >> i) & 1;
          if (!in && d[i] != 0) along = false;
          if (in) {
            if (t && *t != d[i]) along = false;
            t = d[i];
          }
        }
        if (along && t && *t > 0 && (!hit || *t < hit->first)) hit = std::make_pair(*t, b);
      }
      if (hit) {
        if (a < hit->second) {
          es.emplace_back("t" + std::to_string(a) + "-t" + std::to_string(hit->second), names[a], names[hit->second],
                          hit->first);
          T.edge_directions.push_back(s);
        }
      } else {
        if (std::popcount(s) != 1) throw std::logic_error("unbounded tree direction is not a coordinate ray");
        int e = std::countr_zero(s);
        rays.push_back({V.elements[e], Point::at_vertex(static_cast<int>(a))});
        T.ray_elements.push_back(e);
      }
    }
  }
  T.graph = MetricGraph::build(names, es).with_rays(rays);
  return T;
}

// ---------------------------------------------------------------- balancing

struct LocalDegree {
  Point point;
  Tangent tangent;
  ElementSet direction = 0;
  long degree = 0;
};

struct BalanceReport {
  bool pass = true;
  std::string detail;
  std::vector<LocalDegree> degrees;
  long checked_points = 0;
  bool degrees_positive = true;  // d = s[1] - s[0] >= 1 on every base tangent
};

// Harmonicity at every refinement point: for each direction of B(V) at the image point, the
// local degrees of the source tangents mapping to it sum to the same number.
inline BalanceReport balancing_check(const PLMap& map, const ValuatedMatroid& V) {
  const auto& gens = map.source.generators;
  const MetricGraph& g = *map.source.base;
  const int n = static_cast<int>(gens.size());
  BalanceReport rep;
  if (n > 2 && V.circuits.empty()) throw input_error("unsupported: target is not a tree");
  if (V.rank != 2 && n > 2) throw input_error("unsupported: target is not a tree");
  TropicalSubmodule tmp(map.source.base, map.source.divisor, gens);
  std::vector<Point> pts = detail::subdivision_points(tmp);
  std::set<Point> ptset(pts.begin(), pts.end());
  // Meet points of pairs with the offsets of every circuit.
  for (const auto& c : V.circuits)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (!c[i] || !c[j]) continue;
        std::vector<std::optional<Rational>> a(n);
        a[i] = *c[i];
        a[j] = *c[j];
        for (const auto& cell : detail::envelope_cells(gens, a))
          if (!cell.open) ptset.insert(cell.sample);
      }
  MetricGraph full = map.source.graph();
  for (const Point& p : ptset) {
    ++rep.checked_points;
    TropVector q = map.image(p);
    std::vector<ElementSet> star = n == 2 ? std::vector<ElementSet>{1, 2} : bergman_star(q, V);
    std::map<ElementSet, long> mult;
    for (ElementSet s : star) mult[s] = 0;
    for (const Tangent& z : full.tangents(p)) {
      auto dir = detail::split_direction(map.slopes(z));
      if (!dir) {
        rep.pass = false;
        rep.detail = "tangent at " + g.describe(p) + " does not map along a tree direction";
        return rep;
      }
      rep.degrees.push_back({p, z, dir->first, dir->second});
      if (z.ray < 0 && dir->second < 1) rep.degrees_positive = false;
      if (dir->second == 0) continue;
      if (!mult.count(dir->first)) {
        rep.pass = false;
        rep.detail = "image leaves the tree at " + g.describe(p);
        return rep;
      }
      mult[dir->first] += dir->second;
    }
    std::set<long> sums;
    for (auto& [s, m] : mult) sums.insert(m);
    if (sums.size() > 1) {
      rep.pass = false;
      std::ostringstream os;
      os << "unbalanced at " << g.describe(p) << ":";
      for (auto& [s, m] : mult) os << " " << s << "->" << m;
      rep.detail = os.str();
      return rep;
    }
  }
  // A ray whose image runs into a tree vertex would need balancing there too.
  if (n > 2) {
    TreeTarget T = rank1_tree_target(V);
    for (std::size_t k = 0; k < map.source.rays.size(); ++k) {
      TropVector q = map.image(map.source.rays[k].base);
      const auto& u = map.source.rays[k].slopes;
      for (const auto& v : T.vertices) {
        std::optional<Rational> s;
        bool on = true;
        Rational shift = v[0] - q[0];
        for (int i = 0; i < n && on; ++i) {
          Rational d = v[i] - q[i] - shift;
          long du = u[i] - u[0];
          if (du == 0) on = d == 0;
          else if (!s) s = d / du;
          else on = *s == d / du;
        }
        if (on && s && *s > 0) {
          rep.pass = false;
          rep.detail = "ray " + map.source.rays[k].id + " passes through a tree vertex";
          return rep;
        }
      }
    }
  }
  if (!rep.degrees_positive) {
    rep.pass = false;
    rep.detail = "a base tangent has local degree 0";
    return rep;
  }
  rep.detail = "balanced at " + std::to_string(rep.checked_points) + " points";
  return rep;
}

// ---------------------------------------------------------------- DOT export

inline std::string dot_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '"' || c == '\\') o += '\\';
    o += c;
  }
  return o;
}

inline std::string modified_graph_dot(const PLMap& map, const BalanceReport* rep = nullptr) {
  const MetricGraph& g = *map.source.base;
  std::ostringstream os;
  os << "graph modified {\n";
  for (const auto& v : g.vertex_names()) os << "  \"" << dot_escape(v) << "\";\n";
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    std::string label = ed.id + " (" + to_string(ed.length) + ")";
    if (rep) {
      std::string degs;
      for (const auto& d : rep->degrees)
        if (d.tangent.ray < 0 && d.tangent.edge == e && d.tangent.dir > 0)
          degs += (degs.empty() ? "" : ",") + std::to_string(d.degree);
      if (!degs.empty()) label += " deg " + degs;
    }
    os << "  \"" << dot_escape(g.vertex_name(ed.tail)) << "\" -- \"" << dot_escape(g.vertex_name(ed.head))
       << "\" [label=\"" << dot_escape(label) << "\"];\n";
  }
  for (std::size_t k = 0; k < map.source.rays.size(); ++k) {
    const auto& r = map.source.rays[k];
    std::string base;
    if (r.base.is_vertex()) {
      base = g.vertex_name(r.base.vertex);
    } else {
      base = g.describe(r.base);
      os << "  \"" << dot_escape(base) << "\" [shape=point];\n";
    }
    auto dir = detail::split_direction(r.slopes);
    os << "  \"inf" << k << "\" [shape=none,label=\"\"];\n";
    os << "  \"" << dot_escape(base) << "\" -- \"inf" << k << "\" [style=dashed,label=\"deg "
       << (dir ? dir->second : -1) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

inline std::string tree_dot(const TreeTarget& T) {
  std::ostringstream os;
  os << "graph target {\n";
  for (int v = 0; v < T.graph.num_vertices(); ++v) {
    std::string c;
    for (const auto& x : T.vertices[v]) c += (c.empty() ? "" : ",") + to_string(x);
    os << "  \"" << T.graph.vertex_name(v) << "\" [label=\"(" << c << ")\"];\n";
  }
  for (const auto& e : T.graph.edges())
    os << "  \"" << T.graph.vertex_name(e.tail) << "\" -- \"" << T.graph.vertex_name(e.head) << "\" [label=\""
       << to_string(e.length) << "\"];\n";
  int k = 0;
  for (const auto& r : T.graph.rays()) {
    os << "  \"r" << k << "\" [shape=none,label=\"" << dot_escape(r.id) << "\"];\n";
    os << "  \"" << T.graph.vertex_name(r.base.vertex) << "\" -- \"r" << k++ << "\" [style=dashed];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace tropls
