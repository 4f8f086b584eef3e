#pragma once
// Metric graphs with rational edge lengths, points, tangent directions and
// subdivisions.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "tropls/rational.hpp"

namespace tropls {

// A location on the graph: either a vertex, or an edge with 0 < t < length.
struct Point {
  int vertex = -1;
  int edge = -1;
  Rational t = 0;

  static Point at_vertex(int v) { return Point{v, -1, 0}; }
  bool is_vertex() const { return vertex >= 0; }

  friend bool operator==(const Point& a, const Point& b) {
    return a.vertex == b.vertex && a.edge == b.edge && a.t == b.t;
  }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
  friend bool operator<(const Point& a, const Point& b) {
    if (a.vertex != b.vertex) return a.vertex < b.vertex;
    if (a.edge != b.edge) return a.edge < b.edge;
    return a.t < b.t;
  }
};

// dir = +1 points toward the head of the edge (increasing t), -1 toward the tail.
// ray >= 0 selects an infinite ray based at the point instead of an edge end.
struct Tangent {
  Point base;
  int edge = -1;
  int dir = 1;
  int ray = -1;

  friend bool operator==(const Tangent& a, const Tangent& b) {
    return a.base == b.base && a.edge == b.edge && a.dir == b.dir && a.ray == b.ray;
  }
  friend bool operator<(const Tangent& a, const Tangent& b) {
    return std::tie(a.base, a.edge, a.dir, a.ray) < std::tie(b.base, b.edge, b.dir, b.ray);
  }
};

struct Edge {
  std::string id;
  int tail = 0;
  int head = 0;
  Rational length;
  bool is_loop() const { return tail == head; }
};

struct Ray {
  std::string id;
  Point base;
};

class MetricGraph {
 public:
  MetricGraph() = default;

  MetricGraph(std::vector<std::string> vertex_names, std::vector<Edge> edges,
              std::vector<Ray> rays = {})
      : vertices_(std::move(vertex_names)), edges_(std::move(edges)), rays_(std::move(rays)) {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (!vindex_.emplace(vertices_[i], static_cast<int>(i)).second)
        throw input_error("duplicate vertex '" + vertices_[i] + "'");
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (!eindex_.emplace(e.id, static_cast<int>(i)).second)
        throw input_error("duplicate edge '" + e.id + "'");
      if (e.tail < 0 || e.head < 0 || e.tail >= num_vertices() || e.head >= num_vertices())
        throw input_error("edge '" + e.id + "' has an unknown endpoint");
      if (e.length <= 0) throw input_error("edge '" + e.id + "' has non-positive length");
    }
    if (vertices_.empty()) throw input_error("graph has no vertices");
    if (!connected()) throw input_error("graph is disconnected");
  }

  // Convenience builder from (id, tail name, head name, length) tuples.
  static MetricGraph build(const std::vector<std::string>& vertex_names,
                           const std::vector<std::tuple<std::string, std::string, std::string, Rational>>& es) {
    std::map<std::string, int> idx;
    for (std::size_t i = 0; i < vertex_names.size(); ++i) idx[vertex_names[i]] = static_cast<int>(i);
    std::vector<Edge> edges;
    for (const auto& [id, t, h, len] : es) {
      auto it = idx.find(t), ih = idx.find(h);
      if (it == idx.end() || ih == idx.end()) throw input_error("edge '" + id + "' has an unknown endpoint");
      edges.push_back(Edge{id, it->second, ih->second, len});
    }
    return MetricGraph(vertex_names, edges);
  }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::string>& vertex_names() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Ray>& rays() const { return rays_; }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::string& vertex_name(int v) const { return vertices_.at(v); }

  int vertex_index(const std::string& name) const {
    auto it = vindex_.find(name);
    if (it == vindex_.end()) throw input_error("unknown vertex '" + name + "'");
    return it->second;
  }
  int edge_index(const std::string& id) const {
    auto it = eindex_.find(id);
    if (it == eindex_.end()) throw input_error("unknown edge '" + id + "'");
    return it->second;
  }
  bool has_vertex(const std::string& name) const { return vindex_.count(name) > 0; }
  bool has_edge(const std::string& id) const { return eindex_.count(id) > 0; }

  Point vertex(const std::string& name) const { return Point::at_vertex(vertex_index(name)); }

  // Canonical point at offset t along edge e.
  Point point_on_edge(int e, const Rational& t) const {
    const Edge& ed = edges_.at(e);
    if (t < 0 || t > ed.length) throw input_error("offset outside edge '" + ed.id + "'");
    if (t == 0) return Point::at_vertex(ed.tail);
    if (t == ed.length) return Point::at_vertex(ed.head);
    return Point{-1, e, t};
  }
  Point point_on_edge(const std::string& id, const Rational& t) const {
    return point_on_edge(edge_index(id), t);
  }

  void check_point(const Point& p) const {
    if (p.is_vertex()) {
      if (p.vertex >= num_vertices()) throw input_error("point not on graph");
      return;
    }
    if (p.edge < 0 || p.edge >= num_edges()) throw input_error("point not on graph");
    if (p.t <= 0 || p.t >= edges_[p.edge].length) throw input_error("point offset not canonical");
  }

  // Number of edge ends at v; loops count twice.
  int valence(int v) const {
    int n = 0;
    for (const Edge& e : edges_) n += (e.tail == v) + (e.head == v);
    return n;
  }

  Rational total_length() const {
    Rational s = 0;
    for (const Edge& e : edges_) s += e.length;
    return s;
  }

  int genus() const {
    if (!rays_.empty()) throw input_error("genus is undefined for graphs with rays");
    return num_edges() - num_vertices() + 1;
  }

  std::vector<Tangent> tangents(const Point& p) const {
    check_point(p);
    std::vector<Tangent> out;
    if (p.is_vertex()) {
      for (int e = 0; e < num_edges(); ++e) {
        if (edges_[e].tail == p.vertex) out.push_back(Tangent{p, e, +1, -1});
        if (edges_[e].head == p.vertex) out.push_back(Tangent{p, e, -1, -1});
      }
    } else {
      out.push_back(Tangent{p, p.edge, +1, -1});
      out.push_back(Tangent{p, p.edge, -1, -1});
    }
    for (int r = 0; r < static_cast<int>(rays_.size()); ++r)
      if (rays_[r].base == p) out.push_back(Tangent{p, -1, 1, r});
    return out;
  }

  // Offset of point p measured along edge e (p must lie on the closed edge).
  std::optional<Rational> offset_on(const Point& p, int e) const {
    if (!p.is_vertex()) {
      if (p.edge == e) return p.t;
      return std::nullopt;
    }
    const Edge& ed = edges_[e];
    if (ed.tail == p.vertex) return Rational(0);
    if (ed.head == p.vertex) return ed.length;
    return std::nullopt;
  }

  std::string describe(const Point& p) const {
    if (p.is_vertex()) return vertices_[p.vertex];
    return edges_[p.edge].id + "@" + to_string(p.t);
  }

  MetricGraph with_rays(std::vector<Ray> rays) const {
    MetricGraph g = *this;
    g.rays_ = std::move(rays);
    return g;
  }

  MetricGraph reversed(const std::set<int>& which) const {
    MetricGraph g = *this;
    for (int e : which) std::swap(g.edges_[e].tail, g.edges_[e].head);
    return g;
  }

 private:
  bool connected() const {
    int n = num_vertices();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const Edge& e : edges_) parent[find(e.tail)] = find(e.head);
    int root = find(0);
    for (int v = 0; v < n; ++v)
      if (find(v) != root) return false;
    return true;
  }

  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<Ray> rays_;
  std::unordered_map<std::string, int> vindex_;
  std::unordered_map<std::string, int> eindex_;
};

inline int genus(const MetricGraph& g) { return g.genus(); }

inline std::vector<Tangent> tangent_vectors(const Point& p, const MetricGraph& g) { return g.tangents(p); }

// Refinement of a graph at finitely many points.
struct Subdivision {
  MetricGraph refined;
  // For each refined edge: original edge index and the offsets it spans.
  struct Piece {
    int edge;
    Rational from;
    Rational to;
  };
  std::vector<Piece> provenance;
  // Breakpoint offsets (including 0 and length) per original edge.
  std::vector<std::vector<Rational>> cuts;
  // Refined vertex index of original vertex v.
  std::vector<int> vertex_map;

  Point map_point(const MetricGraph& original, const Point& p) const {
    if (p.is_vertex()) return Point::at_vertex(vertex_map[p.vertex]);
    const auto& c = cuts[p.edge];
    (void)original;
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
      if (p.t == c[k + 1] && k + 2 < c.size()) return Point::at_vertex(piece_head(p.edge, k));
      if (p.t > c[k] && p.t < c[k + 1]) {
        int re = piece_index(p.edge, k);
        return refined.point_on_edge(re, p.t - c[k]);
      }
    }
    throw input_error("point not on graph");
  }

  Point unmap_point(const Point& q) const {
    if (q.is_vertex()) {
      for (std::size_t v = 0; v < vertex_map.size(); ++v)
        if (vertex_map[v] == q.vertex) return Point::at_vertex(static_cast<int>(v));
      for (std::size_t re = 0; re < provenance.size(); ++re) {
        if (refined.edge(static_cast<int>(re)).tail == q.vertex) return orig_point(provenance[re].edge, provenance[re].from);
        if (refined.edge(static_cast<int>(re)).head == q.vertex) return orig_point(provenance[re].edge, provenance[re].to);
      }
      throw input_error("vertex not in subdivision");
    }
    const Piece& pc = provenance[q.edge];
    return orig_point(pc.edge, pc.from + q.t);
  }

  int piece_index(int e, std::size_t k) const { return first_piece_[e] + static_cast<int>(k); }
  int piece_head(int e, std::size_t k) const { return refined.edge(piece_index(e, k)).head; }

  std::vector<int> first_piece_;
  MetricGraph original_;

 private:
  Point orig_point(int e, const Rational& t) const { return original_.point_on_edge(e, t); }
};

inline Subdivision subdivide(const MetricGraph& g, const std::vector<Point>& points) {
  std::vector<std::set<Rational>> cutset(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    cutset[e].insert(Rational(0));
    cutset[e].insert(g.edge(e).length);
  }
  for (const Point& p : points) {
    g.check_point(p);
    if (!p.is_vertex()) cutset[p.edge].insert(p.t);
  }
  Subdivision s;
  s.original_ = g;
  std::vector<std::string> names = g.vertex_names();
  std::vector<Edge> edges;
  s.vertex_map.resize(g.num_vertices());
  std::iota(s.vertex_map.begin(), s.vertex_map.end(), 0);
  s.cuts.resize(g.num_edges());
  s.first_piece_.resize(g.num_edges());
  std::set<std::string> used(names.begin(), names.end());
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    std::vector<Rational> c(cutset[e].begin(), cutset[e].end());
    s.cuts[e] = c;
    s.first_piece_[e] = static_cast<int>(edges.size());
    int prev = ed.tail;
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
      int next;
      if (k + 2 == c.size()) {
        next = ed.head;
      } else {
        std::string nm = ed.id + "@" + to_string(c[k + 1]);
        while (used.count(nm)) nm += "'";
        used.insert(nm);
        names.push_back(nm);
        next = static_cast<int>(names.size()) - 1;
      }
      std::string id = c.size() == 2 ? ed.id : ed.id + "." + std::to_string(k);
      edges.push_back(Edge{id, prev, next, c[k + 1] - c[k]});
      s.provenance.push_back(Subdivision::Piece{e, c[k], c[k + 1]});
      prev = next;
    }
  }
  s.refined = MetricGraph(names, edges);
  return s;
}

}  // namespace tropls
