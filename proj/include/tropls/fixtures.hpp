#pragma once
// Builders for the worked examples used by the CLI and the tests.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tropls/rank.hpp"
#include "tropls/module.hpp"

namespace tropls {

namespace detail {

// Piecewise-linear edge profile from (t, value) knots; duplicate offsets are merged.
inline std::vector<Breakpoint> knots(std::initializer_list<std::pair<Rational, Rational>> pts) {
  std::map<Rational, Rational> m;
  for (const auto& [t, v] : pts) m[t] = v;
  std::vector<Breakpoint> out;
  for (const auto& [t, v] : m) out.push_back({t, v});
  return out;
}

inline std::vector<Breakpoint> flat(const Rational& len, const Rational& v) { return {{0, v}, {len, v}}; }

}  // namespace detail

// ---------------------------------------------------------------- lollipop

struct Lollipop {
  GraphPtr graph;
  Divisor divisor;          // m*w
  Tangent zeta;             // leftward at w, along the stem
  Tangent eta;              // into the loop at w
  std::vector<PLFunction> phi;  // phi_0 constant, phi_1, phi_2 stem slopes 1, 2, phi_3 loop slope 1
  TropicalSubmodule complete;   // generators realizing every slope of R(mw) at w
};

inline Lollipop lollipop(int m, const Rational& stem = 1, const Rational& loop = 1) {
  if (m < 1) throw input_error("lollipop needs m >= 1");
  Lollipop L;
  L.graph = make_graph(MetricGraph::build({"v", "w"}, {{"stem", "v", "w", stem}, {"loop", "w", "w", loop}}));
  Point w = L.graph->vertex("w");
  L.divisor = point_divisor(w, m);
  L.zeta = Tangent{w, 0, -1, -1};
  L.eta = Tangent{w, 1, +1, -1};
  auto stem_fn = [&](long k) {
    return PLFunction(L.graph, {{{0, stem * k}, {stem, 0}}, detail::flat(loop, 0)});
  };
  // Loop function with slope j leaving w one way and 1 the other way.
  auto loop_fn = [&](long j) {
    Rational s = loop / (j + 1);
    return PLFunction(L.graph, {detail::flat(stem, 0), {{0, 0}, {s, s * j}, {loop, 0}}});
  };
  L.phi = {stem_fn(0), stem_fn(1), stem_fn(std::min(2, m)), loop_fn(1)};
  std::vector<PLFunction> gens;
  for (long k = 0; k <= m; ++k) gens.push_back(stem_fn(k));
  for (long j = 1; j <= m - 1; ++j) gens.push_back(loop_fn(j));
  L.complete = TropicalSubmodule(L.graph, L.divisor, gens);
  return L;
}

// ---------------------------------------------------------------- barbell

struct Barbell {
  GraphPtr graph;
  Divisor canonical;  // v + w
  Tangent zeta;       // rightward on the bridge at its midpoint
  TropicalSubmodule sigma;

  // x at distance t in (0, 1/2] from v along the left loop; D + div = x + its mirror point
  PLFunction left_type(const Rational& t) const {
    Rational len = graph->edge(0).length, br = graph->edge(1).length;
    return PLFunction(graph, {detail::knots({{0, 0}, {t, t}, {len - t, t}, {len, 0}}), {{0, 0}, {br, -br}},
                              detail::flat(graph->edge(2).length, -br)});
  }
  PLFunction right_type(const Rational& t) const {
    Rational len = graph->edge(2).length, br = graph->edge(1).length;
    return PLFunction(graph, {detail::flat(graph->edge(0).length, 0), {{0, 0}, {br, br}},
                              detail::knots({{0, br}, {t, br + t}, {len - t, br + t}, {len, br}})});
  }
  // Peak at offset s on the bridge; D + div = 2x.
  PLFunction bridge_type(const Rational& s) const {
    Rational br = graph->edge(1).length;
    return PLFunction(graph, {detail::flat(graph->edge(0).length, 0), detail::knots({{0, 0}, {s, s}, {br, 2 * s - br}}),
                              detail::flat(graph->edge(2).length, 2 * s - br)});
  }
};

inline Barbell barbell(const Rational& left = 1, const Rational& bridge = 1, const Rational& right = 1) {
  Barbell B;
  B.graph = make_graph(MetricGraph::build({"v", "w"}, {{"L", "v", "v", left}, {"B", "v", "w", bridge}, {"R", "w", "w", right}}));
  B.canonical = canonical_divisor(*B.graph);
  B.zeta = Tangent{Point{-1, 1, bridge / 2}, 1, +1, -1};
  PLFunction hv(B.graph, {detail::flat(left, 0), {{0, 0}, {bridge, -bridge}}, detail::flat(right, -bridge)});
  PLFunction hw(B.graph, {detail::flat(left, 0), {{0, 0}, {bridge, bridge}}, detail::flat(right, bridge)});
  PLFunction phiL = B.left_type(left / 2);
  PLFunction phiR = B.right_type(right / 2);
  B.sigma = TropicalSubmodule(B.graph, B.canonical, {phiL, hv, hw, phiR});
  return B;
}

// ---------------------------------------------------------------- FG (infinitely generated)

struct FGExample {
  GraphPtr graph;
  Divisor divisor;  // 2v, v the midpoint of a length-2 interval

  // Flat at height x, slope -1 into v, slope +1 out of v for length y, then flat.
  PLFunction phi(const Rational& x, const Rational& y) const {
    if (x < 0 || y < 0 || x + y > 1) throw input_error("phi_xy needs x, y >= 0 and x + y <= 1");
    return PLFunction(graph, {detail::knots({{0, x}, {1 - x, x}, {1, 0}}), detail::knots({{0, 0}, {y, y}, {1, y}})});
  }
};

inline FGExample fg_example() {
  FGExample F;
  F.graph = make_graph(MetricGraph::build({"a", "v", "b"}, {{"left", "a", "v", 1}, {"right", "v", "b", 1}}));
  F.divisor = point_divisor(F.graph->vertex("v"), 2);
  return F;
}

// ---------------------------------------------------------------- Luo's graph

struct LuoExample {
  GraphPtr graph;
  Divisor divisor;  // p + q + s
  Tangent zeta;     // rightward on the s-q edge, pointing toward q
};

inline LuoExample luo_example(const Rational& len = 1) {
  std::vector<std::tuple<std::string, std::string, std::string, Rational>> es{
      {"pq", "p", "q", len}, {"sq", "s", "q", len}, {"ps", "p", "s", len}};
  for (auto [a, b] : {std::pair{"p", "x"}, std::pair{"q", "y"}, std::pair{"s", "z"}})
    for (int k = 1; k <= 3; ++k) es.emplace_back(std::string(a) + b + std::to_string(k), a, b, len);
  LuoExample L;
  L.graph = make_graph(MetricGraph::build({"p", "q", "s", "x", "y", "z"}, es));
  L.divisor = point_divisor(L.graph->vertex("p")) + point_divisor(L.graph->vertex("q")) + point_divisor(L.graph->vertex("s"));
  L.zeta = Tangent{Point{-1, 1, len / 2}, 1, +1, -1};
  return L;
}

// ---------------------------------------------------------------- loop of loops

struct LoopOfLoops {
  GraphPtr graph;
  Divisor divisor;  // v1 + w3 + w, w on the l2 bridge at distance x from v2
  std::vector<Point> u;  // u1, u2, u3
  Rational l1, l2, l3, x;
};

// Three small loops joined in a cycle by bridges of lengths l1, l2, l3. Each small loop
// carries its two attachment points and a far point u_i; the arc between the attachment
// points has length `near`, the two arcs through u_i have length `far`.
inline LoopOfLoops loop_of_loops(const Rational& l1 = 5, const Rational& l2 = 4, const Rational& l3 = 3,
                                 const Rational& x = 3, const Rational& near = 1, const Rational& far = 1) {
  if (x <= 0 || x > l2) throw input_error("loop of loops needs 0 < x <= l2");
  std::vector<std::tuple<std::string, std::string, std::string, Rational>> es{
      // left loop: v1, w3, u2
      {"A1", "v1", "w3", near}, {"A2", "w3", "u2", far}, {"A3", "u2", "v1", far},
      // top loop: a (end of l1), v2 (end of l2), u3
      {"T1", "a", "v2", near}, {"T2", "v2", "u3", far}, {"T3", "u3", "a", far},
      // right loop: b (end of l2), c (end of l3), u1
      {"R1", "b", "c", near}, {"R2", "c", "u1", far}, {"R3", "u1", "b", far},
      {"l1", "v1", "a", l1}, {"l2", "b", "v2", l2}, {"l3", "w3", "c", l3}};
  LoopOfLoops L;
  L.graph = make_graph(MetricGraph::build({"v1", "w3", "u2", "a", "v2", "u3", "b", "c", "u1"}, es));
  L.l1 = l1;
  L.l2 = l2;
  L.l3 = l3;
  L.x = x;
  Point w = L.graph->point_on_edge("l2", l2 - x);
  L.divisor = point_divisor(L.graph->vertex("v1")) + point_divisor(L.graph->vertex("w3")) + point_divisor(w);
  L.u = {L.graph->vertex("u1"), L.graph->vertex("u2"), L.graph->vertex("u3")};
  return L;
}

// Forced function: the unique (up to constants) phi in R(D) with D + div(phi) >= E, checked
// by reducing at every model vertex; absent if it does not exist or is not unique.
inline std::optional<PLFunction> forced_function(const GraphPtr& g, const Divisor& d, const Divisor& e) {
  std::optional<PLFunction> first;
  for (int v = 0; v < g->num_vertices(); ++v) {
    auto f = extremal_function(g, d, e, Point::at_vertex(v));
    if (!f) return std::nullopt;
    if (!first) first = f;
    else if (!compare_up_to_constant(*first, *f)) return std::nullopt;
  }
  for (const Point& p : e.support()) {
    auto f = extremal_function(g, d, e, p);
    if (!f || !compare_up_to_constant(*first, *f)) return std::nullopt;
  }
  return first;
}

}  // namespace tropls
