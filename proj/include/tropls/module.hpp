#pragma once
// Finitely generated tropical submodules of R(D).

#include <optional>
#include <set>
#include <vector>

#include "tropls/pl_function.hpp"

namespace tropls {

inline bool in_linear_system(const PLFunction& f, const Divisor& d) { return (d + f.divisor()).effective(); }

struct TropicalSubmodule {
  GraphPtr graph;
  Divisor divisor;
  std::vector<PLFunction> generators;

  TropicalSubmodule() = default;
  TropicalSubmodule(GraphPtr g, Divisor d, std::vector<PLFunction> gens)
      : graph(std::move(g)), divisor(std::move(d)), generators(std::move(gens)) {
    if (generators.empty()) throw input_error("module needs at least one generator");
    for (std::size_t i = 0; i < generators.size(); ++i) {
      if (generators[i].graph_ptr() != graph) throw input_error("generator on a different graph");
      if (!in_linear_system(generators[i], divisor))
        throw input_error("generator " + std::to_string(i) + " is not in R(D)");
    }
  }

  std::size_t size() const { return generators.size(); }
};

// Offsets on edge e where any of the functions breaks, plus the given extra points.
inline std::vector<Rational> refinement_offsets(const MetricGraph& g, const std::vector<PLFunction>& fs, int e,
                                                const std::vector<Point>& extra = {}) {
  std::set<Rational> ts{Rational(0), g.edge(e).length};
  for (const PLFunction& f : fs)
    for (const auto& b : f.on_edge(e)) ts.insert(b.t);
  for (const Point& p : extra)
    if (!p.is_vertex() && p.edge == e) ts.insert(p.t);
  return {ts.begin(), ts.end()};
}

// All model vertices and interior breakpoints of the functions, plus supp D.
inline std::vector<Point> refinement_points(const MetricGraph& g, const std::vector<PLFunction>& fs,
                                            const Divisor& d = {}) {
  std::vector<Point> pts;
  for (int v = 0; v < g.num_vertices(); ++v) pts.push_back(Point::at_vertex(v));
  auto extra = d.support();
  for (int e = 0; e < g.num_edges(); ++e) {
    auto ts = refinement_offsets(g, fs, e, extra);
    for (std::size_t k = 1; k + 1 < ts.size(); ++k) pts.push_back(Point{-1, e, ts[k]});
  }
  return pts;
}

// Residuation: a_i = max(psi - phi_i); psi is a member iff min(phi_i + a_i) reproduces it.
inline std::optional<std::vector<Rational>> membership(const PLFunction& psi, const std::vector<PLFunction>& gens) {
  std::vector<std::pair<PLFunction, Rational>> terms;
  std::vector<Rational> a;
  for (const PLFunction& f : gens) {
    a.push_back((psi - f).max_value());
    terms.emplace_back(f, a.back());
  }
  if (tropical_combine(terms) != psi) return std::nullopt;
  return a;
}

inline std::optional<std::vector<Rational>> membership(const PLFunction& psi, const TropicalSubmodule& m) {
  return membership(psi, m.generators);
}

inline TropicalSubmodule minimize_generators(const TropicalSubmodule& m) {
  std::vector<PLFunction> gens;
  for (const PLFunction& f : m.generators) {
    bool dup = false;
    for (const PLFunction& h : gens) dup = dup || compare_up_to_constant(f, h).has_value();
    if (!dup) gens.push_back(f);
  }
  for (std::size_t i = gens.size(); i-- > 0;) {
    if (gens.size() == 1) break;
    std::vector<PLFunction> rest;
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (j != i) rest.push_back(gens[j]);
    if (membership(gens[i], rest)) gens = std::move(rest);
  }
  return TropicalSubmodule(m.graph, m.divisor, gens);
}

struct SlopeVector {
  Tangent tangent;
  std::vector<long> slopes;  // strictly increasing
};

// Any combination has, at zeta, the slope of a term achieving the min just past the base,
// so generator slopes already exhaust the module.
inline SlopeVector slope_vector(const std::vector<PLFunction>& gens, const Tangent& z) {
  std::set<long> s;
  for (const PLFunction& f : gens) s.insert(f.slope(z));
  return {z, {s.begin(), s.end()}};
}

inline SlopeVector slope_vector(const TropicalSubmodule& m, const Tangent& z) { return slope_vector(m.generators, z); }

struct CoveredLocus {
  struct Segment {
    int edge;
    Rational from, to;  // open interval
  };
  std::vector<Segment> segments;
  std::vector<Point> points;
  std::vector<Segment> uncovered_segments;
  std::vector<Point> uncovered_points;
  bool incomplete = false;

  bool covers_graph() const { return uncovered_segments.empty() && uncovered_points.empty(); }

  std::optional<Point> uncovered_witness(const MetricGraph& g) const {
    if (!uncovered_points.empty()) return uncovered_points.front();
    if (!uncovered_segments.empty()) {
      const auto& s = uncovered_segments.front();
      return g.point_on_edge(s.edge, (s.from + s.to) / 2);
    }
    return std::nullopt;
  }
};

namespace detail {

// D(x) - sum over tangents of min slope over the given functions (all assumed to achieve at x).
inline long tied_coefficient(const MetricGraph& g, const Divisor& d, const std::vector<const PLFunction*>& fs,
                             const Point& x) {
  long c = d.at(x);
  for (const Tangent& z : g.tangents(x)) {
    if (z.ray >= 0) continue;
    long m = fs[0]->slope(z);
    for (const PLFunction* f : fs) m = std::min(m, f->slope(z));
    c -= m;
  }
  return c;
}

}  // namespace detail

// {x : some element phi has D + div(phi) >= x}. Exact when every element needs at most two
// generators (rank 1); otherwise a sound subset flagged incomplete.
inline CoveredLocus covered_locus(const TropicalSubmodule& m, int rank = 1) {
  const MetricGraph& g = *m.graph;
  const auto& gens = m.generators;
  CoveredLocus out;
  out.incomplete = rank >= 2;
  auto covered_point = [&](const Point& x) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (detail::tied_coefficient(g, m.divisor, {&gens[i]}, x) >= 1) return true;
      for (std::size_t j = i + 1; j < gens.size(); ++j)
        if (detail::tied_coefficient(g, m.divisor, {&gens[i], &gens[j]}, x) >= 1) return true;
    }
    return false;
  };
  for (const Point& x : refinement_points(g, gens, m.divisor))
    (covered_point(x) ? out.points : out.uncovered_points).push_back(x);
  auto extra = m.divisor.support();
  for (int e = 0; e < g.num_edges(); ++e) {
    auto ts = refinement_offsets(g, gens, e, extra);
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      // On an open piece D vanishes and each pair contributes |difference of slopes|.
      bool cov = false;
      std::set<long> slopes;
      for (const PLFunction& f : gens) slopes.insert(to_long(f.slope_of(e, f.segment_index(e, (ts[k] + ts[k + 1]) / 2))));
      cov = slopes.size() >= 2;
      CoveredLocus::Segment s{e, ts[k], ts[k + 1]};
      (cov ? out.segments : out.uncovered_segments).push_back(s);
    }
  }
  return out;
}

}  // namespace tropls
