#pragma once
// Continuous piecewise-linear functions with integer slopes on a metric graph.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tropls/divisor.hpp"

namespace tropls {

using GraphPtr = std::shared_ptr<const MetricGraph>;

inline GraphPtr make_graph(MetricGraph g) { return std::make_shared<const MetricGraph>(std::move(g)); }

struct Breakpoint {
  Rational t;
  Rational val;
  friend bool operator==(const Breakpoint& a, const Breakpoint& b) { return a.t == b.t && a.val == b.val; }
};

class PLFunction {
 public:
  PLFunction() = default;

  // Validates offsets, integer slopes and vertex continuity; the diagnostic names the edge.
  PLFunction(GraphPtr g, std::vector<std::vector<Breakpoint>> pieces) : g_(std::move(g)), pieces_(std::move(pieces)) {
    if (!g_) throw input_error("function without graph");
    if (static_cast<int>(pieces_.size()) != g_->num_edges()) throw input_error("function does not cover every edge");
    for (int e = 0; e < g_->num_edges(); ++e) {
      auto& bp = pieces_[e];
      const Edge& ed = g_->edge(e);
      std::sort(bp.begin(), bp.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.t < b.t; });
      if (bp.size() < 2 || bp.front().t != 0 || bp.back().t != ed.length)
        throw input_error("edge '" + ed.id + "': breakpoints must include t=0 and t=length");
      for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        if (bp[k].t == bp[k + 1].t) throw input_error("edge '" + ed.id + "': repeated breakpoint offset");
        Rational s = (bp[k + 1].val - bp[k].val) / (bp[k + 1].t - bp[k].t);
        if (!is_integer(s)) throw input_error("edge '" + ed.id + "': non-integer slope " + to_string(s));
      }
    }
    std::vector<std::optional<Rational>> vval(g_->num_vertices());
    for (int e = 0; e < g_->num_edges(); ++e) {
      const Edge& ed = g_->edge(e);
      for (auto [v, val] : {std::pair{ed.tail, pieces_[e].front().val}, std::pair{ed.head, pieces_[e].back().val}}) {
        if (!vval[v]) vval[v] = val;
        else if (*vval[v] != val)
          throw input_error("edge '" + ed.id + "': discontinuity at vertex '" + g_->vertex_name(v) + "'");
      }
    }
    canonicalize();
  }

  static PLFunction constant(GraphPtr g, const Rational& c = 0) {
    std::vector<std::vector<Breakpoint>> p;
    for (const Edge& e : g->edges()) p.push_back({{0, c}, {e.length, c}});
    return PLFunction(g, p);
  }

  // Linear on every edge with the given vertex values.
  static PLFunction from_vertex_values(GraphPtr g, const std::vector<Rational>& vals) {
    std::vector<std::vector<Breakpoint>> p;
    for (const Edge& e : g->edges()) p.push_back({{0, vals.at(e.tail)}, {e.length, vals.at(e.head)}});
    return PLFunction(g, p);
  }

  const GraphPtr& graph_ptr() const { return g_; }
  const MetricGraph& graph() const { return *g_; }
  const std::vector<Breakpoint>& on_edge(int e) const { return pieces_.at(e); }
  const std::vector<std::vector<Breakpoint>>& pieces() const { return pieces_; }
  bool valid() const { return static_cast<bool>(g_); }

  Rational value_at(int e, const Rational& t) const {
    const auto& bp = pieces_[e];
    std::size_t k = segment_index(e, t);
    if (t == bp[k].t) return bp[k].val;
    if (t == bp[k + 1].t) return bp[k + 1].val;
    return bp[k].val + slope_of(e, k) * (t - bp[k].t);
  }

  Rational evaluate(const Point& p) const {
    if (p.is_vertex()) {
      for (int e = 0; e < g_->num_edges(); ++e) {
        if (g_->edge(e).tail == p.vertex) return pieces_[e].front().val;
        if (g_->edge(e).head == p.vertex) return pieces_[e].back().val;
      }
      throw input_error("isolated vertex");
    }
    return value_at(p.edge, p.t);
  }

  // Slope on the piece (t, t+eps) if dir=+1 or the outgoing slope toward the tail if dir=-1.
  long outgoing_slope(int e, const Rational& t, int dir) const {
    const auto& bp = pieces_[e];
    if (dir > 0) {
      if (t >= g_->edge(e).length) throw input_error("no forward direction at edge end");
      std::size_t k = segment_index(e, t);
      if (t == bp[k + 1].t) ++k;
      return to_long(slope_of(e, k));
    }
    if (t <= 0) throw input_error("no backward direction at edge start");
    std::size_t k = segment_index(e, t);
    if (t == bp[k].t) --k;
    return -to_long(slope_of(e, k));
  }

  long slope(const Tangent& z) const {
    if (z.ray >= 0) throw input_error("slope along a ray needs an extended function");
    Rational t = z.base.is_vertex() ? (z.dir > 0 ? Rational(0) : g_->edge(z.edge).length) : z.base.t;
    if (z.base.is_vertex()) {
      const Edge& ed = g_->edge(z.edge);
      if (z.dir > 0 && ed.tail != z.base.vertex) throw input_error("tangent not incident");
      if (z.dir < 0 && ed.head != z.base.vertex) throw input_error("tangent not incident");
    }
    return outgoing_slope(z.edge, t, z.dir);
  }

  long ord(const Point& p) const {
    long s = 0;
    for (const Tangent& z : g_->tangents(p))
      if (z.ray < 0) s += slope(z);
    return -s;
  }

  Divisor divisor() const {
    Divisor d;
    for (int v = 0; v < g_->num_vertices(); ++v) d.add(Point::at_vertex(v), ord(Point::at_vertex(v)));
    for (int e = 0; e < g_->num_edges(); ++e) {
      const auto& bp = pieces_[e];
      for (std::size_t k = 1; k + 1 < bp.size(); ++k) {
        Rational left = slope_of(e, k - 1), right = slope_of(e, k);
        d.add(Point{-1, e, bp[k].t}, to_long(left - right));
      }
    }
    return d;
  }

  PLFunction operator+(const Rational& c) const {
    PLFunction r = *this;
    for (auto& bp : r.pieces_)
      for (auto& b : bp) b.val += c;
    return r;
  }
  PLFunction operator-(const Rational& c) const { return *this + Rational(-c); }
  PLFunction operator-() const {
    PLFunction r = *this;
    for (auto& bp : r.pieces_)
      for (auto& b : bp) b.val = -b.val;
    return r;
  }

  friend bool operator==(const PLFunction& a, const PLFunction& b) {
    return a.g_ == b.g_ && a.pieces_ == b.pieces_;
  }
  friend bool operator!=(const PLFunction& a, const PLFunction& b) { return !(a == b); }

  Rational max_value() const {
    Rational m = pieces_[0][0].val;
    for (const auto& bp : pieces_)
      for (const auto& b : bp) m = std::max(m, b.val);
    return m;
  }
  Rational min_value() const {
    Rational m = pieces_[0][0].val;
    for (const auto& bp : pieces_)
      for (const auto& b : bp) m = std::min(m, b.val);
    return m;
  }

  Rational slope_of(int e, std::size_t k) const {
    const auto& bp = pieces_[e];
    return (bp[k + 1].val - bp[k].val) / (bp[k + 1].t - bp[k].t);
  }

  // Index k with bp[k].t <= t <= bp[k+1].t.
  std::size_t segment_index(int e, const Rational& t) const {
    const auto& bp = pieces_[e];
    if (t < 0 || t > bp.back().t) throw input_error("offset outside edge '" + g_->edge(e).id + "'");
    std::size_t lo = 0, hi = bp.size() - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (bp[mid].t <= t) lo = mid;
      else hi = mid;
    }
    return lo;
  }

  std::vector<Rational> breakpoint_offsets(int e) const {
    std::vector<Rational> out;
    for (const auto& b : pieces_[e]) out.push_back(b.t);
    return out;
  }

  // Restriction to a subdivision's refined graph.
  PLFunction pulled_back(const Subdivision& s, GraphPtr refined) const {
    std::vector<std::vector<Breakpoint>> p;
    for (std::size_t re = 0; re < s.provenance.size(); ++re) {
      const auto& pc = s.provenance[re];
      std::vector<Breakpoint> bp{{0, value_at(pc.edge, pc.from)}};
      for (const auto& b : pieces_[pc.edge])
        if (b.t > pc.from && b.t < pc.to) bp.push_back({b.t - pc.from, b.val});
      bp.push_back({pc.to - pc.from, value_at(pc.edge, pc.to)});
      p.push_back(bp);
    }
    return PLFunction(refined, p);
  }

 private:
  void canonicalize() {
    for (int e = 0; e < static_cast<int>(pieces_.size()); ++e) {
      auto& bp = pieces_[e];
      std::vector<Breakpoint> out{bp.front()};
      for (std::size_t k = 1; k + 1 < bp.size(); ++k) {
        const Breakpoint& a = out.back();
        const Breakpoint& b = bp[k];
        const Breakpoint& c = bp[k + 1];
        if ((b.val - a.val) * (c.t - b.t) != (c.val - b.val) * (b.t - a.t)) out.push_back(b);
      }
      out.push_back(bp.back());
      bp = std::move(out);
    }
  }

  GraphPtr g_;
  std::vector<std::vector<Breakpoint>> pieces_;
};

inline Rational evaluate(const PLFunction& f, const Point& x) { return f.evaluate(x); }
inline long slope(const PLFunction& f, const Tangent& z) { return f.slope(z); }
inline Divisor divisor_of(const PLFunction& f) { return f.divisor(); }

namespace detail {

inline void require_same_graph(const PLFunction& a, const PLFunction& b) {
  if (a.graph_ptr() != b.graph_ptr() && !(a.graph().edges().size() == b.graph().edges().size() &&
                                          a.graph().vertex_names() == b.graph().vertex_names()))
    throw input_error("functions live on different graphs");
}

// Sorted union of breakpoint offsets on edge e.
inline std::vector<Rational> merged_offsets(const std::vector<const PLFunction*>& fs, int e) {
  std::vector<Rational> ts;
  for (const PLFunction* f : fs)
    for (const auto& b : f->on_edge(e)) ts.push_back(b.t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

}  // namespace detail

inline PLFunction pointwise_sum(const PLFunction& a, const PLFunction& b) {
  detail::require_same_graph(a, b);
  std::vector<std::vector<Breakpoint>> p;
  for (int e = 0; e < a.graph().num_edges(); ++e) {
    std::vector<Breakpoint> bp;
    for (const Rational& t : detail::merged_offsets({&a, &b}, e)) bp.push_back({t, a.value_at(e, t) + b.value_at(e, t)});
    p.push_back(bp);
  }
  return PLFunction(a.graph_ptr(), p);
}

inline PLFunction operator-(const PLFunction& a, const PLFunction& b) { return pointwise_sum(a, -b); }

// Pointwise minimum of phi_i + a_i.
inline PLFunction tropical_combine(const std::vector<std::pair<PLFunction, Rational>>& terms) {
  if (terms.empty()) throw input_error("tropical combination of an empty list");
  const PLFunction& f0 = terms[0].first;
  std::vector<const PLFunction*> fs;
  for (const auto& [f, a] : terms) {
    detail::require_same_graph(f0, f);
    fs.push_back(&f);
  }
  std::vector<std::vector<Breakpoint>> p;
  for (int e = 0; e < f0.graph().num_edges(); ++e) {
    std::vector<Rational> ts = detail::merged_offsets(fs, e);
    std::vector<Breakpoint> bp;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      // values at left end, slopes on (ts[k], ts[k+1])
      std::vector<Rational> v0, sl;
      Rational m;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        Rational v = terms[i].first.value_at(e, ts[k]) + terms[i].second;
        if (i == 0 || v < m) m = v;
        v0.push_back(v);
      }
      bp.push_back({ts[k], m});
      if (k + 1 == ts.size()) break;
      Rational len = ts[k + 1] - ts[k];
      for (std::size_t i = 0; i < terms.size(); ++i)
        sl.push_back((terms[i].first.value_at(e, ts[k + 1]) + terms[i].second - v0[i]) / len);
      // Walk the lower envelope of the lines v0[i] + sl[i]*s on [0, len].
      Rational s = 0;
      while (true) {
        Rational cur = 0;
        std::size_t best = 0;
        bool first = true;
        for (std::size_t i = 0; i < terms.size(); ++i) {
          Rational v = v0[i] + sl[i] * s;
          if (first || v < cur || (v == cur && sl[i] < sl[best])) {
            cur = v;
            best = i;
            first = false;
          }
        }
        Rational next = len;
        for (std::size_t i = 0; i < terms.size(); ++i) {
          if (sl[i] >= sl[best]) continue;
          Rational x = (v0[i] - v0[best]) / (sl[best] - sl[i]);
          if (x > s && x < next) next = x;
        }
        if (next >= len) break;
        bp.push_back({ts[k] + next, v0[best] + sl[best] * next});
        s = next;
      }
    }
    p.push_back(bp);
  }
  return PLFunction(f0.graph_ptr(), p);
}

inline PLFunction tropical_min(const PLFunction& a, const PLFunction& b) { return tropical_combine({{a, 0}, {b, 0}}); }

// c with b = a + c, when the difference is constant.
inline std::optional<Rational> compare_up_to_constant(const PLFunction& a, const PLFunction& b) {
  detail::require_same_graph(a, b);
  PLFunction d = b - a;
  Rational c = d.max_value();
  if (d.min_value() != c) return std::nullopt;
  return c;
}

}  // namespace tropls
