#pragma once
// Test-side reference implementations. These deliberately avoid the library's chip lattice,
// Dhar reduction and envelope code so they can cross-check it.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "tropls/pl_function.hpp"

namespace oracle {

using tropls::Divisor;
using tropls::MetricGraph;
using tropls::PLFunction;
using tropls::Point;
using tropls::Rational;

// Finite graph whose vertices are the points of a metric graph at multiples of 1/N along every
// edge. Every edge length times N must be an integer.
struct LatticeGraph {
  int n = 0;
  std::vector<std::vector<int>> adj;  // with multiplicity, no loops
  std::map<Point, int> index;

  LatticeGraph(const MetricGraph& g, long N) {
    for (int v = 0; v < g.num_vertices(); ++v) index[Point::at_vertex(v)] = n++;
    adj.resize(n);
    for (int e = 0; e < g.num_edges(); ++e) {
      const auto& ed = g.edge(e);
      Rational steps = ed.length * N;
      if (steps.get_den() != 1) throw std::logic_error("lattice does not fit the edge lengths");
      long k = steps.get_num().get_si();
      int prev = index[Point::at_vertex(ed.tail)];
      for (long i = 1; i <= k; ++i) {
        int cur;
        if (i == k) {
          cur = index[Point::at_vertex(ed.head)];
        } else {
          cur = n++;
          adj.emplace_back();
          index[Point{-1, e, Rational(i) / N}] = cur;
        }
        if (cur != prev) {
          adj[prev].push_back(cur);
          adj[cur].push_back(prev);
        }
        prev = cur;
      }
    }
  }

  std::vector<long> chips(const Divisor& d) const {
    std::vector<long> c(n, 0);
    for (const auto& [p, k] : d.coeffs) c.at(index.at(p)) += k;
    return c;
  }
};

// Greedy borrowing: vertices in debt borrow until the debt clears or every vertex has borrowed.
inline bool winnable(const LatticeGraph& G, std::vector<long> c) {
  long total = 0;
  for (long x : c) total += x;
  if (total < 0) return false;
  std::vector<bool> borrowed(G.n, false);
  int count = 0;
  while (true) {
    int v = -1;
    for (int i = 0; i < G.n; ++i)
      if (c[i] < 0) {
        v = i;
        break;
      }
    if (v < 0) return true;
    if (!borrowed[v]) {
      borrowed[v] = true;
      if (++count == G.n) return false;
    }
    c[v] += static_cast<long>(G.adj[v].size());
    for (int u : G.adj[v]) c[u] -= 1;
  }
}

// Brute-force Baker-Norine rank over all effective divisors on the lattice vertices.
inline int brute_rank(const LatticeGraph& G, const std::vector<long>& c, int cap = 4) {
  if (!winnable(G, c)) return -1;
  for (int r = 1; r <= cap; ++r) {
    bool all = true;
    std::vector<int> pick(r, 0);
    std::function<void(int, int)> rec = [&](int k, int from) {
      if (!all) return;
      if (k == r) {
        auto c2 = c;
        for (int v : pick) c2[v] -= 1;
        if (!winnable(G, c2)) all = false;
        return;
      }
      for (int v = from; v < G.n && all; ++v) {
        pick[k] = v;
        rec(k + 1, v);
      }
    };
    rec(0, 0);
    if (!all) return r - 1;
  }
  return cap;
}

// Points where the minimum of fs[i] + a[i] can change: every breakpoint, every pairwise
// crossing inside a common linear piece, and midpoints between consecutive events.
inline std::vector<std::pair<int, Rational>> probe_points(const std::vector<PLFunction>& fs,
                                                          const std::vector<std::optional<Rational>>& a) {
  const MetricGraph& g = fs[0].graph();
  std::vector<std::pair<int, Rational>> out;
  for (int e = 0; e < g.num_edges(); ++e) {
    std::set<Rational> ev{0, g.edge(e).length};
    for (const auto& f : fs)
      for (const auto& b : f.on_edge(e)) ev.insert(b.t);
    std::vector<Rational> base(ev.begin(), ev.end());
    for (std::size_t k = 0; k + 1 < base.size(); ++k) {
      Rational lo = base[k], hi = base[k + 1];
      for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i + 1; j < fs.size(); ++j) {
          if (!a[i] || !a[j]) continue;
          Rational d0 = fs[i].value_at(e, lo) + *a[i] - fs[j].value_at(e, lo) - *a[j];
          Rational d1 = fs[i].value_at(e, hi) + *a[i] - fs[j].value_at(e, hi) - *a[j];
          if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) ev.insert(lo + (hi - lo) * d0 / (d0 - d1));
        }
    }
    std::vector<Rational> all(ev.begin(), ev.end());
    for (std::size_t k = 0; k < all.size(); ++k) {
      out.emplace_back(e, all[k]);
      if (k + 1 < all.size()) out.emplace_back(e, (all[k] + all[k + 1]) / 2);
    }
  }
  return out;
}

inline std::vector<int> achievers(const std::vector<PLFunction>& fs, const std::vector<std::optional<Rational>>& a,
                                  int e, const Rational& t) {
  std::optional<Rational> best;
  std::vector<int> who;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!a[i]) continue;
    Rational v = fs[i].value_at(e, t) + *a[i];
    if (!best || v < *best) {
      best = v;
      who = {static_cast<int>(i)};
    } else if (v == *best) {
      who.push_back(static_cast<int>(i));
    }
  }
  return who;
}

inline bool is_dependence(const std::vector<PLFunction>& fs, const std::vector<std::optional<Rational>>& a) {
  int finite = 0;
  for (const auto& x : a) finite += x.has_value();
  if (finite < 2) return false;
  for (const auto& [e, t] : probe_points(fs, a))
    if (achievers(fs, a, e, t).size() < 2) return false;
  return true;
}

// Every function is the unique minimizer somewhere.
inline bool is_certificate(const std::vector<PLFunction>& fs, const std::vector<Rational>& c) {
  std::vector<std::optional<Rational>> a(c.begin(), c.end());
  std::vector<bool> unique(fs.size(), false);
  for (const auto& [e, t] : probe_points(fs, a)) {
    auto w = achievers(fs, a, e, t);
    if (w.size() == 1) unique[w[0]] = true;
  }
  return std::all_of(unique.begin(), unique.end(), [](bool b) { return b; });
}

// Search coefficients in (1/M)Z within [-R, R] for a dependence of three functions, with the
// first finite coefficient fixed at 0.
inline bool grid_dependent_3(const std::vector<PLFunction>& fs, long M, long R) {
  for (int mask = 3; mask < 8; ++mask) {
    if (__builtin_popcount(mask) < 2) continue;
    std::vector<int> idx;
    for (int i = 0; i < 3; ++i)
      if (mask >> i & 1) idx.push_back(i);
    std::vector<std::optional<Rational>> a(3);
    a[idx[0]] = Rational(0);
    std::function<bool(std::size_t)> rec = [&](std::size_t k) {
      if (k == idx.size()) return is_dependence(fs, a);
      for (long v = -R * M; v <= R * M; ++v) {
        a[idx[k]] = Rational(v, M);
        a[idx[k]]->canonicalize();
        if (rec(k + 1)) return true;
      }
      return false;
    };
    if (rec(1)) return true;
  }
  return false;
}

}  // namespace oracle
