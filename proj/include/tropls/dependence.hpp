#pragma once
// Tropical dependence: exact verification of combinations, a raising-loop decision
// procedure, certificate search and an exhaustive fallback for three functions.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tropls/module.hpp"

namespace tropls {

// A point or an open edge interval on which the set of achievers of the minimum is constant.
struct EnvelopeCell {
  Point sample;
  bool open = false;
  int edge = -1;
  Rational from, to;
  std::vector<int> achievers;
};

struct CombinationVerdict {
  enum Kind { Dependence, Certificate, Neither } kind = Neither;
  std::vector<EnvelopeCell> cells;
  // Certificate: for each index a point where it alone achieves the minimum.
  std::vector<Point> unique_points;
  // Neither: a point with a unique achiever, and an index that is never the unique achiever.
  std::optional<Point> violating_point;
  int violating_index = -1;
};

inline const char* kind_name(CombinationVerdict::Kind k) {
  switch (k) {
    case CombinationVerdict::Dependence: return "Dependence";
    case CombinationVerdict::Certificate: return "Certificate";
    default: return "Neither";
  }
}

namespace detail {

// Cells of the lower envelope of f_i + a_i over the indices with a finite coefficient.
inline std::vector<EnvelopeCell> envelope_cells(const std::vector<PLFunction>& fs,
                                                const std::vector<std::optional<Rational>>& a) {
  const MetricGraph& g = fs.at(0).graph();
  std::vector<int> idx;
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (a[i]) idx.push_back(static_cast<int>(i));
  std::vector<PLFunction> act;
  for (int i : idx) act.push_back(fs[i]);
  auto achievers_at = [&](int e, const Rational& t) {
    std::vector<int> ach;
    Rational best;
    for (int i : idx) {
      Rational v = fs[i].value_at(e, t) + *a[i];
      if (ach.empty() || v < best) {
        best = v;
        ach = {i};
      } else if (v == best) {
        ach.push_back(i);
      }
    }
    return ach;
  };
  std::vector<EnvelopeCell> cells;
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (int e = 0; e < g.num_edges(); ++e) {
      const Edge& ed = g.edge(e);
      if (ed.tail != v && ed.head != v) continue;
      EnvelopeCell c;
      c.sample = Point::at_vertex(v);
      c.achievers = achievers_at(e, ed.tail == v ? Rational(0) : ed.length);
      cells.push_back(c);
      break;
    }
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    auto base = refinement_offsets(g, act, e);
    std::set<Rational> ts(base.begin(), base.end());
    for (std::size_t k = 0; k + 1 < base.size(); ++k) {
      Rational t0 = base[k], t1 = base[k + 1];
      for (std::size_t p = 0; p < idx.size(); ++p)
        for (std::size_t q = p + 1; q < idx.size(); ++q) {
          const PLFunction& fp = fs[idx[p]];
          const PLFunction& fq = fs[idx[q]];
          Rational d0 = fp.value_at(e, t0) + *a[idx[p]] - fq.value_at(e, t0) - *a[idx[q]];
          Rational d1 = fp.value_at(e, t1) + *a[idx[p]] - fq.value_at(e, t1) - *a[idx[q]];
          if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) ts.insert(t0 + (t1 - t0) * d0 / (d0 - d1));
        }
    }
    std::vector<Rational> all(ts.begin(), ts.end());
    for (std::size_t k = 0; k < all.size(); ++k) {
      if (k > 0 && k + 1 < all.size()) {
        EnvelopeCell c;
        c.sample = Point{-1, e, all[k]};
        c.achievers = achievers_at(e, all[k]);
        cells.push_back(c);
      }
      if (k + 1 < all.size()) {
        EnvelopeCell c;
        c.open = true;
        c.edge = e;
        c.from = all[k];
        c.to = all[k + 1];
        c.sample = g.point_on_edge(e, (all[k] + all[k + 1]) / 2);
        c.achievers = achievers_at(e, (all[k] + all[k + 1]) / 2);
        cells.push_back(c);
      }
    }
  }
  return cells;
}

}  // namespace detail

// Coefficients given as optional values; an absent coefficient drops the term.
inline CombinationVerdict verify_combination(const std::vector<PLFunction>& fs,
                                             const std::vector<std::optional<Rational>>& a) {
  if (fs.size() != a.size()) throw input_error("coefficient count does not match function count");
  if (fs.size() < 2) throw input_error("need at least two functions");
  for (const auto& f : fs) detail::require_same_graph(fs[0], f);
  CombinationVerdict v;
  v.cells = detail::envelope_cells(fs, a);
  std::vector<std::optional<Point>> uniq(fs.size());
  bool all_double = true;
  for (const auto& c : v.cells) {
    if (c.achievers.size() == 1) {
      all_double = false;
      if (!v.violating_point) v.violating_point = c.sample;
      if (!uniq[c.achievers[0]]) uniq[c.achievers[0]] = c.sample;
    }
  }
  int active = 0;
  for (const auto& x : a) active += x.has_value();
  if (all_double && active >= 2) {
    v.kind = CombinationVerdict::Dependence;
    v.violating_point.reset();
    return v;
  }
  bool cert = true;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!uniq[i]) {
      cert = false;
      if (v.violating_index < 0) v.violating_index = static_cast<int>(i);
    }
  }
  if (cert) {
    v.kind = CombinationVerdict::Certificate;
    for (auto& p : uniq) v.unique_points.push_back(*p);
    v.violating_point.reset();
    v.violating_index = -1;
    return v;
  }
  v.kind = CombinationVerdict::Neither;
  return v;
}

inline CombinationVerdict verify_combination(const std::vector<PLFunction>& fs, const std::vector<Rational>& a) {
  return verify_combination(fs, std::vector<std::optional<Rational>>(a.begin(), a.end()));
}

struct DependenceAnswer {
  enum Status { Dependent, Independent, Undetermined } status = Undetermined;
  std::vector<std::optional<Rational>> coefficients;  // Dependent: absent entries are +infinity
  std::optional<CombinationVerdict> witness;          // Dependence or Certificate, verified
  std::vector<Rational> certificate_coefficients;
  bool by_exhaustion = false;
  long iterations = 0;
  std::vector<std::string> log;
};

inline const char* status_name(DependenceAnswer::Status s) {
  switch (s) {
    case DependenceAnswer::Dependent: return "Dependent";
    case DependenceAnswer::Independent: return "Independent";
    default: return "Undetermined";
  }
}

namespace detail {

inline long piece_count(const std::vector<PLFunction>& fs) {
  long n = 0;
  for (const auto& f : fs)
    for (const auto& bp : f.pieces()) n += static_cast<long>(bp.size()) - 1;
  return n;
}

inline Rational max_oscillation(const std::vector<PLFunction>& fs) {
  Rational m = 0;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      PLFunction d = fs[i] - fs[j];
      m = std::max(m, Rational(d.max_value() - d.min_value()));
    }
  return m;
}

// Solves b_i - b_j < c for the listed (i, j, c) constraints; absent if infeasible.
inline std::optional<std::vector<Rational>> solve_strict_differences(int n,
                                                                     const std::vector<std::tuple<int, int, Rational>>& cons) {
  // Lexicographic weights (c, k) stand for c - k*delta with delta > 0 infinitesimal.
  struct W {
    Rational c;
    long k;
  };
  auto less = [](const W& x, const W& y) { return x.c < y.c || (x.c == y.c && x.k > y.k); };
  std::vector<std::vector<std::optional<W>>> d(n, std::vector<std::optional<W>>(n));
  for (int i = 0; i < n; ++i) d[i][i] = W{0, 0};
  for (const auto& [i, j, c] : cons) {
    // b_i <= b_j + c - delta: edge j -> i
    W w{c, 1};
    if (!d[j][i] || less(w, *d[j][i])) d[j][i] = w;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (!d[i][k] || !d[k][j]) continue;
        W w{d[i][k]->c + d[k][j]->c, d[i][k]->k + d[k][j]->k};
        if (!d[i][j] || less(w, *d[i][j])) d[i][j] = w;
      }
  for (int i = 0; i < n; ++i)
    if (less(*d[i][i], W{0, 0})) return std::nullopt;
  // Potentials from a virtual source joined to every node with weight 0.
  std::vector<W> p(n, W{0, 0});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (d[i][j] && less(*d[i][j], p[j])) p[j] = *d[i][j];
  Rational delta = 1;
  for (int attempt = 0; attempt < 200; ++attempt, delta /= 2) {
    std::vector<Rational> b(n);
    for (int i = 0; i < n; ++i) b[i] = p[i].c - delta * p[i].k;
    bool ok = true;
    for (const auto& [i, j, c] : cons) ok = ok && (b[i] - b[j] < c);
    if (ok) return b;
  }
  return std::nullopt;
}

}  // namespace detail

// Searches coefficients under which every function is the unique minimum somewhere.
// Candidate locations are refinement points and equally spaced interior points.
inline std::optional<std::vector<Rational>> find_certificate(const std::vector<PLFunction>& fs, long node_budget = 200000) {
  const MetricGraph& g = fs.at(0).graph();
  int n = static_cast<int>(fs.size());
  for (int parts : {n + 1, 2 * n + 2}) {
    std::vector<Point> cand = refinement_points(g, fs);
    for (int e = 0; e < g.num_edges(); ++e) {
      auto ts = refinement_offsets(g, fs, e);
      for (std::size_t k = 0; k + 1 < ts.size(); ++k)
        for (int p = 1; p < parts; ++p) cand.push_back(Point{-1, e, ts[k] + (ts[k + 1] - ts[k]) * p / parts});
    }
    std::size_t m = cand.size();
    std::vector<std::vector<Rational>> val(n, std::vector<Rational>(m));
    for (int i = 0; i < n; ++i)
      for (std::size_t c = 0; c < m; ++c) val[i][c] = fs[i].evaluate(cand[c]);
    std::vector<std::size_t> pick(n);
    long nodes = 0;
    std::optional<std::vector<Rational>> found;
    std::function<bool(int)> rec = [&](int i) -> bool {
      if (++nodes > node_budget) return false;
      if (i == n) {
        std::vector<std::tuple<int, int, Rational>> cons;
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y)
            if (x != y) cons.emplace_back(x, y, val[y][pick[x]] - val[x][pick[x]]);
        auto b = detail::solve_strict_differences(n, cons);
        if (!b) return false;
        if (verify_combination(fs, *b).kind != CombinationVerdict::Certificate) return false;
        found = b;
        return true;
      }
      for (std::size_t c = 0; c < m; ++c) {
        bool ok = true;
        for (int j = 0; j < i && ok; ++j) {
          // b_i - b_j < d_ji(x_i) and b_j - b_i < -d_ji(x_j) need d_ji(x_i) > d_ji(x_j).
          Rational di = val[j][c] - val[i][c];
          Rational dj = val[j][pick[j]] - val[i][pick[j]];
          ok = di > dj;
        }
        if (!ok) continue;
        pick[i] = c;
        if (i >= 2) {
          std::vector<std::tuple<int, int, Rational>> cons;
          for (int x = 0; x <= i; ++x)
            for (int y = 0; y <= i; ++y)
              if (x != y) cons.emplace_back(x, y, val[y][pick[x]] - val[x][pick[x]]);
          if (!detail::solve_strict_differences(i + 1, cons)) continue;
        }
        if (rec(i + 1)) return true;
        if (nodes > node_budget) return false;
      }
      return false;
    };
    if (rec(0)) return found;
  }
  return std::nullopt;
}

inline void attach_certificate(const std::vector<PLFunction>& fs, DependenceAnswer& ans) {
  if (auto b = find_certificate(fs)) {
    ans.certificate_coefficients = *b;
    ans.witness = verify_combination(fs, *b);
    ans.log.push_back("certificate found");
  } else {
    ans.log.push_back("no certificate found on the candidate grid");
  }
}

inline DependenceAnswer decide_dependence(const std::vector<PLFunction>& input, bool with_certificate = true) {
  if (input.size() < 2) throw input_error("need at least two functions");
  for (const auto& f : input) detail::require_same_graph(input[0], f);
  const std::size_t n = input.size();
  DependenceAnswer ans;
  Point x0 = Point::at_vertex(0);
  std::vector<PLFunction> fs;
  std::vector<Rational> shift;
  for (const auto& f : input) {
    shift.push_back(f.evaluate(x0));
    fs.push_back(f - shift.back());
  }
  Rational bound = 1 + Rational(static_cast<long>(n)) * detail::max_oscillation(fs);
  long cap = 64 * static_cast<long>(n) * detail::piece_count(fs);
  std::vector<Rational> a(n, 0);
  std::vector<bool> active(n, true);
  auto finish_dependent = [&]() {
    std::vector<std::optional<Rational>> coeffs(n);
    for (std::size_t i = 0; i < n; ++i)
      if (active[i]) coeffs[i] = a[i] - shift[i];
    CombinationVerdict v = verify_combination(input, coeffs);
    if (v.kind != CombinationVerdict::Dependence) throw std::logic_error("raising loop produced an unverified dependence");
    ans.status = DependenceAnswer::Dependent;
    ans.coefficients = coeffs;
    ans.witness = v;
  };
  for (long it = 0;; ++it) {
    ans.iterations = it;
    int count = 0;
    for (bool b : active) count += b;
    if (count <= 1) {
      ans.status = DependenceAnswer::Independent;
      ans.by_exhaustion = true;
      ans.log.push_back("all but " + std::to_string(count) + " functions exceeded the bound " + to_string(bound));
      if (with_certificate) attach_certificate(input, ans);
      return ans;
    }
    if (it >= cap) {
      ans.status = DependenceAnswer::Undetermined;
      ans.log.push_back("iteration cap " + std::to_string(cap) + " reached");
      return ans;
    }
    int best = -1;
    Rational best_target, best_raise;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      std::vector<std::pair<PLFunction, Rational>> others;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i && active[j]) others.emplace_back(fs[j], a[j]);
      Rational target = (tropical_combine(others) - fs[i]).max_value();
      Rational raise = target - a[i];
      if (raise > 0 && (best < 0 || raise > best_raise)) {
        best = static_cast<int>(i);
        best_raise = raise;
        best_target = target;
      }
    }
    if (best < 0) {
      finish_dependent();
      ans.log.push_back("fixed point after " + std::to_string(it) + " raises");
      return ans;
    }
    a[best] = best_target;
    if (a[best] > bound) {
      active[best] = false;
      ans.log.push_back("deactivated " + std::to_string(best));
    }
  }
}

// Fallback for exactly three functions: enumerate offsets fixed by pairwise ties at
// refinement points and verify each candidate exactly.
inline DependenceAnswer exhaustive_dependence_3(const std::vector<PLFunction>& fs) {
  if (fs.size() != 3) throw input_error("exhaustive search needs exactly three functions");
  for (const auto& f : fs) detail::require_same_graph(fs[0], f);
  DependenceAnswer ans;
  ans.log.push_back("exhaustive critical-grid search");
  // Two-element supports: constant differences.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (auto c = compare_up_to_constant(fs[i], fs[j])) {
        std::vector<std::optional<Rational>> co(3);
        co[i] = Rational(0);
        co[j] = -*c;
        ans.status = DependenceAnswer::Dependent;
        ans.coefficients = co;
        ans.witness = verify_combination(fs, co);
        return ans;
      }
  std::vector<Point> P = refinement_points(fs[0].graph(), fs);
  std::vector<std::array<Rational, 3>> val;
  for (const Point& x : P) val.push_back({fs[0].evaluate(x), fs[1].evaluate(x), fs[2].evaluate(x)});
  std::set<std::pair<Rational, Rational>> tried;
  auto try_candidate = [&](const Rational& a1, const Rational& a2) {
    if (!tried.insert({a1, a2}).second) return false;
    for (const auto& v : val) {
      Rational g0 = v[0], g1 = v[1] + a1, g2 = v[2] + a2;
      Rational m = std::min(g0, std::min(g1, g2));
      if ((g0 == m) + (g1 == m) + (g2 == m) < 2) return false;
    }
    std::vector<Rational> co{0, a1, a2};
    CombinationVerdict v = verify_combination(fs, co);
    if (v.kind != CombinationVerdict::Dependence) return false;
    ans.status = DependenceAnswer::Dependent;
    ans.coefficients = {co[0], co[1], co[2]};
    ans.witness = v;
    return true;
  };
  // a1 from a 0-1 tie, a2 from a 0-2 or 1-2 tie; or a2 from a 0-2 tie and a1 from a 1-2 tie.
  for (const auto& u : val) {
    Rational t01 = u[0] - u[1];
    Rational t02 = u[0] - u[2];
    for (const auto& w : val) {
      if (try_candidate(t01, w[0] - w[2])) return ans;
      if (try_candidate(t01, t01 + w[1] - w[2])) return ans;
      if (try_candidate(t02 + w[2] - w[1], t02)) return ans;
    }
  }
  ans.status = DependenceAnswer::Independent;
  ans.by_exhaustion = true;
  ans.log.push_back("no dependence among " + std::to_string(tried.size()) + " grid candidates");
  attach_certificate(fs, ans);
  return ans;
}

}  // namespace tropls
