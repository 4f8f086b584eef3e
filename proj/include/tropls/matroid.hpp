#pragma once
// Matroids given by circuits, valuated matroids, tropical linear spaces, and the rank-2
// series on the Levi graph of a simple rank-3 matroid.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "tropls/module.hpp"

namespace tropls {

using ElementSet = std::uint64_t;

inline int popcount(ElementSet s) { return std::popcount(s); }

struct Verdict {
  bool pass = true;
  std::string message;
};

struct Matroid {
  std::vector<std::string> elements;
  std::vector<ElementSet> circuits;
  std::optional<int> declared_rank;

  int size() const { return static_cast<int>(elements.size()); }
  ElementSet ground() const { return size() == 64 ? ~ElementSet(0) : ((ElementSet(1) << size()) - 1); }

  int index(const std::string& e) const {
    for (int i = 0; i < size(); ++i)
      if (elements[i] == e) return i;
    throw input_error("unknown matroid element '" + e + "'");
  }

  bool independent(ElementSet s) const {
    for (ElementSet c : circuits)
      if ((c & s) == c) return false;
    return true;
  }

  // Largest independent subset of s, by exhaustive search.
  int rank_of(ElementSet s) const {
    int best = 0;
    for (ElementSet a = s;; a = (a - 1) & s) {
      if (popcount(a) > best && independent(a)) best = popcount(a);
      if (a == 0) break;
    }
    return best;
  }
  int rank() const { return rank_of(ground()); }

  std::string describe(ElementSet s) const {
    std::string out = "{";
    for (int i = 0; i < size(); ++i)
      if (s >> i & 1) out += (out.size() > 1 ? "," : "") + elements[i];
    return out + "}";
  }
};

inline Matroid matroid_from_circuits(std::vector<std::string> elements, const std::vector<std::vector<std::string>>& circuits,
                                     std::optional<int> rank = std::nullopt) {
  if (elements.size() > 20) throw input_error("at most 20 matroid elements are supported");
  Matroid m{std::move(elements), {}, rank};
  for (const auto& c : circuits) {
    ElementSet s = 0;
    for (const auto& e : c) s |= ElementSet(1) << m.index(e);
    m.circuits.push_back(s);
  }
  return m;
}

// Simple rank-3 matroid from its lines (maximal collinear sets of size >= 3).
inline Matroid matroid_from_lines(std::vector<std::string> elements, const std::vector<std::vector<std::string>>& lines) {
  if (elements.size() > 20) throw input_error("at most 20 matroid elements are supported");
  Matroid m{std::move(elements), {}, 3};
  std::vector<ElementSet> ls;
  for (const auto& l : lines) {
    ElementSet s = 0;
    for (const auto& e : l) s |= ElementSet(1) << m.index(e);
    if (popcount(s) < 3) throw input_error("a line needs at least three elements");
    ls.push_back(s);
  }
  auto collinear = [&](ElementSet s) {
    for (ElementSet l : ls)
      if ((l & s) == s) return true;
    return false;
  };
  ElementSet g = m.ground();
  for (ElementSet s = g;; s = (s - 1) & g) {
    if (popcount(s) == 3 && collinear(s)) m.circuits.push_back(s);
    if (popcount(s) == 4) {
      bool free = true;
      for (int i = 0; i < m.size() && free; ++i)
        if (s >> i & 1) free = !collinear(s & ~(ElementSet(1) << i));
      if (free) m.circuits.push_back(s);
    }
    if (s == 0) break;
  }
  std::sort(m.circuits.begin(), m.circuits.end());
  return m;
}

inline Matroid uniform_matroid(int k, int n) {
  std::vector<std::string> el;
  for (int i = 1; i <= n; ++i) el.push_back(std::to_string(i));
  Matroid m{el, {}, k};
  ElementSet g = m.ground();
  for (ElementSet s = g;; s = (s - 1) & g) {
    if (popcount(s) == k + 1) m.circuits.push_back(s);
    if (s == 0) break;
  }
  std::sort(m.circuits.begin(), m.circuits.end());
  return m;
}

inline Matroid fano_matroid() {
  return matroid_from_lines({"1", "2", "3", "4", "5", "6", "7"},
                            {{"1", "2", "3"}, {"1", "4", "5"}, {"1", "6", "7"}, {"2", "4", "6"},
                             {"2", "5", "7"}, {"3", "4", "7"}, {"3", "5", "6"}});
}

inline Verdict matroid_axioms_check(const Matroid& m) {
  if (m.circuits.empty()) return {false, "no circuits"};
  for (ElementSet c : m.circuits)
    if (c == 0) return {false, "axiom (1): empty circuit"};
  for (ElementSet a : m.circuits)
    for (ElementSet b : m.circuits)
      if (a != b && (a & b) == a) return {false, "axiom (1): circuit " + m.describe(a) + " is inside " + m.describe(b)};
  for (ElementSet a : m.circuits)
    for (ElementSet b : m.circuits) {
      if (a == b) continue;
      for (int i = 0; i < m.size(); ++i) {
        if (!((a & b) >> i & 1)) continue;
        for (int j = 0; j < m.size(); ++j) {
          if (!((a & ~b) >> j & 1)) continue;
          ElementSet u = (a | b) & ~(ElementSet(1) << i);
          bool found = false;
          for (ElementSet c : m.circuits) found = found || ((c & u) == c && (c >> j & 1));
          if (!found)
            return {false, "axiom (2): elimination fails for " + m.describe(a) + ", " + m.describe(b) + " at " + m.elements[i]};
        }
      }
    }
  int r = m.rank();
  if (m.declared_rank && *m.declared_rank != r)
    return {false, "axiom (3): declared rank " + std::to_string(*m.declared_rank) + " but rank is " + std::to_string(r)};
  return {true, "rank " + std::to_string(r)};
}

// Rank-2 flats of a simple rank-3 matroid: closures of element pairs under 3-circuits.
inline std::vector<ElementSet> rank2_flats(const Matroid& m) {
  for (ElementSet c : m.circuits)
    if (popcount(c) <= 2) throw input_error("matroid is not simple");
  if (m.rank() != 3) throw input_error("matroid does not have rank 3");
  std::vector<ElementSet> flats;
  for (int a = 0; a < m.size(); ++a)
    for (int b = a + 1; b < m.size(); ++b) {
      ElementSet f = (ElementSet(1) << a) | (ElementSet(1) << b);
      for (bool grew = true; grew;) {
        grew = false;
        for (ElementSet c : m.circuits)
          if (popcount(c) == 3 && popcount(c & f) >= 2 && (c & f) != c) {
            f |= c;
            grew = true;
          }
      }
      if (std::find(flats.begin(), flats.end(), f) == flats.end()) flats.push_back(f);
    }
  return flats;
}

inline std::string flat_name(const Matroid& m, ElementSet f) {
  std::string s = "f";
  for (int i = 0; i < m.size(); ++i)
    if (f >> i & 1) s += (s.size() > 1 ? "_" : "") + m.elements[i];
  return s;
}

inline MetricGraph levi_graph(const Matroid& m) {
  auto flats = rank2_flats(m);
  std::vector<std::string> names = m.elements;
  std::vector<std::tuple<std::string, std::string, std::string, Rational>> es;
  for (ElementSet f : flats) {
    std::string fn = flat_name(m, f);
    names.push_back(fn);
    for (int i = 0; i < m.size(); ++i)
      if (f >> i & 1) es.emplace_back(m.elements[i] + "-" + fn, m.elements[i], fn, Rational(1));
  }
  return MetricGraph::build(names, es);
}

struct CartwrightSeries {
  Matroid matroid;
  std::vector<ElementSet> flats;
  GraphPtr graph;
  Divisor divisor;
  TropicalSubmodule module;  // generators phi_e in element order

  // min of phi_e over e in the flat: 1 at the flat vertex, 0 at every other vertex.
  PLFunction phi_flat(ElementSet f) const {
    std::vector<std::pair<PLFunction, Rational>> t;
    for (int i = 0; i < matroid.size(); ++i)
      if (f >> i & 1) t.emplace_back(module.generators[i], 0);
    return tropical_combine(t);
  }
};

inline CartwrightSeries cartwright_series(const Matroid& m) {
  CartwrightSeries S;
  S.matroid = m;
  S.flats = rank2_flats(m);
  S.graph = make_graph(levi_graph(m));
  std::vector<PLFunction> gens;
  for (int e = 0; e < m.size(); ++e) {
    S.divisor.add(S.graph->vertex(m.elements[e]), 1);
    std::vector<Rational> vals(S.graph->num_vertices(), 0);
    vals[S.graph->vertex_index(m.elements[e])] = 2;
    for (ElementSet f : S.flats)
      if (f >> e & 1) vals[S.graph->vertex_index(flat_name(m, f))] = 1;
    gens.push_back(PLFunction::from_vertex_values(S.graph, vals));
  }
  S.module = TropicalSubmodule(S.graph, S.divisor, gens);
  return S;
}

// ---------------------------------------------------------------- valuated matroids

using TropValue = std::optional<Rational>;  // absent = infinity

struct ValuatedMatroid {
  std::vector<std::string> elements;
  std::vector<std::vector<TropValue>> circuits;  // representatives, min value 0
  int rank = 0;

  int size() const { return static_cast<int>(elements.size()); }

  ElementSet support(const std::vector<TropValue>& v) const {
    ElementSet s = 0;
    for (int i = 0; i < size(); ++i)
      if (v[i]) s |= ElementSet(1) << i;
    return s;
  }

  static std::vector<TropValue> normalized(std::vector<TropValue> v) {
    std::optional<Rational> m;
    for (const auto& x : v)
      if (x && (!m || *x < *m)) m = *x;
    if (m)
      for (auto& x : v)
        if (x) *x -= *m;
    return v;
  }

  void add_circuit(std::vector<TropValue> v) {
    v = normalized(std::move(v));
    if (std::find(circuits.begin(), circuits.end(), v) == circuits.end()) circuits.push_back(std::move(v));
  }
};

inline ValuatedMatroid trivially_valuated(const Matroid& m) {
  ValuatedMatroid v{m.elements, {}, m.rank()};
  for (ElementSet c : m.circuits) {
    std::vector<TropValue> row(m.size());
    for (int i = 0; i < m.size(); ++i)
      if (c >> i & 1) row[i] = Rational(0);
    v.circuits.push_back(row);
  }
  return v;
}

inline std::string describe_circuit(const ValuatedMatroid& m, const std::vector<TropValue>& v) {
  std::string s = "(";
  for (int i = 0; i < m.size(); ++i) s += (i ? "," : "") + (v[i] ? to_string(*v[i]) : std::string("inf"));
  return s + ")";
}

inline Verdict valuated_axioms_check(const ValuatedMatroid& m) {
  const int n = m.size();
  for (const auto& v : m.circuits) {
    if (static_cast<int>(v.size()) != n) return {false, "circuit has the wrong length"};
    if (m.support(v) == 0) return {false, "axiom (1): the all-infinity vector is a circuit"};
  }
  for (const auto& a : m.circuits)
    for (const auto& b : m.circuits) {
      ElementSet sa = m.support(a), sb = m.support(b);
      if (sa != sb && (sa & sb) == sa)
        return {false, "axiom (3): support of " + describe_circuit(m, a) + " is inside that of " + describe_circuit(m, b)};
    }
  ElementSet g = n == 64 ? ~ElementSet(0) : ((ElementSet(1) << n) - 1);
  int best = 0;
  for (ElementSet s = g;; s = (s - 1) & g) {
    bool ok = true;
    for (const auto& v : m.circuits) ok = ok && ((m.support(v) & s) != m.support(v));
    if (ok) best = std::max(best, popcount(s));
    if (s == 0) break;
  }
  if (best != m.rank)
    return {false, "axiom (4): rank is " + std::to_string(best) + ", declared " + std::to_string(m.rank)};
  for (const auto& v1 : m.circuits)
    for (const auto& v2raw : m.circuits) {
      if (&v1 == &v2raw) continue;
      for (int e = 0; e < n; ++e) {
        if (!v1[e] || !v2raw[e]) continue;
        Rational shift = *v1[e] - *v2raw[e];
        std::vector<TropValue> v2 = v2raw;
        for (auto& x : v2)
          if (x) *x += shift;
        for (int f = 0; f < n; ++f) {
          if (!v1[f] || (v2[f] && !(*v1[f] < *v2[f]))) continue;
          bool found = false;
          for (const auto& w : m.circuits) {
            if (w[e] || !w[f]) continue;
            Rational c = *v1[f] - *w[f];
            bool ge = true;
            for (int k = 0; k < n && ge; ++k) {
              TropValue lo = !v1[k] ? v2[k] : !v2[k] ? v1[k] : TropValue(std::min(*v1[k], *v2[k]));
              if (!w[k]) continue;
              if (!lo) ge = false;
              else ge = *w[k] + c >= *lo;
            }
            if (ge) {
              found = true;
              break;
            }
          }
          if (!found)
            return {false, "axiom (5): elimination of " + m.elements[e] + " fails for " + describe_circuit(m, v1) + ", " +
                               describe_circuit(m, v2raw) + " at " + m.elements[f]};
        }
      }
    }
  return {true, "valuated matroid of rank " + std::to_string(m.rank)};
}

// x lies in B(V) iff every circuit's minimum of V(i) + x_i is attained at least twice.
inline bool bergman_membership(const std::vector<TropValue>& x, const ValuatedMatroid& m) {
  if (static_cast<int>(x.size()) != m.size()) throw input_error("point has the wrong number of coordinates");
  for (const auto& v : m.circuits) {
    std::optional<Rational> best;
    int count = 0;
    for (int i = 0; i < m.size(); ++i) {
      if (!v[i] || !x[i]) continue;
      Rational s = *v[i] + *x[i];
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

}  // namespace tropls
