#pragma once
// Tropical linear series: axiom checks, slope data, restriction, dimension probes and the
// rank-1 constructions (edge functions, canonical generators, valuated circuits).

#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tropls/dependence.hpp"
#include "tropls/fixtures.hpp"
#include "tropls/matroid.hpp"
#include "tropls/rank.hpp"

namespace tropls {

struct AxiomVerdict {
  enum State { Pass, Fail, Unknown } state = Unknown;
  std::string detail;
  bool sampled = false;
  std::optional<Point> uncovered_point;
  std::optional<Divisor> uncovered_divisor;
  std::vector<PLFunction> independent_set;
  std::vector<Rational> certificate;
  std::optional<Tangent> bad_tangent;

  bool pass() const { return state == Pass; }
};

inline const char* state_name(AxiomVerdict::State s) {
  switch (s) {
    case AxiomVerdict::Pass: return "pass";
    case AxiomVerdict::Fail: return "fail";
    default: return "unknown";
  }
}

struct SlopeRow {
  Tangent tangent;
  std::vector<long> slopes;
};

// ---------------------------------------------------------------- slope data

namespace detail {

// Interior points where two generators cross on a refinement interval.
inline std::vector<Point> pair_crossings(const MetricGraph& g, const std::vector<PLFunction>& fs) {
  std::vector<Point> out;
  for (int e = 0; e < g.num_edges(); ++e) {
    auto ts = refinement_offsets(g, fs, e);
    std::set<Rational> found;
    for (std::size_t k = 0; k + 1 < ts.size(); ++k)
      for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i + 1; j < fs.size(); ++j) {
          Rational d0 = fs[i].value_at(e, ts[k]) - fs[j].value_at(e, ts[k]);
          Rational d1 = fs[i].value_at(e, ts[k + 1]) - fs[j].value_at(e, ts[k + 1]);
          if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) found.insert(ts[k] + (ts[k + 1] - ts[k]) * d0 / (d0 - d1));
        }
    for (const Rational& t : found) out.push_back(Point{-1, e, t});
  }
  return out;
}

inline std::vector<Point> subdivision_points(const TropicalSubmodule& m) {
  std::vector<Point> pts = refinement_points(*m.graph, m.generators, m.divisor);
  for (const Point& p : pair_crossings(*m.graph, m.generators)) pts.push_back(p);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace detail

// Model on which every generator, and every pairwise minimum, is linear on each edge.
inline Subdivision slope_subdivision(const TropicalSubmodule& m) {
  std::vector<Point> pts;
  for (const Point& p : detail::subdivision_points(m))
    if (!p.is_vertex()) pts.push_back(p);
  return subdivide(*m.graph, pts);
}

// Slope vectors at every tangent based at a subdivision point; these cover both
// orientations of every open edge of the subdivision.
inline std::vector<SlopeRow> slope_table(const TropicalSubmodule& m) {
  std::vector<SlopeRow> rows;
  for (const Point& p : detail::subdivision_points(m))
    for (const Tangent& z : m.graph->tangents(p)) {
      if (z.ray >= 0) continue;
      rows.push_back({z, slope_vector(m, z).slopes});
    }
  return rows;
}

inline std::string describe_tangent(const MetricGraph& g, const Tangent& z) {
  return g.describe(z.base) + (z.dir > 0 ? " toward head of " : " toward tail of ") + g.edge(z.edge).id;
}

inline AxiomVerdict slope_count_check(const TropicalSubmodule& m, int r) {
  AxiomVerdict v;
  for (const SlopeRow& row : slope_table(m)) {
    if (static_cast<int>(row.slopes.size()) != r + 1) {
      v.state = AxiomVerdict::Fail;
      v.bad_tangent = row.tangent;
      v.detail = "not a tropical linear series: " + std::to_string(row.slopes.size()) + " slopes at " +
                 describe_tangent(*m.graph, row.tangent) + ", expected " + std::to_string(r + 1);
      return v;
    }
  }
  v.state = AxiomVerdict::Pass;
  v.detail = "exactly " + std::to_string(r + 1) + " slopes at every tangent";
  return v;
}

// ---------------------------------------------------------------- sections through E

namespace detail {

// Minimal generator subsets S such that tying S at x gives coefficient >= need at x.
inline std::vector<unsigned> qualifying_sets(const TropicalSubmodule& m, const Point& x, long need, int max_size) {
  const auto& gens = m.generators;
  int n = static_cast<int>(gens.size());
  auto tangents = m.graph->tangents(x);
  std::vector<std::vector<long>> sl(n);
  for (int i = 0; i < n; ++i)
    for (const Tangent& z : tangents)
      if (z.ray < 0) sl[i].push_back(gens[i].slope(z));
  std::vector<unsigned> found;
  std::vector<unsigned> masks((std::size_t(1) << n) - 1);
  std::iota(masks.begin(), masks.end(), 1u);
  std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) { return std::popcount(a) < std::popcount(b); });
  for (unsigned s : masks) {
    if (std::popcount(s) > max_size) break;
    bool super = false;
    for (unsigned f : found) super = super || (f & s) == f;
    if (super) continue;
    long c = m.divisor.at(x);
    for (std::size_t k = 0; k < sl[0].size(); ++k) {
      long mn = 0;
      bool first = true;
      for (int i = 0; i < n; ++i)
        if (s >> i & 1) {
          mn = first ? sl[i][k] : std::min(mn, sl[i][k]);
          first = false;
        }
      c -= mn;
    }
    if (c >= need) found.push_back(s);
  }
  return found;
}

}  // namespace detail

// Coefficients a with D + div(min(phi_i + a_i)) >= E, or absent. Exact: the coefficient of a
// combination at x only depends on which generators achieve the minimum there, and
// "S achieves at x" is a system of difference constraints.
inline std::optional<std::vector<Rational>> section_through(const TropicalSubmodule& m, const Divisor& e) {
  const int n = static_cast<int>(m.generators.size());
  if (n > 20) throw input_error("too many generators for an exact section search");
  std::vector<Point> pts = e.support();
  std::vector<std::vector<unsigned>> choices;
  std::vector<std::vector<Rational>> vals;
  for (const Point& x : pts) {
    choices.push_back(detail::qualifying_sets(m, x, e.at(x), n));
    if (choices.back().empty()) return std::nullopt;
    std::vector<Rational> v;
    for (const auto& f : m.generators) v.push_back(f.evaluate(x));
    vals.push_back(v);
  }
  using W = std::optional<Rational>;
  std::optional<std::vector<Rational>> result;
  std::function<bool(std::size_t, std::vector<std::vector<W>>)> rec = [&](std::size_t k, std::vector<std::vector<W>> w) {
    // Floyd-Warshall; w[j][i] bounds a_i - a_j.
    for (int p = 0; p < n; ++p)
      for (int i = 0; i < n; ++i) {
        if (!w[i][p]) continue;
        for (int j = 0; j < n; ++j)
          if (w[p][j] && (!w[i][j] || *w[i][p] + *w[p][j] < *w[i][j])) w[i][j] = *w[i][p] + *w[p][j];
      }
    for (int i = 0; i < n; ++i)
      if (w[i][i] && *w[i][i] < 0) return false;
    if (k == pts.size()) {
      std::vector<Rational> a(n, 0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (w[j][i] && *w[j][i] < a[i]) a[i] = *w[j][i];
      result = a;
      return true;
    }
    for (unsigned s : choices[k]) {
      auto w2 = w;
      for (int i = 0; i < n; ++i) {
        if (!(s >> i & 1)) continue;
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          Rational b = vals[k][j] - vals[k][i];
          if (!w2[j][i] || b < *w2[j][i]) w2[j][i] = b;
        }
      }
      if (rec(k + 1, std::move(w2))) return true;
    }
    return false;
  };
  std::vector<std::vector<W>> w0(n, std::vector<W>(n));
  for (int i = 0; i < n; ++i) w0[i][i] = Rational(0);
  if (!rec(0, w0)) return std::nullopt;
  std::vector<std::pair<PLFunction, Rational>> terms;
  for (int i = 0; i < n; ++i) terms.emplace_back(m.generators[i], (*result)[i]);
  PLFunction psi = tropical_combine(terms);
  if (!(m.divisor + psi.divisor() - e).effective()) throw std::logic_error("section search produced an invalid function");
  return result;
}

inline Point random_point(const MetricGraph& g, std::mt19937_64& rng) {
  int e = static_cast<int>(rng() % g.num_edges());
  long q = 1 + static_cast<long>(rng() % 8);
  long k = static_cast<long>(rng() % (q + 1));
  return g.point_on_edge(e, g.edge(e).length * ratio(k, q));
}

inline Divisor random_effective(const MetricGraph& g, int degree, std::mt19937_64& rng) {
  Divisor d;
  if (degree > 0 && rng() % 4 == 0) return point_divisor(random_point(g, rng), degree);
  for (int k = 0; k < degree; ++k) d.add(random_point(g, rng), 1);
  return d;
}

// ---------------------------------------------------------------- axioms

inline AxiomVerdict check_axiom1(const TropicalSubmodule& m, int r, int samples = 200, std::uint64_t seed = 1) {
  AxiomVerdict v;
  if (r <= 0) {
    v.state = AxiomVerdict::Pass;
    v.detail = "vacuous for rank 0";
    return v;
  }
  if (r == 1) {
    CoveredLocus loc = covered_locus(m, 1);
    if (loc.covers_graph()) {
      v.state = AxiomVerdict::Pass;
      v.detail = "covered locus is the whole graph (exact)";
    } else {
      v.state = AxiomVerdict::Fail;
      v.uncovered_point = loc.uncovered_witness(*m.graph);
      v.uncovered_divisor = point_divisor(*v.uncovered_point);
      v.detail = "no element passes through " + m.graph->describe(*v.uncovered_point);
    }
    return v;
  }
  std::mt19937_64 rng(seed);
  v.sampled = true;
  for (int s = 0; s < samples; ++s) {
    Divisor e = random_effective(*m.graph, r, rng);
    if (!section_through(m, e)) {
      v.state = AxiomVerdict::Fail;
      v.uncovered_divisor = e;
      v.detail = "no element passes through " + describe(*m.graph, e);
      return v;
    }
  }
  v.state = AxiomVerdict::Pass;
  v.detail = std::to_string(samples) + " random effective divisors of degree " + std::to_string(r) + " (sampled)";
  return v;
}

inline std::vector<std::size_t> minimal_generator_indices(const std::vector<PLFunction>& gens) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    bool dup = false;
    for (std::size_t j : keep) dup = dup || compare_up_to_constant(gens[i], gens[j]).has_value();
    if (!dup) keep.push_back(i);
  }
  for (std::size_t k = keep.size(); k-- > 0;) {
    if (keep.size() == 1) break;
    std::vector<PLFunction> rest;
    for (std::size_t j = 0; j < keep.size(); ++j)
      if (j != k) rest.push_back(gens[keep[j]]);
    if (membership(gens[keep[k]], rest)) keep.erase(keep.begin() + static_cast<long>(k));
  }
  return keep;
}

namespace detail {

inline void for_each_subset(int n, int k, const std::function<bool(const std::vector<int>&)>& f) {
  std::vector<int> s(k);
  std::iota(s.begin(), s.end(), 0);
  if (k > n) return;
  while (true) {
    if (!f(s)) return;
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i) --i;
    if (i < 0) return;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

}  // namespace detail

// Every (r+2)-subset of the minimal generators must be dependent.
inline AxiomVerdict check_axiom2(const TropicalSubmodule& m, int r, bool with_certificates = true) {
  AxiomVerdict v;
  auto idx = minimal_generator_indices(m.generators);
  std::vector<PLFunction> gens;
  for (auto i : idx) gens.push_back(m.generators[i]);
  int n = static_cast<int>(gens.size());
  long checked = 0;
  bool undetermined = false;
  detail::for_each_subset(n, r + 2, [&](const std::vector<int>& s) {
    std::vector<PLFunction> fs;
    for (int i : s) fs.push_back(gens[i]);
    DependenceAnswer a = decide_dependence(fs, with_certificates);
    ++checked;
    if (a.status == DependenceAnswer::Independent) {
      v.state = AxiomVerdict::Fail;
      v.independent_set = fs;
      v.certificate = a.certificate_coefficients;
      std::string names;
      for (int i : s) names += (names.empty() ? "" : ",") + std::to_string(idx[i]);
      v.detail = "generators {" + names + "} are tropically independent" +
                 (a.certificate_coefficients.empty() ? "" : " (certificate verified)");
      return false;
    }
    if (a.status == DependenceAnswer::Undetermined) undetermined = true;
    return true;
  });
  if (v.state == AxiomVerdict::Fail) return v;
  if (undetermined) {
    v.state = AxiomVerdict::Unknown;
    v.detail = "some generator subset was undetermined";
    return v;
  }
  v.state = AxiomVerdict::Pass;
  v.detail = std::to_string(checked) + " subsets of size " + std::to_string(r + 2) + " of " + std::to_string(n) +
             " minimal generators are dependent";
  return v;
}

// Cheap necessary-and-sufficient check for rank 1 on finitely generated data.
inline bool is_rank1_series(const TropicalSubmodule& m) {
  if (!slope_count_check(m, 1).pass()) return false;
  if (!check_axiom1(m, 1).pass()) return false;
  return check_axiom2(m, 1, false).pass();
}

namespace detail {

// Generators and zero-offset pairwise minima with slope at most bound at z.
inline std::vector<PLFunction> subseries_pool(const TropicalSubmodule& m, const Tangent& z, long bound) {
  std::vector<PLFunction> pool;
  auto add = [&](const PLFunction& f) {
    if (f.slope(z) > bound) return;
    for (const auto& h : pool)
      if (compare_up_to_constant(f, h)) return;
    pool.push_back(f);
  };
  for (const auto& f : m.generators) add(f);
  for (std::size_t i = 0; i < m.generators.size(); ++i)
    for (std::size_t j = i + 1; j < m.generators.size(); ++j) add(tropical_min(m.generators[i], m.generators[j]));
  return pool;
}

}  // namespace detail

// Rank-1 submodule inside {phi : s_z(phi) <= bound}, found by greedy growth inside the pool:
// each start element is extended by every pool element that keeps all triples dependent.
inline std::optional<TropicalSubmodule> find_rank1_subseries(const TropicalSubmodule& m, const Tangent& z, long bound) {
  auto pool = detail::subseries_pool(m, z, bound);
  int p = static_cast<int>(pool.size());
  std::map<std::vector<int>, bool> dep;
  auto dependent = [&](int a, int b, int c) {
    std::vector<int> k{a, b, c};
    std::sort(k.begin(), k.end());
    auto it = dep.find(k);
    if (it != dep.end()) return it->second;
    bool d = decide_dependence({pool[k[0]], pool[k[1]], pool[k[2]]}, false).status == DependenceAnswer::Dependent;
    dep[k] = d;
    return d;
  };
  std::set<std::vector<int>> tried;
  for (int start = 0; start < p; ++start) {
    std::vector<int> s{start};
    for (int off = 1; off < p; ++off) {
      int h = (start + off) % p;
      bool ok = true;
      for (std::size_t i = 0; i < s.size() && ok; ++i)
        for (std::size_t j = i + 1; j < s.size() && ok; ++j) ok = dependent(s[i], s[j], h);
      if (ok) s.push_back(h);
    }
    std::sort(s.begin(), s.end());
    if (s.size() < 2 || !tried.insert(s).second) continue;
    std::vector<PLFunction> gens;
    for (int i : s) gens.push_back(pool[i]);
    TropicalSubmodule cand(m.graph, m.divisor, gens);
    if (is_rank1_series(cand)) return cand;
  }
  return std::nullopt;
}

// Rank-i subseries inside {phi : s_z(phi) <= s_z[i]} for every tested tangent and i < r.
inline AxiomVerdict check_axiom3(const TropicalSubmodule& m, int r, const std::vector<TropicalSubmodule>& witnesses = {}) {
  AxiomVerdict v;
  if (r <= 1) {
    v.state = AxiomVerdict::Pass;
    v.detail = r <= 0 ? "vacuous for rank 0" : "rank-0 subseries are principal: any function of minimal slope";
    return v;
  }
  if (r >= 3 && witnesses.empty()) throw input_error("automatic subseries search is unsupported for rank >= 3");
  std::map<std::pair<std::size_t, int>, bool> witness_ok;  // (witness, rank) -> verified
  auto witness_is = [&](std::size_t w, int i) {
    auto key = std::make_pair(w, i);
    auto it = witness_ok.find(key);
    if (it != witness_ok.end()) return it->second;
    bool ok;
    if (i == 0) ok = true;
    else if (i == 1) ok = is_rank1_series(witnesses[w]);
    else ok = check_axiom1(witnesses[w], i).pass() && check_axiom2(witnesses[w], i, false).pass() &&
              slope_count_check(witnesses[w], i).pass();
    witness_ok[key] = ok;
    return ok;
  };
  std::map<std::vector<std::size_t>, bool> auto_cache;  // filtered generator set -> found
  long tested = 0;
  for (const SlopeRow& row : slope_table(m)) {
    const Tangent& z = row.tangent;
    for (int i = 1; i < r && i < static_cast<int>(row.slopes.size()); ++i) {
      long bound = row.slopes[i];
      ++tested;
      bool found = false;
      for (std::size_t w = 0; w < witnesses.size() && !found; ++w) {
        bool inside = true;
        for (const auto& f : witnesses[w].generators) inside = inside && f.slope(z) <= bound;
        found = inside && witness_is(w, i);
      }
      if (!found && i == 1) {
        std::vector<std::size_t> key;
        for (std::size_t k = 0; k < m.generators.size(); ++k)
          if (m.generators[k].slope(z) <= bound) key.push_back(k);
        auto it = auto_cache.find(key);
        if (it == auto_cache.end()) it = auto_cache.emplace(key, find_rank1_subseries(m, z, bound).has_value()).first;
        found = it->second;
      }
      if (!found) {
        v.state = AxiomVerdict::Unknown;
        v.bad_tangent = z;
        v.detail = "no rank-" + std::to_string(i) + " subseries found at " + describe_tangent(*m.graph, z);
        return v;
      }
    }
  }
  v.state = AxiomVerdict::Pass;
  v.detail = "subseries found at " + std::to_string(tested) + " tangent/rank pairs";
  return v;
}

// ---------------------------------------------------------------- valuated circuits on generators

// Circuits among generator subsets of size 2..r+2: minimal dependent subsets whose dependence
// has every member achieving the minimum somewhere.
inline ValuatedMatroid generator_valuated_matroid(const TropicalSubmodule& m, int r) {
  ValuatedMatroid vm;
  int n = static_cast<int>(m.generators.size());
  for (int i = 0; i < n; ++i) vm.elements.push_back("g" + std::to_string(i));
  vm.rank = std::min(n, r + 1);
  std::vector<ElementSet> supports;
  for (int k = 2; k <= std::min(n, r + 2); ++k)
    detail::for_each_subset(n, k, [&](const std::vector<int>& s) {
      ElementSet mask = 0;
      for (int i : s) mask |= ElementSet(1) << i;
      for (ElementSet c : supports)
        if ((c & mask) == c) return true;
      std::vector<PLFunction> fs;
      for (int i : s) fs.push_back(m.generators[i]);
      DependenceAnswer a = decide_dependence(fs, false);
      if (a.status != DependenceAnswer::Dependent) return true;
      for (const auto& c : a.coefficients)
        if (!c) return true;
      std::vector<bool> seen(fs.size());
      for (const auto& cell : a.witness->cells)
        for (int j : cell.achievers) seen[j] = true;
      for (bool b : seen)
        if (!b) return true;
      std::vector<TropValue> row(n);
      for (std::size_t j = 0; j < s.size(); ++j) row[s[j]] = *a.coefficients[j];
      vm.add_circuit(row);
      supports.push_back(mask);
      return true;
    });
  return vm;
}

inline ValuatedMatroid rank1_valuated_circuits(const TropicalSubmodule& m) {
  auto idx = minimal_generator_indices(m.generators);
  std::vector<PLFunction> gens;
  for (auto i : idx) gens.push_back(m.generators[i]);
  TropicalSubmodule mm(m.graph, m.divisor, gens);
  ValuatedMatroid vm = generator_valuated_matroid(mm, 1);
  if (gens.size() >= 3) {
    Verdict ax = valuated_axioms_check(vm);
    if (!ax.pass) throw std::logic_error("valuated circuits fail the axioms: " + ax.message);
  }
  return vm;
}

// ---------------------------------------------------------------- full report

struct TLSReport {
  int rank = 0;
  AxiomVerdict axiom1, axiom2, axiom3, slope_count, property5;
  std::string property4 = "holds by finite generation";
  std::vector<SlopeRow> slope_table;

  bool pass() const { return axiom1.pass() && axiom2.pass() && axiom3.pass(); }
  bool fail() const {
    return axiom1.state == AxiomVerdict::Fail || axiom2.state == AxiomVerdict::Fail ||
           axiom3.state == AxiomVerdict::Fail || slope_count.state == AxiomVerdict::Fail;
  }
};

struct VerifyOptions {
  int samples = 200;
  std::uint64_t seed = 1;
  std::vector<TropicalSubmodule> witnesses;
  bool certificates = true;
  bool property5 = true;
};

inline TLSReport verify_tls(const TropicalSubmodule& m, int r, const VerifyOptions& opt = {}) {
  TLSReport rep;
  rep.rank = r;
  rep.slope_table = slope_table(m);
  rep.slope_count = slope_count_check(m, r);
  rep.axiom1 = check_axiom1(m, r, opt.samples, opt.seed);
  rep.axiom2 = check_axiom2(m, r, opt.certificates);
  if (r >= 3 && opt.witnesses.empty()) {
    rep.axiom3.state = AxiomVerdict::Unknown;
    rep.axiom3.detail = "automatic subseries search is unsupported for rank >= 3";
  } else if (rep.slope_count.state == AxiomVerdict::Fail && r >= 2) {
    rep.axiom3.state = AxiomVerdict::Unknown;
    rep.axiom3.detail = "skipped: slope counts are wrong";
  } else {
    rep.axiom3 = check_axiom3(m, r, opt.witnesses);
  }
  if (!opt.property5 || !rep.axiom2.pass()) {
    rep.property5.state = AxiomVerdict::Unknown;
    rep.property5.detail = "not checked";
  } else {
    auto idx = minimal_generator_indices(m.generators);
    std::vector<PLFunction> gens;
    for (auto i : idx) gens.push_back(m.generators[i]);
    ValuatedMatroid vm = generator_valuated_matroid(TropicalSubmodule(m.graph, m.divisor, gens), r);
    Verdict ax = static_cast<int>(gens.size()) > r + 1 ? valuated_axioms_check(vm) : Verdict{true, "no circuits"};
    rep.property5.state = ax.pass ? AxiomVerdict::Pass : AxiomVerdict::Fail;
    rep.property5.detail = ax.message + " (" + std::to_string(vm.circuits.size()) +
                           " circuits; checked on the generating set only)";
  }
  return rep;
}

// ---------------------------------------------------------------- rank-1 constructions

struct EdgePiece {
  int edge;
  Rational from, to;
  int dir = 1;  // orientation of the tangents in the piece
};

inline std::vector<EdgePiece> subdivision_pieces(const TropicalSubmodule& m) {
  std::vector<EdgePiece> out;
  Subdivision s = slope_subdivision(m);
  for (const auto& pc : s.provenance) out.push_back({pc.edge, pc.from, pc.to, 1});
  return out;
}

// A module element with constant slope s[i] along the whole piece.
inline PLFunction edge_extremal_function(const TropicalSubmodule& m, const EdgePiece& piece, int i) {
  const MetricGraph& g = *m.graph;
  Point mid = g.point_on_edge(piece.edge, (piece.from + piece.to) / 2);
  Tangent z{mid, piece.edge, piece.dir, -1};
  auto s = slope_vector(m, z).slopes;
  if (i < 0 || i >= static_cast<int>(s.size())) throw input_error("slope index out of range");
  long want = s[i];
  auto constant_on_piece = [&](const PLFunction& f) {
    for (const auto& b : f.on_edge(piece.edge))
      if (b.t > piece.from && b.t < piece.to) return false;
    return f.slope(z) == want;
  };
  for (const auto& f : m.generators)
    if (constant_on_piece(f)) return f;
  for (std::size_t a = 0; a < m.generators.size(); ++a)
    for (std::size_t b = a + 1; b < m.generators.size(); ++b) {
      PLFunction f = tropical_min(m.generators[a], m.generators[b]);
      if (constant_on_piece(f)) return f;
    }
  throw std::logic_error("no element with constant slope on the piece: not a tropical linear series");
}

inline TropicalSubmodule rank1_canonical_generators(const TropicalSubmodule& m) {
  if (!check_axiom1(m, 1).pass() || !check_axiom2(m, 1, false).pass())
    throw input_error("precondition failed: module does not satisfy the rank-1 axioms");
  std::vector<PLFunction> gens;
  for (const EdgePiece& pc : subdivision_pieces(m))
    for (int i = 0; i <= 1; ++i) {
      PLFunction f = edge_extremal_function(m, pc, i);
      bool dup = false;
      for (const auto& h : gens) dup = dup || compare_up_to_constant(f, h).has_value();
      if (!dup) gens.push_back(f);
    }
  return minimize_generators(TropicalSubmodule(m.graph, m.divisor, gens));
}

inline bool mutually_generate(const TropicalSubmodule& a, const TropicalSubmodule& b) {
  for (const auto& f : a.generators)
    if (!membership(f, b)) return false;
  for (const auto& f : b.generators)
    if (!membership(f, a)) return false;
  return true;
}

// Points outside which each point lies in exactly one divisor of |Sigma| (rank 1).
inline std::vector<Point> finite_vertex_set(const TropicalSubmodule& m) {
  std::vector<Point> w = detail::subdivision_points(m);
  const MetricGraph& g = *m.graph;
  for (const EdgePiece& pc : subdivision_pieces(m)) {
    PLFunction f0 = edge_extremal_function(m, pc, 0), f1 = edge_extremal_function(m, pc, 1);
    // v in W_E iff f0 + f1(v) and f1 + f0(v) agree on an open set: the difference f1 - f0
    // equals its value at v on some open refinement interval.
    PLFunction d = f1 - f0;
    std::set<Rational> levels;
    for (int e = 0; e < g.num_edges(); ++e) {
      const auto& bp = d.on_edge(e);
      for (std::size_t k = 0; k + 1 < bp.size(); ++k)
        if (bp[k].val == bp[k + 1].val) levels.insert(bp[k].val);
    }
    const auto& bp = d.on_edge(pc.edge);
    for (const Rational& L : levels)
      for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        const auto& p = bp[k];
        const auto& q = bp[k + 1];
        if (p.val == q.val) continue;
        if ((p.val - L) * (q.val - L) > 0) continue;
        Rational t = p.t + (q.t - p.t) * (L - p.val) / (q.val - p.val);
        if (t > pc.from && t < pc.to) w.push_back(g.point_on_edge(pc.edge, t));
      }
  }
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  return w;
}

// ---------------------------------------------------------------- interval classification

struct IntervalSeries {
  GraphPtr graph;
  Divisor divisor;
  Rational w0, w1;
  std::optional<Rational> z;  // present in the three-generator case
  TropicalSubmodule module;
};

inline GraphPtr unit_interval() { return make_graph(MetricGraph::build({"x", "y"}, {{"I", "x", "y", 1}})); }

// Rank-1 series on an interval with D of degree 2, given w0 = div(phi_0) + D - x and
// w1 = div(phi_1) + D - y (x the tail, y the head of the interval's edge).
inline IntervalSeries interval_rank1_builder(const GraphPtr& g, const Divisor& d, const Point& w0, const Point& w1) {
  if (g->num_edges() != 1 || g->num_vertices() != 2 || g->edge(0).is_loop())
    throw input_error("interval builder needs a single non-loop edge");
  if (d.degree() != 2) throw input_error("interval builder needs a divisor of degree 2");
  const Edge& ed = g->edge(0);
  Rational len = ed.length;
  auto offset = [&](const Point& p) -> Rational {
    g->check_point(p);
    if (p.is_vertex()) return p.vertex == ed.tail ? Rational(0) : len;
    return p.t;
  };
  IntervalSeries S;
  S.graph = g;
  S.divisor = d;
  S.w0 = offset(w0);
  S.w1 = offset(w1);
  // Shift from R(2x) to R(D).
  Point x = Point::at_vertex(ed.tail);
  Reduction red = dhar_reduce(g, d - point_divisor(x, 2), x);
  if (!red.reduced.is_zero()) throw std::logic_error("degree-2 divisors on an interval must be equivalent");
  PLFunction shift = red.witness;
  auto fn = [&](std::initializer_list<std::pair<Rational, Rational>> k) {
    return pointwise_sum(PLFunction(g, {detail::knots(k)}), shift);
  };
  const Rational &a = S.w0, &b = S.w1;
  PLFunction phi0 = fn({{0, 0}, {a, a}, {len, a}});
  PLFunction phi1 = fn({{0, 0}, {b, 2 * b}, {len, 2 * b + (len - b)}});
  std::vector<PLFunction> gens{phi0, phi1};
  if (a > b) {
    S.z = (a + b) / 2;
    gens.push_back(fn({{0, 0}, {*S.z, 2 * *S.z}, {len, 2 * *S.z}}));
  }
  S.module = TropicalSubmodule(g, d, gens);
  return S;
}

// ---------------------------------------------------------------- restriction

struct SubgraphSegment {
  int edge;
  Rational from, to;
};

struct RestrictedSeries {
  TropicalSubmodule module;
  std::vector<std::pair<Point, long>> boundary;  // D'(w) - D(w) at boundary points of the subgraph
};

inline RestrictedSeries restrict_tls(const TropicalSubmodule& m, const std::vector<SubgraphSegment>& segs) {
  const MetricGraph& g = *m.graph;
  std::vector<Point> cuts;
  for (const auto& s : segs) {
    if (s.edge < 0 || s.edge >= g.num_edges() || s.from < 0 || s.to > g.edge(s.edge).length || !(s.from < s.to))
      throw input_error("invalid subgraph segment");
    if (s.from > 0) cuts.push_back(g.point_on_edge(s.edge, s.from));
    if (s.to < g.edge(s.edge).length) cuts.push_back(g.point_on_edge(s.edge, s.to));
  }
  Subdivision sub = subdivide(g, cuts);
  GraphPtr ref = make_graph(sub.refined);
  std::vector<int> kept;
  for (int re = 0; re < ref->num_edges(); ++re) {
    const auto& pc = sub.provenance[re];
    for (const auto& s : segs)
      if (s.edge == pc.edge && s.from <= pc.from && pc.to <= s.to) {
        kept.push_back(re);
        break;
      }
  }
  if (kept.empty()) throw input_error("empty subgraph");
  std::vector<int> vmap(ref->num_vertices(), -1);
  std::vector<std::string> names;
  for (int re : kept)
    for (int v : {ref->edge(re).tail, ref->edge(re).head})
      if (vmap[v] < 0) {
        vmap[v] = static_cast<int>(names.size());
        names.push_back(ref->vertex_name(v));
      }
  std::vector<std::tuple<std::string, std::string, std::string, Rational>> es;
  for (int re : kept) {
    const Edge& e = ref->edge(re);
    es.emplace_back(e.id, ref->vertex_name(e.tail), ref->vertex_name(e.head), e.length);
  }
  GraphPtr sp;
  try {
    sp = make_graph(MetricGraph::build(names, es));
  } catch (const input_error&) {
    throw input_error("subgraph is not connected");
  }
  std::vector<PLFunction> pulled;
  for (const auto& f : m.generators) pulled.push_back(f.pulled_back(sub, ref));
  std::set<int> kept_set(kept.begin(), kept.end());
  RestrictedSeries out;
  Divisor dnew;
  for (const auto& [p, c] : m.divisor.coeffs) {
    Point q = sub.map_point(g, p);
    if (q.is_vertex()) {
      if (vmap[q.vertex] >= 0) dnew.add(Point::at_vertex(vmap[q.vertex]), c);
    } else if (kept_set.count(q.edge)) {
      int ne = static_cast<int>(std::find(kept.begin(), kept.end(), q.edge) - kept.begin());
      dnew.add(Point{-1, ne, q.t}, c);
    }
  }
  for (int v = 0; v < ref->num_vertices(); ++v) {
    if (vmap[v] < 0) continue;
    long sum = 0;
    bool boundary = false;
    for (const Tangent& z : ref->tangents(Point::at_vertex(v))) {
      if (z.ray >= 0 || kept_set.count(z.edge)) continue;
      boundary = true;
      long mn = pulled[0].slope(z);
      for (const auto& f : pulled) mn = std::min(mn, f.slope(z));
      sum += mn;
    }
    if (!boundary) continue;
    dnew.add(Point::at_vertex(vmap[v]), -sum);
    out.boundary.emplace_back(Point::at_vertex(vmap[v]), -sum);
  }
  std::vector<PLFunction> gens;
  for (const auto& f : pulled) {
    std::vector<std::vector<Breakpoint>> pieces;
    for (int re : kept) pieces.push_back(f.on_edge(re));
    gens.emplace_back(sp, pieces);
  }
  out.module = TropicalSubmodule(sp, dnew, gens);
  return out;
}

// ---------------------------------------------------------------- dimension

// Local dimension of a -> D + div(min(phi_i + a_i)) at generic a: each moving chip sits at a
// crossing of two achievers and moves with their coefficient difference.
inline int divisor_space_dim(const TropicalSubmodule& m, int r, std::uint64_t seed = 7, int tries = 8) {
  auto idx = minimal_generator_indices(m.generators);
  std::vector<PLFunction> gens;
  for (auto i : idx) gens.push_back(m.generators[i]);
  int n = static_cast<int>(gens.size());
  if (n == 1) return 0;
  std::mt19937_64 rng(seed);
  Rational osc = detail::max_oscillation(gens);
  if (osc == 0) osc = 1;
  int best = 0;
  int k = std::min(n, r + 1);
  detail::for_each_subset(n, k, [&](const std::vector<int>& s) {
    std::vector<PLFunction> fs;
    for (int i : s) fs.push_back(gens[i]);
    std::vector<Point> fixed = refinement_points(*m.graph, fs);
    std::set<Point> fixed_set(fixed.begin(), fixed.end());
    for (int t = 0; t < tries; ++t) {
      std::vector<std::optional<Rational>> a;
      for (int i = 0; i < k; ++i) a.push_back(osc * ratio(static_cast<long>(rng() % 1000), 997));
      std::vector<int> parent(k);
      std::iota(parent.begin(), parent.end(), 0);
      std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
      if (k == 1) break;
      for (const auto& c : detail::envelope_cells(fs, a)) {
        if (c.open || c.achievers.size() < 2 || fixed_set.count(c.sample)) continue;
        for (std::size_t u = 1; u < c.achievers.size(); ++u) parent[find(c.achievers[u])] = find(c.achievers[0]);
      }
      std::set<int> roots;
      for (int i = 0; i < k; ++i) roots.insert(find(i));
      best = std::max(best, k - static_cast<int>(roots.size()));
    }
    return true;
  });
  return best;
}

// ---------------------------------------------------------------- rank-1 obstruction

struct Obstruction {
  std::vector<Point> points;
  std::vector<PLFunction> functions;
  DependenceAnswer answer;
};

// An independent triple of forced functions proves R(D) contains no rank-1 series.
inline std::optional<Obstruction> rank1_obstruction(const GraphPtr& g, const Divisor& d) {
  if (bn_rank(g, d) < 1) throw input_error("rank1_obstruction needs a divisor of rank at least 1");
  RankSolver rs(g, d);
  std::vector<Point> pts;
  std::vector<PLFunction> fns;
  for (const Point& x : rs.rank_determining_set()) {
    if (d.at(x) != 0) continue;
    auto f = forced_function(g, d, point_divisor(x));
    if (!f) continue;
    bool dup = false;
    for (const auto& h : fns) dup = dup || compare_up_to_constant(*f, h).has_value();
    if (dup) continue;
    pts.push_back(x);
    fns.push_back(*f);
  }
  std::optional<Obstruction> out;
  detail::for_each_subset(static_cast<int>(fns.size()), 3, [&](const std::vector<int>& s) {
    std::vector<PLFunction> fs{fns[s[0]], fns[s[1]], fns[s[2]]};
    DependenceAnswer a = decide_dependence(fs);
    if (a.status == DependenceAnswer::Independent && a.witness && a.witness->kind == CombinationVerdict::Certificate) {
      out = Obstruction{{pts[s[0]], pts[s[1]], pts[s[2]]}, fs, a};
      return false;
    }
    return true;
  });
  return out;
}

}  // namespace tropls
