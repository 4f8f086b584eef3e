#pragma once
// Named fixtures with their expected facts, shared by the CLI and the acceptance suite.

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "tropls/fixtures.hpp"
#include "tropls/io.hpp"

namespace tropls {

struct Fact {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct FixtureRun {
  std::string name;
  GraphPtr graph;
  Divisor divisor;
  std::optional<TropicalSubmodule> module;
  int rank = -1;  // rank of the series carried by the fixture, if any
  std::string verdict;
  std::vector<Fact> facts;
  std::string dot;
  json extra = json::object();

  bool all_pass() const {
    for (const auto& f : facts)
      if (!f.pass) return false;
    return true;
  }
};

using FixtureParams = std::map<std::string, std::string>;

inline std::vector<std::string> list_fixtures() {
  return {"lollipop", "barbell", "interval", "fg", "luo", "loop-of-loops", "fano", "u34"};
}

namespace detail {

inline Rational param(const FixtureParams& p, const std::string& key, const Rational& dflt) {
  auto it = p.find(key);
  if (it == p.end()) return dflt;
  try {
    return parse_rational(it->second);
  } catch (const input_error& e) {
    throw input_error("--" + key + ": " + e.what());
  }
}

inline std::string slopes_text(const std::vector<long>& s) {
  std::string o = "(";
  for (std::size_t i = 0; i < s.size(); ++i) o += (i ? "," : "") + std::to_string(s[i]);
  return o + ")";
}

inline void fact(FixtureRun& r, std::string name, bool pass, std::string detail = "") {
  r.facts.push_back({std::move(name), pass, std::move(detail)});
}

inline std::string graph_dot(const MetricGraph& g, const Divisor& d) {
  std::ostringstream os;
  os << "graph fixture {\n";
  for (int v = 0; v < g.num_vertices(); ++v) {
    long c = d.at(Point::at_vertex(v));
    os << "  \"" << dot_escape(g.vertex_name(v)) << "\"";
    if (c) os << " [label=\"" << dot_escape(g.vertex_name(v)) << " (" << c << ")\"]";
    os << ";\n";
  }
  for (const auto& e : g.edges())
    os << "  \"" << dot_escape(g.vertex_name(e.tail)) << "\" -- \"" << dot_escape(g.vertex_name(e.head)) << "\" [label=\""
       << dot_escape(e.id + " (" + to_string(e.length) + ")") << "\"];\n";
  os << "}\n";
  return os.str();
}

inline std::string morphism_dot(const TropicalSubmodule& m, const ValuatedMatroid& vm, const BalanceReport& b) {
  PLMap map = coordinate_map(tropical_modification(m));
  return modified_graph_dot(map, &b) + tree_dot(rank1_tree_target(vm));
}

inline bool dependent_at_zero(const std::vector<PLFunction>& fs) {
  return verify_combination(fs, std::vector<Rational>(fs.size(), 0)).kind == CombinationVerdict::Dependence;
}

// ---------------------------------------------------------------- builders

inline FixtureRun run_lollipop(const FixtureParams& p, bool check) {
  Rational mq = param(p, "m", 2);
  if (!is_integer(mq) || mq < 1) throw input_error("--m must be a positive integer");
  int m = static_cast<int>(to_long(mq));
  Lollipop L = lollipop(m);
  FixtureRun r{"lollipop", L.graph, L.divisor, L.complete, 1};
  AxiomVerdict sc = slope_count_check(L.complete, 1);
  r.verdict = sc.pass() ? "slope counts consistent with rank 1" : "not a TLS: " + sc.detail;
  if (!check) return r;
  auto left = slope_vector(L.complete, L.zeta).slopes, up = slope_vector(L.complete, L.eta).slopes;
  std::vector<long> want_left, want_up;
  for (long k = 0; k <= m; ++k) want_left.push_back(k);
  for (long k = 0; k < m; ++k) want_up.push_back(k);
  fact(r, "slope vector leftward at w", left == want_left, slopes_text(left));
  fact(r, "slope vector into the loop at w", up == want_up, slopes_text(up));
  fact(r, "slope counts rule out a rank-1 series", !sc.pass() && sc.detail.rfind("not a tropical linear series", 0) == 0,
       sc.detail);
  if (m == 2) {
    auto dep = [&](std::vector<int> idx) {
      std::vector<PLFunction> fs;
      for (int i : idx) fs.push_back(L.phi[i]);
      return decide_dependence(fs).status;
    };
    fact(r, "{phi0, phi1, phi3} dependent", dep({0, 1, 3}) == DependenceAnswer::Dependent);
    fact(r, "{phi0, phi2, phi3} dependent", dep({0, 2, 3}) == DependenceAnswer::Dependent);
    fact(r, "{phi0, phi1, phi2} independent", dep({0, 1, 2}) == DependenceAnswer::Independent);
  }
  return r;
}

inline FixtureRun run_barbell(const FixtureParams&, bool check, std::uint64_t seed) {
  Barbell B = barbell();
  FixtureRun r{"barbell", B.graph, B.canonical, B.sigma, 1};
  TLSReport rep = verify_tls(B.sigma, 1, {200, seed});
  r.verdict = rep.pass() ? "tropical linear series of rank 1" : "not a tropical linear series";
  r.extra["report"] = to_json(*B.graph, rep);
  ValuatedMatroid vm = rank1_valuated_circuits(B.sigma);
  BalanceReport bal = balancing_check(coordinate_map(tropical_modification(B.sigma)), vm);
  r.dot = morphism_dot(B.sigma, vm, bal);
  if (!check) return r;
  fact(r, "verify_tls passes at rank 1", rep.pass());
  auto bridge = slope_vector(B.sigma, B.zeta).slopes;
  fact(r, "bridge slope vector is (-1,1)", bridge == std::vector<long>{-1, 1}, slopes_text(bridge));
  TropicalSubmodule canon = rank1_canonical_generators(B.sigma);
  std::mt19937_64 rng(seed);
  int ok = 0;
  for (int k = 0; k < 20; ++k) {
    long den = 2 + static_cast<long>(rng() % 30);
    long num = 1 + static_cast<long>(rng() % den);
    Rational s = ratio(num, 2 * den);  // in (0, 1/2]
    PLFunction f = k % 3 == 0 ? B.left_type(s) : k % 3 == 1 ? B.right_type(s) : B.bridge_type(2 * s);
    if (membership(f, canon) && membership(f, B.sigma)) ++ok;
  }
  fact(r, "canonical generators contain 20 sampled members", ok == 20, std::to_string(ok) + "/20");
  fact(r, "canonical generators and the built-in set generate each other", mutually_generate(canon, B.sigma));
  int dim = divisor_space_dim(B.sigma, 1, seed);
  fact(r, "divisor space has dimension 1", dim == 1, std::to_string(dim));
  fact(r, "modification balances", bal.pass, bal.detail);
  return r;
}

inline FixtureRun run_interval(const FixtureParams& p, bool check, std::uint64_t seed) {
  GraphPtr g = unit_interval();
  Rational w0 = param(p, "w0", ratio(3, 4)), w1 = param(p, "w1", ratio(1, 4));
  Divisor d = point_divisor(g->vertex("x"), 2);
  IntervalSeries S = interval_rank1_builder(g, d, g->point_on_edge(0, w0), g->point_on_edge(0, w1));
  FixtureRun r{"interval", g, d, S.module, 1};
  TLSReport rep = verify_tls(S.module, 1, {200, seed});
  r.verdict = rep.pass() ? "tropical linear series of rank 1" : "not a tropical linear series";
  r.extra["report"] = to_json(*g, rep);
  if (S.z) r.extra["z"] = to_string(*S.z);
  TropicalSubmodule minimal = minimize_generators(S.module);
  ValuatedMatroid vm = rank1_valuated_circuits(S.module);
  BalanceReport bal = balancing_check(coordinate_map(tropical_modification(S.module)), vm);
  r.dot = morphism_dot(S.module, vm, bal);
  if (!check) return r;
  fact(r, "verify_tls passes at rank 1", rep.pass());
  std::size_t want = w0 > w1 ? 3 : 2;
  fact(r, "minimal generator count", minimal.generators.size() == want, std::to_string(minimal.generators.size()));
  if (w0 > w1) {
    fact(r, "z is the midpoint of w1 and w0", S.z && *S.z == (w0 + w1) / 2, S.z ? to_string(*S.z) : "absent");
    Verdict ax = valuated_axioms_check(vm);
    fact(r, "valuated circuits satisfy the axioms at rank 2", vm.rank == 2 && ax.pass, ax.message);
  }
  fact(r, "modification balances at every refinement point", bal.pass, bal.detail);
  fact(r, "every base tangent has local degree at least 1", bal.degrees_positive);
  if (w0 < w1) {
    bool seg2 = false;
    for (const auto& ld : bal.degrees)
      if (ld.tangent.ray < 0 && ld.degree == 2) seg2 = true;
    fact(r, "a segment of local degree 2", seg2);
  }
  return r;
}

inline FixtureRun run_fg(const FixtureParams&, bool check) {
  FGExample F = fg_example();
  std::vector<PLFunction> triple{F.phi(1, 0), F.phi(0, 1), F.phi(ratio(1, 2), ratio(1, 2))};
  TropicalSubmodule m(F.graph, F.divisor, triple);
  FixtureRun r{"fg", F.graph, F.divisor, m, 1};
  DependenceAnswer a = decide_dependence(triple);
  AxiomVerdict ax2 = check_axiom2(m, 1);
  r.verdict = ax2.pass() ? "axiom 2 holds on the truncation" : "not a TLS: " + ax2.detail;
  r.extra["dependence"] = to_json(*F.graph, a);
  if (!check) return r;
  bool cert = a.status == DependenceAnswer::Independent && a.witness &&
              a.witness->kind == CombinationVerdict::Certificate &&
              verify_combination(triple, a.certificate_coefficients).kind == CombinationVerdict::Certificate;
  fact(r, "{phi_10, phi_01, phi_1/2,1/2} independent with verified certificate", cert, status_name(a.status));
  bool same = ax2.state == AxiomVerdict::Fail && ax2.independent_set.size() == 3;
  for (const auto& f : ax2.independent_set)
    same = same && std::any_of(triple.begin(), triple.end(), [&](const PLFunction& t) { return t == f; });
  fact(r, "axiom 2 fails with that triple", same, ax2.detail);
  fact(r, "phi_1/2,1/2 is not a combination of phi_10 and phi_01", !membership(triple[2], {triple[0], triple[1]}));
  return r;
}

inline FixtureRun run_luo(const FixtureParams&, bool check) {
  LuoExample L = luo_example();
  FixtureRun r{"luo", L.graph, L.divisor, std::nullopt, -1};
  int rk = bn_rank(L.graph, L.divisor);
  auto ob = rank1_obstruction(L.graph, L.divisor);
  r.verdict = ob ? "R(D) contains no rank-1 tropical linear series" : "no obstruction found";
  if (ob) {
    json pts = json::array();
    for (const auto& q : ob->points) pts.push_back(to_json(*L.graph, q));
    r.extra["obstruction_points"] = pts;
    r.extra["dependence"] = to_json(*L.graph, ob->answer);
  }
  r.dot = graph_dot(*L.graph, L.divisor);
  if (!check) return r;
  fact(r, "rank of p+q+s is 1", rk == 1, std::to_string(rk));
  bool verified = ob && ob->answer.status == DependenceAnswer::Independent &&
                  verify_combination(ob->functions, ob->answer.certificate_coefficients).kind ==
                      CombinationVerdict::Certificate;
  fact(r, "obstruction triple is independent with a verified certificate", verified);
  std::set<long> sl;
  if (ob)
    for (const auto& f : ob->functions) sl.insert(f.slope(L.zeta));
  fact(r, "slopes on the s-q edge are {0, 1, -1}", sl == std::set<long>{-1, 0, 1},
       slopes_text(std::vector<long>(sl.begin(), sl.end())));
  return r;
}

inline FixtureRun run_loop_of_loops(const FixtureParams& p, bool check) {
  Rational l1 = param(p, "l1", 5), l2 = param(p, "l2", 4), l3 = param(p, "l3", 3);
  Rational x = param(p, "x", (l1 + l2 - l3) / 2);
  LoopOfLoops L = loop_of_loops(l1, l2, l3, x);
  FixtureRun r{"loop-of-loops", L.graph, L.divisor, std::nullopt, -1};
  Rational special = (l1 + l2 - l3) / 2;
  r.extra["special_x"] = to_string(special);
  std::vector<PLFunction> fs;
  for (const Point& u : L.u) {
    auto f = forced_function(L.graph, L.divisor, point_divisor(u));
    if (!f) break;
    fs.push_back(*f);
  }
  r.dot = graph_dot(*L.graph, L.divisor);
  if (fs.size() < 3) {
    r.verdict = "no forced triple: rank of D is " + std::to_string(bn_rank(L.graph, L.divisor));
    if (check) fact(r, "forced functions phi_1, phi_2, phi_3 exist", false, r.verdict);
    return r;
  }
  r.module = TropicalSubmodule(L.graph, L.divisor, fs);
  DependenceAnswer a = decide_dependence(fs);
  r.verdict = std::string("forced triple is ") + status_name(a.status);
  r.extra["dependence"] = to_json(*L.graph, a);
  if (!check) return r;
  bool want_dep = x == special;
  bool verified = a.witness && ((a.status == DependenceAnswer::Dependent &&
                                 verify_combination(fs, a.coefficients).kind == CombinationVerdict::Dependence) ||
                                (a.status == DependenceAnswer::Independent &&
                                 verify_combination(fs, a.certificate_coefficients).kind == CombinationVerdict::Certificate));
  fact(r, std::string("forced triple is ") + (want_dep ? "dependent" : "independent") + " at x = " + to_string(x),
       a.status == (want_dep ? DependenceAnswer::Dependent : DependenceAnswer::Independent), status_name(a.status));
  fact(r, "answer carries a verified witness", verified);
  return r;
}

inline FixtureRun run_matroid_series(const std::string& name, const Matroid& M, bool check, std::uint64_t seed,
                                     long expect_degree) {
  CartwrightSeries S = cartwright_series(M);
  FixtureRun r{name, S.graph, S.divisor, S.module, 2};
  TLSReport rep = verify_tls(S.module, 2, {200, seed});
  r.verdict = rep.pass() ? "tropical linear series of rank 2" : "not a tropical linear series";
  r.extra["report"] = to_json(*S.graph, rep);
  r.extra["matroid"] = to_json(M);
  if (name == "fano") r.extra["realizability"] = "not realizable over fields of characteristic other than 2";
  r.dot = graph_dot(*S.graph, S.divisor);
  if (!check) return r;
  Verdict mv = matroid_axioms_check(M);
  fact(r, "matroid circuit axioms", mv.pass, mv.message);
  fact(r, "degree of D_M", S.divisor.degree() == expect_degree, std::to_string(S.divisor.degree()));
  fact(r, "axiom 1 on 200 sampled degree-2 divisors", rep.axiom1.pass(), rep.axiom1.detail);
  fact(r, "axiom 2 on every generator quadruple", rep.axiom2.pass(), rep.axiom2.detail);
  fact(r, "axiom 3", rep.axiom3.pass(), rep.axiom3.detail);
  int dep = 0;
  for (ElementSet c : M.circuits) {
    std::vector<PLFunction> fs;
    for (int i = 0; i < M.size(); ++i)
      if (c >> i & 1) fs.push_back(S.module.generators[i]);
    if (dependent_at_zero(fs)) ++dep;
  }
  fact(r, "every circuit is dependent at zero coefficients", dep == static_cast<int>(M.circuits.size()),
       std::to_string(dep) + "/" + std::to_string(M.circuits.size()));
  ValuatedMatroid tv = trivially_valuated(M);
  int in = 0;
  for (int v = 0; v < S.graph->num_vertices(); ++v) {
    std::vector<TropValue> img;
    for (const auto& f : S.module.generators) img.push_back(f.evaluate(Point::at_vertex(v)));
    if (bergman_membership(img, tv)) ++in;
  }
  fact(r, "every vertex image lies in the Bergman fan", in == S.graph->num_vertices(),
       std::to_string(in) + "/" + std::to_string(S.graph->num_vertices()));
  return r;
}

}  // namespace detail

inline FixtureRun run_fixture(const std::string& name, const FixtureParams& p = {}, bool check = false,
                              std::uint64_t seed = 1) {
  FixtureRun r;
  if (name == "lollipop") r = detail::run_lollipop(p, check);
  else if (name == "barbell") r = detail::run_barbell(p, check, seed);
  else if (name == "interval") r = detail::run_interval(p, check, seed);
  else if (name == "fg") r = detail::run_fg(p, check);
  else if (name == "luo") r = detail::run_luo(p, check);
  else if (name == "loop-of-loops") r = detail::run_loop_of_loops(p, check);
  else if (name == "fano") r = detail::run_matroid_series(name, fano_matroid(), check, seed, 7);
  else if (name == "u34") r = detail::run_matroid_series(name, uniform_matroid(3, 4), check, seed, 4);
  else throw input_error("unknown fixture '" + name + "'");
  if (r.dot.empty()) r.dot = detail::graph_dot(*r.graph, r.divisor);
  return r;
}

inline json to_json(const FixtureRun& r) {
  json facts = json::array();
  for (const auto& f : r.facts) facts.push_back({{"name", f.name}, {"pass", f.pass}, {"detail", f.detail}});
  json j{{"kind", "fixture"},
         {"name", r.name},
         {"graph", to_json(*r.graph)},
         {"divisor", to_json(*r.graph, r.divisor)},
         {"verdict", r.verdict},
         {"facts", facts},
         {"extra", r.extra}};
  if (r.module) j["module"] = to_json(*r.module);
  return j;
}

}  // namespace tropls
