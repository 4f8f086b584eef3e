// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "generators.hpp"
#include "tropls/catalog.hpp"

using namespace tropls;

namespace {

constexpr double kRiemannRochBudgetSeconds = 60.0;
constexpr int kRiemannRochGraphs = 25;
constexpr int kDivisorsPerGraph = 4;
constexpr int kAxiom1Samples = 200;
constexpr int kDependenceInstances = 100;

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  std::string failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures += " [failed: " + what + "]";
    }
  }
};

std::vector<PLFunction> forced(const GraphPtr& g, const Divisor& d, const std::vector<Point>& pts) {
  std::vector<PLFunction> out;
  for (const Point& p : pts) {
    auto f = forced_function(g, d, point_divisor(p));
    if (!f) return {};
    out.push_back(*f);
  }
  return out;
}

bool witness_verified(const std::vector<PLFunction>& fs, const DependenceAnswer& a) {
  if (a.status == DependenceAnswer::Dependent)
    return verify_combination(fs, a.coefficients).kind == CombinationVerdict::Dependence;
  if (a.status == DependenceAnswer::Independent)
    return a.witness && verify_combination(fs, a.certificate_coefficients).kind == CombinationVerdict::Certificate;
  return false;
}

IntervalSeries interval(const Rational& w0, const Rational& w1) {
  GraphPtr g = unit_interval();
  return interval_rank1_builder(g, point_divisor(g->vertex("x"), 2), g->point_on_edge(0, w0), g->point_on_edge(0, w1));
}

void c1(Outcome& o) {
  gen::Rng rng(gen::seed(1001));
  auto t0 = std::chrono::steady_clock::now();
  int bad = 0, total = 0;
  for (int k = 0; k < kRiemannRochGraphs; ++k) {
    GraphPtr g = gen::random_graph(rng, 4, 6, 4, 8);
    int gg = g->genus();
    for (int j = 0; j < kDivisorsPerGraph; ++j) {
      Divisor d = gen::random_divisor(rng, *g, rng.uniform(-3, 2 * gg + 3));
      bad += riemann_roch_residual(g, d) != 0;
      ++total;
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.note << total << " divisors, " << bad << " nonzero residuals, " << secs << " s";
  o.require(bad == 0, "residual");
  o.require(secs < kRiemannRochBudgetSeconds, "runtime budget");
}

void c2(Outcome& o) {
  for (int m : {2, 3}) {
    Lollipop L = lollipop(m);
    std::vector<long> left, up;
    for (long k = 0; k <= m; ++k) left.push_back(k);
    for (long k = 0; k < m; ++k) up.push_back(k);
    o.require(slope_vector(L.complete, L.zeta).slopes == left, "leftward slopes m=" + std::to_string(m));
    o.require(slope_vector(L.complete, L.eta).slopes == up, "upward slopes m=" + std::to_string(m));
    AxiomVerdict sc = slope_count_check(L.complete, 1);
    o.require(!sc.pass() && sc.detail.find("not a tropical linear series") != std::string::npos, "slope count verdict");
  }
  Lollipop L = lollipop(2);
  auto dep = [&](std::vector<int> idx) {
    std::vector<PLFunction> fs;
    for (int i : idx) fs.push_back(L.phi[i]);
    return decide_dependence(fs).status;
  };
  o.require(dep({0, 1, 3}) == DependenceAnswer::Dependent, "{phi0,phi1,phi3} dependent");
  o.require(dep({0, 2, 3}) == DependenceAnswer::Dependent, "{phi0,phi2,phi3} dependent");
  o.require(dep({0, 1, 2}) == DependenceAnswer::Independent, "{phi0,phi1,phi2} independent");
  o.note << "slope vectors and dependence pattern";
}

void c3(Outcome& o) {
  Barbell B = barbell();
  o.require(verify_tls(B.sigma, 1, {kAxiom1Samples, gen::seed(3)}).pass(), "verify_tls");
  o.require(slope_vector(B.sigma, B.zeta).slopes == std::vector<long>{-1, 1}, "bridge slopes");
  TropicalSubmodule c = rank1_canonical_generators(B.sigma);
  int members = 0;
  for (int k = 1; k <= 10; ++k) {
    members += membership(B.left_type(ratio(k, 20)), c).has_value();
    members += membership(B.right_type(ratio(k, 20)), c).has_value();
  }
  o.require(members == 20, "membership of sampled loop functions");
  int dim = divisor_space_dim(B.sigma, 1);
  o.require(dim == 1, "dimension");
  o.note << members << "/20 members, dim " << dim;
}

void c4(Outcome& o) {
  IntervalSeries hard = interval(ratio(3, 4), ratio(1, 4));
  IntervalSeries easy = interval(ratio(1, 4), ratio(3, 4));
  IntervalSeries equal = interval(ratio(1, 2), ratio(1, 2));
  o.require(hard.z && *hard.z == ratio(1, 2), "z = 1/2");
  std::size_t nh = minimize_generators(hard.module).generators.size();
  std::size_t ne = minimize_generators(easy.module).generators.size();
  std::size_t nq = minimize_generators(equal.module).generators.size();
  o.require(nh == 3, "3 generators");
  o.require(ne == 2 && nq == 2, "2 generators");
  o.require(verify_tls(hard.module, 1).pass() && verify_tls(easy.module, 1).pass() && verify_tls(equal.module, 1).pass(),
            "verify at r = 1");
  o.note << "generators " << nh << "/" << ne << "/" << nq;
}

void c5(Outcome& o) {
  FGExample F = fg_example();
  std::vector<PLFunction> fs{F.phi(1, 0), F.phi(0, 1), F.phi(ratio(1, 2), ratio(1, 2))};
  DependenceAnswer a = decide_dependence(fs);
  o.require(a.status == DependenceAnswer::Independent && witness_verified(fs, a), "independent with certificate");
  AxiomVerdict ax = check_axiom2(TropicalSubmodule(F.graph, F.divisor, fs), 1);
  bool same = ax.state == AxiomVerdict::Fail && ax.independent_set.size() == 3;
  for (const auto& f : ax.independent_set) same = same && std::find(fs.begin(), fs.end(), f) != fs.end();
  o.require(same, "axiom 2 fails with the triple");
  o.note << status_name(a.status);
}

void c6(Outcome& o) {
  LuoExample L = luo_example();
  int rk = bn_rank(L.graph, L.divisor);
  o.require(rk == 1, "rank 1");
  auto ob = rank1_obstruction(L.graph, L.divisor);
  o.require(ob && witness_verified(ob->functions, ob->answer), "verified obstruction");
  std::set<long> sl;
  if (ob)
    for (const auto& f : ob->functions) sl.insert(f.slope(L.zeta));
  o.require(sl == std::set<long>{-1, 0, 1}, "slopes {0, 1, -1}");
  o.note << "rank " << rk << ", slopes";
  for (long s : sl) o.note << " " << s;
}

void c7(Outcome& o) {
  for (auto [x, want] : std::vector<std::pair<Rational, DependenceAnswer::Status>>{
           {3, DependenceAnswer::Dependent},
           {1, DependenceAnswer::Independent},
           {2, DependenceAnswer::Independent},
           {ratio(7, 2), DependenceAnswer::Independent}}) {
    LoopOfLoops L = loop_of_loops(5, 4, 3, x);
    auto fs = forced(L.graph, L.divisor, L.u);
    o.note << (x == 3 ? "" : ", ") << "x=" << x << ":";
    if (fs.size() != 3) {
      o.note << " no forced triple (rank " << bn_rank(L.graph, L.divisor) << ")";
      o.require(false, "forced triple at x = " + to_string(x));
      continue;
    }
    DependenceAnswer a = decide_dependence(fs);
    o.note << " " << status_name(a.status);
    o.require(a.status == want && witness_verified(fs, a), std::string(status_name(want)) + " at x = " + to_string(x));
  }
}

void c8(Outcome& o) {
  CartwrightSeries S = cartwright_series(fano_matroid());
  o.require(S.divisor.degree() == 7, "deg D_M = 7");
  AxiomVerdict a2 = check_axiom2(S.module, 2, false);
  int quads = 0;
  detail::for_each_subset(static_cast<int>(S.module.generators.size()), 4, [&](const std::vector<int>&) {
    ++quads;
    return true;
  });
  o.require(a2.pass() && quads == 35, "axiom 2 on 35 quadruples");
  o.require(check_axiom1(S.module, 2, kAxiom1Samples, gen::seed(8)).pass(), "axiom 1 sampled");
  int c3 = 0, c4 = 0;
  for (ElementSet c : S.matroid.circuits) {
    std::vector<PLFunction> fs;
    for (int i = 0; i < S.matroid.size(); ++i)
      if (c >> i & 1) fs.push_back(S.module.generators[i]);
    if (verify_combination(fs, std::vector<Rational>(fs.size(), 0)).kind != CombinationVerdict::Dependence) continue;
    (fs.size() == 3 ? c3 : c4) += 1;
  }
  o.require(c3 == 7 && c4 == 7, "7 + 7 circuit dependences");
  ValuatedMatroid V = trivially_valuated(S.matroid);
  int in = 0;
  for (int v = 0; v < S.graph->num_vertices(); ++v) {
    std::vector<TropValue> x;
    for (const auto& f : S.module.generators) x.push_back(f.evaluate(Point::at_vertex(v)));
    in += bergman_membership(x, V);
  }
  o.require(in == 14, "Bergman membership at 14 vertices");
  o.note << "quadruples " << quads << ", circuits " << c3 << "+" << c4 << ", vertex images " << in << "/14";
}

void c9(Outcome& o) {
  Barbell B = barbell();
  RestrictedSeries r = restrict_tls(B.sigma, {{0, 0, 1}});
  long coeff = r.boundary.empty() ? 0 : r.module.divisor.at(r.boundary[0].first);
  o.require(verify_tls(r.module, 1).pass(), "left loop verifies at r = 1");
  o.require(coeff == 3, "boundary coefficient 3");
  IntervalSeries S = interval(ratio(3, 4), ratio(1, 4));
  o.require(verify_tls(restrict_tls(S.module, {{0, 0, ratio(1, 2)}}).module, 1).pass(), "interval left half");
  o.note << "boundary coefficient " << coeff << " (D(v) = " << B.canonical.at(B.graph->vertex("v"))
         << ", minimal outward slope -1)";
}

void c10(Outcome& o) {
  ValuatedMatroid vm = rank1_valuated_circuits(interval(ratio(3, 4), ratio(1, 4)).module);
  Verdict v = valuated_axioms_check(vm);
  o.require(vm.rank == 2 && v.pass, "valuated axioms at rank 2");
  o.note << vm.circuits.size() << " circuits; " << v.message;
}

void c11(Outcome& o) {
  bool seg2 = false;
  for (const auto& S : {interval(ratio(3, 4), ratio(1, 4)), interval(ratio(1, 4), ratio(3, 4))}) {
    BalanceReport b = balancing_check(coordinate_map(tropical_modification(S.module)), rank1_valuated_circuits(S.module));
    o.require(b.pass, b.detail);
    o.require(b.degrees_positive, "local degrees >= 1");
    for (const auto& ld : b.degrees) {
      if (ld.tangent.ray >= 0) continue;
      auto s = slope_vector(S.module, ld.tangent).slopes;
      o.require(s.size() == 2 && ld.degree == s[1] - s[0], "degree equals slope gap");
      if (!S.z && ld.degree == 2) seg2 = true;
    }
    o.note << b.detail << "; ";
  }
  o.require(seg2, "easy case has a degree-2 segment");
}

void c12(Outcome& o) {
  gen::Rng rng(gen::seed(1012));
  int agree = 0, undetermined = 0;
  for (int k = 0; k < kDependenceInstances; ++k) {
    GraphPtr g = gen::random_lattice_graph(rng, 2, 3, 4, 3);
    std::vector<PLFunction> fs;
    for (int i = 0; i < 3; ++i) fs.push_back(gen::random_function(rng, g, 2, 1));
    if (rng.coin()) fs[2] = tropical_combine({{fs[0], ratio(rng.uniform(-2, 2), 2)}, {fs[1], 0}});
    DependenceAnswer a = decide_dependence(fs, false), b = exhaustive_dependence_3(fs);
    agree += a.status == b.status;
  }
  std::vector<std::vector<PLFunction>> corpus;
  Lollipop L = lollipop(2);
  for (auto idx : std::vector<std::vector<int>>{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}})
    corpus.push_back({L.phi[idx[0]], L.phi[idx[1]], L.phi[idx[2]]});
  FGExample F = fg_example();
  corpus.push_back({F.phi(1, 0), F.phi(0, 1), F.phi(ratio(1, 2), ratio(1, 2))});
  for (Rational x : {Rational(2), Rational(3), ratio(7, 2)}) {
    LoopOfLoops P = loop_of_loops(5, 4, 3, x);
    corpus.push_back(forced(P.graph, P.divisor, P.u));
  }
  LuoExample Lu = luo_example();
  corpus.push_back(forced(Lu.graph, Lu.divisor, {Lu.graph->vertex("x"), Lu.graph->vertex("y"), Lu.graph->vertex("z")}));
  Barbell B = barbell();
  corpus.push_back(B.sigma.generators);
  corpus.push_back(interval(ratio(3, 4), ratio(1, 4)).module.generators);
  CartwrightSeries S = cartwright_series(fano_matroid());
  corpus.push_back(S.module.generators);
  for (const auto& fs : corpus) undetermined += decide_dependence(fs, false).status == DependenceAnswer::Undetermined;
  o.require(agree == kDependenceInstances, "agreement");
  o.require(undetermined == 0, "no Undetermined on the corpus");
  o.note << agree << "/" << kDependenceInstances << " agree, " << undetermined << " Undetermined on " << corpus.size()
         << " corpus sets";
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"Riemann-Roch property suite", c1},
      {"Lollipop slope vectors and non-matroid dependence", c2},
      {"Barbell rank-1 series", c3},
      {"Interval classification", c4},
      {"FG independence and axiom 2", c5},
      {"Luo graph obstruction", c6},
      {"Loop of loops dependence in x", c7},
      {"Fano matroid series", c8},
      {"Restriction to subgraphs", c9},
      {"Valuated-matroid pipeline", c10},
      {"Harmonic morphisms and balancing", c11},
      {"Dependence engine cross-validation", c12},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.failures += std::string(" [exception: ") + e.what() + "]";
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.note.str() << o.failures << "\n"
              << std::flush;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
