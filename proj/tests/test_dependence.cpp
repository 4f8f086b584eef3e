#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "tropls/fixtures.hpp"
#include "tropls/tls.hpp"

using namespace tropls;

namespace {

std::vector<PLFunction> forced(const GraphPtr& g, const Divisor& d, const std::vector<Point>& pts) {
  std::vector<PLFunction> out;
  for (const Point& p : pts) {
    auto f = forced_function(g, d, point_divisor(p));
    if (!f) return {};
    out.push_back(*f);
  }
  return out;
}

std::vector<PLFunction> loop_triple(const Rational& x) {
  LoopOfLoops L = loop_of_loops(5, 4, 3, x);
  return forced(L.graph, L.divisor, L.u);
}

std::vector<PLFunction> luo_triple() {
  LuoExample L = luo_example();
  return forced(L.graph, L.divisor, {L.graph->vertex("x"), L.graph->vertex("y"), L.graph->vertex("z")});
}

std::vector<PLFunction> pick(const std::vector<PLFunction>& fs, std::vector<int> idx) {
  std::vector<PLFunction> out;
  for (int i : idx) out.push_back(fs[i]);
  return out;
}

// Independent answers must carry a certificate that re-verifies, also under the test oracle.
void expect_verified(const std::vector<PLFunction>& fs, const DependenceAnswer& a) {
  if (a.status == DependenceAnswer::Dependent) {
    EXPECT_EQ(verify_combination(fs, a.coefficients).kind, CombinationVerdict::Dependence);
    EXPECT_TRUE(oracle::is_dependence(fs, a.coefficients));
  } else if (a.status == DependenceAnswer::Independent) {
    ASSERT_TRUE(a.witness);
    EXPECT_EQ(verify_combination(fs, a.certificate_coefficients).kind, CombinationVerdict::Certificate);
    EXPECT_TRUE(oracle::is_certificate(fs, a.certificate_coefficients));
  }
}

// Rewrite the first piece of the edge so the slope at its tail is s (edge must have >= 2 lattice steps).
PLFunction with_tail_slope(const PLFunction& f, int e, long s, long N) {
  const MetricGraph& g = f.graph();
  std::vector<std::vector<Breakpoint>> pieces;
  for (int k = 0; k < g.num_edges(); ++k) {
    std::vector<Breakpoint> bp;
    for (long i = 0, n = Rational(g.edge(k).length * N).get_num().get_si(); i <= n; ++i)
      bp.push_back({ratio(i, N), f.value_at(k, ratio(i, N))});
    if (k == e) bp[1].val = bp[0].val + ratio(s, N);
    pieces.push_back(bp);
  }
  return PLFunction(f.graph_ptr(), pieces);
}

}  // namespace

TEST(VerifyCombination, ShiftedCopyIsDependence) {
  Barbell B = barbell();
  PLFunction f = B.left_type(ratio(1, 3));
  auto v = verify_combination({f, f + 2}, std::vector<Rational>{2, 0});
  EXPECT_EQ(v.kind, CombinationVerdict::Dependence);
  for (const auto& c : v.cells) EXPECT_EQ(c.achievers.size(), 2u);
}

TEST(VerifyCombination, LollipopCertificate) {
  Lollipop L = lollipop(2);
  std::vector<PLFunction> fs = pick(L.phi, {0, 1, 2});
  auto v = verify_combination(fs, std::vector<Rational>{0, ratio(-1, 2), ratio(-3, 4)});
  ASSERT_EQ(v.kind, CombinationVerdict::Certificate);
  ASSERT_EQ(v.unique_points.size(), 3u);
  // Aligned at w every term ties there, and phi1 is never alone.
  auto n = verify_combination(fs, std::vector<Rational>{0, 0, 0});
  EXPECT_EQ(n.kind, CombinationVerdict::Neither);
  EXPECT_EQ(n.violating_index, 1);
}

TEST(VerifyCombination, LoopOfLoopsSpecialValue) {
  auto fs = loop_triple(3);
  ASSERT_EQ(fs.size(), 3u);
  DependenceAnswer a = decide_dependence(fs);
  ASSERT_EQ(a.status, DependenceAnswer::Dependent);
  auto v = verify_combination(fs, a.coefficients);
  EXPECT_EQ(v.kind, CombinationVerdict::Dependence);
  // Every pair of the triple shares a cell somewhere.
  std::set<std::pair<int, int>> pairs;
  for (const auto& c : v.cells)
    if (c.achievers.size() == 2) pairs.insert({c.achievers[0], c.achievers[1]});
  EXPECT_EQ(pairs.size(), 3u);
}

TEST(Decide, ShiftedPair) {
  Barbell B = barbell();
  PLFunction f = B.right_type(ratio(1, 4));
  DependenceAnswer a = decide_dependence({f, f + 3});
  ASSERT_EQ(a.status, DependenceAnswer::Dependent);
  ASSERT_TRUE(a.coefficients[0] && a.coefficients[1]);
  EXPECT_EQ(*a.coefficients[0] - *a.coefficients[1], 3);
}

TEST(Decide, FGIndependentWithCertificate) {
  FGExample F = fg_example();
  std::vector<PLFunction> fs{F.phi(1, 0), F.phi(0, 1), F.phi(ratio(1, 2), ratio(1, 2))};
  DependenceAnswer a = decide_dependence(fs);
  EXPECT_EQ(a.status, DependenceAnswer::Independent);
  ASSERT_TRUE(a.witness);
  EXPECT_EQ(a.witness->kind, CombinationVerdict::Certificate);
  expect_verified(fs, a);
}

TEST(Decide, LoopOfLoops) {
  for (auto [x, want] : std::vector<std::pair<Rational, DependenceAnswer::Status>>{
           {3, DependenceAnswer::Dependent}, {2, DependenceAnswer::Independent}, {ratio(7, 2), DependenceAnswer::Independent}}) {
    auto fs = loop_triple(x);
    ASSERT_EQ(fs.size(), 3u) << "x = " << x;
    DependenceAnswer a = decide_dependence(fs);
    EXPECT_EQ(a.status, want) << "x = " << x;
    expect_verified(fs, a);
  }
}

TEST(Decide, LoopOfLoopsBelowRangeHasNoTriple) {
  EXPECT_TRUE(loop_triple(1).empty());
  LoopOfLoops L = loop_of_loops(5, 4, 3, 1);
  EXPECT_EQ(bn_rank(L.graph, L.divisor), 0);
}

TEST(Decide, LuoTripleIndependent) {
  auto fs = luo_triple();
  ASSERT_EQ(fs.size(), 3u);
  DependenceAnswer a = decide_dependence(fs);
  EXPECT_EQ(a.status, DependenceAnswer::Independent);
  expect_verified(fs, a);
}

TEST(Decide, LollipopNonMatroidPattern) {
  Lollipop L = lollipop(2);
  EXPECT_EQ(decide_dependence(pick(L.phi, {0, 1, 3})).status, DependenceAnswer::Dependent);
  EXPECT_EQ(decide_dependence(pick(L.phi, {0, 2, 3})).status, DependenceAnswer::Dependent);
  auto fs = pick(L.phi, {0, 1, 2});
  DependenceAnswer a = decide_dependence(fs);
  EXPECT_EQ(a.status, DependenceAnswer::Independent);
  expect_verified(fs, a);
}

TEST(Exhaustive, Examples) {
  Barbell B = barbell();
  PLFunction f = B.left_type(ratio(1, 2));
  EXPECT_EQ(exhaustive_dependence_3({f, f + 1, f + 2}).status, DependenceAnswer::Dependent);
  Lollipop L = lollipop(2);
  EXPECT_EQ(exhaustive_dependence_3(pick(L.phi, {0, 1, 2})).status, DependenceAnswer::Independent);
}

TEST(Exhaustive, AgreesOnCorpus) {
  std::vector<std::vector<PLFunction>> corpus;
  Lollipop L = lollipop(2);
  for (auto idx : std::vector<std::vector<int>>{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}) corpus.push_back(pick(L.phi, idx));
  FGExample F = fg_example();
  corpus.push_back({F.phi(1, 0), F.phi(0, 1), F.phi(ratio(1, 2), ratio(1, 2))});
  for (Rational x : {Rational(2), Rational(3), ratio(7, 2)}) corpus.push_back(loop_triple(x));
  corpus.push_back(luo_triple());
  Barbell B = barbell();
  corpus.push_back(pick(B.sigma.generators, {0, 1, 2}));
  corpus.push_back(pick(B.sigma.generators, {0, 1, 3}));
  corpus.push_back(pick(B.sigma.generators, {1, 2, 3}));
  for (const auto& fs : corpus) {
    ASSERT_EQ(fs.size(), 3u);
    DependenceAnswer a = decide_dependence(fs), b = exhaustive_dependence_3(fs);
    EXPECT_NE(a.status, DependenceAnswer::Undetermined);
    EXPECT_EQ(a.status, b.status);
    expect_verified(fs, a);
    expect_verified(fs, b);
  }
}

// The grid oracle finds dependences on small lattice triples; the engine must agree.
TEST(DependenceProperty, AgreesWithGridOracle) {
  gen::Rng rng(gen::seed(31));
  int dependent = 0, checked = 0;
  for (int k = 0; k < 30; ++k) {
    GraphPtr g = gen::random_lattice_graph(rng, 2, 2, 3, 3);
    std::vector<PLFunction> fs;
    for (int i = 0; i < 3; ++i) fs.push_back(gen::random_function(rng, g, 2, 1));
    if (rng.coin()) fs[2] = tropical_combine({{fs[0], ratio(rng.uniform(-2, 2), 2)}, {fs[1], 0}});
    DependenceAnswer a = decide_dependence(fs);
    ASSERT_NE(a.status, DependenceAnswer::Undetermined);
    expect_verified(fs, a);
    bool grid = oracle::grid_dependent_3(fs, 2, 3);
    if (grid) EXPECT_EQ(a.status, DependenceAnswer::Dependent);
    if (a.status == DependenceAnswer::Independent && a.witness) EXPECT_FALSE(grid);
    dependent += a.status == DependenceAnswer::Dependent;
    ++checked;
  }
  EXPECT_GT(dependent, 3);
  EXPECT_EQ(checked, 30);
}

TEST(DependenceProperty, DistinctTangentSlopesAreIndependent) {
  gen::Rng rng(gen::seed(32));
  int tested = 0;
  for (int k = 0; k < 40 && tested < 20; ++k) {
    GraphPtr g = gen::random_lattice_graph(rng, 2, 3, 4, 4);
    int e = -1;
    for (int i = 0; i < g->num_edges(); ++i)
      if (g->edge(i).length * 2 >= 2) e = i;
    if (e < 0) continue;
    int n = static_cast<int>(rng.uniform(2, 4));
    std::vector<long> slopes;
    while (static_cast<int>(slopes.size()) < n) {
      long s = rng.uniform(-3, 3);
      if (std::find(slopes.begin(), slopes.end(), s) == slopes.end()) slopes.push_back(s);
    }
    std::vector<PLFunction> fs;
    for (long s : slopes) fs.push_back(with_tail_slope(gen::random_function(rng, g, 2), e, s, 2));
    DependenceAnswer a = decide_dependence(fs);
    EXPECT_EQ(a.status, DependenceAnswer::Independent);
    expect_verified(fs, a);
    ++tested;
  }
  EXPECT_EQ(tested, 20);
}

namespace {

struct TiedTriple {
  std::vector<PLFunction> fs;
  bool strict_at_y;
};

// f1 = min of shifted f2, f3; f2 tied with f1 at x, f3 tied with f1 at y, f3(x) > f1(x), f2(y) >= f1(y).
std::optional<TiedTriple> tied_triple(gen::Rng& rng) {
  GraphPtr g = gen::random_lattice_graph(rng, 2, 2, 3, 3);
  PLFunction g2 = gen::random_function(rng, g, 2, 1), g3 = gen::random_function(rng, g, 2, 1);
  PLFunction f1 = tropical_combine({{g2, ratio(rng.uniform(-2, 2), 2)}, {g3, ratio(rng.uniform(-2, 2), 2)}});
  Point x = gen::random_lattice_point(rng, *g, 2), y = gen::random_lattice_point(rng, *g, 2);
  PLFunction f2 = g2 + (f1.evaluate(x) - g2.evaluate(x));
  PLFunction f3 = g3 + (f1.evaluate(y) - g3.evaluate(y));
  if (!(f3.evaluate(x) > f1.evaluate(x) && f2.evaluate(y) >= f1.evaluate(y))) return std::nullopt;
  return TiedTriple{{f1, f2, f3}, f2.evaluate(y) > f1.evaluate(y)};
}

}  // namespace

// With f2(y) > f1(y) a dependent tied triple is already dependent at zero offsets.
TEST(DependenceProperty, TiedTripleIsDependentAtZero) {
  gen::Rng rng(gen::seed(33));
  int hits = 0;
  for (int k = 0; k < 3000; ++k) {
    auto t = tied_triple(rng);
    if (!t || !t->strict_at_y) continue;
    if (decide_dependence(t->fs).status != DependenceAnswer::Dependent) continue;
    EXPECT_EQ(verify_combination(t->fs, std::vector<Rational>{0, 0, 0}).kind, CombinationVerdict::Dependence);
    ++hits;
  }
  EXPECT_GT(hits, 5);
}

// With a three-way tie at y the zero offsets can fail: only f2 is raised and f1 is never alone.
TEST(DependenceProperty, ThreeWayTieAtYCanFailAtZero) {
  gen::Rng rng(gen::seed(33));
  int counterexamples = 0;
  for (int k = 0; k < 3000; ++k) {
    auto t = tied_triple(rng);
    if (!t || t->strict_at_y) continue;
    DependenceAnswer a = decide_dependence(t->fs);
    if (a.status != DependenceAnswer::Dependent) continue;
    std::vector<std::optional<Rational>> zero(3, Rational(0));
    if (!oracle::is_dependence(t->fs, zero)) {
      EXPECT_TRUE(oracle::is_dependence(t->fs, a.coefficients));
      EXPECT_NE(verify_combination(t->fs, zero).kind, CombinationVerdict::Dependence);
      ++counterexamples;
    }
  }
  EXPECT_GT(counterexamples, 0);
}
