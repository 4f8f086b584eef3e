#include <gtest/gtest.h>

#include "tropls/fixtures.hpp"
#include "tropls/morphisms.hpp"

using namespace tropls;

namespace {

IntervalSeries interval(const Rational& w0, const Rational& w1) {
  GraphPtr g = unit_interval();
  return interval_rank1_builder(g, point_divisor(g->vertex("x"), 2), g->point_on_edge(0, w0), g->point_on_edge(0, w1));
}

BalanceReport balance(const TropicalSubmodule& m) {
  return balancing_check(coordinate_map(tropical_modification(m)), rank1_valuated_circuits(m));
}

bool has_base_degree(const BalanceReport& r, long d) {
  for (const auto& ld : r.degrees)
    if (ld.tangent.ray < 0 && ld.degree == d) return true;
  return false;
}

}  // namespace

TEST(Modification, RaysAtSupportPoints) {
  IntervalSeries S = interval(ratio(3, 4), ratio(1, 4));
  ModifiedGraph M = tropical_modification(S.module);
  std::set<Point> pts;
  for (const auto& f : M.generators)
    for (const Point& p : (S.divisor + f.divisor()).support()) pts.insert(p);
  ASSERT_EQ(M.rays.size(), pts.size());
  EXPECT_EQ(M.rays.size(), 5u);
  for (const auto& r : M.rays) {
    EXPECT_TRUE(pts.count(r.base));
    for (std::size_t j = 0; j < M.generators.size(); ++j) EXPECT_EQ(r.slopes[j], M.generators[j].ord(r.base));
  }
  MetricGraph g = M.graph();
  EXPECT_EQ(g.rays().size(), 5u);
}

TEST(Modification, RayImageMovesBySlopes) {
  Barbell B = barbell();
  PLMap map = coordinate_map(tropical_modification(B.sigma));
  for (int k = 0; k < static_cast<int>(map.source.rays.size()); ++k) {
    TropVector a = map.ray_image(k, 0), b = map.ray_image(k, 3);
    for (std::size_t j = 0; j < a.size(); ++j) EXPECT_EQ(b[j] - a[j], 3 * map.source.rays[k].slopes[j]);
  }
}

TEST(BergmanStar, U23AtOrigin) {
  ValuatedMatroid V = trivially_valuated(uniform_matroid(2, 3));
  auto star = bergman_star({0, 0, 0}, V);
  EXPECT_EQ(star, (std::vector<ElementSet>{1, 2, 4}));
  // Off the vertex only the line through it remains.
  EXPECT_EQ(bergman_star({0, 0, 1}, V), (std::vector<ElementSet>{3, 4}));
}

TEST(TreeTarget, U23IsATripod) {
  TreeTarget T = rank1_tree_target(trivially_valuated(uniform_matroid(2, 3)));
  ASSERT_EQ(T.vertices.size(), 1u);
  EXPECT_EQ(T.vertices[0], (TropVector{0, 0, 0}));
  EXPECT_EQ(T.graph.num_edges(), 0);
  EXPECT_EQ(T.ray_elements.size(), 3u);
}

TEST(TreeTarget, HardInterval) {
  IntervalSeries S = interval(ratio(3, 4), ratio(1, 4));
  TreeTarget T = rank1_tree_target(rank1_valuated_circuits(S.module));
  ASSERT_EQ(T.vertices.size(), 1u);
  EXPECT_EQ(T.vertices[0], (TropVector{0, ratio(1, 4), ratio(1, 4)}));
  EXPECT_EQ(T.ray_elements.size(), 3u);
  EXPECT_THROW(rank1_tree_target(trivially_valuated(uniform_matroid(3, 4))), input_error);
}

TEST(Balancing, HardInterval) {
  BalanceReport r = balance(interval(ratio(3, 4), ratio(1, 4)).module);
  EXPECT_TRUE(r.pass) << r.detail;
  EXPECT_TRUE(r.degrees_positive);
  EXPECT_GT(r.checked_points, 0);
}

TEST(Balancing, EasyIntervalHasDegreeTwoSegment) {
  BalanceReport r = balance(interval(ratio(1, 4), ratio(3, 4)).module);
  EXPECT_TRUE(r.pass) << r.detail;
  EXPECT_TRUE(r.degrees_positive);
  EXPECT_TRUE(has_base_degree(r, 2));
}

TEST(Balancing, BarbellBridgeDegreeTwo) {
  Barbell B = barbell();
  BalanceReport r = balance(B.sigma);
  EXPECT_TRUE(r.pass) << r.detail;
  bool bridge2 = false;
  for (const auto& ld : r.degrees)
    if (ld.tangent.ray < 0 && ld.tangent.edge == 1) {
      EXPECT_EQ(ld.degree, 2);
      bridge2 = true;
    }
  EXPECT_TRUE(bridge2);
}

// Local degree d = s[1] - s[0] on every base tangent, for each interval case.
TEST(Balancing, DegreeIsSlopeGap) {
  for (const auto& S : {interval(ratio(3, 4), ratio(1, 4)), interval(ratio(1, 4), ratio(3, 4))}) {
    BalanceReport r = balance(S.module);
    for (const auto& ld : r.degrees) {
      if (ld.tangent.ray >= 0) continue;
      auto s = slope_vector(S.module, ld.tangent).slopes;
      ASSERT_EQ(s.size(), 2u);
      EXPECT_EQ(ld.degree, s[1] - s[0]);
      EXPECT_GE(ld.degree, 1);
    }
  }
}

TEST(Balancing, ContractedTangentFails) {
  GraphPtr g = unit_interval();
  PLFunction f(g, {detail::knots({{0, 0}, {ratio(1, 2), ratio(1, 2)}, {1, ratio(1, 2)}})});
  TropicalSubmodule m(g, point_divisor(g->vertex("x"), 2), {PLFunction::constant(g), f});
  BalanceReport r = balancing_check(coordinate_map(tropical_modification(m)), generator_valuated_matroid(m, 1));
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.degrees_positive);
}

TEST(Balancing, RejectsNonTreeTarget) {
  FGExample F = fg_example();
  TropicalSubmodule m(F.graph, F.divisor, {F.phi(1, 0), F.phi(0, 1), F.phi(ratio(1, 2), ratio(1, 2))});
  ValuatedMatroid empty = generator_valuated_matroid(m, 1);
  EXPECT_THROW(balancing_check(coordinate_map(tropical_modification(m)), empty), input_error);
}

TEST(Dot, Exports) {
  IntervalSeries S = interval(ratio(3, 4), ratio(1, 4));
  PLMap map = coordinate_map(tropical_modification(S.module));
  BalanceReport r = balance(S.module);
  std::string d = modified_graph_dot(map, &r);
  EXPECT_EQ(d.rfind("graph modified {", 0), 0u);
  EXPECT_NE(d.find("style=dashed"), std::string::npos);
  std::string t = tree_dot(rank1_tree_target(rank1_valuated_circuits(S.module)));
  EXPECT_EQ(t.rfind("graph target {", 0), 0u);
  EXPECT_EQ(dot_escape("a\"b\\c"), "a\\\"b\\\\c");
}
