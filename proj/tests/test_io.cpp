#include <gtest/gtest.h>

#include "tropls/fixtures.hpp"
#include "tropls/io.hpp"

using namespace tropls;

namespace {

std::string data(const std::string& name) { return std::string(TROPLS_TEST_DATA) + "/" + name; }

GraphPtr load_graph(const std::string& name) { return make_graph(graph_from_json(io::load_file(data(name)))); }

}  // namespace

TEST(IO, GraphRoundTrip) {
  for (const char* name : {"barbell.graph.json", "interval.graph.json", "fg.graph.json", "luo.graph.json"}) {
    GraphPtr g = load_graph(name);
    MetricGraph back = graph_from_json(to_json(*g));
    EXPECT_EQ(to_json(back), to_json(*g)) << name;
  }
  EXPECT_EQ(load_graph("luo.graph.json")->genus(), 7);
  EXPECT_EQ(to_json(*load_graph("barbell.graph.json")), to_json(*barbell().graph));
}

TEST(IO, PointsTangentsDivisors) {
  Barbell B = barbell();
  for (const Point& p : {B.graph->vertex("v"), B.graph->point_on_edge("B", ratio(2, 7))})
    EXPECT_EQ(point_from_json(*B.graph, to_json(*B.graph, p)), p);
  Tangent z = tangent_from_json(*B.graph, to_json(*B.graph, B.zeta));
  EXPECT_EQ(z.base, B.zeta.base);
  EXPECT_EQ(z.edge, B.zeta.edge);
  EXPECT_EQ(z.dir, B.zeta.dir);
  EXPECT_EQ(divisor_from_json(*B.graph, to_json(*B.graph, B.canonical)), B.canonical);
  EXPECT_EQ(divisor_from_json(*B.graph, io::load_file(data("barbell.divisor.json"))), B.canonical);
}

TEST(IO, FunctionsAndModules) {
  GraphPtr g = load_graph("fg.graph.json");
  FGExample F = fg_example();
  PLFunction half = function_from_json(g, io::load_file(data("fg.phi_half.json")));
  EXPECT_EQ(to_json(half), to_json(F.phi(ratio(1, 2), ratio(1, 2))));
  EXPECT_EQ(function_from_json(g, to_json(half)), half);

  GraphPtr bg = load_graph("barbell.graph.json");
  TropicalSubmodule m = module_from_json(bg, io::load_file(data("barbell.module.json")));
  EXPECT_EQ(m.generators.size(), barbell().sigma.generators.size());
  EXPECT_EQ(to_json(module_from_json(bg, to_json(m))), to_json(m));
}

TEST(IO, MatroidsAndValuations) {
  Matroid f = matroid_from_json(io::load_file(data("fano.matroid.json")));
  EXPECT_EQ(f.circuits, fano_matroid().circuits);
  Matroid u = matroid_from_json(io::load_file(data("u34.matroid.json")));
  EXPECT_EQ(u.rank(), 3);
  EXPECT_EQ(matroid_from_json(to_json(u)).circuits, u.circuits);

  ValuatedMatroid v = trivially_valuated(uniform_matroid(2, 3));
  v.circuits[0][1] = Rational(2);
  ValuatedMatroid back = valuated_from_json(to_json(v));
  EXPECT_EQ(back.circuits, ValuatedMatroid{v}.circuits);
  EXPECT_EQ(back.rank, v.rank);
  EXPECT_EQ(trop_json(std::nullopt), "inf");
}

TEST(IO, Subgraph) {
  GraphPtr g = load_graph("barbell.graph.json");
  auto segs = subgraph_from_json(*g, io::load_file(data("barbell.left_loop.json")));
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].edge, 0);
  EXPECT_EQ(segs[0].to, 1);
}

TEST(IO, RejectsBadInput) {
  EXPECT_THROW(load_graph("bad.disconnected.graph.json"), input_error);
  try {
    load_graph("bad.zero_length.graph.json");
    FAIL() << "zero length accepted";
  } catch (const input_error& e) {
    EXPECT_NE(std::string(e.what()).find("length must be positive"), std::string::npos);
  }
  GraphPtr g = load_graph("interval.graph.json");
  try {
    function_from_json(g, io::load_file(data("bad.slope.function.json")));
    FAIL() << "non-integer slope accepted";
  } catch (const input_error& e) {
    EXPECT_NE(std::string(e.what()).find("'I'"), std::string::npos) << e.what();
  }
  EXPECT_THROW(io::rational(json(0.5), "x"), input_error);
  EXPECT_THROW(io::rational(json("1/0"), "x"), input_error);
  EXPECT_THROW(io::load("{not json"), input_error);
  EXPECT_THROW(io::load_file(data("missing.json")), input_error);
  EXPECT_THROW(point_from_json(*g, json{{"vertex", "nope"}}), input_error);
  EXPECT_THROW(function_from_json(g, json{{"edges", {{"Z", json::array()}}}}), input_error);
  EXPECT_THROW(matroid_from_json(json{{"elements", {"a"}}}), input_error);
}

TEST(IO, ReportsCarryKinds) {
  Barbell B = barbell();
  DependenceAnswer a = decide_dependence({B.sigma.generators[0], B.sigma.generators[0] + 1});
  EXPECT_EQ(to_json(*B.graph, a)["kind"], "dependence");
  EXPECT_EQ(to_json(*B.graph, verify_tls(B.sigma, 1))["kind"], "tls_report");
  ModifiedGraph M = tropical_modification(B.sigma);
  EXPECT_EQ(to_json(M)["kind"], "modification");
  EXPECT_EQ(to_json(*B.graph, balancing_check(coordinate_map(M), rank1_valuated_circuits(B.sigma)))["kind"], "balance");
}
