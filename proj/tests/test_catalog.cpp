#include <gtest/gtest.h>

#include "tropls/catalog.hpp"

using namespace tropls;

namespace {

void expect_facts(const FixtureRun& r, const std::set<std::string>& known_red = {}) {
  EXPECT_FALSE(r.facts.empty()) << r.name;
  for (const auto& f : r.facts) {
    if (known_red.count(f.name)) EXPECT_FALSE(f.pass) << r.name << ": " << f.name;
    else EXPECT_TRUE(f.pass) << r.name << ": " << f.name << " [" << f.detail << "]";
  }
}

}  // namespace

TEST(Catalog, Names) {
  EXPECT_EQ(list_fixtures(),
            (std::vector<std::string>{"lollipop", "barbell", "interval", "fg", "luo", "loop-of-loops", "fano", "u34"}));
  EXPECT_THROW(run_fixture("nope"), input_error);
}

TEST(Catalog, SmallFixturesCheck) {
  for (const char* name : {"lollipop", "barbell", "interval", "fg", "luo", "loop-of-loops"}) expect_facts(run_fixture(name, {}, true));
}

TEST(Catalog, Parameters) {
  expect_facts(run_fixture("lollipop", {{"m", "3"}}, true));
  expect_facts(run_fixture("interval", {{"w0", "1/4"}, {"w1", "3/4"}}, true));
  expect_facts(run_fixture("interval", {{"w0", "1/2"}, {"w1", "1/2"}}, true));
  for (const char* x : {"2", "7/2", "3"}) expect_facts(run_fixture("loop-of-loops", {{"x", x}}, true));
  EXPECT_THROW(run_fixture("lollipop", {{"m", "0"}}, true), input_error);
  EXPECT_THROW(run_fixture("loop-of-loops", {{"x", "9"}}, true), input_error);
}

// Below x = l1 - l3 the divisor has rank 0, so there is nothing to test for dependence.
TEST(Catalog, LoopOfLoopsRankZeroRegion) {
  FixtureRun r = run_fixture("loop-of-loops", {{"x", "1"}}, true);
  expect_facts(r, {"forced functions phi_1, phi_2, phi_3 exist"});
  EXPECT_NE(r.verdict.find("rank of D is 0"), std::string::npos);
}

TEST(Catalog, Fano) { expect_facts(run_fixture("fano", {}, true)); }

// Axiom 1 fails for the U(3,4) series; test_tls confirms the missed divisor with a lattice search.
TEST(Catalog, U34) {
  FixtureRun r = run_fixture("u34", {}, true);
  expect_facts(r, {"axiom 1 on 200 sampled degree-2 divisors"});
}

TEST(Catalog, DotAndJson) {
  FixtureRun r = run_fixture("interval", {}, false);
  EXPECT_EQ(r.dot.rfind("graph", 0), 0u);
  json j = to_json(r);
  EXPECT_EQ(j["kind"], "fixture");
  EXPECT_EQ(j["name"], "interval");
}
