#include <gtest/gtest.h>

#include "robustpath/common.hpp"
#include "robustpath/hardness.hpp"
#include "robustpath/instance.hpp"
#include "robustpath/pipelines.hpp"
#include "support.hpp"

using namespace robustpath;
using namespace testing_support;

TEST(Rationals, ParseAndFormat) {
  EXPECT_EQ(parse_rational("3/8"), Rational(3, 8));
  EXPECT_EQ(parse_rational("-0.25"), Rational(-1, 4));
  EXPECT_EQ(parse_rational("12"), Rational(12));
  EXPECT_EQ(format_rational(Rational(3, 8)), "0.375");
  EXPECT_EQ(format_rational(Rational(1, 3)), "1/3");
  EXPECT_EQ(format_rational(Rational(10, 2)), "5");
  EXPECT_THROW(parse_rational("abc"), Error);
  EXPECT_THROW(parse_rational("1/0"), Error);
}

TEST(Rationals, FormatRoundTrip) {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    Rational q(static_cast<long>(rng.below(2000)) - 1000, static_cast<long>(rng.below(97)) + 1);
    q.canonicalize();
    EXPECT_EQ(parse_rational(format_rational(q)), q);
  }
}

TEST(RngStreams, DeterministicAndSplittable) {
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
  Rng c(5);
  EXPECT_NE(c.split(0).next(), c.split(1).next());
  Rng d(9);
  for (int i = 0; i < 1000; ++i) {
    double u = d.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(LoadInstance, MinimalSingleEdge) {
  Instance inst = load_instance(R"({"version":1,"n":2,"source":0,"sink":1,"edges":[[0,1]],"costs":[["5"]]})");
  EXPECT_EQ(inst.n, 2);
  EXPECT_EQ(inst.m(), 1);
  EXPECT_EQ(inst.k(), 1);
  EXPECT_EQ(inst.costs[0][0], 5);
}

TEST(LoadInstance, NegativeCostRejected) {
  try {
    load_instance(R"({"version":1,"n":2,"source":0,"sink":1,"edges":[[0,1],[0,1]],"costs":[["-1","0"],["0","1"]]})");
    FAIL() << "expected ValidationError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationError);
  }
}

TEST(LoadInstance, MalformedIsParseError) {
  try {
    load_instance("{ not json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}

TEST(LoadInstance, DisjointGeneratorRoundTrip) {
  Instance g = gen_disjoint_paths_gap(3, 2);
  Instance back = load_instance(serialize_instance(g));
  EXPECT_EQ(back.m(), 6);
  EXPECT_EQ(back.k(), 3);
  EXPECT_EQ(back, g);
}

TEST(LoadInstance, RoundTripProperty) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    Instance inst = random_dag_instance(7, 0.5, 3, rng);
    inst.costs[0][0] = Rational(1, 3);
    EXPECT_EQ(load_instance(serialize_instance(inst)), inst);
  }
}

TEST(PathCost, SingleEdge) {
  Instance inst = make_instance(2, 0, 1, {{0, 1}}, {{5}});
  EXPECT_EQ(path_cost(inst, {0}, 0), 5);
  EXPECT_EQ(minimax_value(inst, {0}), 5);
}

TEST(PathCost, DisjointPathsOwnAndOther) {
  const int k = 4;
  Instance inst = gen_disjoint_paths_gap(k, k);
  auto paths = enumerate_simple_st_paths(inst).paths;
  ASSERT_EQ(static_cast<int>(paths.size()), k);
  for (const auto& p : paths) {
    int owners = 0;
    for (int i = 0; i < k; ++i) {
      Rational c = path_cost(inst, p, i);
      EXPECT_TRUE(c == k || c == 0);
      owners += c == k;
    }
    EXPECT_EQ(owners, 1);
    EXPECT_EQ(minimax_value(inst, p), k);
  }
}

TEST(PathCost, InvalidPathRejected) {
  Instance inst = three_vertex_graph();
  EXPECT_THROW(check_path(inst, {2}), Error);
  EXPECT_THROW(check_path(inst, {1}), Error);
  EXPECT_NO_THROW(check_path(inst, {1, 2}));
  EXPECT_FALSE(is_valid_path(inst, {2, 1}));
}

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerate_simple_st_paths(make_instance(2, 0, 1, {{0, 1}}, {{1}})).paths.size(), 1u);
  EXPECT_EQ(enumerate_simple_st_paths(gen_two_vertex_gap(7)).paths.size(), 7u);
  EXPECT_EQ(enumerate_simple_st_paths(three_vertex_graph()).paths.size(), 2u);
}

TEST(Enumerate, CapTruncates) {
  auto res = enumerate_simple_st_paths(gen_two_vertex_gap(10), 3);
  EXPECT_TRUE(res.truncated);
}

TEST(BruteForce, ThreeVertexValues) {
  EXPECT_EQ(brute_force_minimax(gen_two_vertex_gap(5)).value, 1);
  EXPECT_EQ(brute_force_minimax(gen_disjoint_paths_gap(4, 4)).value, 4);
}

TEST(BruteForce, AgreesWithDfsOracle) {
  Rng rng(17);
  for (int i = 0; i < 30; ++i) {
    Instance inst = random_dag_instance(10, 0.35, 3, rng);
    auto bf = brute_force_minimax(inst);
    EXPECT_EQ(bf.value, dfs_minimax(inst));
    EXPECT_EQ(minimax_value(inst, bf.path), bf.value);
    EXPECT_EQ(enumerate_simple_st_paths(inst).paths.size(), dfs_paths(inst).size());
  }
}

TEST(SumBaseline, SingleAgentIsExact) {
  Rng rng(23);
  for (int i = 0; i < 20; ++i) {
    Instance inst = random_dag_instance(9, 0.4, 1, rng);
    EXPECT_EQ(minimax_value(inst, sum_baseline(inst)), dfs_minimax(inst));
  }
}

TEST(SumBaseline, GapFamilies) {
  Instance disjoint = gen_disjoint_paths_gap(5, 5);
  EXPECT_EQ(minimax_value(disjoint, sum_baseline(disjoint)), 5);
  Instance two = gen_two_vertex_gap(6);
  StPath p = sum_baseline(two);
  EXPECT_EQ(p.size(), 1u);
  EXPECT_EQ(minimax_value(two, p), 1);
}

TEST(Truncate, DropsExpensiveAndDeadEdges) {
  Instance inst = three_vertex_graph({{4, 1, 1}, {1, 2, 2}});
  SubInstance sub = truncate_instance(inst, 3);
  ASSERT_EQ(sub.inst.m(), 2);
  EXPECT_EQ(sub.origin, (std::vector<int>{1, 2}));
  EXPECT_EQ(map_path(sub, {0, 1}), (StPath{1, 2}));
}

TEST(Desugar, ParallelCopiesBecomeDetours) {
  Instance two = gen_two_vertex_gap(3);
  ASSERT_TRUE(has_parallel_edges(two));
  SubInstance d = desugar_parallel_edges(two);
  EXPECT_FALSE(has_parallel_edges(d.inst));
  EXPECT_EQ(d.inst.m(), 5);
  for (const auto& p : enumerate_simple_st_paths(d.inst).paths) {
    StPath back = map_path(d, p);
    EXPECT_EQ(path_costs(two, back), path_costs(d.inst, p));
  }
}
