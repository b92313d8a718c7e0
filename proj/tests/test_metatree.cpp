#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "robustpath/choice_tree.hpp"
#include "robustpath/hardness.hpp"
#include "robustpath/lp.hpp"
#include "robustpath/metatree.hpp"
#include "robustpath/pipelines.hpp"
#include "support.hpp"

using namespace robustpath;
using namespace testing_support;

namespace {

int expected_height(int n) {
  int c = 0;
  while ((1 << c) < n) ++c;
  return 2 * c + 1;
}

Instance line_graph(int n) {
  std::vector<Edge> e;
  std::vector<int> c;
  for (int v = 0; v + 1 < n; ++v) {
    e.push_back({v, v + 1});
    c.push_back(v + 1);
  }
  return make_instance(n, 0, n - 1, e, {c});
}

// Child of v with the given label, -1 if absent.
int find_child(const Metatree& mt, int v, MetaKind kind, int a, int q, int b) {
  for (int c : mt.choice.children(v)) {
    const MetaNode& nd = mt.node(c);
    if (nd.kind == kind && nd.a == a && nd.b == b && (kind == MetaKind::Splitting || nd.q == q)) return c;
  }
  return -1;
}

}  // namespace

TEST(MetatreeShape, Heights) {
  EXPECT_EQ(metatree_height(2), 3);
  EXPECT_EQ(metatree_height(3), 5);
  EXPECT_EQ(metatree_height(8), 7);
  for (int n = 2; n <= 9; ++n) EXPECT_EQ(metatree_height(n), expected_height(n));
}

TEST(MetatreeShape, TwoVertexRoot) {
  Metatree mt = build_metatree(make_instance(2, 0, 1, {{0, 1}}, {{1}}));
  EXPECT_EQ(mt.height, 3);
  EXPECT_EQ(mt.choice.height(), 3);
  int root = mt.choice.root();
  EXPECT_EQ(mt.node(root).kind, MetaKind::Splitting);
  EXPECT_EQ(mt.choice.num_children(root), 2);
}

TEST(MetatreeShape, ThreeVertexFiveLevels) {
  Metatree mt = build_metatree(three_vertex_graph());
  EXPECT_EQ(mt.height, 5);
  EXPECT_EQ(mt.choice.height(), 5);
  EXPECT_EQ(mt.logical_size, metatree_logical_size(3));
  EXPECT_EQ(mt.choice.size(), mt.logical_size);
}

TEST(MetatreeShape, EightVerticesAlternate) {
  Metatree mt = build_metatree(line_graph(8));
  EXPECT_EQ(mt.height, 7);
  const ChoiceTree& ct = mt.choice;
  for (int v = 0; v < ct.size(); ++v) {
    MetaKind want = ct.depth(v) % 2 == 1 ? MetaKind::Splitting : MetaKind::Merging;
    EXPECT_EQ(mt.node(v).kind, want);
    if (ct.num_children(v) == 0) EXPECT_EQ(ct.depth(v), 7);
  }
}

TEST(LeafCosts, Cases) {
  Instance inst = three_vertex_graph({{4, 1, 2}});
  Metatree mt = build_metatree(inst);
  const ChoiceTree& ct = mt.choice;
  bool saw_loop = false, saw_edge = false, saw_missing = false;
  for (int v = 0; v < ct.size(); ++v) {
    if (ct.num_children(v) != 0) {
      EXPECT_THROW(leaf_cost(mt, v, 0, inst), Error);
      continue;
    }
    const MetaNode& nd = mt.node(v);
    auto c = leaf_cost(mt, v, 0, inst);
    if (nd.a == nd.b) {
      ASSERT_TRUE(c.has_value());
      EXPECT_EQ(*c, 0);
      saw_loop = true;
    } else if (nd.a == 0 && nd.b == 1) {
      ASSERT_TRUE(c.has_value());
      EXPECT_EQ(*c, 1);
      saw_edge = true;
    } else if (nd.a == 1 && nd.b == 0) {
      EXPECT_FALSE(c.has_value());
      EXPECT_TRUE(ct.forbidden(v));
      saw_missing = true;
    }
  }
  EXPECT_TRUE(saw_loop && saw_edge && saw_missing);
}

TEST(MetatreeConversion, ThreeVertexPaths) {
  Instance inst = three_vertex_graph();
  Metatree mt = build_metatree(inst);
  for (StPath p : {StPath{0}, StPath{1, 2}}) {
    FeasibleSubtree sub = path_to_feasible_subtree(mt, p, inst);
    EXPECT_NO_THROW(check_feasible_subtree(mt.choice, sub));
    EXPECT_EQ(subtree_cost(mt.choice, sub), path_costs(inst, p));
    EXPECT_EQ(feasible_subtree_to_path(mt, sub, inst), p);
    for (int v : sub) EXPECT_FALSE(mt.choice.forbidden(v));
  }
}

TEST(MetatreeConversion, DirectEdgeViaMiddleVertex) {
  // Merging through an endpoint at every level encodes the direct edge.
  Instance inst = three_vertex_graph();
  Metatree mt = build_metatree(inst);
  const ChoiceTree& ct = mt.choice;
  int root = ct.root();
  for (int mid : {0, 2}) {
    int m1 = find_child(mt, root, MetaKind::Merging, 0, mid, 2);
    ASSERT_GE(m1, 0);
    FeasibleSubtree sub;
    std::function<void(int)> take = [&](int v) {
      sub.push_back(v);
      if (ct.kind(v) == NodeKind::And) {
        for (int c : ct.children(v)) take(c);
      } else if (ct.kind(v) == NodeKind::Or) {
        const MetaNode& nd = mt.node(v);
        int q = nd.a;  // keep collapsing onto the left endpoint
        int c = find_child(mt, v, MetaKind::Merging, nd.a, q, nd.b);
        ASSERT_GE(c, 0);
        take(c);
      }
    };
    sub.push_back(root);
    take(m1);
    std::sort(sub.begin(), sub.end());
    EXPECT_NO_THROW(check_feasible_subtree(ct, sub));
    EXPECT_EQ(feasible_subtree_to_path(mt, sub, inst), (StPath{0}));
  }
}

TEST(MetatreeConversion, LinePathLeafEdges) {
  Instance inst = line_graph(8);
  Metatree mt = build_metatree(inst);
  StPath p{0, 1, 2, 3, 4, 5, 6};
  FeasibleSubtree sub = path_to_feasible_subtree(mt, p, inst);
  std::vector<int> edges;
  for (int v : sub)
    if (mt.choice.num_children(v) == 0 && mt.node(v).leaf == LeafClass::Edge) edges.push_back(mt.node(v).edge);
  std::sort(edges.begin(), edges.end());
  EXPECT_EQ(edges, p);
  EXPECT_EQ(feasible_subtree_to_path(mt, sub, inst), p);
}

TEST(MetatreeConversion, RandomRoundTrips) {
  Rng rng(303);
  int done = 0;
  while (done < 200) {
    int n = 3 + static_cast<int>(rng.below(6));
    Instance inst = random_dag_instance(n, 0.45, 2, rng);
    Metatree mt = build_metatree(inst);
    for (const auto& p : dfs_paths(inst)) {
      FeasibleSubtree sub = path_to_feasible_subtree(mt, p, inst);
      ASSERT_EQ(feasible_subtree_to_path(mt, sub, inst), p);
      ASSERT_EQ(subtree_cost(mt.choice, sub), path_costs(inst, p));
      if (++done == 200) break;
    }
  }
}

TEST(ShortcutWalk, RemovesCycle) {
  // s=0 -> 1 -> 2 -> 1 -> 3
  Instance inst = make_instance(4, 0, 3, {{0, 1}, {1, 2}, {2, 1}, {1, 3}}, {{1, 1, 1, 1}});
  EXPECT_EQ(shortcut_walk(inst, {0, 1, 2, 3}), (StPath{0, 3}));
}

TEST(GgTreeLp, TwoVertexFeasible) {
  Instance inst = make_instance(2, 0, 1, {{0, 1}}, {{2}});
  Metatree mt = build_metatree(inst);
  EXPECT_TRUE(solve_feasibility(build_gg_tree_lp(mt, 2)).feasible);
}

TEST(GgTreeLp, ThreeVertexAtOpt) {
  Instance inst = three_vertex_graph();
  Rational opt = brute_force_minimax(inst).value;
  Metatree mt = build_metatree(inst);
  SolveOptions ex;
  ex.exact = ExactMode::Always;
  EXPECT_TRUE(solve_feasibility(build_gg_tree_lp(mt, opt), ex).feasible);
}

TEST(GgTreeLp, NoPathInfeasible) {
  Instance inst = make_instance(3, 0, 2, {{0, 1}}, {{1}});
  Metatree mt = build_metatree(inst);
  for (Rational gs : {Rational(1), Rational(100)}) EXPECT_FALSE(solve_feasibility(build_gg_tree_lp(mt, gs)).feasible);
}

TEST(MetatreePipeline, ParallelEdgesAndFixtures) {
  PipelineOptions o;
  o.seed = 4;
  PipelineResult r = solve_metatree(three_vertex_graph(), o);
  EXPECT_TRUE(is_valid_path(three_vertex_graph(), r.path));
  Instance two = gen_two_vertex_gap(3);
  EXPECT_THROW(build_metatree(two), Error);
  PipelineResult r2 = run_pipeline(two, Pipeline::Metatree, o);
  EXPECT_TRUE(is_valid_path(two, r2.path));
  EXPECT_EQ(r2.max_cost, 1);
}

TEST(MetatreeCap, Guarded) {
  try {
    build_metatree(line_graph(8), 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SizeCapExceeded);
  }
}
