#include <gtest/gtest.h>

#include <algorithm>

#include "robustpath/choice_tree.hpp"
#include "robustpath/hardness.hpp"
#include "robustpath/pipelines.hpp"
#include "robustpath/sp_decomp.hpp"
#include "support.hpp"

using namespace robustpath;
using namespace testing_support;

TEST(Recognize, SingleEdgeIsLeafRoot) {
  DecompTree t = recognize_sp(make_instance(2, 0, 1, {{0, 1}}, {{1}}));
  ASSERT_EQ(t.nodes.size(), 1u);
  EXPECT_EQ(t.nodes[t.root].kind, SpKind::Leaf);
  EXPECT_EQ(t.height, 1);
}

TEST(Recognize, DisjointPathsThreeLevels) {
  const int k = 4, L = 3;
  DecompTree t = recognize_sp(gen_disjoint_paths_gap(k, L));
  EXPECT_EQ(t.height, 3);
  const auto& root = t.nodes[t.root];
  EXPECT_EQ(root.kind, SpKind::Parallel);
  ASSERT_EQ(static_cast<int>(root.children.size()), k);
  for (int c : root.children) {
    EXPECT_EQ(t.nodes[c].kind, SpKind::Series);
    EXPECT_EQ(static_cast<int>(t.nodes[c].children.size()), L);
  }
}

TEST(Recognize, EighteenEdgeGraphMergesBranches) {
  DecompTree t = recognize_sp(eighteen_edge_graph());
  int l13 = t.leaf_of_edge(12), l15 = t.leaf_of_edge(14), l14 = t.leaf_of_edge(13), l16 = t.leaf_of_edge(15);
  int s1 = t.nodes[l13].parent, s2 = t.nodes[l14].parent;
  EXPECT_EQ(t.nodes[s1].kind, SpKind::Series);
  EXPECT_EQ(t.nodes[s1].children, (std::vector<int>{l13, l15}));
  EXPECT_EQ(t.nodes[s2].children, (std::vector<int>{l14, l16}));
  EXPECT_EQ(t.nodes[s1].parent, t.nodes[s2].parent);
  EXPECT_EQ(t.nodes[t.nodes[s1].parent].kind, SpKind::Parallel);
  EXPECT_EQ(count_tree_paths(t, 1000), 36);
  EXPECT_EQ(dfs_paths(eighteen_edge_graph()).size(), 36u);
}

TEST(Recognize, RejectsNonSeriesParallel) {
  // The Wheatstone bridge.
  Instance bridge = make_instance(4, 0, 3, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}, {{1, 1, 1, 1, 1}});
  try {
    recognize_sp(bridge);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSeriesParallel);
  }
}

TEST(Recognize, DumpMentionsEveryLeaf) {
  DecompTree t = recognize_sp(gen_disjoint_paths_gap(2, 2));
  std::string text = dump_decomp_tree(t);
  EXPECT_EQ(text, "Parallel\n  Series\n    Leaf e0 (0->2)\n    Leaf e1 (2->1)\n  Series\n    Leaf e2 (0->3)\n    Leaf e3 (3->1)\n");
}

TEST(Conversion, EighteenEdgePath) {
  Instance inst = eighteen_edge_graph();
  DecompTree t = recognize_sp(inst);
  StPath p{1, 7, 11, 17};
  FeasibleSubtree sub = path_to_subtree(t, p);
  EXPECT_NO_THROW(check_decomp_subtree(t, sub));
  EXPECT_EQ(subtree_to_path(t, sub), p);
  ChoiceTree ct = to_choice_tree(t);
  EXPECT_EQ(subtree_cost(ct, sub), path_costs(inst, p));
}

TEST(Conversion, LeafOnlyTree) {
  DecompTree t = recognize_sp(make_instance(2, 0, 1, {{0, 1}}, {{1}}));
  EXPECT_EQ(subtree_to_path(t, {0}), (StPath{0}));
  EXPECT_EQ(path_to_subtree(t, {0}), (FeasibleSubtree{0}));
}

TEST(Conversion, DisjointPathSubtreeLayout) {
  const int k = 3, L = 2;
  Instance inst = gen_disjoint_paths_gap(k, L);
  DecompTree t = recognize_sp(inst);
  for (int j = 0; j < k; ++j) {
    StPath p;
    for (int e = 0; e < L; ++e) p.push_back(j * L + e);
    FeasibleSubtree sub = path_to_subtree(t, p);
    int series = t.nodes[t.root].children[j];
    FeasibleSubtree expect{t.root, series};
    for (int c : t.nodes[series].children) expect.push_back(c);
    std::sort(expect.begin(), expect.end());
    EXPECT_EQ(sub, expect);
  }
}

TEST(Conversion, MalformedSubtreeRejected) {
  DecompTree t = recognize_sp(gen_disjoint_paths_gap(2, 2));
  try {
    subtree_to_path(t, {t.root, t.nodes[t.root].children[0], t.nodes[t.root].children[1]});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedSubtree);
  }
}

TEST(Conversion, PathNotInGraph) {
  DecompTree t = recognize_sp(gen_disjoint_paths_gap(2, 2));
  EXPECT_THROW(path_to_subtree(t, {0, 3}), Error);
}

TEST(Properties, RandomSpInvariants) {
  Rng rng(101);
  for (int i = 0; i < 40; ++i) {
    Instance inst = random_sp_instance(10 + static_cast<int>(rng.below(40)), 3, rng);
    DecompTree t = recognize_sp(inst);
    // Leaves partition the edges.
    std::vector<int> leaves;
    for (const auto& nd : t.nodes)
      if (nd.kind == SpKind::Leaf) leaves.push_back(nd.edge);
    std::sort(leaves.begin(), leaves.end());
    std::vector<int> all(inst.m());
    std::iota(all.begin(), all.end(), 0);
    EXPECT_EQ(leaves, all);
    // Kinds alternate.
    for (const auto& nd : t.nodes)
      if (nd.parent >= 0 && nd.kind != SpKind::Leaf) EXPECT_NE(nd.kind, t.nodes[nd.parent].kind);
    auto paths = dfs_paths(inst);
    EXPECT_EQ(count_tree_paths(t, 1000000), static_cast<long>(paths.size()));
    ChoiceTree ct = to_choice_tree(t);
    for (const auto& p : paths) {
      FeasibleSubtree sub = path_to_subtree(t, p);
      ASSERT_EQ(subtree_to_path(t, sub), p);
      ASSERT_EQ(subtree_cost(ct, sub), path_costs(inst, p));
    }
  }
}
