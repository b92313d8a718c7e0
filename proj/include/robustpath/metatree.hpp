#pragma once

#include <optional>
#include <vector>

#include "robustpath/choice_tree.hpp"
#include "robustpath/instance.hpp"
#include "robustpath/lp.hpp"

namespace robustpath {

enum class MetaKind { Splitting, Merging };
enum class LeafClass { Internal, Edge, SelfLoopOK, Infeasible };

// One shared (hash-consed) node: label a-b for splitting, a-q-b for merging.
struct MetaNode {
  MetaKind kind = MetaKind::Splitting;
  int a = 0, q = -1, b = 0;
  int depth = 1;  // level, root = 1
  std::vector<int> children;  // shared node ids
  LeafClass leaf = LeafClass::Internal;
  int edge = -1;
};

inline constexpr long kDefaultMetatreeCap = 5000000;

// Logical nodes (the unshared tree) are ids of `choice`; logical_to_shared maps them back.
struct Metatree {
  int n = 0;
  int height = 0;  // 2 ceil(log2 n) + 1
  std::vector<MetaNode> shared;
  int shared_root = 0;
  std::vector<int> logical_to_shared;
  ChoiceTree choice;
  long logical_size = 0;

  const MetaNode& node(int logical) const { return shared[logical_to_shared[logical]]; }
};

int metatree_height(int n);
long metatree_logical_size(int n);  // saturates at LONG_MAX
Metatree build_metatree(const Instance& inst, long cap = kDefaultMetatreeCap);

// nullopt is the Infeasible sentinel (non-edge leaf). Throws NotALeaf for internal nodes.
std::optional<Rational> leaf_cost(const Metatree& mt, int logical_leaf, int agent, const Instance& inst);

FeasibleSubtree path_to_feasible_subtree(const Metatree& mt, const StPath& p, const Instance& inst);
StPath feasible_subtree_to_path(const Metatree& mt, const FeasibleSubtree& sub, const Instance& inst);
// In-order edge walk of a subtree before shortcutting.
std::vector<int> feasible_subtree_walk(const Metatree& mt, const FeasibleSubtree& sub, const Instance& inst);
// Removes cycles from an s-t walk by cutting back to the first visit of a repeated vertex.
StPath shortcut_walk(const Instance& inst, const std::vector<int>& walk);

LPModel build_gg_tree_lp(const Metatree& mt, const Rational& gs);

}  // namespace robustpath
