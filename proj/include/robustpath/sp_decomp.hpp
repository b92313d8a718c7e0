#pragma once

#include <string>
#include <vector>

#include "robustpath/choice_tree.hpp"
#include "robustpath/instance.hpp"

namespace robustpath {

enum class SpKind { Leaf, Series, Parallel };

struct DecompNode {
  SpKind kind = SpKind::Leaf;
  int edge = -1;              // leaves only
  std::vector<int> children;  // series: path order; parallel: by smallest leaf edge
  int parent = -1;
};

// Node ids are DFS preorder, root = 0. Carries the instance edges and costs it was built from.
struct DecompTree {
  std::vector<DecompNode> nodes;
  int root = 0;
  int height = 0;  // levels; a lone leaf has height 1
  std::vector<Edge> edges;
  std::vector<std::vector<Rational>> costs;

  int k() const { return static_cast<int>(costs.size()); }
  int leaf_of_edge(int e) const;
};

DecompTree recognize_sp(const Instance& inst);

StPath subtree_to_path(const DecompTree& tree, const FeasibleSubtree& sub);
FeasibleSubtree path_to_subtree(const DecompTree& tree, const StPath& p);
void check_decomp_subtree(const DecompTree& tree, const FeasibleSubtree& sub);

// Same node ids: Parallel -> Or, Series -> And, Leaf -> Leaf carrying c_i(e).
ChoiceTree to_choice_tree(const DecompTree& tree);

std::string dump_decomp_tree(const DecompTree& tree);

// Number of s-t paths encoded (series multiplies, parallel adds); saturates at cap.
long count_tree_paths(const DecompTree& tree, long cap);

}  // namespace robustpath
