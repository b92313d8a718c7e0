#pragma once

#include <vector>

#include "robustpath/common.hpp"
#include "robustpath/lp.hpp"

namespace robustpath {

// Decision-type tree shared by decomposition trees, metatrees and the tree-labeling
// unfolding. Or = parallel/splitting (pick one child), And = series/merging (take all).
enum class NodeKind { Leaf, Or, And };

class ChoiceTree {
 public:
  explicit ChoiceTree(int k = 0) : k_(k) {}

  int add_node(NodeKind kind);
  void set_cost(int v, std::vector<Rational> cost);  // size k
  void set_forbidden(int v) { forbidden_[v] = 1; }
  void set_children(int v, const std::vector<int>& children);
  void set_root(int v) { root_ = v; }
  void finalize();  // parents, height, Euler ranges; call after construction

  int k() const { return k_; }
  int size() const { return static_cast<int>(kind_.size()); }
  int root() const { return root_; }
  int height() const { return height_; }
  NodeKind kind(int v) const { return kind_[v]; }
  bool forbidden(int v) const { return forbidden_[v] != 0; }
  int parent(int v) const { return parent_[v]; }
  int depth(int v) const { return depth_[v]; }
  int num_children(int v) const { return child_count_[v]; }
  int child(int v, int j) const { return child_ids_[child_begin_[v] + j]; }
  std::vector<int> children(int v) const;
  bool has_cost(int v) const { return cost_ref_[v] >= 0; }
  const std::vector<Rational>& cost(int v) const;  // zero vector when no cost
  // Preorder entry/exit times; u in subtree(v) iff tin(v) <= tin(u) < tout(v).
  int tin(int v) const { return tin_[v]; }
  int tout(int v) const { return tout_[v]; }
  const std::vector<int>& costed_by_tin() const { return costed_by_tin_; }

 private:
  int k_;
  int root_ = 0;
  int height_ = 0;
  std::vector<NodeKind> kind_;
  std::vector<char> forbidden_;
  std::vector<int> cost_ref_;
  std::vector<std::vector<Rational>> cost_table_;
  std::vector<Rational> zero_;
  std::vector<int> child_begin_, child_count_, child_ids_;
  std::vector<int> parent_, depth_, tin_, tout_;
  std::vector<int> costed_by_tin_;
};

using FeasibleSubtree = std::vector<int>;  // sorted node ids

// Throws MalformedSubtree unless sub holds the root, all children of selected And
// nodes, exactly one child of selected Or nodes, and nothing detached.
void check_feasible_subtree(const ChoiceTree& tree, const FeasibleSubtree& sub);
std::vector<Rational> subtree_cost(const ChoiceTree& tree, const FeasibleSubtree& sub);

// Tree-LP over a choice tree: x_root = 1, Or sums, And equalities, x_v = 0 on forbidden
// nodes, and sum_{u in subtree(v)} f_i(u) x_u <= GS x_v. With per_node = false only the
// root budget is kept (weak variant). Rows whose subtree carries no cost are implied by
// x >= 0 and omitted.
LPModel build_choice_tree_lp(const ChoiceTree& tree, const Rational& gs, bool per_node = true);

std::vector<double> to_doubles(const std::vector<Rational>& x);

}  // namespace robustpath
