#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robustpath/choice_tree.hpp"
#include "robustpath/instance.hpp"

namespace robustpath {

// Rooted binary tree decomposition. Bags are sorted vertex lists.
struct TreeDecomposition {
  std::vector<std::vector<int>> bags;
  std::vector<int> parent;  // -1 at the root
  std::vector<std::vector<int>> children;
  std::vector<int> depth;  // root = 1
  int root = 0;
  int height = 0;  // levels

  int size() const { return static_cast<int>(bags.size()); }
  int width() const;
  bool contains(int node, int vertex) const;
};

inline constexpr long kDefaultLabelCap = 200000;

// Builds children/depth/height from bags and parent pointers (exactly one -1).
TreeDecomposition make_tree_decomposition(std::vector<std::vector<int>> bags, const std::vector<int>& parent);

// Empty when the decomposition is a valid, binary tree decomposition of the underlying
// undirected graph (completeness and connectivity); otherwise a description.
std::optional<std::string> decomposition_problem(const TreeDecomposition& td, const Instance& inst);

// Min-degree elimination, centroid balancing, binarization, then source and sink added to
// every bag. width_cap < 0 means 3 * hint + 4 (unbounded when hint < 0).
TreeDecomposition build_tree_decomposition(const Instance& inst, int width_hint = -1, int width_cap = -1);
int decomposition_height_bound(int nodes);  // 2 floor(log2 N) + 2

std::string dump_tree_decomposition(const TreeDecomposition& td);

// E_v: each edge goes to the highest node whose bag holds both endpoints. Throws EdgeUncovered.
std::vector<std::vector<int>> assign_highest_nodes(const TreeDecomposition& td, const Instance& inst);

// chng follows the order of E_v; conn is indexed by conn_index over the sorted bag.
struct NodeLabel {
  std::vector<char> chng;
  std::vector<char> conn;
  bool operator==(const NodeLabel&) const = default;
};

using LabelAssignment = std::vector<NodeLabel>;  // one per decomposition node

int conn_index(int bag_size, int p, int q);  // local positions, p != q
int label_bits(int bag_size, int edges);

struct TreeLabelingInstance {
  TreeDecomposition td;
  std::vector<std::vector<int>> ev;
  int source = 0, sink = 1;
  std::vector<Edge> edges;
  std::vector<std::vector<Rational>> costs;  // normalized, k x m
  std::vector<char> allowed;                 // edges that may be chosen (not truncated, not loops)

  int k() const { return static_cast<int>(costs.size()); }
};

// gs: divide costs by gs and forbid edges with some cost above it. nullopt keeps raw costs.
TreeLabelingInstance make_tree_labeling_instance(const Instance& inst, const TreeDecomposition& td,
                                                 const std::optional<Rational>& gs = std::nullopt);

// All 2^bits labels of node v in counting order; throws LabelSpaceCapExceeded above cap.
std::vector<NodeLabel> enumerate_labels(const TreeLabelingInstance& tli, int v, long cap = kDefaultLabelCap);
NodeLabel decode_label(const TreeLabelingInstance& tli, int v, uint64_t bits);

// conn of v implied by its chosen edges and its children's labels (closure restricted to bag(v)).
std::vector<char> derive_conn(const TreeLabelingInstance& tli, int v, const std::vector<char>& chng,
                              const std::vector<const NodeLabel*>& child_labels);

// C1 (chosen edge => conn), C2 (conn equals the derived closure), C3 at the root.
bool is_consistent_triple(const TreeLabelingInstance& tli, int v, const NodeLabel& lv,
                          const std::vector<const NodeLabel*>& child_labels);
bool is_consistent_labeling(const TreeLabelingInstance& tli, const LabelAssignment& la);

struct Triple {
  int v_label = 0;
  int u_label = -1;
  int w_label = -1;
};
// Index triples into the given label lists (u, w absent for missing children).
std::vector<Triple> consistent_triples(const TreeLabelingInstance& tli, int v, const std::vector<NodeLabel>& lv,
                                       const std::vector<NodeLabel>& lu, const std::vector<NodeLabel>& lw,
                                       long cap = kDefaultLabelCap);

Rational label_cost(const TreeLabelingInstance& tli, int v, const NodeLabel& l, int agent);
std::vector<Rational> labeling_cost(const TreeLabelingInstance& tli, const LabelAssignment& la);

// Unfolded AND/OR tree of all consistent labelings: Or nodes fix a decomposition node and
// its conn relation on the interface with its parent, And nodes fix a full label.
struct LabelingTree {
  ChoiceTree tree;
  struct Choice {
    int td_node = -1;
    uint64_t chng = 0;  // bit j = E_v[j] chosen
    uint64_t conn = 0;  // bit p * b + q over the local bag
  };
  std::vector<Choice> choice;  // per tree node; td_node = -1 on Or nodes
  long logical_size = 0;
};

LabelingTree build_labeling_tree(const TreeLabelingInstance& tli, long cap = kDefaultLabelCap);
LabelAssignment labeling_from_subtree(const TreeLabelingInstance& tli, const LabelingTree& lt,
                                      const FeasibleSubtree& sub);

// Tree-LP with budget 1 on the unfolding plus dependent rounding. Throws Infeasible.
LabelAssignment solve_tree_labeling(const TreeLabelingInstance& tli, uint64_t seed, long cap = kDefaultLabelCap);

// Exhaustive over chosen-edge sets (conn forced by C2). Returns a labeling with minimal
// max_i f_i, first in enumeration order. Throws CapExceeded above 2^cap_bits sets.
std::optional<LabelAssignment> brute_force_tree_labeling(const TreeLabelingInstance& tli, int cap_bits = 22);

std::vector<int> chosen_edges(const TreeLabelingInstance& tli, const LabelAssignment& la);
// BFS over chosen edges (smallest edge index first). Throws NoPathInSubgraph.
StPath labeling_to_path(const TreeLabelingInstance& tli, const LabelAssignment& la);
LabelAssignment path_to_labeling(const TreeLabelingInstance& tli, const StPath& p);

}  // namespace robustpath
