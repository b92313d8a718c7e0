#include "robustpath/sp_decomp.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace robustpath {

int DecompTree::leaf_of_edge(int e) const {
  for (int v = 0; v < static_cast<int>(nodes.size()); ++v)
    if (nodes[v].kind == SpKind::Leaf && nodes[v].edge == e) return v;
  return -1;
}

namespace {

struct TmpNode {
  SpKind kind;
  int edge;
  int min_leaf;
  std::vector<int> children;
};

struct VirtualEdge {
  int u, v, node;
  bool alive;
};

class Reducer {
 public:
  explicit Reducer(const Instance& inst) : inst_(inst), out_(inst.n), in_(inst.n) {
    for (int e = 0; e < inst.m(); ++e) {
      pool_.push_back({SpKind::Leaf, e, e, {}});
      add_edge(inst.edges[e].tail, inst.edges[e].head, e);
    }
  }

  int run() {
    for (auto& [key, ids] : by_pair_)
      if (ids.size() >= 2) pairs_.push_back(key);
    for (int v = 0; v < inst_.n; ++v) verts_.push_back(v);
    while (!pairs_.empty() || !verts_.empty()) {
      if (!pairs_.empty()) {
        auto key = pairs_.front();
        pairs_.pop_front();
        parallel(key);
      } else {
        int w = verts_.front();
        verts_.pop_front();
        series(w);
      }
    }
    int alive = 0, last = -1;
    for (int id = 0; id < static_cast<int>(ve_.size()); ++id)
      if (ve_[id].alive) {
        ++alive;
        last = id;
      }
    if (alive == 1 && ve_[last].u == inst_.source && ve_[last].v == inst_.sink) return ve_[last].node;
    std::ostringstream why;
    if (alive == 0) {
      why << "graph has no edges";
    } else {
      int witness = -1;
      for (int v = 0; v < inst_.n && witness < 0; ++v)
        if (v != inst_.source && v != inst_.sink && (!in_[v].empty() || !out_[v].empty())) witness = v;
      why << alive << " edges remain after all reductions";
      if (witness >= 0)
        why << "; vertex " << witness << " has in-degree " << in_[witness].size() << " and out-degree "
            << out_[witness].size();
      else
        why << "; terminals joined by a non-reducible structure";
    }
    throw Error(ErrorCode::NotSeriesParallel, why.str());
  }

  std::vector<TmpNode> pool_;

 private:
  void add_edge(int u, int v, int node) {
    int id = static_cast<int>(ve_.size());
    ve_.push_back({u, v, node, true});
    out_[u].insert(id);
    in_[v].insert(id);
    auto& bucket = by_pair_[{u, v}];
    bucket.insert(id);
    if (bucket.size() == 2) pairs_.push_back({u, v});
  }

  void remove_edge(int id) {
    auto& e = ve_[id];
    e.alive = false;
    out_[e.u].erase(id);
    in_[e.v].erase(id);
    by_pair_[{e.u, e.v}].erase(id);
  }

  int combine(SpKind kind, const std::vector<int>& parts) {
    TmpNode node{kind, -1, INT32_MAX, {}};
    for (int p : parts) {
      TmpNode& child = pool_[p];
      if (child.kind == kind) {
        node.children.insert(node.children.end(), child.children.begin(), child.children.end());
        child.children.clear();
      } else {
        node.children.push_back(p);
      }
    }
    for (int c : node.children) node.min_leaf = std::min(node.min_leaf, pool_[c].min_leaf);
    if (kind == SpKind::Parallel)
      std::sort(node.children.begin(), node.children.end(),
                [&](int a, int b) { return pool_[a].min_leaf < pool_[b].min_leaf; });
    pool_.push_back(std::move(node));
    return static_cast<int>(pool_.size()) - 1;
  }

  void parallel(std::pair<int, int> key) {
    auto it = by_pair_.find(key);
    if (it == by_pair_.end() || it->second.size() < 2) return;
    std::vector<int> ids(it->second.begin(), it->second.end());
    std::vector<int> parts;
    for (int id : ids) {
      parts.push_back(ve_[id].node);
      remove_edge(id);
    }
    add_edge(key.first, key.second, combine(SpKind::Parallel, parts));
    verts_.push_back(key.first);
    verts_.push_back(key.second);
  }

  void series(int w) {
    if (w == inst_.source || w == inst_.sink) return;
    if (in_[w].size() != 1 || out_[w].size() != 1) return;
    int a = *in_[w].begin(), b = *out_[w].begin();
    int u = ve_[a].u, v = ve_[b].v;
    if (u == w || v == w) return;
    int na = ve_[a].node, nb = ve_[b].node;
    remove_edge(a);
    remove_edge(b);
    add_edge(u, v, combine(SpKind::Series, {na, nb}));
  }

  const Instance& inst_;
  std::vector<VirtualEdge> ve_;
  std::vector<std::set<int>> out_, in_;
  std::map<std::pair<int, int>, std::set<int>> by_pair_;
  std::deque<std::pair<int, int>> pairs_;
  std::deque<int> verts_;
};

}  // namespace

DecompTree recognize_sp(const Instance& inst) {
  Reducer red(inst);
  int top = red.run();
  DecompTree tree;
  tree.edges = inst.edges;
  tree.costs = inst.costs;
  // Renumber in DFS preorder.
  std::vector<std::pair<int, int>> stack{{top, -1}};
  while (!stack.empty()) {
    auto [tmp, parent] = stack.back();
    stack.pop_back();
    int id = static_cast<int>(tree.nodes.size());
    const TmpNode& t = red.pool_[tmp];
    tree.nodes.push_back({t.kind, t.edge, {}, parent});
    if (parent >= 0) tree.nodes[parent].children.push_back(id);
    for (auto it = t.children.rbegin(); it != t.children.rend(); ++it) stack.emplace_back(*it, id);
  }
  tree.root = 0;
  std::vector<int> depth(tree.nodes.size(), 1);
  tree.height = 0;
  for (int v = 0; v < static_cast<int>(tree.nodes.size()); ++v) {
    if (tree.nodes[v].parent >= 0) depth[v] = depth[tree.nodes[v].parent] + 1;
    tree.height = std::max(tree.height, depth[v]);
  }
  return tree;
}

void check_decomp_subtree(const DecompTree& tree, const FeasibleSubtree& sub) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::MalformedSubtree, msg); };
  const int n = static_cast<int>(tree.nodes.size());
  if (!std::is_sorted(sub.begin(), sub.end()) || std::adjacent_find(sub.begin(), sub.end()) != sub.end())
    fail("node list must be sorted and unique");
  std::vector<char> in(n, 0);
  for (int v : sub) {
    if (v < 0 || v >= n) fail("node id out of range");
    in[v] = 1;
  }
  if (!in[tree.root]) fail("root missing");
  for (int v : sub) {
    const auto& node = tree.nodes[v];
    if (v != tree.root && !in[node.parent]) fail("node " + std::to_string(v) + " detached from its parent");
    int chosen = 0;
    for (int c : node.children) chosen += in[c];
    if (node.kind == SpKind::Series && chosen != static_cast<int>(node.children.size()))
      fail("series node " + std::to_string(v) + " missing children");
    if (node.kind == SpKind::Parallel && chosen != 1)
      fail("parallel node " + std::to_string(v) + " must keep exactly one child");
  }
}

StPath subtree_to_path(const DecompTree& tree, const FeasibleSubtree& sub) {
  check_decomp_subtree(tree, sub);
  std::vector<char> in(tree.nodes.size(), 0);
  for (int v : sub) in[v] = 1;
  StPath path;
  std::vector<int> stack{tree.root};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    const auto& node = tree.nodes[v];
    if (node.kind == SpKind::Leaf) {
      path.push_back(node.edge);
      continue;
    }
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it)
      if (in[*it]) stack.push_back(*it);
  }
  return path;
}

FeasibleSubtree path_to_subtree(const DecompTree& tree, const StPath& p) {
  const int n = static_cast<int>(tree.nodes.size());
  std::vector<char> on_path(tree.edges.size(), 0);
  for (int e : p) {
    if (e < 0 || e >= static_cast<int>(tree.edges.size()))
      throw Error(ErrorCode::PathNotRepresentable, "edge index out of range");
    if (on_path[e]) throw Error(ErrorCode::PathNotRepresentable, "edge repeated");
    on_path[e] = 1;
  }
  std::vector<char> sel(n, 0);
  // Children have larger preorder ids than parents.
  for (int v = n - 1; v >= 0; --v) {
    const auto& node = tree.nodes[v];
    if (node.kind == SpKind::Leaf) {
      sel[v] = on_path[node.edge];
      continue;
    }
    int chosen = 0;
    for (int c : node.children) chosen += sel[c];
    if (node.kind == SpKind::Series) {
      if (chosen != 0 && chosen != static_cast<int>(node.children.size()))
        throw Error(ErrorCode::PathNotRepresentable, "path covers a series node partially");
      sel[v] = chosen > 0;
    } else {
      if (chosen > 1) throw Error(ErrorCode::PathNotRepresentable, "path uses two parallel branches");
      sel[v] = chosen == 1;
    }
  }
  if (!sel[tree.root]) throw Error(ErrorCode::PathNotRepresentable, "path does not reach the root");
  FeasibleSubtree sub;
  for (int v = 0; v < n; ++v)
    if (sel[v]) sub.push_back(v);
  if (subtree_to_path(tree, sub) != p)
    throw Error(ErrorCode::PathNotRepresentable, "edge order differs from the tree's path order");
  return sub;
}

ChoiceTree to_choice_tree(const DecompTree& tree) {
  ChoiceTree ct(tree.k());
  for (const auto& node : tree.nodes) {
    NodeKind kind = node.kind == SpKind::Leaf ? NodeKind::Leaf
                    : node.kind == SpKind::Series ? NodeKind::And
                                                  : NodeKind::Or;
    ct.add_node(kind);
  }
  for (int v = 0; v < static_cast<int>(tree.nodes.size()); ++v) {
    const auto& node = tree.nodes[v];
    ct.set_children(v, node.children);
    if (node.kind == SpKind::Leaf) {
      std::vector<Rational> c;
      for (int i = 0; i < tree.k(); ++i) c.push_back(tree.costs[i][node.edge]);
      ct.set_cost(v, std::move(c));
    }
  }
  ct.set_root(tree.root);
  ct.finalize();
  return ct;
}

std::string dump_decomp_tree(const DecompTree& tree) {
  std::ostringstream out;
  std::vector<std::pair<int, int>> stack{{tree.root, 0}};
  while (!stack.empty()) {
    auto [v, d] = stack.back();
    stack.pop_back();
    const auto& node = tree.nodes[v];
    out << std::string(2 * d, ' ');
    if (node.kind == SpKind::Leaf)
      out << "Leaf e" << node.edge << " (" << tree.edges[node.edge].tail << "->" << tree.edges[node.edge].head << ")";
    else
      out << (node.kind == SpKind::Series ? "Series" : "Parallel");
    out << "\n";
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) stack.emplace_back(*it, d + 1);
  }
  return out.str();
}

long count_tree_paths(const DecompTree& tree, long cap) {
  const int n = static_cast<int>(tree.nodes.size());
  std::vector<long> cnt(n, 0);
  for (int v = n - 1; v >= 0; --v) {
    const auto& node = tree.nodes[v];
    if (node.kind == SpKind::Leaf) {
      cnt[v] = 1;
    } else if (node.kind == SpKind::Series) {
      long prod = 1;
      for (int c : node.children) prod = (prod > cap / std::max(1L, cnt[c])) ? cap + 1 : prod * cnt[c];
      cnt[v] = std::min(prod, cap + 1);
    } else {
      long sum = 0;
      for (int c : node.children) sum = std::min(cap + 1, sum + cnt[c]);
      cnt[v] = sum;
    }
  }
  return cnt[tree.root];
}

}  // namespace robustpath
