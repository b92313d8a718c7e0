#include "robustpath/metatree.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <tuple>

namespace robustpath {

int metatree_height(int n) {
  int c = 0;
  while ((1L << c) < n) ++c;
  return 2 * c + 1;
}

long metatree_logical_size(int n) {
  const int H = metatree_height(n);
  long level = 1, total = 1;
  for (int d = 2; d <= H; ++d) {
    long mult = d % 2 == 0 ? n : 2;
    if (level > LONG_MAX / mult) return LONG_MAX;
    level *= mult;
    if (total > LONG_MAX - level) return LONG_MAX;
    total += level;
  }
  return total;
}

namespace {

class SharedBuilder {
 public:
  SharedBuilder(const Instance& inst, Metatree& mt) : inst_(inst), mt_(mt) {
    for (int e = 0; e < inst.m(); ++e) {
      const Edge& ed = inst.edges[e];
      if (ed.tail == ed.head) continue;
      if (!edge_of_.emplace(std::make_pair(ed.tail, ed.head), e).second)
        throw Error(ErrorCode::ParallelEdges, "metatree leaves need a simple graph; desugar parallel edges first");
    }
  }

  int splitting(int a, int b, int depth) {
    auto key = std::make_tuple(0, a, -1, b, depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    MetaNode node;
    node.kind = MetaKind::Splitting;
    node.a = a;
    node.b = b;
    node.depth = depth;
    if (depth == mt_.height) {
      if (a == b) {
        node.leaf = LeafClass::SelfLoopOK;
      } else if (auto it = edge_of_.find({a, b}); it != edge_of_.end()) {
        node.leaf = LeafClass::Edge;
        node.edge = it->second;
      } else {
        node.leaf = LeafClass::Infeasible;
      }
    } else {
      for (int w = 0; w < inst_.n; ++w) node.children.push_back(merging(a, w, b, depth + 1));
    }
    return store(key, std::move(node));
  }

  int merging(int a, int q, int b, int depth) {
    auto key = std::make_tuple(1, a, q, b, depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    MetaNode node;
    node.kind = MetaKind::Merging;
    node.a = a;
    node.q = q;
    node.b = b;
    node.depth = depth;
    node.children = {splitting(a, q, depth + 1), splitting(q, b, depth + 1)};
    return store(key, std::move(node));
  }

 private:
  int store(const std::tuple<int, int, int, int, int>& key, MetaNode node) {
    int id = static_cast<int>(mt_.shared.size());
    mt_.shared.push_back(std::move(node));
    memo_.emplace(key, id);
    return id;
  }

  const Instance& inst_;
  Metatree& mt_;
  std::map<std::pair<int, int>, int> edge_of_;
  std::map<std::tuple<int, int, int, int, int>, int> memo_;
};

}  // namespace

Metatree build_metatree(const Instance& inst, long cap) {
  validate_instance(inst);
  Metatree mt;
  mt.n = inst.n;
  mt.height = metatree_height(inst.n);
  mt.logical_size = metatree_logical_size(inst.n);
  if (mt.logical_size > cap)
    throw Error(ErrorCode::SizeCapExceeded, "metatree would have " + std::to_string(mt.logical_size) +
                                                " logical nodes, cap is " + std::to_string(cap));
  SharedBuilder sb(inst, mt);
  mt.shared_root = sb.splitting(inst.source, inst.sink, 1);

  ChoiceTree& ct = mt.choice;
  ct = ChoiceTree(inst.k());
  auto make = [&](int shared_id) {
    const MetaNode& node = mt.shared[shared_id];
    NodeKind kind = node.children.empty() ? NodeKind::Leaf
                    : node.kind == MetaKind::Splitting ? NodeKind::Or
                                                       : NodeKind::And;
    int id = ct.add_node(kind);
    mt.logical_to_shared.push_back(shared_id);
    if (node.leaf == LeafClass::Edge) {
      std::vector<Rational> c;
      for (int i = 0; i < inst.k(); ++i) c.push_back(inst.costs[i][node.edge]);
      ct.set_cost(id, std::move(c));
    } else if (node.leaf == LeafClass::Infeasible) {
      ct.set_forbidden(id);
    }
    return id;
  };
  mt.logical_to_shared.reserve(mt.logical_size);
  int root = make(mt.shared_root);
  std::vector<int> stack{root};
  std::vector<int> kids;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    const MetaNode& node = mt.shared[mt.logical_to_shared[v]];
    kids.clear();
    for (int c : node.children) kids.push_back(make(c));
    ct.set_children(v, kids);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  ct.set_root(root);
  ct.finalize();
  return mt;
}

std::optional<Rational> leaf_cost(const Metatree& mt, int logical_leaf, int agent, const Instance& inst) {
  const MetaNode& node = mt.node(logical_leaf);
  if (!node.children.empty()) throw Error(ErrorCode::NotALeaf, "node " + std::to_string(logical_leaf) + " is internal");
  switch (node.leaf) {
    case LeafClass::Edge: return inst.costs[agent][node.edge];
    case LeafClass::Infeasible: return std::nullopt;
    default: return Rational(0);
  }
}

FeasibleSubtree path_to_feasible_subtree(const Metatree& mt, const StPath& p, const Instance& inst) {
  check_path(inst, p);
  if (!is_simple_path(inst, p)) throw Error(ErrorCode::PathNotSimple, "path revisits a vertex");
  std::vector<int> verts{inst.source};
  for (int e : p) verts.push_back(inst.edges[e].head);
  FeasibleSubtree sub;
  const ChoiceTree& ct = mt.choice;
  // (logical splitting node, lo, hi) over verts
  std::vector<std::tuple<int, int, int>> stack{{ct.root(), 0, static_cast<int>(verts.size()) - 1}};
  while (!stack.empty()) {
    auto [v, lo, hi] = stack.back();
    stack.pop_back();
    sub.push_back(v);
    const MetaNode& node = mt.node(v);
    int len = hi - lo;
    if (node.children.empty()) {
      bool ok = (len == 0 && node.leaf == LeafClass::SelfLoopOK) ||
                (len == 1 && node.leaf == LeafClass::Edge && node.edge == p[lo]);
      if (!ok) throw Error(ErrorCode::PathNotRepresentable, "subpath too long for the metatree height");
      continue;
    }
    int mid = lo + len / 2;
    int q = verts[mid];
    int m = ct.child(v, q);
    sub.push_back(m);
    stack.emplace_back(ct.child(m, 1), mid, hi);
    stack.emplace_back(ct.child(m, 0), lo, mid);
  }
  std::sort(sub.begin(), sub.end());
  return sub;
}

std::vector<int> feasible_subtree_walk(const Metatree& mt, const FeasibleSubtree& sub, const Instance& inst) {
  const ChoiceTree& ct = mt.choice;
  check_feasible_subtree(ct, sub);
  std::vector<char> in(ct.size(), 0);
  for (int v : sub) in[v] = 1;
  std::vector<int> walk;
  std::vector<int> stack{ct.root()};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    const MetaNode& node = mt.node(v);
    if (node.children.empty()) {
      if (node.leaf == LeafClass::Edge) walk.push_back(node.edge);
      if (node.leaf == LeafClass::Infeasible) throw Error(ErrorCode::MalformedSubtree, "non-edge leaf selected");
      continue;
    }
    for (int j = ct.num_children(v) - 1; j >= 0; --j)
      if (in[ct.child(v, j)]) stack.push_back(ct.child(v, j));
  }
  int at = inst.source;
  for (int e : walk) {
    if (inst.edges[e].tail != at) throw Error(ErrorCode::MalformedSubtree, "leaf edges do not chain");
    at = inst.edges[e].head;
  }
  if (at != inst.sink || walk.empty()) throw Error(ErrorCode::MalformedSubtree, "walk does not end at the sink");
  return walk;
}

StPath shortcut_walk(const Instance& inst, const std::vector<int>& walk) {
  std::vector<int> where(inst.n, -1);
  StPath path;
  where[inst.source] = 0;
  for (int e : walk) {
    int w = inst.edges[e].head;
    if (where[w] >= 0) {
      while (static_cast<int>(path.size()) > where[w]) {
        where[inst.edges[path.back()].head] = -1;
        path.pop_back();
      }
    } else {
      path.push_back(e);
      where[w] = static_cast<int>(path.size());
    }
  }
  return path;
}

StPath feasible_subtree_to_path(const Metatree& mt, const FeasibleSubtree& sub, const Instance& inst) {
  return shortcut_walk(inst, feasible_subtree_walk(mt, sub, inst));
}

LPModel build_gg_tree_lp(const Metatree& mt, const Rational& gs) { return build_choice_tree_lp(mt.choice, gs, true); }

}  // namespace robustpath
