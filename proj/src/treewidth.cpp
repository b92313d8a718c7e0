#include "robustpath/treewidth.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "robustpath/rounding.hpp"

namespace robustpath {

int TreeDecomposition::width() const {
  int w = 0;
  for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()));
  return w - 1;
}

bool TreeDecomposition::contains(int node, int vertex) const {
  return std::binary_search(bags[node].begin(), bags[node].end(), vertex);
}

TreeDecomposition make_tree_decomposition(std::vector<std::vector<int>> bags, const std::vector<int>& parent) {
  if (bags.size() != parent.size() || bags.empty())
    throw Error(ErrorCode::ValidationError, "bags and parent pointers must be non-empty and of equal length");
  TreeDecomposition td;
  const int n = static_cast<int>(bags.size());
  for (auto& b : bags) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  td.bags = std::move(bags);
  td.parent = parent;
  td.children.assign(n, {});
  int roots = 0;
  for (int v = 0; v < n; ++v) {
    if (parent[v] < 0) {
      td.root = v;
      ++roots;
    } else if (parent[v] >= n) {
      throw Error(ErrorCode::ValidationError, "parent pointer out of range");
    } else {
      td.children[parent[v]].push_back(v);
    }
  }
  if (roots != 1) throw Error(ErrorCode::ValidationError, "decomposition needs exactly one root");
  td.depth.assign(n, 0);
  td.depth[td.root] = 1;
  std::vector<int> order{td.root};
  for (size_t i = 0; i < order.size(); ++i)
    for (int c : td.children[order[i]]) {
      td.depth[c] = td.depth[order[i]] + 1;
      order.push_back(c);
    }
  if (static_cast<int>(order.size()) != n) throw Error(ErrorCode::ValidationError, "parent pointers contain a cycle");
  td.height = *std::max_element(td.depth.begin(), td.depth.end());
  return td;
}

std::optional<std::string> decomposition_problem(const TreeDecomposition& td, const Instance& inst) {
  const int N = td.size();
  for (int v = 0; v < N; ++v) {
    if (td.children[v].size() > 2) return "node " + std::to_string(v) + " has more than two children";
    for (int x : td.bags[v])
      if (x < 0 || x >= inst.n) return "node " + std::to_string(v) + " holds an unknown vertex";
  }
  for (int e = 0; e < inst.m(); ++e) {
    const Edge& ed = inst.edges[e];
    bool found = false;
    for (int v = 0; v < N && !found; ++v) found = td.contains(v, ed.tail) && td.contains(v, ed.head);
    if (!found) return "edge " + std::to_string(e) + " is not contained in any bag";
  }
  for (int x = 0; x < inst.n; ++x) {
    int tops = 0;
    for (int v = 0; v < N; ++v)
      if (td.contains(v, x) && (td.parent[v] < 0 || !td.contains(td.parent[v], x))) ++tops;
    if (tops > 1) return "bags holding vertex " + std::to_string(x) + " are not connected";
  }
  return std::nullopt;
}

int decomposition_height_bound(int nodes) {
  int lg = 0;
  while ((2L << lg) <= nodes) ++lg;
  return 2 * lg + 2;
}

namespace {

// Unrooted tree over bags with contraction and degree splitting.
struct BagTree {
  std::vector<std::vector<int>> bags;
  std::vector<std::set<int>> adj;
  std::vector<char> alive;

  int add(std::vector<int> bag) {
    bags.push_back(std::move(bag));
    adj.emplace_back();
    alive.push_back(1);
    return static_cast<int>(bags.size()) - 1;
  }
  void link(int a, int b) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  void unlink(int a, int b) {
    adj[a].erase(b);
    adj[b].erase(a);
  }
  // Folds b into a; a keeps its bag.
  void absorb(int a, int b) {
    std::vector<int> nb(adj[b].begin(), adj[b].end());
    for (int c : nb) {
      unlink(b, c);
      if (c != a) link(a, c);
    }
    alive[b] = 0;
  }
};

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<int> merge_sorted(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

BagTree elimination_tree(const Instance& inst) {
  std::vector<std::set<int>> nb(inst.n);
  std::vector<char> used(inst.n, 0);
  for (const Edge& e : inst.edges) {
    used[e.tail] = used[e.head] = 1;
    if (e.tail == e.head) continue;
    nb[e.tail].insert(e.head);
    nb[e.head].insert(e.tail);
  }
  BagTree bt;
  std::vector<int> remaining;
  for (int v = 0; v < inst.n; ++v)
    if (used[v]) remaining.push_back(v);
  if (remaining.empty()) {
    bt.add({});
    return bt;
  }
  auto fill_of = [&](int v) {
    long fill = 0;
    for (auto a = nb[v].begin(); a != nb[v].end(); ++a)
      for (auto b = std::next(a); b != nb[v].end(); ++b)
        if (!nb[*a].count(*b)) ++fill;
    return fill;
  };
  std::vector<int> pos(inst.n, -1), node_of(inst.n, -1), order;
  std::vector<std::vector<int>> later(inst.n);
  while (!remaining.empty()) {
    int best = -1;
    size_t best_deg = 0;
    long best_fill = 0;
    for (int v : remaining) {
      size_t d = nb[v].size();
      if (best >= 0 && d > best_deg) continue;
      long f = fill_of(v);
      if (best < 0 || d < best_deg || f < best_fill) {
        best = v;
        best_deg = d;
        best_fill = f;
      }
    }
    int v = best;
    std::vector<int> bag{v};
    bag.insert(bag.end(), nb[v].begin(), nb[v].end());
    std::sort(bag.begin(), bag.end());
    node_of[v] = bt.add(bag);
    later[v].assign(nb[v].begin(), nb[v].end());
    pos[v] = static_cast<int>(order.size());
    order.push_back(v);
    for (int a : nb[v])
      for (int b : nb[v])
        if (a != b) nb[a].insert(b);
    for (int a : nb[v]) nb[a].erase(v);
    nb[v].clear();
    remaining.erase(std::find(remaining.begin(), remaining.end(), v));
  }
  int prev_root = -1;
  for (int v : order) {
    int parent = -1;
    for (int w : later[v])
      if (parent < 0 || pos[w] < pos[parent]) parent = w;
    if (parent >= 0) {
      bt.link(node_of[v], node_of[parent]);
    } else {
      // Separate components hang off each other; their vertex sets are disjoint.
      if (prev_root >= 0) bt.link(node_of[v], node_of[prev_root]);
      prev_root = v;
    }
  }
  return bt;
}

void contract_subsets(BagTree& bt) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < static_cast<int>(bt.bags.size()); ++a) {
      if (!bt.alive[a]) continue;
      for (int b : std::vector<int>(bt.adj[a].begin(), bt.adj[a].end()))
        if (subset(bt.bags[b], bt.bags[a])) {
          bt.absorb(a, b);
          changed = true;
        }
    }
  }
}

void split_degrees(BagTree& bt) {
  for (int a = 0; a < static_cast<int>(bt.bags.size()); ++a) {
    while (bt.alive[a] && bt.adj[a].size() > 3) {
      int copy = bt.add(bt.bags[a]);
      std::vector<int> nb(bt.adj[a].begin(), bt.adj[a].end());
      for (size_t j = 2; j < nb.size(); ++j) {
        bt.unlink(a, nb[j]);
        bt.link(copy, nb[j]);
      }
      bt.link(a, copy);
    }
  }
}

struct Balancer {
  const BagTree& bt;
  std::vector<int> total;  // bags holding each vertex
  std::vector<std::vector<int>> out_bags;
  std::vector<int> out_parent;

  Balancer(const BagTree& t, int n) : bt(t), total(n, 0) {
    for (size_t a = 0; a < t.bags.size(); ++a)
      if (t.alive[a])
        for (int x : t.bags[a]) ++total[x];
  }

  void build(const std::vector<int>& frag, int parent) {
    std::set<int> in(frag.begin(), frag.end());
    // Subtree sizes from frag[0] to find a centroid.
    std::map<int, int> par, sz;
    std::vector<int> order{frag[0]};
    par[frag[0]] = -1;
    for (size_t i = 0; i < order.size(); ++i)
      for (int c : bt.adj[order[i]])
        if (in.count(c) && c != par[order[i]]) {
          par[c] = order[i];
          order.push_back(c);
        }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      sz[*it] += 1;
      if (par[*it] >= 0) sz[par[*it]] += sz[*it];
    }
    const int F = static_cast<int>(frag.size());
    int centroid = frag[0];
    for (int a : order) {
      int worst = F - sz[a];
      for (int c : bt.adj[a])
        if (in.count(c) && c != par[a]) worst = std::max(worst, sz[c]);
      if (2 * worst <= F) {
        centroid = a;
        break;
      }
    }
    std::map<int, int> inside;
    for (int a : frag)
      for (int x : bt.bags[a]) ++inside[x];
    std::vector<int> boundary;
    for (auto [x, cnt] : inside)
      if (cnt < total[x]) boundary.push_back(x);
    int id = static_cast<int>(out_bags.size());
    out_bags.push_back(merge_sorted(bt.bags[centroid], boundary));
    out_parent.push_back(parent);
    for (int c : bt.adj[centroid]) {
      if (!in.count(c)) continue;
      std::vector<int> part{c};
      std::set<int> seen{centroid, c};
      for (size_t i = 0; i < part.size(); ++i)
        for (int d : bt.adj[part[i]])
          if (in.count(d) && !seen.count(d)) {
            seen.insert(d);
            part.push_back(d);
          }
      std::sort(part.begin(), part.end());
      build(part, id);
    }
  }
};

}  // namespace

TreeDecomposition build_tree_decomposition(const Instance& inst, int width_hint, int width_cap) {
  validate_instance(inst);
  BagTree bt = elimination_tree(inst);
  contract_subsets(bt);
  split_degrees(bt);
  std::vector<int> live;
  for (int a = 0; a < static_cast<int>(bt.bags.size()); ++a)
    if (bt.alive[a]) live.push_back(a);
  Balancer bal(bt, inst.n);
  bal.build(live, -1);

  // Binarize: a node with three children passes the last two to a copy of itself.
  std::vector<std::vector<int>> bags = bal.out_bags;
  std::vector<int> parent = bal.out_parent;
  std::vector<std::vector<int>> kids(bags.size());
  for (int v = 0; v < static_cast<int>(parent.size()); ++v)
    if (parent[v] >= 0) kids[parent[v]].push_back(v);
  for (int v = 0; v < static_cast<int>(bags.size()); ++v) {
    if (kids[v].size() <= 2) continue;
    int copy = static_cast<int>(bags.size());
    bags.push_back(bags[v]);
    parent.push_back(v);
    kids.emplace_back(kids[v].begin() + 1, kids[v].end());
    for (int c : kids[copy]) parent[c] = copy;
    kids[v] = {kids[v][0], copy};
  }
  for (auto& b : bags) {
    b.push_back(inst.source);
    b.push_back(inst.sink);
  }
  TreeDecomposition td = make_tree_decomposition(std::move(bags), parent);
  if (width_cap < 0 && width_hint >= 0) width_cap = 3 * width_hint + 4;
  if (width_cap >= 0 && td.width() > width_cap)
    throw Error(ErrorCode::WidthCapExceeded,
                "decomposition width " + std::to_string(td.width()) + " exceeds cap " + std::to_string(width_cap));
  return td;
}

std::string dump_tree_decomposition(const TreeDecomposition& td) {
  std::ostringstream out;
  out << "width " << td.width() << " height " << td.height << " nodes " << td.size() << "\n";
  for (int v = 0; v < td.size(); ++v) {
    out << "node " << v << " parent " << td.parent[v] << " bag";
    for (int x : td.bags[v]) out << " " << x;
    out << "\n";
  }
  return out.str();
}

std::vector<std::vector<int>> assign_highest_nodes(const TreeDecomposition& td, const Instance& inst) {
  std::vector<std::vector<int>> ev(td.size());
  for (int e = 0; e < inst.m(); ++e) {
    const Edge& ed = inst.edges[e];
    int best = -1;
    for (int v = 0; v < td.size(); ++v)
      if (td.contains(v, ed.tail) && td.contains(v, ed.head) && (best < 0 || td.depth[v] < td.depth[best])) best = v;
    if (best < 0) throw Error(ErrorCode::EdgeUncovered, "edge " + std::to_string(e) + " is in no bag");
    ev[best].push_back(e);
  }
  return ev;
}

int conn_index(int bag_size, int p, int q) { return p * (bag_size - 1) + (q < p ? q : q - 1); }

int label_bits(int bag_size, int edges) { return edges + bag_size * (bag_size - 1); }

TreeLabelingInstance make_tree_labeling_instance(const Instance& inst, const TreeDecomposition& td,
                                                 const std::optional<Rational>& gs) {
  TreeLabelingInstance tli;
  tli.td = td;
  tli.ev = assign_highest_nodes(td, inst);
  tli.source = inst.source;
  tli.sink = inst.sink;
  tli.edges = inst.edges;
  tli.costs = inst.costs;
  tli.allowed.assign(inst.m(), 1);
  for (int e = 0; e < inst.m(); ++e) {
    if (inst.edges[e].tail == inst.edges[e].head) tli.allowed[e] = 0;
    if (gs)
      for (int i = 0; i < inst.k(); ++i)
        if (inst.costs[i][e] > *gs) tli.allowed[e] = 0;
  }
  if (gs)
    for (auto& row : tli.costs)
      for (auto& c : row) c = *gs > 0 ? Rational(c / *gs) : Rational(0);
  return tli;
}

NodeLabel decode_label(const TreeLabelingInstance& tli, int v, uint64_t bits) {
  NodeLabel l;
  const int b = static_cast<int>(tli.td.bags[v].size());
  const int ne = static_cast<int>(tli.ev[v].size());
  for (int j = 0; j < ne; ++j) l.chng.push_back((bits >> j) & 1);
  for (int j = 0; j < b * (b - 1); ++j) l.conn.push_back((bits >> (ne + j)) & 1);
  return l;
}

std::vector<NodeLabel> enumerate_labels(const TreeLabelingInstance& tli, int v, long cap) {
  const int bits = label_bits(static_cast<int>(tli.td.bags[v].size()), static_cast<int>(tli.ev[v].size()));
  if (bits > 62 || (1L << bits) > cap)
    throw Error(ErrorCode::LabelSpaceCapExceeded,
                "node " + std::to_string(v) + " has 2^" + std::to_string(bits) + " labels, cap " + std::to_string(cap));
  std::vector<NodeLabel> out;
  for (uint64_t x = 0; x < (uint64_t{1} << bits); ++x) out.push_back(decode_label(tli, v, x));
  return out;
}

std::vector<char> derive_conn(const TreeLabelingInstance& tli, int v, const std::vector<char>& chng,
                              const std::vector<const NodeLabel*>& child_labels) {
  const auto& td = tli.td;
  std::vector<int> verts = td.bags[v];
  for (int c : td.children[v]) verts = merge_sorted(verts, td.bags[c]);
  const int V = static_cast<int>(verts.size());
  auto local = [&](int x) { return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), x) - verts.begin()); };
  std::vector<std::vector<char>> reach(V, std::vector<char>(V, 0));
  for (size_t j = 0; j < tli.ev[v].size(); ++j) {
    if (!chng[j]) continue;
    const Edge& ed = tli.edges[tli.ev[v][j]];
    if (ed.tail != ed.head) reach[local(ed.tail)][local(ed.head)] = 1;
  }
  for (size_t ci = 0; ci < td.children[v].size(); ++ci) {
    const auto& bag = td.bags[td.children[v][ci]];
    const int b = static_cast<int>(bag.size());
    for (int p = 0; p < b; ++p)
      for (int q = 0; q < b; ++q)
        if (p != q && child_labels[ci]->conn[conn_index(b, p, q)]) reach[local(bag[p])][local(bag[q])] = 1;
  }
  for (int m = 0; m < V; ++m)
    for (int i = 0; i < V; ++i)
      if (reach[i][m])
        for (int j = 0; j < V; ++j)
          if (reach[m][j]) reach[i][j] = 1;
  const auto& bag = td.bags[v];
  const int b = static_cast<int>(bag.size());
  std::vector<char> conn(b * (b - 1), 0);
  for (int p = 0; p < b; ++p)
    for (int q = 0; q < b; ++q)
      if (p != q) conn[conn_index(b, p, q)] = reach[local(bag[p])][local(bag[q])];
  return conn;
}

bool is_consistent_triple(const TreeLabelingInstance& tli, int v, const NodeLabel& lv,
                          const std::vector<const NodeLabel*>& child_labels) {
  const auto& td = tli.td;
  const auto& bag = td.bags[v];
  const int b = static_cast<int>(bag.size());
  if (lv.chng.size() != tli.ev[v].size() || static_cast<int>(lv.conn.size()) != b * (b - 1)) return false;
  if (child_labels.size() != td.children[v].size()) return false;
  for (size_t ci = 0; ci < child_labels.size(); ++ci) {
    int cb = static_cast<int>(td.bags[td.children[v][ci]].size());
    if (!child_labels[ci] || static_cast<int>(child_labels[ci]->conn.size()) != cb * (cb - 1)) return false;
  }
  auto pos = [&](int x) { return static_cast<int>(std::lower_bound(bag.begin(), bag.end(), x) - bag.begin()); };
  for (size_t j = 0; j < tli.ev[v].size(); ++j) {
    const Edge& ed = tli.edges[tli.ev[v][j]];
    if (lv.chng[j] && ed.tail != ed.head && !lv.conn[conn_index(b, pos(ed.tail), pos(ed.head))]) return false;
  }
  if (derive_conn(tli, v, lv.chng, child_labels) != lv.conn) return false;
  if (v == td.root) {
    if (!td.contains(v, tli.source) || !td.contains(v, tli.sink)) return false;
    if (!lv.conn[conn_index(b, pos(tli.source), pos(tli.sink))]) return false;
  }
  return true;
}

bool is_consistent_labeling(const TreeLabelingInstance& tli, const LabelAssignment& la) {
  if (static_cast<int>(la.size()) != tli.td.size()) return false;
  for (int v = 0; v < tli.td.size(); ++v) {
    std::vector<const NodeLabel*> kids;
    for (int c : tli.td.children[v]) kids.push_back(&la[c]);
    if (!is_consistent_triple(tli, v, la[v], kids)) return false;
  }
  return true;
}

std::vector<Triple> consistent_triples(const TreeLabelingInstance& tli, int v, const std::vector<NodeLabel>& lv,
                                       const std::vector<NodeLabel>& lu, const std::vector<NodeLabel>& lw, long cap) {
  const int nc = static_cast<int>(tli.td.children[v].size());
  long nu = nc >= 1 ? static_cast<long>(lu.size()) : 1;
  long nw = nc >= 2 ? static_cast<long>(lw.size()) : 1;
  long total = static_cast<long>(lv.size());
  for (long f : {nu, nw}) total = (f != 0 && total > LONG_MAX / f) ? LONG_MAX : total * f;
  if (total > cap) throw Error(ErrorCode::LabelSpaceCapExceeded, "triple space " + std::to_string(total) + " over cap");
  std::vector<Triple> out;
  for (long a = 0; a < static_cast<long>(lv.size()); ++a)
    for (long b = 0; b < nu; ++b)
      for (long c = 0; c < nw; ++c) {
        std::vector<const NodeLabel*> kids;
        if (nc >= 1) kids.push_back(&lu[b]);
        if (nc >= 2) kids.push_back(&lw[c]);
        if (is_consistent_triple(tli, v, lv[a], kids))
          out.push_back({static_cast<int>(a), nc >= 1 ? static_cast<int>(b) : -1, nc >= 2 ? static_cast<int>(c) : -1});
      }
  return out;
}

Rational label_cost(const TreeLabelingInstance& tli, int v, const NodeLabel& l, int agent) {
  Rational sum = 0;
  for (size_t j = 0; j < tli.ev[v].size(); ++j)
    if (l.chng[j]) sum += tli.costs[agent][tli.ev[v][j]];
  return sum;
}

std::vector<Rational> labeling_cost(const TreeLabelingInstance& tli, const LabelAssignment& la) {
  std::vector<Rational> out(tli.k(), 0);
  for (int v = 0; v < tli.td.size(); ++v)
    for (int i = 0; i < tli.k(); ++i) out[i] += label_cost(tli, v, la[v], i);
  return out;
}

namespace {

constexpr int kMaxBitmaskBag = 8;

struct Option {
  uint64_t chng = 0;
  uint64_t conn = 0;
  int child_state[2] = {-1, -1};
  int state = -1;
};

struct NodeTable {
  int b = 0;
  std::vector<int> iface;      // local positions shared with the parent
  uint64_t iface_mask = 0;     // bits p * b + q with p, q in iface
  std::map<uint64_t, int> state_of;
  std::vector<uint64_t> states;
  std::vector<Option> options;
  std::vector<std::vector<int>> options_of_state;
};

uint64_t pair_bit(int b, int p, int q) { return uint64_t{1} << (p * b + q); }

}  // namespace

LabelingTree build_labeling_tree(const TreeLabelingInstance& tli, long cap) {
  const auto& td = tli.td;
  const int N = td.size();
  std::vector<NodeTable> tab(N);
  std::vector<int> order{td.root};
  for (size_t i = 0; i < order.size(); ++i)
    for (int c : td.children[order[i]]) order.push_back(c);

  for (int v = 0; v < N; ++v) {
    const auto& bag = td.bags[v];
    NodeTable& t = tab[v];
    t.b = static_cast<int>(bag.size());
    if (t.b > kMaxBitmaskBag)
      throw Error(ErrorCode::LabelSpaceCapExceeded, "bag of node " + std::to_string(v) + " has " +
                                                        std::to_string(t.b) + " vertices; at most 8 supported");
    for (int p = 0; p < t.b; ++p) {
      bool shared = td.parent[v] >= 0 ? td.contains(td.parent[v], bag[p]) : (bag[p] == tli.source || bag[p] == tli.sink);
      if (shared) t.iface.push_back(p);
    }
    for (int p : t.iface)
      for (int q : t.iface)
        if (p != q) t.iface_mask |= pair_bit(t.b, p, q);
  }

  // Bottom-up: realizable interface states and the full labels producing them.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    NodeTable& t = tab[v];
    const auto& bag = td.bags[v];
    auto pos = [&](int x) { return static_cast<int>(std::lower_bound(bag.begin(), bag.end(), x) - bag.begin()); };
    std::vector<int> free_edges;
    for (size_t j = 0; j < tli.ev[v].size(); ++j)
      if (tli.allowed[tli.ev[v][j]]) free_edges.push_back(static_cast<int>(j));
    if (free_edges.size() > 30)
      throw Error(ErrorCode::LabelSpaceCapExceeded, "node " + std::to_string(v) + " owns too many edges");
    // Child states as adjacency rows over this bag.
    std::vector<std::vector<std::vector<uint8_t>>> child_rows;
    std::vector<int> counts;
    for (int c : td.children[v]) {
      const NodeTable& ct = tab[c];
      const auto& cbag = td.bags[c];
      std::vector<std::vector<uint8_t>> rows_per_state;
      for (uint64_t key : ct.states) {
        std::vector<uint8_t> rows(t.b, 0);
        for (int p : ct.iface)
          for (int q : ct.iface)
            if (p != q && (key & pair_bit(ct.b, p, q))) rows[pos(cbag[p])] |= uint8_t(1u << pos(cbag[q]));
        rows_per_state.push_back(std::move(rows));
      }
      counts.push_back(static_cast<int>(ct.states.size()));
      child_rows.push_back(std::move(rows_per_state));
    }
    long combos = 1L << free_edges.size();
    for (int cnt : counts) combos = combos > cap ? combos : combos * cnt;
    if (combos > cap)
      throw Error(ErrorCode::LabelSpaceCapExceeded,
                  "node " + std::to_string(v) + " has over " + std::to_string(cap) + " label combinations");
    const int nc = static_cast<int>(counts.size());
    const int c0 = nc >= 1 ? counts[0] : 1, c1 = nc >= 2 ? counts[1] : 1;
    for (uint64_t sub = 0; sub < (uint64_t{1} << free_edges.size()); ++sub) {
      uint64_t chng = 0;
      std::vector<uint8_t> base(t.b, 0);
      for (size_t j = 0; j < free_edges.size(); ++j)
        if ((sub >> j) & 1) {
          chng |= uint64_t{1} << free_edges[j];
          const Edge& ed = tli.edges[tli.ev[v][free_edges[j]]];
          base[pos(ed.tail)] |= uint8_t(1u << pos(ed.head));
        }
      for (int s0 = 0; s0 < c0; ++s0)
        for (int s1 = 0; s1 < c1; ++s1) {
          std::vector<uint8_t> rows = base;
          for (int p = 0; p < t.b; ++p) {
            if (nc >= 1) rows[p] |= child_rows[0][s0][p];
            if (nc >= 2) rows[p] |= child_rows[1][s1][p];
          }
          for (int m = 0; m < t.b; ++m)
            for (int p = 0; p < t.b; ++p)
              if ((rows[p] >> m) & 1) rows[p] |= rows[m];
          uint64_t conn = 0;
          for (int p = 0; p < t.b; ++p)
            for (int q = 0; q < t.b; ++q)
              if (p != q && ((rows[p] >> q) & 1)) conn |= pair_bit(t.b, p, q);
          uint64_t key = conn & t.iface_mask;
          auto [sit, fresh] = t.state_of.emplace(key, static_cast<int>(t.states.size()));
          if (fresh) {
            t.states.push_back(key);
            t.options_of_state.emplace_back();
          }
          Option o;
          o.chng = chng;
          o.conn = conn;
          o.child_state[0] = nc >= 1 ? s0 : -1;
          o.child_state[1] = nc >= 2 ? s1 : -1;
          o.state = sit->second;
          t.options_of_state[o.state].push_back(static_cast<int>(t.options.size()));
          t.options.push_back(o);
        }
    }
  }

  // Root states with conn(source, sink) = 1.
  const NodeTable& rt = tab[td.root];
  const auto& rbag = td.bags[td.root];
  auto rpos = [&](int x) { return static_cast<int>(std::lower_bound(rbag.begin(), rbag.end(), x) - rbag.begin()); };
  if (!td.contains(td.root, tli.source) || !td.contains(td.root, tli.sink))
    throw Error(ErrorCode::ValidationError, "root bag must hold the source and the sink");
  const uint64_t st_bit = pair_bit(rt.b, rpos(tli.source), rpos(tli.sink));
  std::vector<int> accepted;
  for (int s = 0; s < static_cast<int>(rt.states.size()); ++s)
    if (rt.states[s] & st_bit) accepted.push_back(s);
  if (accepted.empty()) throw Error(ErrorCode::Infeasible, "no consistent labeling connects source and sink");

  // Logical size of the unfolding, saturating above cap.
  std::vector<std::vector<long>> size(N);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    const NodeTable& t = tab[v];
    size[v].assign(t.states.size(), 1);
    for (int s = 0; s < static_cast<int>(t.states.size()); ++s) {
      long total = 1;
      for (int oi : t.options_of_state[s]) {
        total += 1;
        for (int ci = 0; ci < static_cast<int>(td.children[v].size()); ++ci)
          total += size[td.children[v][ci]][t.options[oi].child_state[ci]];
        if (total > cap) break;
      }
      size[v][s] = std::min(total, cap + 1);
    }
  }
  long logical = 1;
  for (int s : accepted) logical = std::min(cap + 1, logical + size[td.root][s] - 1);
  if (logical > cap)
    throw Error(ErrorCode::LabelSpaceCapExceeded, "labeling unfolding exceeds " + std::to_string(cap) + " nodes");

  LabelingTree lt;
  lt.tree = ChoiceTree(tli.k());
  lt.logical_size = logical;
  ChoiceTree& ct = lt.tree;
  auto add = [&](NodeKind kind, LabelingTree::Choice c) {
    lt.choice.push_back(c);
    return ct.add_node(kind);
  };
  std::function<int(int, int)> make_option;
  std::function<int(int, int)> make_state = [&](int v, int s) {
    int id = add(NodeKind::Or, {});
    std::vector<int> kids;
    for (int oi : tab[v].options_of_state[s]) kids.push_back(make_option(v, oi));
    ct.set_children(id, kids);
    return id;
  };
  make_option = [&](int v, int oi) {
    const Option& o = tab[v].options[oi];
    const bool leaf = td.children[v].empty();
    int id = add(leaf ? NodeKind::Leaf : NodeKind::And, {v, o.chng, o.conn});
    std::vector<Rational> cost(tli.k(), 0);
    for (size_t j = 0; j < tli.ev[v].size(); ++j)
      if ((o.chng >> j) & 1)
        for (int i = 0; i < tli.k(); ++i) cost[i] += tli.costs[i][tli.ev[v][j]];
    ct.set_cost(id, std::move(cost));
    std::vector<int> kids;
    for (int ci = 0; ci < static_cast<int>(td.children[v].size()); ++ci)
      kids.push_back(make_state(td.children[v][ci], o.child_state[ci]));
    ct.set_children(id, kids);
    return id;
  };
  int root = add(NodeKind::Or, {});
  std::vector<int> kids;
  for (int s : accepted)
    for (int oi : rt.options_of_state[s]) kids.push_back(make_option(td.root, oi));
  ct.set_children(root, kids);
  ct.set_root(root);
  ct.finalize();
  return lt;
}

LabelAssignment labeling_from_subtree(const TreeLabelingInstance& tli, const LabelingTree& lt,
                                      const FeasibleSubtree& sub) {
  check_feasible_subtree(lt.tree, sub);
  LabelAssignment la(tli.td.size());
  std::vector<char> seen(tli.td.size(), 0);
  for (int id : sub) {
    const auto& c = lt.choice[id];
    if (c.td_node < 0) continue;
    const int v = c.td_node;
    const int b = static_cast<int>(tli.td.bags[v].size());
    NodeLabel l;
    for (size_t j = 0; j < tli.ev[v].size(); ++j) l.chng.push_back((c.chng >> j) & 1);
    l.conn.assign(b * (b - 1), 0);
    for (int p = 0; p < b; ++p)
      for (int q = 0; q < b; ++q)
        if (p != q) l.conn[conn_index(b, p, q)] = (c.conn >> (p * b + q)) & 1;
    la[v] = std::move(l);
    seen[v] = 1;
  }
  if (std::count(seen.begin(), seen.end(), 1) != tli.td.size())
    throw Error(ErrorCode::MalformedSubtree, "subtree does not label every decomposition node");
  return la;
}

LabelAssignment solve_tree_labeling(const TreeLabelingInstance& tli, uint64_t seed, long cap) {
  LabelingTree lt = build_labeling_tree(tli, cap);
  LPModel lp = build_choice_tree_lp(lt.tree, Rational(1), true);
  FeasibilityVerdict verdict = solve_feasibility(lp);
  if (!verdict.feasible) throw Error(ErrorCode::Infeasible, "labeling LP infeasible at budget 1");
  RoundingOutcome r = dependent_round(lt.tree, to_doubles(verdict.assignment), seed);
  return labeling_from_subtree(tli, lt, r.subtree);
}

namespace {

// Bottom-up labels from a chosen-edge indicator over all edges.
LabelAssignment labels_from_choice(const TreeLabelingInstance& tli, const std::vector<char>& chosen) {
  const auto& td = tli.td;
  LabelAssignment la(td.size());
  std::vector<int> order{td.root};
  for (size_t i = 0; i < order.size(); ++i)
    for (int c : td.children[order[i]]) order.push_back(c);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    NodeLabel& l = la[v];
    for (int e : tli.ev[v]) l.chng.push_back(chosen[e]);
    std::vector<const NodeLabel*> kids;
    for (int c : td.children[v]) kids.push_back(&la[c]);
    l.conn = derive_conn(tli, v, l.chng, kids);
  }
  return la;
}

bool root_connects(const TreeLabelingInstance& tli, const LabelAssignment& la) {
  const auto& bag = tli.td.bags[tli.td.root];
  auto p = std::lower_bound(bag.begin(), bag.end(), tli.source);
  auto q = std::lower_bound(bag.begin(), bag.end(), tli.sink);
  if (p == bag.end() || *p != tli.source || q == bag.end() || *q != tli.sink) return false;
  int b = static_cast<int>(bag.size());
  return la[tli.td.root].conn[conn_index(b, static_cast<int>(p - bag.begin()), static_cast<int>(q - bag.begin()))];
}

}  // namespace

std::optional<LabelAssignment> brute_force_tree_labeling(const TreeLabelingInstance& tli, int cap_bits) {
  std::vector<int> free_edges;
  for (int e = 0; e < static_cast<int>(tli.edges.size()); ++e)
    if (tli.allowed[e]) free_edges.push_back(e);
  if (static_cast<int>(free_edges.size()) > cap_bits)
    throw Error(ErrorCode::CapExceeded, std::to_string(free_edges.size()) + " choosable edges exceed the 2^" +
                                            std::to_string(cap_bits) + " enumeration cap");
  std::optional<LabelAssignment> best;
  Rational best_value;
  std::vector<char> chosen(tli.edges.size(), 0);
  for (uint64_t mask = 0; mask < (uint64_t{1} << free_edges.size()); ++mask) {
    for (size_t j = 0; j < free_edges.size(); ++j) chosen[free_edges[j]] = (mask >> j) & 1;
    LabelAssignment la = labels_from_choice(tli, chosen);
    if (!root_connects(tli, la)) continue;
    Rational value = max_of(labeling_cost(tli, la));
    if (!best || value < best_value) {
      best = std::move(la);
      best_value = value;
    }
  }
  return best;
}

std::vector<int> chosen_edges(const TreeLabelingInstance& tli, const LabelAssignment& la) {
  std::vector<int> out;
  for (int v = 0; v < tli.td.size(); ++v)
    for (size_t j = 0; j < tli.ev[v].size(); ++j)
      if (la[v].chng[j]) out.push_back(tli.ev[v][j]);
  std::sort(out.begin(), out.end());
  return out;
}

StPath labeling_to_path(const TreeLabelingInstance& tli, const LabelAssignment& la) {
  int n = std::max(tli.source, tli.sink) + 1;
  for (const Edge& e : tli.edges) n = std::max({n, e.tail + 1, e.head + 1});
  std::vector<std::vector<int>> out(n);
  for (int e : chosen_edges(tli, la)) out[tli.edges[e].tail].push_back(e);
  std::vector<int> via(n, -1);
  std::vector<char> seen(n, 0);
  std::deque<int> queue{tli.source};
  seen[tli.source] = 1;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int e : out[u]) {
      int w = tli.edges[e].head;
      if (seen[w]) continue;
      seen[w] = 1;
      via[w] = e;
      queue.push_back(w);
    }
  }
  if (!seen[tli.sink]) throw Error(ErrorCode::NoPathInSubgraph, "chosen edges do not connect source to sink");
  StPath path;
  for (int x = tli.sink; x != tli.source; x = tli.edges[via[x]].tail) path.push_back(via[x]);
  std::reverse(path.begin(), path.end());
  return path;
}

LabelAssignment path_to_labeling(const TreeLabelingInstance& tli, const StPath& p) {
  std::vector<char> chosen(tli.edges.size(), 0);
  for (int e : p) {
    if (e < 0 || e >= static_cast<int>(tli.edges.size())) throw Error(ErrorCode::InvalidPath, "edge out of range");
    chosen[e] = 1;
  }
  return labels_from_choice(tli, chosen);
}

}  // namespace robustpath
