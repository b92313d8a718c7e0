#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "robustpath/hardness.hpp"
#include "robustpath/instance.hpp"
#include "robustpath/treewidth.hpp"

namespace testing_support {

using robustpath::Edge;
using robustpath::Instance;
using robustpath::Rational;
using robustpath::StPath;

inline Instance make_instance(int n, int s, int t, const std::vector<Edge>& edges,
                              const std::vector<std::vector<int>>& costs) {
  Instance inst;
  inst.n = n;
  inst.source = s;
  inst.sink = t;
  inst.edges = edges;
  for (const auto& row : costs) {
    std::vector<Rational> r;
    for (int c : row) r.emplace_back(c);
    inst.costs.push_back(r);
  }
  return inst;
}

// Three vertices s=0, a=1, t=2 with edges s->t, s->a, a->t.
inline Instance three_vertex_graph(const std::vector<std::vector<int>>& costs = {{4, 1, 1}, {1, 2, 2}}) {
  return make_instance(3, 0, 2, {{0, 2}, {0, 1}, {1, 2}}, costs);
}

// 18-edge series-parallel graph. Edge index i is e_{i+1}. e2 -> e8 -> e12 -> e18 is an s-t
// path and (e13, e15) / (e14, e16) are the two branches of one parallel node.
inline Instance eighteen_edge_graph() {
  std::vector<Edge> e = {{0, 1}, {0, 2},  {1, 2},  {2, 3},  {3, 5},  {2, 4},  {4, 5},   {2, 5},   {5, 6},
                         {6, 7}, {7, 8},  {5, 8},  {8, 9},  {8, 10}, {9, 11}, {10, 11}, {11, 12}, {8, 12}};
  std::vector<int> c0(18), c1(18);
  for (int i = 0; i < 18; ++i) {
    c0[i] = (i * 7) % 5;
    c1[i] = (i * 3 + 1) % 4;
  }
  return make_instance(13, 0, 12, e, {c0, c1});
}

// Vertices s=0, b=1, c=2, d=3, f=4, t=5.
inline Instance labeling_graph() {
  std::vector<Edge> e = {{0, 1}, {1, 3}, {3, 2}, {2, 5}, {3, 4}, {4, 5}};
  return make_instance(6, 0, 5, e, {{1, 2, 1, 3, 4, 1}, {2, 1, 3, 1, 1, 4}});
}

// Root {s,d,f,t} holding (d,f),(f,t); children {s,b,d,t} and {s,c,d,t}.
inline robustpath::TreeDecomposition labeling_decomposition() {
  return robustpath::make_tree_decomposition({{0, 3, 4, 5}, {0, 1, 3, 5}, {0, 2, 3, 5}}, {-1, 0, 0});
}

// Simple s-t paths by plain DFS, kept separate from the library enumerator.
inline std::vector<StPath> dfs_paths(const Instance& inst) {
  std::vector<std::vector<int>> out(inst.n);
  for (int e = 0; e < inst.m(); ++e) out[inst.edges[e].tail].push_back(e);
  std::vector<StPath> result;
  std::vector<char> seen(inst.n, 0);
  StPath cur;
  std::function<void(int)> go = [&](int v) {
    if (v == inst.sink) {
      result.push_back(cur);
      return;
    }
    seen[v] = 1;
    for (int e : out[v]) {
      int w = inst.edges[e].head;
      if (seen[w]) continue;
      cur.push_back(e);
      go(w);
      cur.pop_back();
    }
    seen[v] = 0;
  };
  go(inst.source);
  return result;
}

inline Rational dfs_minimax(const Instance& inst) {
  Rational best = -1;
  for (const auto& p : dfs_paths(inst)) {
    Rational worst = 0;
    for (int i = 0; i < inst.k(); ++i) {
      Rational s = 0;
      for (int e : p) s += inst.costs[i][e];
      worst = std::max(worst, s);
    }
    if (best < 0 || worst < best) best = worst;
  }
  return best;
}

inline bool reaches(int n, const std::vector<Edge>& edges, int from, int to) {
  std::vector<char> seen(n, 0);
  std::vector<int> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    for (const auto& e : edges)
      if (e.tail == v && !seen[e.head]) {
        seen[e.head] = 1;
        stack.push_back(e.head);
      }
  }
  return false;
}

inline int vertex_bound(const robustpath::TreeLabelingInstance& tli) {
  int nmax = 0;
  for (const auto& e : tli.edges) nmax = std::max({nmax, e.tail + 1, e.head + 1});
  for (const auto& bag : tli.td.bags)
    for (int x : bag) nmax = std::max(nmax, x + 1);
  return nmax;
}

// C1: a chosen edge sets conn on its endpoints. C2: conn(p,q) at v is set exactly when the chosen
// edges charged inside v's subtree contain a p->q path. C3: conn(s,t) at the root.
inline bool independent_labeling_check(const robustpath::TreeLabelingInstance& tli,
                                       const robustpath::LabelAssignment& la) {
  const auto& td = tli.td;
  if (static_cast<int>(la.size()) != td.size()) return false;
  const int nmax = vertex_bound(tli);
  auto pos = [&](int v, int x) {
    const auto& bag = td.bags[v];
    return static_cast<int>(std::lower_bound(bag.begin(), bag.end(), x) - bag.begin());
  };
  for (int v = 0; v < td.size(); ++v) {
    int b = static_cast<int>(td.bags[v].size());
    if (static_cast<int>(la[v].chng.size()) != static_cast<int>(tli.ev[v].size())) return false;
    if (static_cast<int>(la[v].conn.size()) != b * (b - 1)) return false;
    std::vector<Edge> chosen;
    std::vector<int> stack{v};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (size_t j = 0; j < tli.ev[u].size(); ++j)
        if (la[u].chng[j]) chosen.push_back(tli.edges[tli.ev[u][j]]);
      for (int c : td.children[u]) stack.push_back(c);
    }
    for (size_t j = 0; j < tli.ev[v].size(); ++j) {
      if (!la[v].chng[j]) continue;
      const Edge& e = tli.edges[tli.ev[v][j]];
      if (e.tail != e.head && !la[v].conn[robustpath::conn_index(b, pos(v, e.tail), pos(v, e.head))]) return false;
    }
    for (int p = 0; p < b; ++p)
      for (int q = 0; q < b; ++q) {
        if (p == q) continue;
        bool expect = reaches(nmax, chosen, td.bags[v][p], td.bags[v][q]);
        if (expect != static_cast<bool>(la[v].conn[robustpath::conn_index(b, p, q)])) return false;
      }
  }
  int r = td.root;
  int b = static_cast<int>(td.bags[r].size());
  return la[r].conn[robustpath::conn_index(b, pos(r, tli.source), pos(r, tli.sink))] != 0;
}

// Labeling induced by a chosen edge set, built bottom-up with independent reachability.
inline robustpath::LabelAssignment labeling_from_edges(const robustpath::TreeLabelingInstance& tli,
                                                       const std::set<int>& chosen) {
  const auto& td = tli.td;
  robustpath::LabelAssignment la(td.size());
  const int nmax = vertex_bound(tli);
  for (int v = 0; v < td.size(); ++v) {
    int b = static_cast<int>(td.bags[v].size());
    for (int e : tli.ev[v]) la[v].chng.push_back(chosen.count(e) ? 1 : 0);
    std::vector<Edge> sub;
    std::vector<int> stack{v};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int e : tli.ev[u])
        if (chosen.count(e)) sub.push_back(tli.edges[e]);
      for (int c : td.children[u]) stack.push_back(c);
    }
    la[v].conn.assign(b * (b - 1), 0);
    for (int p = 0; p < b; ++p)
      for (int q = 0; q < b; ++q)
        if (p != q && reaches(nmax, sub, td.bags[v][p], td.bags[v][q])) la[v].conn[robustpath::conn_index(b, p, q)] = 1;
  }
  return la;
}

// Every way of dropping one subset per collection, checked by plain counting.
inline bool oracle_cover(const robustpath::SetCoverInstance& sc) {
  const int kappa = static_cast<int>(sc.collections.size());
  std::vector<int> drop(kappa, 0);
  while (true) {
    std::vector<int> hit(sc.universe, 0);
    for (int j = 0; j < kappa; ++j)
      for (int s = 0; s < static_cast<int>(sc.collections[j].size()); ++s)
        if (s != drop[j])
          for (int u : sc.collections[j][s]) hit[u] = 1;
    if (std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; })) return true;
    int j = 0;
    while (j < kappa && ++drop[j] == static_cast<int>(sc.collections[j].size())) drop[j++] = 0;
    if (j == kappa) return false;
  }
}

// Bernoulli standard deviation of an empirical frequency.
inline double sigma(double p, int trials) { return std::sqrt(std::max(0.0, p * (1 - p)) / trials); }

}  // namespace testing_support
