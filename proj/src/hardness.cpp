#include "robustpath/hardness.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "robustpath/sp_decomp.hpp"

namespace robustpath {

Instance gen_two_vertex_gap(int k) {
  if (k < 1) throw Error(ErrorCode::ValidationError, "k must be at least 1");
  Instance inst;
  inst.n = 2;
  inst.source = 0;
  inst.sink = 1;
  inst.edges.assign(k, Edge{0, 1});
  inst.costs.assign(k, std::vector<Rational>(k, 0));
  for (int i = 0; i < k; ++i) inst.costs[i][i] = 1;
  return inst;
}

Instance gen_disjoint_paths_gap(int k, int length) {
  if (k < 1 || length < 1) throw Error(ErrorCode::ValidationError, "k and length must be at least 1");
  Instance inst;
  inst.n = 2 + k * (length - 1);
  inst.source = 0;
  inst.sink = 1;
  inst.costs.assign(k, {});
  for (int j = 0; j < k; ++j) {
    auto inner = [&](int r) { return 2 + j * (length - 1) + r; };
    for (int r = 0; r < length; ++r) {
      int a = r == 0 ? 0 : inner(r - 1);
      int b = r == length - 1 ? 1 : inner(r);
      inst.edges.push_back({a, b});
      for (int i = 0; i < k; ++i) inst.costs[i].push_back(i == j ? 1 : 0);
    }
  }
  return inst;
}

long kz_edge_count(int t) {
  long m = 18;
  for (int r = 0; r < t; ++r) m = m > LONG_MAX / 18 ? LONG_MAX : m * 18;
  return m;
}

namespace {

// Appends the meta-graph between u and v; fresh vertices start at next.
void append_meta(int u, int v, int& next, std::vector<Edge>& out) {
  int junction[4] = {u, next, next + 1, v};
  next += 2;
  for (int b = 0; b < 3; ++b)
    for (int j = 0; j < 3; ++j) {
      int mid = next++;
      out.push_back({junction[b], mid});
      out.push_back({mid, junction[b + 1]});
    }
}

}  // namespace

KzInstance gen_kz_hard_instance(int t, long edge_cap) {
  if (t < 0) throw Error(ErrorCode::ValidationError, "t must be nonnegative");
  long m = kz_edge_count(t);
  if (m > edge_cap)
    throw Error(ErrorCode::SizeCapExceeded,
                "instance would have " + std::to_string(m) + " edges, cap is " + std::to_string(edge_cap));
  int next = 2;
  std::vector<Edge> edges;
  append_meta(0, 1, next, edges);
  for (int r = 0; r < t; ++r) {
    std::vector<Edge> grown;
    grown.reserve(edges.size() * 18);
    for (const Edge& e : edges) append_meta(e.tail, e.head, next, grown);
    edges = std::move(grown);
  }
  KzInstance out;
  out.inst.n = next;
  out.inst.source = 0;
  out.inst.sink = 1;
  out.inst.edges = std::move(edges);
  out.inst.costs.assign(1, std::vector<Rational>(out.inst.m(), 0));
  out.height = recognize_sp(out.inst).height;
  return out;
}

void validate_set_cover(const SetCoverInstance& sc) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::ValidationError, msg); };
  if (sc.universe < 0) fail("universe size must be nonnegative");
  if (sc.collections.empty()) fail("need at least one collection");
  size_t width = sc.collections[0].size();
  if (width != 2 && width != 3) fail("collections hold 2 or 3 subsets");
  for (const auto& col : sc.collections) {
    if (col.size() != width) fail("all collections must have the same number of subsets");
    for (const auto& s : col)
      for (int u : s)
        if (u < 0 || u >= sc.universe) fail("element " + std::to_string(u) + " outside the universe");
  }
}

std::string serialize_set_cover(const SetCoverInstance& sc) {
  std::ostringstream out;
  out << "{\n  \"version\": 1,\n  \"universe\": " << sc.universe << ",\n  \"collections\": [";
  for (size_t c = 0; c < sc.collections.size(); ++c) {
    out << (c ? ",\n    [" : "\n    [");
    for (size_t s = 0; s < sc.collections[c].size(); ++s) {
      out << (s ? ", [" : "[");
      for (size_t j = 0; j < sc.collections[c][s].size(); ++j) out << (j ? ", " : "") << sc.collections[c][s][j];
      out << "]";
    }
    out << "]";
  }
  out << (sc.collections.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return out.str();
}

SetCoverInstance load_set_cover(const std::string& bytes) {
  SetCoverInstance sc;
  try {
    auto doc = nlohmann::json::parse(bytes);
    if (!doc.is_object() || !doc.contains("universe") || !doc.contains("collections"))
      throw Error(ErrorCode::ParseError, "expected universe and collections");
    if (doc.value("version", 1) != 1) throw Error(ErrorCode::ParseError, "unsupported version");
    sc.universe = doc["universe"].get<int>();
    sc.collections = doc["collections"].get<std::vector<std::vector<std::vector<int>>>>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, ex.what());
  }
  validate_set_cover(sc);
  return sc;
}

bool cover_exists(const SetCoverInstance& sc) {
  validate_set_cover(sc);
  const int kappa = static_cast<int>(sc.collections.size());
  const int width = static_cast<int>(sc.collections[0].size());
  // Every collection drops exactly one subset (index d) and keeps the rest.
  std::vector<int> hits(sc.universe, 0);
  std::function<bool(int)> rec = [&](int j) -> bool {
    if (j == kappa) return std::all_of(hits.begin(), hits.end(), [](int h) { return h > 0; });
    for (int d = 0; d < width; ++d) {
      for (int s = 0; s < width; ++s)
        if (s != d)
          for (int u : sc.collections[j][s]) ++hits[u];
      bool ok = rec(j + 1);
      for (int s = 0; s < width; ++s)
        if (s != d)
          for (int u : sc.collections[j][s]) --hits[u];
      if (ok) return true;
    }
    return false;
  };
  return rec(0);
}

namespace {

void check_cnf(const Cnf& f) {
  if (f.vars < 1) throw Error(ErrorCode::NotThreeCNF, "formula needs at least one variable");
  for (size_t c = 0; c < f.clauses.size(); ++c) {
    if (f.clauses[c].size() != 3) throw Error(ErrorCode::NotThreeCNF, "clause " + std::to_string(c) + " is not 3 literals");
    for (int lit : f.clauses[c])
      if (lit == 0 || std::abs(lit) > f.vars)
        throw Error(ErrorCode::NotThreeCNF, "clause " + std::to_string(c) + " has an invalid literal");
  }
}

}  // namespace

bool sat_brute_force(const Cnf& f) {
  check_cnf(f);
  if (f.vars > 30) throw Error(ErrorCode::CapExceeded, "too many variables for exhaustive search");
  for (uint64_t a = 0; a < (uint64_t{1} << f.vars); ++a) {
    bool all = true;
    for (const auto& clause : f.clauses) {
      bool sat = false;
      for (int lit : clause) {
        bool val = (a >> (std::abs(lit) - 1)) & 1;
        if ((lit > 0) == val) sat = true;
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

SetCoverInstance gen_2choose1_from_3sat(const Cnf& f) {
  check_cnf(f);
  SetCoverInstance sc;
  sc.universe = static_cast<int>(f.clauses.size());
  sc.collections.assign(f.vars, std::vector<std::vector<int>>(2));
  for (int c = 0; c < sc.universe; ++c)
    for (int lit : f.clauses[c]) {
      auto& s = sc.collections[std::abs(lit) - 1][lit > 0 ? 0 : 1];
      if (s.empty() || s.back() != c) s.push_back(c);
    }
  return sc;
}

SetCoverInstance gen_3c2_from_2c1(const SetCoverInstance& sc) {
  validate_set_cover(sc);
  if (sc.collections[0].size() != 2) throw Error(ErrorCode::ValidationError, "expected a 2-choose-1 instance");
  SetCoverInstance out = sc;
  const int kappa = static_cast<int>(sc.collections.size());
  out.universe = sc.universe + kappa;
  for (int j = 0; j < kappa; ++j) out.collections[j].push_back({sc.universe + j});
  return out;
}

std::string maximin_variant_name(MaximinVariant v) {
  switch (v) {
    case MaximinVariant::Path: return "path";
    case MaximinVariant::WisTree: return "wis-tree";
    case MaximinVariant::WisInterval: return "wis-interval";
    case MaximinVariant::SpanningTree: return "spanning-tree";
  }
  return "?";
}

namespace {

std::vector<std::vector<int>> membership(const SetCoverInstance& sc, int slots, const std::vector<std::vector<int>>& slot_of) {
  // weights[u][slot_of[j][s]] = 1 when u in subset s of collection j
  std::vector<std::vector<int>> w(sc.universe, std::vector<int>(slots, 0));
  for (size_t j = 0; j < sc.collections.size(); ++j)
    for (size_t s = 0; s < sc.collections[j].size(); ++s)
      for (int u : sc.collections[j][s]) w[u][slot_of[j][s]] = 1;
  return w;
}

void require_width(const SetCoverInstance& sc, size_t width) {
  validate_set_cover(sc);
  if (sc.collections[0].size() != width)
    throw Error(ErrorCode::ValidationError, "expected collections of " + std::to_string(width) + " subsets");
}

}  // namespace

MaximinInstance gen_maximin_path(const SetCoverInstance& sc) {
  require_width(sc, 2);
  const int kappa = static_cast<int>(sc.collections.size());
  MaximinInstance mi;
  mi.variant = MaximinVariant::Path;
  mi.n = 2 + 4 * kappa;
  mi.source = 0;
  mi.sink = 1;
  std::vector<std::vector<int>> slot(kappa, std::vector<int>(2));
  mi.edges.push_back({0, 2});
  for (int j = 0; j < kappa; ++j) {
    int s = 2 + 4 * j, p = s + 1, t = s + 2, q = s + 3;
    slot[j][0] = static_cast<int>(mi.edges.size());
    mi.edges.push_back({s, p});
    slot[j][1] = static_cast<int>(mi.edges.size());
    mi.edges.push_back({s, q});
    mi.edges.push_back({p, t});
    mi.edges.push_back({q, t});
    mi.edges.push_back({t, j + 1 < kappa ? s + 4 : 1});
  }
  mi.weights = membership(sc, static_cast<int>(mi.edges.size()), slot);
  return mi;
}

MaximinInstance gen_maximin_wis(const SetCoverInstance& sc, MaximinVariant shape) {
  require_width(sc, 2);
  if (shape != MaximinVariant::WisTree && shape != MaximinVariant::WisInterval)
    throw Error(ErrorCode::ValidationError, "shape must be a WIS variant");
  const int kappa = static_cast<int>(sc.collections.size());
  MaximinInstance mi;
  mi.variant = shape;
  std::vector<std::vector<int>> slot(kappa, std::vector<int>(2));
  if (shape == MaximinVariant::WisInterval) {
    mi.n = 2 * kappa;
    for (int j = 0; j < kappa; ++j) {
      slot[j] = {2 * j, 2 * j + 1};
      mi.edges.push_back({2 * j, 2 * j + 1});
    }
  } else {
    mi.n = 3 * kappa;
    for (int j = 0; j < kappa; ++j) {
      int v = 3 * j, p = v + 1, q = v + 2;
      slot[j] = {p, q};
      mi.edges.push_back({v, q});
      mi.edges.push_back({p, q});
      if (j + 1 < kappa) mi.edges.push_back({q, v + 3});
    }
  }
  mi.weights = membership(sc, mi.n, slot);
  return mi;
}

MaximinInstance gen_maximin_spanning_tree(const SetCoverInstance& sc3) {
  require_width(sc3, 3);
  const int kappa = static_cast<int>(sc3.collections.size());
  MaximinInstance mi;
  mi.variant = MaximinVariant::SpanningTree;
  mi.n = 3 * kappa;
  std::vector<std::vector<int>> slot(kappa, std::vector<int>(3));
  for (int j = 0; j < kappa; ++j) {
    int a = 3 * j, b = a + 1, c = a + 2;
    slot[j] = {static_cast<int>(mi.edges.size()), static_cast<int>(mi.edges.size()) + 1,
               static_cast<int>(mi.edges.size()) + 2};
    mi.edges.push_back({a, b});
    mi.edges.push_back({b, c});
    mi.edges.push_back({c, a});
    if (j + 1 < kappa) mi.edges.push_back({c, a + 3});
  }
  mi.weights = membership(sc3, static_cast<int>(mi.edges.size()), slot);
  return mi;
}

Instance maximin_path_instance(const MaximinInstance& mi) {
  if (mi.variant != MaximinVariant::Path) throw Error(ErrorCode::ValidationError, "not a path instance");
  Instance inst;
  inst.n = mi.n;
  inst.source = mi.source;
  inst.sink = mi.sink;
  inst.edges = mi.edges;
  for (const auto& row : mi.weights) {
    std::vector<Rational> r;
    for (int w : row) r.push_back(w);
    inst.costs.push_back(std::move(r));
  }
  return inst;
}

std::string serialize_maximin(const MaximinInstance& mi) {
  std::ostringstream out;
  out << "{\n  \"version\": 1,\n  \"variant\": \"" << maximin_variant_name(mi.variant) << "\",\n  \"n\": " << mi.n
      << ",\n  \"source\": " << mi.source << ",\n  \"sink\": " << mi.sink << ",\n  \"edges\": [";
  for (size_t e = 0; e < mi.edges.size(); ++e)
    out << (e ? ",\n    [" : "\n    [") << mi.edges[e].tail << ", " << mi.edges[e].head << "]";
  out << (mi.edges.empty() ? "],\n" : "\n  ],\n") << "  \"weights\": [";
  for (size_t i = 0; i < mi.weights.size(); ++i) {
    out << (i ? ",\n    [" : "\n    [");
    for (size_t j = 0; j < mi.weights[i].size(); ++j) out << (j ? ", " : "") << mi.weights[i][j];
    out << "]";
  }
  out << (mi.weights.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return out.str();
}

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) const {
    while (p[x] != x) x = p[x];
    return x;
  }
};

int min_over_agents(const std::vector<int>& totals) {
  return totals.empty() ? 0 : *std::min_element(totals.begin(), totals.end());
}

}  // namespace

int brute_force_maximin(const MaximinInstance& mi, long cap) {
  if (mi.k() == 0) throw Error(ErrorCode::ValidationError, "maximin needs at least one agent");
  const int k = mi.k();
  int best = -1;
  long seen = 0;
  auto count = [&] {
    if (++seen > cap) throw Error(ErrorCode::CapExceeded, "more than " + std::to_string(cap) + " feasible solutions");
  };
  std::vector<int> totals(k, 0);

  if (mi.variant == MaximinVariant::Path) {
    Instance inst = maximin_path_instance(mi);
    PathEnumeration en = enumerate_simple_st_paths(inst, cap);
    if (en.truncated) throw Error(ErrorCode::CapExceeded, "path enumeration truncated");
    for (const auto& p : en.paths) {
      std::fill(totals.begin(), totals.end(), 0);
      for (int e : p)
        for (int i = 0; i < k; ++i) totals[i] += mi.weights[i][e];
      best = std::max(best, min_over_agents(totals));
    }
    return std::max(best, 0);
  }

  if (mi.variant == MaximinVariant::WisTree || mi.variant == MaximinVariant::WisInterval) {
    std::vector<std::vector<int>> adj(mi.n);
    for (const Edge& e : mi.edges) {
      adj[e.tail].push_back(e.head);
      adj[e.head].push_back(e.tail);
    }
    std::vector<int> blocked(mi.n, 0);
    std::function<void(int)> rec = [&](int v) {
      if (v == mi.n) {
        count();
        best = std::max(best, min_over_agents(totals));
        return;
      }
      rec(v + 1);
      if (blocked[v]) return;
      for (int w : adj[v]) ++blocked[w];
      for (int i = 0; i < k; ++i) totals[i] += mi.weights[i][v];
      rec(v + 1);
      for (int i = 0; i < k; ++i) totals[i] -= mi.weights[i][v];
      for (int w : adj[v]) --blocked[w];
    };
    rec(0);
    return best;
  }

  // Spanning trees by edge inclusion/exclusion; union-find without path compression so
  // links can be undone.
  Dsu dsu(mi.n);
  const int m = static_cast<int>(mi.edges.size());
  std::function<void(int, int)> rec = [&](int e, int used) {
    if (used == mi.n - 1) {
      count();
      best = std::max(best, min_over_agents(totals));
      return;
    }
    if (e == m || m - e < mi.n - 1 - used) return;
    int a = dsu.find(mi.edges[e].tail), b = dsu.find(mi.edges[e].head);
    if (a != b) {
      dsu.p[a] = b;
      for (int i = 0; i < k; ++i) totals[i] += mi.weights[i][e];
      rec(e + 1, used + 1);
      for (int i = 0; i < k; ++i) totals[i] -= mi.weights[i][e];
      dsu.p[a] = a;
    }
    rec(e + 1, used);
  };
  if (mi.n <= 1) return min_over_agents(totals);
  rec(0, 0);
  if (best < 0) throw Error(ErrorCode::ValidationError, "graph has no spanning tree");
  return best;
}

SetCoverInstance random_set_cover(int kappa, int universe, int choose_from, double density, Rng& rng) {
  SetCoverInstance sc;
  sc.universe = universe;
  sc.collections.assign(kappa, std::vector<std::vector<int>>(choose_from));
  for (auto& col : sc.collections)
    for (auto& s : col)
      for (int u = 0; u < universe; ++u)
        if (rng.uniform() < density) s.push_back(u);
  return sc;
}

Cnf random_3cnf(int vars, int clauses, Rng& rng) {
  Cnf f;
  f.vars = vars;
  for (int c = 0; c < clauses; ++c) {
    std::vector<int> clause;
    for (int j = 0; j < 3; ++j) {
      int v = 1 + static_cast<int>(rng.below(vars));
      clause.push_back(rng.below(2) ? v : -v);
    }
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

}  // namespace robustpath
