#include "robustpath/instance.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

namespace robustpath {

namespace {

void fail_validation(const std::string& msg) { throw Error(ErrorCode::ValidationError, msg); }

}  // namespace

void validate_instance(const Instance& inst) {
  if (inst.n < 2) fail_validation("n must be at least 2");
  if (inst.source < 0 || inst.source >= inst.n || inst.sink < 0 || inst.sink >= inst.n)
    fail_validation("source/sink out of range");
  if (inst.source == inst.sink) fail_validation("source equals sink");
  if (inst.k() < 1) fail_validation("need at least one agent");
  for (int e = 0; e < inst.m(); ++e) {
    const Edge& ed = inst.edges[e];
    if (ed.tail < 0 || ed.tail >= inst.n || ed.head < 0 || ed.head >= inst.n)
      fail_validation("edge " + std::to_string(e) + " has a vertex id out of range");
    if (ed.head == inst.source) fail_validation("source has an incoming edge (edge " + std::to_string(e) + ")");
    if (ed.tail == inst.sink) fail_validation("sink has an outgoing edge (edge " + std::to_string(e) + ")");
  }
  for (int i = 0; i < inst.k(); ++i) {
    if (static_cast<int>(inst.costs[i].size()) != inst.m())
      fail_validation("cost row " + std::to_string(i) + " has wrong length");
    for (int e = 0; e < inst.m(); ++e)
      if (inst.costs[i][e] < 0)
        fail_validation("negative cost for agent " + std::to_string(i) + " on edge " + std::to_string(e));
  }
}

Instance load_instance(const std::string& bytes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, ex.what());
  }
  Instance inst;
  try {
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "top level must be an object");
    for (const char* key : {"version", "n", "source", "sink", "edges", "costs"})
      if (!doc.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field ") + key);
    if (doc["version"].get<int>() != 1) throw Error(ErrorCode::ParseError, "unsupported version");
    inst.n = doc["n"].get<int>();
    inst.source = doc["source"].get<int>();
    inst.sink = doc["sink"].get<int>();
    for (const auto& pair : doc["edges"]) {
      if (!pair.is_array() || pair.size() != 2) throw Error(ErrorCode::ParseError, "edge must be [tail, head]");
      inst.edges.push_back({pair[0].get<int>(), pair[1].get<int>()});
    }
    for (const auto& row : doc["costs"]) {
      if (!row.is_array()) throw Error(ErrorCode::ParseError, "cost row must be an array");
      std::vector<Rational> r;
      for (const auto& c : row) {
        if (c.is_string())
          r.push_back(parse_rational(c.get<std::string>()));
        else if (c.is_number_integer())
          r.push_back(Rational(std::to_string(c.get<long long>())));
        else
          throw Error(ErrorCode::ParseError, "cost must be a decimal string");
      }
      inst.costs.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, ex.what());
  }
  validate_instance(inst);
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "{\n  \"version\": 1,\n";
  out << "  \"n\": " << inst.n << ",\n";
  out << "  \"source\": " << inst.source << ",\n";
  out << "  \"sink\": " << inst.sink << ",\n";
  out << "  \"edges\": [";
  for (int e = 0; e < inst.m(); ++e)
    out << (e ? ",\n    " : "\n    ") << "[" << inst.edges[e].tail << ", " << inst.edges[e].head << "]";
  out << (inst.m() ? "\n  ],\n" : "],\n");
  out << "  \"costs\": [";
  for (int i = 0; i < inst.k(); ++i) {
    out << (i ? ",\n    [" : "\n    [");
    for (int e = 0; e < inst.m(); ++e) out << (e ? ", " : "") << '"' << format_rational(inst.costs[i][e]) << '"';
    out << "]";
  }
  out << (inst.k() ? "\n  ]\n" : "]\n");
  out << "}\n";
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << bytes;
}

Instance read_instance_file(const std::string& path) { return load_instance(read_text_file(path)); }

void check_path(const Instance& inst, const StPath& p) {
  if (p.empty()) throw Error(ErrorCode::InvalidPath, "empty path");
  int at = inst.source;
  for (size_t j = 0; j < p.size(); ++j) {
    int e = p[j];
    if (e < 0 || e >= inst.m()) throw Error(ErrorCode::InvalidPath, "edge index out of range");
    if (inst.edges[e].tail != at)
      throw Error(ErrorCode::InvalidPath, "edge " + std::to_string(e) + " does not continue the path");
    at = inst.edges[e].head;
  }
  if (at != inst.sink) throw Error(ErrorCode::InvalidPath, "path does not end at the sink");
}

bool is_valid_path(const Instance& inst, const StPath& p) {
  try {
    check_path(inst, p);
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool is_simple_path(const Instance& inst, const StPath& p) {
  if (!is_valid_path(inst, p)) return false;
  std::vector<char> seen(inst.n, 0);
  seen[inst.source] = 1;
  for (int e : p) {
    int h = inst.edges[e].head;
    if (seen[h]) return false;
    seen[h] = 1;
  }
  return true;
}

Rational path_cost(const Instance& inst, const StPath& p, int agent) {
  check_path(inst, p);
  if (agent < 0 || agent >= inst.k()) throw Error(ErrorCode::InvalidPath, "agent out of range");
  Rational sum = 0;
  for (int e : p) sum += inst.costs[agent][e];
  return sum;
}

std::vector<Rational> path_costs(const Instance& inst, const StPath& p) {
  check_path(inst, p);
  std::vector<Rational> out(inst.k(), Rational(0));
  for (int i = 0; i < inst.k(); ++i)
    for (int e : p) out[i] += inst.costs[i][e];
  return out;
}

Rational max_of(const std::vector<Rational>& v) {
  Rational best = 0;
  for (const auto& x : v)
    if (x > best) best = x;
  return best;
}

Rational minimax_value(const Instance& inst, const StPath& p) { return max_of(path_costs(inst, p)); }

namespace {

std::vector<std::vector<int>> out_lists(const Instance& inst) {
  std::vector<std::vector<int>> out(inst.n);
  for (int e = 0; e < inst.m(); ++e) out[inst.edges[e].tail].push_back(e);
  return out;
}

}  // namespace

PathEnumeration enumerate_simple_st_paths(const Instance& inst, long cap) {
  PathEnumeration result;
  auto out = out_lists(inst);
  std::vector<char> on_path(inst.n, 0);
  StPath current;
  on_path[inst.source] = 1;
  std::function<bool(int)> dfs = [&](int v) -> bool {
    if (v == inst.sink) {
      if (static_cast<long>(result.paths.size()) >= cap) {
        result.truncated = true;
        return false;
      }
      result.paths.push_back(current);
      return true;
    }
    for (int e : out[v]) {
      int h = inst.edges[e].head;
      if (on_path[h]) continue;
      on_path[h] = 1;
      current.push_back(e);
      bool go_on = dfs(h);
      current.pop_back();
      on_path[h] = 0;
      if (!go_on) return false;
    }
    return true;
  };
  dfs(inst.source);
  return result;
}

BruteForceResult brute_force_minimax(const Instance& inst, long cap) {
  auto en = enumerate_simple_st_paths(inst, cap);
  if (en.truncated) throw Error(ErrorCode::CapExceeded, "path enumeration exceeded cap " + std::to_string(cap));
  if (en.paths.empty()) throw Error(ErrorCode::NoPath, "source does not reach sink");
  BruteForceResult best{en.paths[0], minimax_value(inst, en.paths[0])};
  for (size_t j = 1; j < en.paths.size(); ++j) {
    Rational v = minimax_value(inst, en.paths[j]);
    if (v < best.value) best = {en.paths[j], v};
  }
  return best;
}

StPath sum_baseline(const Instance& inst) {
  std::vector<Rational> w(inst.m(), Rational(0));
  for (int e = 0; e < inst.m(); ++e)
    for (int i = 0; i < inst.k(); ++i) w[e] += inst.costs[i][e];
  // Distance to sink as (cost, hops); reverse Dijkstra.
  using Key = std::pair<Rational, long>;
  std::vector<std::optional<Key>> dist(inst.n);
  std::vector<std::vector<int>> in(inst.n);
  for (int e = 0; e < inst.m(); ++e) in[inst.edges[e].head].push_back(e);
  std::vector<char> done(inst.n, 0);
  dist[inst.sink] = Key(Rational(0), 0);
  for (;;) {
    int best = -1;
    for (int v = 0; v < inst.n; ++v)
      if (!done[v] && dist[v] && (best < 0 || *dist[v] < *dist[best])) best = v;
    if (best < 0) break;
    done[best] = 1;
    for (int e : in[best]) {
      int u = inst.edges[e].tail;
      Key cand(dist[best]->first + w[e], dist[best]->second + 1);
      if (!dist[u] || cand < *dist[u]) dist[u] = cand;
    }
  }
  if (!dist[inst.source]) throw Error(ErrorCode::NoPath, "source does not reach sink");
  auto out = out_lists(inst);
  StPath path;
  int at = inst.source;
  while (at != inst.sink) {
    for (int e : out[at]) {
      int h = inst.edges[e].head;
      if (!dist[h]) continue;
      Key via(dist[h]->first + w[e], dist[h]->second + 1);
      if (via == *dist[at]) {
        path.push_back(e);
        at = h;
        break;
      }
    }
  }
  return path;
}

Rational total_cost_max(const Instance& inst) {
  Rational best = 0;
  for (int i = 0; i < inst.k(); ++i) {
    Rational s = 0;
    for (const auto& c : inst.costs[i]) s += c;
    if (s > best) best = s;
  }
  return best;
}

SubInstance restrict_edges(const Instance& inst, const std::vector<int>& keep) {
  SubInstance sub;
  sub.inst.n = inst.n;
  sub.inst.source = inst.source;
  sub.inst.sink = inst.sink;
  sub.inst.costs.assign(inst.k(), {});
  for (int e : keep) {
    sub.inst.edges.push_back(inst.edges[e]);
    for (int i = 0; i < inst.k(); ++i) sub.inst.costs[i].push_back(inst.costs[i][e]);
    sub.origin.push_back(e);
  }
  return sub;
}

std::vector<int> useful_edges(const Instance& inst, const std::vector<int>& candidates) {
  std::vector<std::vector<int>> out(inst.n), in(inst.n);
  for (int e : candidates) {
    out[inst.edges[e].tail].push_back(e);
    in[inst.edges[e].head].push_back(e);
  }
  auto sweep = [&](int start, const std::vector<std::vector<int>>& adj, bool forward) {
    std::vector<char> seen(inst.n, 0);
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e : adj[v]) {
        int u = forward ? inst.edges[e].head : inst.edges[e].tail;
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
    return seen;
  };
  auto from_s = sweep(inst.source, out, true);
  auto to_t = sweep(inst.sink, in, false);
  std::vector<int> kept;
  for (int e : candidates)
    if (from_s[inst.edges[e].tail] && to_t[inst.edges[e].head]) kept.push_back(e);
  return kept;
}

SubInstance truncate_instance(const Instance& inst, const Rational& guess) {
  std::vector<int> cand;
  for (int e = 0; e < inst.m(); ++e) {
    bool ok = true;
    for (int i = 0; i < inst.k() && ok; ++i)
      if (inst.costs[i][e] > guess) ok = false;
    if (ok) cand.push_back(e);
  }
  return restrict_edges(inst, useful_edges(inst, cand));
}

StPath map_path(const SubInstance& sub, const StPath& p) {
  StPath out;
  for (int e : p)
    if (sub.origin[e] >= 0) out.push_back(sub.origin[e]);
  return out;
}

bool has_parallel_edges(const Instance& inst) {
  std::vector<std::pair<int, int>> pairs;
  for (const auto& e : inst.edges) pairs.emplace_back(e.tail, e.head);
  std::sort(pairs.begin(), pairs.end());
  return std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end();
}

SubInstance desugar_parallel_edges(const Instance& inst) {
  SubInstance sub;
  Instance& g = sub.inst;
  g.n = inst.n;
  g.source = inst.source;
  g.sink = inst.sink;
  g.costs.assign(inst.k(), {});
  std::map<std::pair<int, int>, int> seen;
  auto push = [&](Edge ed, int origin, bool zero, int from) {
    g.edges.push_back(ed);
    for (int i = 0; i < inst.k(); ++i) g.costs[i].push_back(zero ? Rational(0) : inst.costs[i][from]);
    sub.origin.push_back(origin);
  };
  for (int e = 0; e < inst.m(); ++e) {
    const Edge& ed = inst.edges[e];
    if (seen[{ed.tail, ed.head}]++ == 0) {
      push(ed, e, false, e);
    } else {
      int d = g.n++;
      push({ed.tail, d}, e, false, e);
      push({d, ed.head}, -1, true, e);
    }
  }
  return sub;
}

}  // namespace robustpath
