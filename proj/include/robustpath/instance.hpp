#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robustpath/common.hpp"

namespace robustpath {

struct Edge {
  int tail = 0;
  int head = 0;
  bool operator==(const Edge&) const = default;
};

// Directed multigraph with source/sink and a k x m nonnegative cost matrix.
struct Instance {
  int n = 0;
  int source = 0;
  int sink = 1;
  std::vector<Edge> edges;
  std::vector<std::vector<Rational>> costs;  // costs[i][e]

  int m() const { return static_cast<int>(edges.size()); }
  int k() const { return static_cast<int>(costs.size()); }
  bool operator==(const Instance&) const = default;
};

// Edge-index sequence from source to sink.
using StPath = std::vector<int>;

void validate_instance(const Instance& inst);  // throws ValidationError
Instance load_instance(const std::string& bytes);
std::string serialize_instance(const Instance& inst);
Instance read_instance_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& bytes);
std::string read_text_file(const std::string& path);

// Checks adjacency and endpoints; throws InvalidPath.
void check_path(const Instance& inst, const StPath& p);
bool is_valid_path(const Instance& inst, const StPath& p);
bool is_simple_path(const Instance& inst, const StPath& p);

Rational path_cost(const Instance& inst, const StPath& p, int agent);
std::vector<Rational> path_costs(const Instance& inst, const StPath& p);
Rational minimax_value(const Instance& inst, const StPath& p);
Rational max_of(const std::vector<Rational>& v);

struct PathEnumeration {
  std::vector<StPath> paths;
  bool truncated = false;
};

inline constexpr long kDefaultEnumerationCap = 1000000;

PathEnumeration enumerate_simple_st_paths(const Instance& inst, long cap = kDefaultEnumerationCap);

struct BruteForceResult {
  StPath path;
  Rational value;
};

BruteForceResult brute_force_minimax(const Instance& inst, long cap = kDefaultEnumerationCap);

// Dijkstra on summed costs; ties broken by lexicographically smallest edge sequence.
StPath sum_baseline(const Instance& inst);

Rational total_cost_max(const Instance& inst);  // max_i sum_e c_i(e)

// Subgraph keeping the listed edges (vertex ids unchanged). origin[e'] = original index.
struct SubInstance {
  Instance inst;
  std::vector<int> origin;
};

SubInstance restrict_edges(const Instance& inst, const std::vector<int>& keep);
// Drops edges with some c_i(e) > guess, then edges not on any source-sink walk.
SubInstance truncate_instance(const Instance& inst, const Rational& guess);
// Edges reachable from source and co-reachable to sink.
std::vector<int> useful_edges(const Instance& inst, const std::vector<int>& candidates);
StPath map_path(const SubInstance& sub, const StPath& p);

// Every parallel copy after the first becomes tail->d->head with a fresh vertex d;
// the cost stays on tail->d. origin[e'] is the original edge for real pieces, -1 for d->head.
SubInstance desugar_parallel_edges(const Instance& inst);
bool has_parallel_edges(const Instance& inst);

}  // namespace robustpath
