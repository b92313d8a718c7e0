#pragma once

#include <string>
#include <vector>

#include "robustpath/common.hpp"
#include "robustpath/instance.hpp"

namespace robustpath {

// §2 gap families.
Instance gen_two_vertex_gap(int k);
Instance gen_disjoint_paths_gap(int k, int length);

// Recursive series-parallel family: t rounds of replacing every arc by the 18-edge
// meta-graph (three blocks of three parallel 2-edge paths, in series). t = 0 is the
// meta-graph itself. Costs are zero with k = 1.
inline constexpr long kDefaultKzEdgeCap = 1000000;
struct KzInstance {
  Instance inst;
  int height = 0;  // decomposition-tree height from recognize_sp
};
KzInstance gen_kz_hard_instance(int t, long edge_cap = kDefaultKzEdgeCap);
long kz_edge_count(int t);

// Elements are 0-based; each collection holds 2 (choose 1) or 3 (choose 2) subsets.
struct SetCoverInstance {
  int universe = 0;
  std::vector<std::vector<std::vector<int>>> collections;
  bool operator==(const SetCoverInstance&) const = default;
};

void validate_set_cover(const SetCoverInstance& sc);  // ValidationError
std::string serialize_set_cover(const SetCoverInstance& sc);
SetCoverInstance load_set_cover(const std::string& bytes);

// Picks all but one subset from every collection and asks for a full cover.
bool cover_exists(const SetCoverInstance& sc);

// Literals are +v / -v with 1-based variables.
struct Cnf {
  int vars = 0;
  std::vector<std::vector<int>> clauses;
};
bool sat_brute_force(const Cnf& f);
SetCoverInstance gen_2choose1_from_3sat(const Cnf& f);  // NotThreeCNF
SetCoverInstance gen_3c2_from_2c1(const SetCoverInstance& sc);

enum class MaximinVariant { Path, WisTree, WisInterval, SpanningTree };
std::string maximin_variant_name(MaximinVariant v);

// Path: directed edges with source/sink, weights on edges. WIS: undirected edges, weights on
// vertices. SpanningTree: undirected edges, weights on edges. weights[i] belongs to element u_i.
struct MaximinInstance {
  MaximinVariant variant = MaximinVariant::Path;
  int n = 0;
  std::vector<Edge> edges;
  int source = -1, sink = -1;
  std::vector<std::vector<int>> weights;
  int k() const { return static_cast<int>(weights.size()); }
};

MaximinInstance gen_maximin_path(const SetCoverInstance& sc);
MaximinInstance gen_maximin_wis(const SetCoverInstance& sc, MaximinVariant shape);
MaximinInstance gen_maximin_spanning_tree(const SetCoverInstance& sc3);
Instance maximin_path_instance(const MaximinInstance& mi);
std::string serialize_maximin(const MaximinInstance& mi);

inline constexpr long kDefaultMaximinCap = 5000000;
// max over feasible solutions of min_i weight_i. Throws CapExceeded.
int brute_force_maximin(const MaximinInstance& mi, long cap = kDefaultMaximinCap);

SetCoverInstance random_set_cover(int kappa, int universe, int choose_from, double density, Rng& rng);
Cnf random_3cnf(int vars, int clauses, Rng& rng);

}  // namespace robustpath
