#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robustpath/instance.hpp"
#include "robustpath/lp.hpp"
#include "robustpath/metatree.hpp"
#include "robustpath/rounding.hpp"
#include "robustpath/treewidth.hpp"

namespace robustpath {

enum class Pipeline { Sp, Treewidth, Metatree, FlowBaseline, Brute };
std::string pipeline_name(Pipeline p);
Pipeline parse_pipeline(const std::string& name);  // ValidationError
bool pipeline_is_stochastic(Pipeline p);

struct PipelineOptions {
  int trials = 50;
  uint64_t seed = 0;
  long enum_cap = kDefaultEnumerationCap;
  long label_cap = kDefaultLabelCap;
  long metatree_cap = kDefaultMetatreeCap;
  int width_hint = -1;
  bool refine = false;
  SolveOptions solve;
};

struct PipelineResult {
  StPath path;
  std::vector<Rational> costs;
  Rational max_cost;
  std::optional<Rational> gs_star;
  int height = 0;  // height of the tree that was rounded (0 when none)
  int trials = 0;
  int rounds = 0;  // doubling rounds
  double tail_freq = 0;   // max over agents of the fraction of trials with f_i >= 8 H log2 k GS
  double moment_max = 0;  // max over agents of the mean of (1+1/(2H))^(f_i/GS)
  double bound_freq = 0;  // fraction of trials with max_i f_i <= 8 H log2 k GS
};

PipelineResult solve_sp(const Instance& inst, const PipelineOptions& opts);
PipelineResult solve_metatree(const Instance& inst, const PipelineOptions& opts);
PipelineResult solve_treewidth(const Instance& inst, const PipelineOptions& opts);
PipelineResult solve_flow_baseline(const Instance& inst, const PipelineOptions& opts);
PipelineResult solve_brute(const Instance& inst, const PipelineOptions& opts);
// Doubling, then the moment statistic on the accepted round's tree (sp, treewidth, metatree).
MomentReport pipeline_moment_check(const Instance& inst, Pipeline pipeline, long trials, const PipelineOptions& opts);
// Dispatches and re-verifies the returned path on inst (ValidationFailure on mismatch).
PipelineResult run_pipeline(const Instance& inst, Pipeline p, const PipelineOptions& opts);

// Random series-parallel instance grown by edge splits; parallel steps that push the
// number of source-sink paths above path_cap are skipped. Integer costs in [0, max_cost].
Instance random_sp_instance(int edges, int k, Rng& rng, long path_cap = 50000, int max_cost = 9);
// Random DAG on n vertices (source 0, sink n-1) with at least one source-sink path.
Instance random_dag_instance(int n, double edge_prob, int k, Rng& rng, int max_cost = 9);
// Random orientation of a random partial 2-tree (treewidth <= 2), source first and sink last
// in a random topological order, with at least one source-sink path.
Instance random_tw2_instance(int n, double keep_prob, int k, Rng& rng, int max_cost = 9);

struct GapDemoReport {
  std::string kind;
  int k = 0;
  Rational opt;
  Rational lp_value;
  Rational gap;
  std::vector<std::pair<std::string, bool>> verdicts;  // (description, feasible)
  std::string text() const;
};

// kind: flow-two-vertex, flow-disjoint, weak-tree, tree-fix. LP verdicts are exact.
GapDemoReport gap_demo(const std::string& kind, int k);

}  // namespace robustpath
