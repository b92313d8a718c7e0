#include "robustpath/pipelines.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "robustpath/hardness.hpp"
#include "robustpath/lp_models.hpp"
#include "robustpath/rounding.hpp"
#include "robustpath/sp_decomp.hpp"

namespace robustpath {

std::string pipeline_name(Pipeline p) {
  switch (p) {
    case Pipeline::Sp: return "sp";
    case Pipeline::Treewidth: return "treewidth";
    case Pipeline::Metatree: return "metatree";
    case Pipeline::FlowBaseline: return "flow-baseline";
    case Pipeline::Brute: return "brute";
  }
  return "?";
}

Pipeline parse_pipeline(const std::string& name) {
  for (Pipeline p : {Pipeline::Sp, Pipeline::Treewidth, Pipeline::Metatree, Pipeline::FlowBaseline, Pipeline::Brute})
    if (pipeline_name(p) == name) return p;
  throw Error(ErrorCode::ValidationError, "unknown pipeline '" + name + "'");
}

bool pipeline_is_stochastic(Pipeline p) {
  return p == Pipeline::Sp || p == Pipeline::Treewidth || p == Pipeline::Metatree;
}

namespace {

DoublingOptions doubling_options(const PipelineOptions& opts) {
  DoublingOptions d;
  d.refine = opts.refine;
  d.solve = opts.solve;
  return d;
}

void fill_costs(const Instance& inst, PipelineResult& res) {
  res.costs = path_costs(inst, res.path);
  res.max_cost = max_of(res.costs);
}

void fill_report(const RetryReport& rep, PipelineResult& res) {
  res.trials = rep.trials;
  res.tail_freq = 0;
  res.moment_max = 0;
  for (size_t i = 0; i < rep.tail_hits.size(); ++i) {
    res.tail_freq = std::max(res.tail_freq, static_cast<double>(rep.tail_hits[i]) / rep.trials);
    res.moment_max = std::max(res.moment_max, rep.moment_mean[i]);
  }
  res.bound_freq = static_cast<double>(std::count(rep.bound_held.begin(), rep.bound_held.end(), 1)) / rep.trials;
}

struct MetaRound {
  SubInstance sub;
  Metatree mt;
};

struct TwRound {
  TreeLabelingInstance tli;
  LabelingTree lt;
};

}  // namespace

namespace {

// Doubling result plus the tree to round on, for the three tree pipelines.
struct Prepared {
  DoublingResult dr;
  const ChoiceTree* tree = nullptr;
  Rational budget;  // GS* (1 for the normalized treewidth costs)
  int height = 0;
};

Prepared prepare_sp(const Instance& inst, const PipelineOptions& opts) {
  validate_instance(inst);
  recognize_sp(inst);  // NotSeriesParallel before any LP work
  Prepared p;
  p.dr = doubling_search(sp_tree_lp_builder(inst), inst, doubling_options(opts));
  auto round = std::static_pointer_cast<const SpRound>(p.dr.context);
  p.tree = &round->choice;
  p.budget = p.dr.gs_star;
  p.height = round->tree.height;
  return p;
}

Prepared prepare_metatree(const Instance& work, const PipelineOptions& opts) {
  if (metatree_logical_size(work.n) > opts.metatree_cap)
    throw Error(ErrorCode::SizeCapExceeded, "metatree for n = " + std::to_string(work.n) + " exceeds the cap");
  GuessBuilder builder = [&work, &opts](const Rational& gs) -> GuessModel {
    auto round = std::make_shared<MetaRound>();
    round->sub = truncate_instance(work, gs);
    if (round->sub.inst.m() == 0) return {infeasible_model(), nullptr};
    round->mt = build_metatree(round->sub.inst, opts.metatree_cap);
    LPModel lp = build_gg_tree_lp(round->mt, gs);
    return {std::move(lp), round};
  };
  Prepared p;
  p.dr = doubling_search(builder, work, doubling_options(opts));
  auto round = std::static_pointer_cast<const MetaRound>(p.dr.context);
  p.tree = &round->mt.choice;
  p.budget = p.dr.gs_star;
  p.height = round->mt.choice.height();
  return p;
}

Prepared prepare_treewidth(const Instance& inst, const PipelineOptions& opts) {
  validate_instance(inst);
  auto td = std::make_shared<TreeDecomposition>(build_tree_decomposition(inst, opts.width_hint));
  GuessBuilder builder = [&inst, td, &opts](const Rational& gs) -> GuessModel {
    auto round = std::make_shared<TwRound>();
    round->tli = make_tree_labeling_instance(inst, *td, gs);
    try {
      round->lt = build_labeling_tree(round->tli, opts.label_cap);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Infeasible) throw;
      return {infeasible_model(), nullptr};
    }
    LPModel lp = build_choice_tree_lp(round->lt.tree, Rational(1), true);
    return {std::move(lp), round};
  };
  Prepared p;
  p.dr = doubling_search(builder, inst, doubling_options(opts));
  auto round = std::static_pointer_cast<const TwRound>(p.dr.context);
  p.tree = &round->lt.tree;
  p.budget = 1;
  p.height = round->lt.tree.height();
  return p;
}

}  // namespace

PipelineResult solve_sp(const Instance& inst, const PipelineOptions& opts) {
  Prepared p = prepare_sp(inst, opts);
  auto round = std::static_pointer_cast<const SpRound>(p.dr.context);
  RetryReport rep = round_with_retries(*p.tree, to_doubles(p.dr.x_star), p.budget, opts.trials, opts.seed);
  PipelineResult res;
  res.path = map_path(round->sub, subtree_to_path(round->tree, rep.best.subtree));
  res.gs_star = p.dr.gs_star;
  res.height = p.height;
  res.rounds = p.dr.rounds;
  fill_report(rep, res);
  fill_costs(inst, res);
  return res;
}

PipelineResult solve_metatree(const Instance& inst, const PipelineOptions& opts) {
  validate_instance(inst);
  // Parallel copies become two-edge detours so every metatree leaf names one edge.
  SubInstance desugared = desugar_parallel_edges(inst);
  Prepared p = prepare_metatree(desugared.inst, opts);
  auto round = std::static_pointer_cast<const MetaRound>(p.dr.context);
  RetryReport rep = round_with_retries(*p.tree, to_doubles(p.dr.x_star), p.budget, opts.trials, opts.seed);
  StPath local = feasible_subtree_to_path(round->mt, rep.best.subtree, round->sub.inst);
  PipelineResult res;
  res.path = map_path(desugared, map_path(round->sub, local));
  res.gs_star = p.dr.gs_star;
  res.height = p.height;
  res.rounds = p.dr.rounds;
  fill_report(rep, res);
  fill_costs(inst, res);
  return res;
}

PipelineResult solve_treewidth(const Instance& inst, const PipelineOptions& opts) {
  Prepared p = prepare_treewidth(inst, opts);
  auto round = std::static_pointer_cast<const TwRound>(p.dr.context);
  // Costs are normalized by GS, so the rounding budget is 1.
  RetryReport rep = round_with_retries(*p.tree, to_doubles(p.dr.x_star), p.budget, opts.trials, opts.seed);
  LabelAssignment la = labeling_from_subtree(round->tli, round->lt, rep.best.subtree);
  PipelineResult res;
  res.path = labeling_to_path(round->tli, la);
  res.gs_star = p.dr.gs_star;
  res.height = p.height;
  res.rounds = p.dr.rounds;
  fill_report(rep, res);
  fill_costs(inst, res);
  return res;
}

MomentReport pipeline_moment_check(const Instance& inst, Pipeline pipeline, long trials,
                                   const PipelineOptions& opts) {
  Prepared p;
  SubInstance desugared;
  switch (pipeline) {
    case Pipeline::Sp: p = prepare_sp(inst, opts); break;
    case Pipeline::Treewidth: p = prepare_treewidth(inst, opts); break;
    case Pipeline::Metatree:
      validate_instance(inst);
      desugared = desugar_parallel_edges(inst);
      p = prepare_metatree(desugared.inst, opts);
      break;
    default: throw Error(ErrorCode::ValidationError, "moment check needs a rounding pipeline");
  }
  return moment_check(*p.tree, to_doubles(p.dr.x_star), p.budget, trials, opts.seed);
}

PipelineResult solve_flow_baseline(const Instance& inst, const PipelineOptions& opts) {
  validate_instance(inst);
  PipelineResult res;
  res.path = sum_baseline(inst);
  DoublingResult dr = doubling_search(enh_flow_builder(inst), inst, doubling_options(opts));
  res.gs_star = dr.gs_star;
  res.rounds = dr.rounds;
  fill_costs(inst, res);
  return res;
}

PipelineResult solve_brute(const Instance& inst, const PipelineOptions& opts) {
  validate_instance(inst);
  PipelineResult res;
  res.path = brute_force_minimax(inst, opts.enum_cap).path;
  fill_costs(inst, res);
  return res;
}

PipelineResult run_pipeline(const Instance& inst, Pipeline p, const PipelineOptions& opts) {
  PipelineResult res;
  switch (p) {
    case Pipeline::Sp: res = solve_sp(inst, opts); break;
    case Pipeline::Treewidth: res = solve_treewidth(inst, opts); break;
    case Pipeline::Metatree: res = solve_metatree(inst, opts); break;
    case Pipeline::FlowBaseline: res = solve_flow_baseline(inst, opts); break;
    case Pipeline::Brute: res = solve_brute(inst, opts); break;
  }
  if (!is_valid_path(inst, res.path))
    throw Error(ErrorCode::ValidationFailure, pipeline_name(p) + " returned an invalid path");
  if (path_costs(inst, res.path) != res.costs)
    throw Error(ErrorCode::ValidationFailure, pipeline_name(p) + " reported costs that do not match the path");
  return res;
}

namespace {

long count_paths(const Instance& inst, long cap) {
  std::vector<std::vector<int>> out(inst.n);
  for (const Edge& e : inst.edges) out[e.tail].push_back(e.head);
  std::vector<long> memo(inst.n, -1);
  std::function<long(int)> rec = [&](int v) -> long {
    if (v == inst.sink) return 1;
    if (memo[v] >= 0) return memo[v];
    long total = 0;
    for (int w : out[v]) total = std::min(cap + 1, total + rec(w));
    return memo[v] = total;
  };
  return rec(inst.source);
}

void random_costs(Instance& inst, int k, Rng& rng, int max_cost) {
  inst.costs.assign(k, {});
  for (int i = 0; i < k; ++i)
    for (int e = 0; e < inst.m(); ++e) inst.costs[i].push_back(static_cast<long>(rng.below(max_cost + 1)));
}

bool reaches(const Instance& inst) {
  std::vector<std::vector<int>> out(inst.n);
  for (const Edge& e : inst.edges) out[e.tail].push_back(e.head);
  std::vector<char> seen(inst.n, 0);
  std::vector<int> stack{inst.source};
  seen[inst.source] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : out[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return seen[inst.sink];
}

// Orients undirected edges along a random order with the source first and the sink last.
Instance orient(int n, const std::vector<std::pair<int, int>>& und, double keep_prob, Rng& rng) {
  std::vector<int> rank(n);
  std::vector<int> middle;
  for (int v = 1; v + 1 < n; ++v) middle.push_back(v);
  for (int i = static_cast<int>(middle.size()) - 1; i > 0; --i) std::swap(middle[i], middle[rng.below(i + 1)]);
  rank[0] = 0;
  rank[n - 1] = n - 1;
  for (size_t i = 0; i < middle.size(); ++i) rank[middle[i]] = static_cast<int>(i) + 1;
  Instance inst;
  inst.n = n;
  inst.source = 0;
  inst.sink = n - 1;
  for (auto [a, b] : und) {
    if (rng.uniform() >= keep_prob) continue;
    inst.edges.push_back(rank[a] < rank[b] ? Edge{a, b} : Edge{b, a});
  }
  return inst;
}

}  // namespace

Instance random_sp_instance(int edges, int k, Rng& rng, long path_cap, int max_cost) {
  Instance inst;
  inst.n = 2;
  inst.source = 0;
  inst.sink = 1;
  inst.edges = {{0, 1}};
  int stalls = 0;
  while (inst.m() < edges) {
    int e = static_cast<int>(rng.below(inst.m()));
    Edge ed = inst.edges[e];
    int w = inst.n;
    if (rng.uniform() < 0.5 || stalls > 50 || inst.m() + 1 == edges) {
      inst.n += 1;
      inst.edges[e] = {ed.tail, w};
      inst.edges.push_back({w, ed.head});
      continue;
    }
    Instance trial = inst;
    trial.n += 1;
    trial.edges.push_back({ed.tail, w});
    trial.edges.push_back({w, ed.head});
    if (count_paths(trial, path_cap) > path_cap) {
      ++stalls;
      continue;
    }
    stalls = 0;
    inst = std::move(trial);
  }
  random_costs(inst, k, rng, max_cost);
  return inst;
}

Instance random_dag_instance(int n, double edge_prob, int k, Rng& rng, int max_cost) {
  if (n < 2) throw Error(ErrorCode::ValidationError, "need at least two vertices");
  std::vector<std::pair<int, int>> und;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) und.push_back({a, b});
  for (;;) {
    Instance inst = orient(n, und, edge_prob, rng);
    if (!reaches(inst)) continue;
    random_costs(inst, k, rng, max_cost);
    return inst;
  }
}

Instance random_tw2_instance(int n, double keep_prob, int k, Rng& rng, int max_cost) {
  if (n < 2) throw Error(ErrorCode::ValidationError, "need at least two vertices");
  for (;;) {
    std::vector<std::pair<int, int>> und;
    std::vector<int> order(n);
    for (int v = 0; v < n; ++v) order[v] = v;
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    und.push_back({order[0], order[1]});
    for (int i = 2; i < n; ++i) {
      auto [a, b] = und[rng.below(und.size())];
      und.push_back({order[i], a});
      und.push_back({order[i], b});
    }
    Instance inst = orient(n, und, keep_prob, rng);
    if (!reaches(inst)) continue;
    random_costs(inst, k, rng, max_cost);
    return inst;
  }
}

std::string GapDemoReport::text() const {
  std::ostringstream out;
  out << "kind " << kind << " k " << k << "\n";
  out << "integral optimum " << format_rational(opt) << "\n";
  for (const auto& [what, feasible] : verdicts) out << what << ": " << (feasible ? "Feasible" : "Infeasible") << "\n";
  out << "fractional value " << format_rational(lp_value) << "\n";
  out << "gap " << format_rational(gap) << "\n";
  return out.str();
}

GapDemoReport gap_demo(const std::string& kind, int k) {
  if (k < 1) throw Error(ErrorCode::ValidationError, "k must be at least 1");
  SolveOptions exact;
  exact.exact = ExactMode::Always;
  auto feasible = [&](const LPModel& lp) { return solve_feasibility(lp, exact).feasible; };
  GapDemoReport rep;
  rep.kind = kind;
  rep.k = k;
  auto label = [](const std::string& lp, const char* sym, const Rational& v) {
    return lp + " at " + sym + " = " + format_rational(v);
  };
  if (kind == "flow-two-vertex") {
    Instance inst = gen_two_vertex_gap(k);
    rep.opt = brute_force_minimax(inst).value;
    Rational t(1, k);
    rep.verdicts.push_back({label("Flow-LP", "T", t), feasible(build_flow_lp(inst, t))});
    if (k > 1) {
      Rational below(1, k + 1);
      rep.verdicts.push_back({label("Flow-LP", "T", below), feasible(build_flow_lp(inst, below))});
    }
    rep.lp_value = t;
  } else if (kind == "flow-disjoint") {
    Instance inst = gen_disjoint_paths_gap(k, k);
    rep.opt = brute_force_minimax(inst).value;
    rep.verdicts.push_back({label("Enh-Flow-LP", "T", 1), feasible(build_enh_flow_lp(inst, 1))});
    Rational half(1, 2);
    rep.verdicts.push_back({label("Enh-Flow-LP", "T", half), feasible(build_enh_flow_lp(inst, half))});
    rep.lp_value = 1;
  } else if (kind == "weak-tree" || kind == "tree-fix") {
    Instance inst = gen_disjoint_paths_gap(k, k);
    DecompTree tree = recognize_sp(inst);
    rep.opt = brute_force_minimax(inst).value;
    std::vector<Rational> guesses{1};
    if (k / 2 > 1) guesses.push_back(Rational(k) / 2);
    if (k - 1 > 1) guesses.push_back(k - 1);
    guesses.push_back(k);
    if (kind == "weak-tree")
      rep.verdicts.push_back({label("Weak-Tree-LP", "GS", 1), feasible(build_weak_tree_lp(tree, 1))});
    Rational lowest = -1;
    for (const Rational& g : guesses) {
      bool ok = feasible(build_tree_lp(tree, g));
      rep.verdicts.push_back({label("Tree-LP", "GS", g), ok});
      if (ok && lowest < 0) lowest = g;
    }
    rep.lp_value = kind == "weak-tree" ? Rational(1) : lowest;
  } else {
    throw Error(ErrorCode::ValidationError, "unknown gap demo '" + kind + "'");
  }
  rep.gap = rep.lp_value > 0 ? Rational(rep.opt / rep.lp_value) : Rational(0);
  return rep;
}

}  // namespace robustpath
