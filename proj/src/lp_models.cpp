#include "robustpath/lp_models.hpp"

#include <optional>

namespace robustpath {

namespace {

LPModel flow_model(const Instance& inst, const Rational& t, bool truncate) {
  LPModel lp;
  for (int e = 0; e < inst.m(); ++e) lp.add_variable("x_e" + std::to_string(e));
  for (int i = 0; i < inst.k(); ++i) {
    std::vector<Term> terms;
    for (int e = 0; e < inst.m(); ++e)
      if (inst.costs[i][e] != 0) terms.push_back({e, inst.costs[i][e]});
    lp.add_constraint(std::move(terms), Relation::LessEq, t, "cost_a" + std::to_string(i));
  }
  std::vector<std::vector<Term>> balance(inst.n);
  for (int e = 0; e < inst.m(); ++e) {
    balance[inst.edges[e].tail].push_back({e, -1});
    balance[inst.edges[e].head].push_back({e, 1});
  }
  for (int v = 0; v < inst.n; ++v) {
    if (v == inst.source) {
      auto terms = balance[v];
      for (auto& term : terms) term.coef = -term.coef;
      lp.add_constraint(std::move(terms), Relation::Equal, 1, "source");
    } else if (v == inst.sink) {
      lp.add_constraint(balance[v], Relation::Equal, 1, "sink");
    } else if (!balance[v].empty()) {
      lp.add_constraint(balance[v], Relation::Equal, 0, "flow_v" + std::to_string(v));
    }
  }
  if (truncate)
    for (int e = 0; e < inst.m(); ++e)
      for (int i = 0; i < inst.k(); ++i)
        if (inst.costs[i][e] > t) {
          lp.add_constraint({{e, 1}}, Relation::Equal, 0, "trunc_e" + std::to_string(e));
          break;
        }
  return lp;
}

}  // namespace

LPModel build_flow_lp(const Instance& inst, const Rational& t) { return flow_model(inst, t, false); }
LPModel build_enh_flow_lp(const Instance& inst, const Rational& t) { return flow_model(inst, t, true); }

LPModel build_tree_lp(const DecompTree& tree, const Rational& gs) {
  return build_choice_tree_lp(to_choice_tree(tree), gs, true);
}

LPModel build_weak_tree_lp(const DecompTree& tree, const Rational& gs) {
  return build_choice_tree_lp(to_choice_tree(tree), gs, false);
}

LPModel infeasible_model() {
  LPModel lp;
  lp.add_constraint({}, Relation::LessEq, -1, "no_path");
  return lp;
}

DoublingResult doubling_search(const GuessBuilder& builder, const Instance& inst, const DoublingOptions& opts) {
  Rational gs = total_cost_max(inst);
  std::optional<Rational> min_positive;
  for (const auto& row : inst.costs)
    for (const auto& c : row)
      if (c > 0 && (!min_positive || c < *min_positive)) min_positive = c;
  DoublingResult res;
  bool have = false;
  for (int round = 0; round < opts.max_rounds; ++round) {
    ++res.rounds;
    GuessModel gm = builder(gs);
    FeasibilityVerdict v = solve_feasibility(gm.model, opts.solve);
    if (!v.feasible) {
      if (!have) throw Error(ErrorCode::NeverFeasible, "no feasible guess, even the initial one");
      res.last_infeasible_seen = true;
      res.last_infeasible = gs;
      break;
    }
    have = true;
    res.gs_star = gs;
    res.x_star = std::move(v.assignment);
    res.context = gm.context;
    // Below the smallest positive cost the truncated model no longer changes.
    if (gs == 0 || !min_positive || gs < *min_positive) break;
    gs /= 2;
  }
  if (opts.refine && res.last_infeasible_seen) {
    Rational factor = 1 + opts.epsilon;
    for (int round = 0; round < opts.max_rounds; ++round) {
      Rational g = res.gs_star / factor;
      if (g <= res.last_infeasible) break;
      ++res.rounds;
      GuessModel gm = builder(g);
      FeasibilityVerdict v = solve_feasibility(gm.model, opts.solve);
      if (!v.feasible) {
        res.last_infeasible = g;
        break;
      }
      res.gs_star = g;
      res.x_star = std::move(v.assignment);
      res.context = gm.context;
    }
  }
  return res;
}

GuessBuilder sp_tree_lp_builder(const Instance& inst) {
  return [&inst](const Rational& gs) -> GuessModel {
    auto round = std::make_shared<SpRound>();
    round->sub = truncate_instance(inst, gs);
    if (round->sub.inst.m() == 0) return {infeasible_model(), nullptr};
    round->tree = recognize_sp(round->sub.inst);
    round->choice = to_choice_tree(round->tree);
    LPModel lp = build_choice_tree_lp(round->choice, gs, true);
    return {std::move(lp), round};
  };
}

GuessBuilder enh_flow_builder(const Instance& inst) {
  return [&inst](const Rational& t) -> GuessModel { return {build_enh_flow_lp(inst, t), nullptr}; };
}

}  // namespace robustpath
