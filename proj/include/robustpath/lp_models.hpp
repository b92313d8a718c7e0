#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "robustpath/choice_tree.hpp"
#include "robustpath/instance.hpp"
#include "robustpath/lp.hpp"
#include "robustpath/sp_decomp.hpp"

namespace robustpath {

// x_e >= 0, sum_e c_i(e) x_e <= T per agent, unit s-t flow with conservation.
LPModel build_flow_lp(const Instance& inst, const Rational& t);
// Flow-LP plus x_e = 0 for every edge with some c_i(e) > T.
LPModel build_enh_flow_lp(const Instance& inst, const Rational& t);

LPModel build_tree_lp(const DecompTree& tree, const Rational& gs);
LPModel build_weak_tree_lp(const DecompTree& tree, const Rational& gs);

// Model for one guess, plus whatever the caller needs to continue from the accepted round.
struct GuessModel {
  LPModel model;
  std::shared_ptr<const void> context;
};

using GuessBuilder = std::function<GuessModel(const Rational& guess)>;

struct DoublingOptions {
  bool refine = false;                 // (1+eps) search below the last halving
  Rational epsilon = Rational(1, 10);
  SolveOptions solve;
  int max_rounds = 400;
};

struct DoublingResult {
  Rational gs_star;
  std::vector<Rational> x_star;  // feasible point of the round at gs_star
  int rounds = 0;
  std::shared_ptr<const void> context;
  bool last_infeasible_seen = false;  // a guess below gs_star was tried and failed
  Rational last_infeasible;
};

// Starts at max_i sum_e c_i(e) and halves while feasible.
DoublingResult doubling_search(const GuessBuilder& builder, const Instance& inst, const DoublingOptions& opts = {});

// Builder for the series-parallel pipeline: truncate, re-recognize, Tree-LP.
struct SpRound {
  SubInstance sub;
  DecompTree tree;
  ChoiceTree choice;
};
GuessBuilder sp_tree_lp_builder(const Instance& inst);
GuessBuilder enh_flow_builder(const Instance& inst);

LPModel infeasible_model();

}  // namespace robustpath
