#pragma once

#include <string>
#include <vector>

#include "robustpath/common.hpp"

namespace robustpath {

enum class Relation { LessEq, Equal };

struct Term {
  int var;
  Rational coef;
};

struct Constraint {
  std::vector<Term> terms;
  Relation rel = Relation::LessEq;
  Rational rhs = 0;
  std::string name;
};

// Pure feasibility model: variables with finite lower bounds, linear rows, no objective.
class LPModel {
 public:
  int add_variable(const std::string& name, const Rational& lower = 0);
  void add_constraint(std::vector<Term> terms, Relation rel, const Rational& rhs, const std::string& name = "");

  int num_variables() const { return static_cast<int>(names_.size()); }
  const std::string& name(int v) const { return names_[v]; }
  const Rational& lower(int v) const { return lower_[v]; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

 private:
  std::vector<std::string> names_;
  std::vector<Rational> lower_;
  std::vector<Constraint> constraints_;
};

struct FeasibilityVerdict {
  bool feasible = false;
  std::vector<Rational> assignment;  // empty when infeasible
  bool exact = false;                // decided in rational arithmetic
};

enum class ExactMode { Auto, Always, Never };

struct SolveOptions {
  ExactMode exact = ExactMode::Auto;
  double tolerance = 1e-9;
  long max_pivots = 5000000;
  long exact_entry_cap = 400000;
};

struct SolveStats {
  int presolved_rows = 0;
  int presolved_vars = 0;
  int lazy_rounds = 0;
  long pivots = 0;
};

FeasibilityVerdict solve_feasibility(const LPModel& model, const SolveOptions& opts = {}, SolveStats* stats = nullptr);

// Largest relative violation of the model's rows (and bounds) at x.
double max_relative_violation(const LPModel& model, const std::vector<Rational>& x);
bool satisfies_exactly(const LPModel& model, const std::vector<Rational>& x);

// CPLEX-LP text, rows in model order.
std::string dump_lp(const LPModel& model);

}  // namespace robustpath
