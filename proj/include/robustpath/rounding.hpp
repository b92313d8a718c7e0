#pragma once

#include <cstdint>
#include <vector>

#include "robustpath/choice_tree.hpp"

namespace robustpath {

struct RoundingOutcome {
  FeasibleSubtree subtree;
  std::vector<Rational> costs;  // exact f_i over the selected nodes
  uint64_t seed = 0;
};

// Top-down sampling: at a selected Or node pick child u with probability x_u / x_v among
// children with x_u > 0; at And nodes keep every child.
RoundingOutcome dependent_round(const ChoiceTree& tree, const std::vector<double>& x, uint64_t seed,
                                double tol = 1e-9);

// Seed of trial t: t = 0 uses seed itself, later trials split it by counter.
uint64_t trial_seed(uint64_t seed, int trial);

// 8 H log2(k) GS
double tail_threshold(int height, int k, double gs);

struct RetryReport {
  RoundingOutcome best;
  int trials = 0;
  double threshold = 0;             // 8 H log2 k GS
  std::vector<int> tail_hits;       // per agent: trials with f_i >= threshold
  std::vector<char> bound_held;     // per trial: max_i f_i <= threshold
  std::vector<double> moment_mean;  // per agent: mean of (1+1/(2H))^(f_i/GS)
};

RetryReport round_with_retries(const ChoiceTree& tree, const std::vector<double>& x, const Rational& gs, int trials,
                               uint64_t seed);

struct MomentReport {
  int height = 0;
  Rational gs;
  long trials = 0;
  double bound = 0;  // 1 + 1/H
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::vector<char> flagged;  // mean > (1+1/H)(1+3 stderr)
  bool any_flagged() const;
};

MomentReport moment_check(const ChoiceTree& tree, const std::vector<double>& x, const Rational& gs, long trials,
                          uint64_t seed);

}  // namespace robustpath
