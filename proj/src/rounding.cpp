#include "robustpath/rounding.hpp"

#include <algorithm>
#include <cmath>

namespace robustpath {

namespace {

// Visits selected nodes in preorder; returns them (unsorted).
template <class Visit>
void sample(const ChoiceTree& tree, const std::vector<double>& x, Rng& rng, double tol, Visit&& visit) {
  std::vector<int> stack{tree.root()};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    visit(v);
    int nc = tree.num_children(v);
    if (nc == 0) continue;
    double xv = x[v];
    double scale = std::max(1.0, std::abs(xv));
    if (tree.kind(v) == NodeKind::And) {
      for (int j = nc - 1; j >= 0; --j) {
        int c = tree.child(v, j);
        if (std::abs(x[c] - xv) > tol * scale)
          throw Error(ErrorCode::InconsistentFractional, "series/merging child differs from parent at node " +
                                                             std::to_string(v));
        stack.push_back(c);
      }
      continue;
    }
    double total = 0;
    for (int j = 0; j < nc; ++j) total += std::max(0.0, x[tree.child(v, j)]);
    if (std::abs(total - xv) > tol * scale)
      throw Error(ErrorCode::InconsistentFractional, "child mass does not match parent at node " + std::to_string(v));
    double floor = 1e-12 * std::max(xv, 0.0);
    double live = 0;
    for (int j = 0; j < nc; ++j) {
      double xc = x[tree.child(v, j)];
      if (xc > floor) live += xc;
    }
    if (!(live > 0))
      throw Error(ErrorCode::InconsistentFractional, "all children have zero mass at node " + std::to_string(v));
    double r = rng.uniform() * live;
    int pick = -1;
    for (int j = 0; j < nc; ++j) {
      double xc = x[tree.child(v, j)];
      if (!(xc > floor)) continue;
      pick = tree.child(v, j);
      if (r < xc) break;
      r -= xc;
    }
    stack.push_back(pick);
  }
}

std::vector<std::vector<double>> double_costs(const ChoiceTree& tree) {
  std::vector<std::vector<double>> c(tree.size());
  for (int v = 0; v < tree.size(); ++v)
    if (tree.has_cost(v)) c[v] = to_doubles(tree.cost(v));
  return c;
}

}  // namespace

RoundingOutcome dependent_round(const ChoiceTree& tree, const std::vector<double>& x, uint64_t seed, double tol) {
  Rng rng(seed);
  RoundingOutcome out;
  out.seed = seed;
  sample(tree, x, rng, tol, [&](int v) { out.subtree.push_back(v); });
  std::sort(out.subtree.begin(), out.subtree.end());
  out.costs = subtree_cost(tree, out.subtree);
  return out;
}

uint64_t trial_seed(uint64_t seed, int trial) { return trial == 0 ? seed : Rng(seed).split(trial).state(); }

double tail_threshold(int height, int k, double gs) { return 8.0 * height * std::log2(static_cast<double>(k)) * gs; }

RetryReport round_with_retries(const ChoiceTree& tree, const std::vector<double>& x, const Rational& gs, int trials,
                               uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::ValidationError, "trials must be at least 1");
  const int k = tree.k();
  const int H = tree.height();
  RetryReport rep;
  rep.trials = trials;
  rep.threshold = tail_threshold(H, k, gs.get_d());
  rep.tail_hits.assign(k, 0);
  rep.moment_mean.assign(k, 0.0);
  const double z = 1.0 + 1.0 / (2.0 * H);
  const double g = gs.get_d();
  Rational best_value = -1;
  for (int t = 0; t < trials; ++t) {
    RoundingOutcome o = dependent_round(tree, x, trial_seed(seed, t));
    Rational mx = 0;
    bool held = true;
    for (int i = 0; i < k; ++i) {
      double f = o.costs[i].get_d();
      if (o.costs[i] > mx) mx = o.costs[i];
      if (f >= rep.threshold) ++rep.tail_hits[i];
      if (f > rep.threshold) held = false;
      rep.moment_mean[i] += g > 0 ? std::pow(z, f / g) : (f > 0 ? INFINITY : 1.0);
    }
    rep.bound_held.push_back(held);
    if (best_value < 0 || mx < best_value) {
      best_value = mx;
      rep.best = std::move(o);
    }
  }
  for (auto& m : rep.moment_mean) m /= trials;
  return rep;
}

bool MomentReport::any_flagged() const { return std::any_of(flagged.begin(), flagged.end(), [](char c) { return c; }); }

MomentReport moment_check(const ChoiceTree& tree, const std::vector<double>& x, const Rational& gs, long trials,
                          uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::ValidationError, "trials must be at least 1");
  const int k = tree.k();
  MomentReport rep;
  rep.height = tree.height();
  rep.gs = gs;
  rep.trials = trials;
  rep.bound = 1.0 + 1.0 / rep.height;
  const double z = 1.0 + 1.0 / (2.0 * rep.height);
  const double g = gs.get_d();
  auto dc = double_costs(tree);
  std::vector<double> sum(k, 0.0), sumsq(k, 0.0), f(k);
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, static_cast<int>(t)));
    std::fill(f.begin(), f.end(), 0.0);
    sample(tree, x, rng, 1e-9, [&](int v) {
      if (!dc[v].empty())
        for (int i = 0; i < k; ++i) f[i] += dc[v][i];
    });
    for (int i = 0; i < k; ++i) {
      double val = g > 0 ? std::pow(z, f[i] / g) : 1.0;
      sum[i] += val;
      sumsq[i] += val * val;
    }
  }
  for (int i = 0; i < k; ++i) {
    double mean = sum[i] / trials;
    double var = trials > 1 ? std::max(0.0, (sumsq[i] - trials * mean * mean) / (trials - 1)) : 0.0;
    double se = std::sqrt(var / trials);
    rep.mean.push_back(mean);
    rep.stderr_.push_back(se);
    rep.flagged.push_back(mean > rep.bound * (1.0 + 3.0 * se));
  }
  return rep;
}

}  // namespace robustpath
