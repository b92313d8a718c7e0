#include "robustpath/choice_tree.hpp"

#include <algorithm>

namespace robustpath {

int ChoiceTree::add_node(NodeKind kind) {
  kind_.push_back(kind);
  forbidden_.push_back(0);
  cost_ref_.push_back(-1);
  child_begin_.push_back(0);
  child_count_.push_back(0);
  return static_cast<int>(kind_.size()) - 1;
}

void ChoiceTree::set_cost(int v, std::vector<Rational> cost) {
  bool any = std::any_of(cost.begin(), cost.end(), [](const Rational& c) { return c != 0; });
  if (!any) {
    cost_ref_[v] = -1;
    return;
  }
  cost_ref_[v] = static_cast<int>(cost_table_.size());
  cost_table_.push_back(std::move(cost));
}

void ChoiceTree::set_children(int v, const std::vector<int>& children) {
  child_begin_[v] = static_cast<int>(child_ids_.size());
  child_count_[v] = static_cast<int>(children.size());
  child_ids_.insert(child_ids_.end(), children.begin(), children.end());
}

std::vector<int> ChoiceTree::children(int v) const {
  return std::vector<int>(child_ids_.begin() + child_begin_[v], child_ids_.begin() + child_begin_[v] + child_count_[v]);
}

const std::vector<Rational>& ChoiceTree::cost(int v) const {
  if (cost_ref_[v] >= 0) return cost_table_[cost_ref_[v]];
  if (static_cast<int>(zero_.size()) != k_) const_cast<std::vector<Rational>&>(zero_).assign(k_, Rational(0));
  return zero_;
}

void ChoiceTree::finalize() {
  const int n = size();
  parent_.assign(n, -1);
  depth_.assign(n, 0);
  tin_.assign(n, -1);
  tout_.assign(n, -1);
  zero_.assign(k_, Rational(0));
  costed_by_tin_.clear();
  height_ = 0;
  int clock = 0;
  std::vector<std::pair<int, int>> stack{{root_, 0}};
  depth_[root_] = 1;
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next == 0) {
      if (tin_[v] >= 0) throw Error(ErrorCode::MalformedSubtree, "choice tree node reachable twice");
      tin_[v] = clock++;
      if (cost_ref_[v] >= 0) costed_by_tin_.push_back(v);
      height_ = std::max(height_, depth_[v]);
    }
    if (next < child_count_[v]) {
      int c = child_ids_[child_begin_[v] + next];
      ++next;
      parent_[c] = v;
      depth_[c] = depth_[v] + 1;
      stack.emplace_back(c, 0);
    } else {
      tout_[v] = clock;
      stack.pop_back();
    }
  }
}

void check_feasible_subtree(const ChoiceTree& tree, const FeasibleSubtree& sub) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::MalformedSubtree, msg); };
  if (!std::is_sorted(sub.begin(), sub.end()) || std::adjacent_find(sub.begin(), sub.end()) != sub.end())
    fail("node list must be sorted and unique");
  std::vector<char> in(tree.size(), 0);
  for (int v : sub) {
    if (v < 0 || v >= tree.size()) fail("node id out of range");
    in[v] = 1;
  }
  if (!in[tree.root()]) fail("root missing");
  for (int v : sub) {
    if (v != tree.root() && !in[tree.parent(v)]) fail("node " + std::to_string(v) + " detached from its parent");
    int chosen = 0;
    for (int j = 0; j < tree.num_children(v); ++j) chosen += in[tree.child(v, j)];
    if (tree.kind(v) == NodeKind::And && chosen != tree.num_children(v))
      fail("series/merging node " + std::to_string(v) + " missing children");
    if (tree.kind(v) == NodeKind::Or && chosen != 1)
      fail("parallel/splitting node " + std::to_string(v) + " must keep exactly one child");
    if (tree.forbidden(v)) fail("forbidden leaf " + std::to_string(v) + " selected");
  }
}

std::vector<Rational> subtree_cost(const ChoiceTree& tree, const FeasibleSubtree& sub) {
  std::vector<Rational> total(tree.k(), Rational(0));
  for (int v : sub)
    if (tree.has_cost(v))
      for (int i = 0; i < tree.k(); ++i) total[i] += tree.cost(v)[i];
  return total;
}

LPModel build_choice_tree_lp(const ChoiceTree& tree, const Rational& gs, bool per_node) {
  LPModel lp;
  for (int v = 0; v < tree.size(); ++v) lp.add_variable("x" + std::to_string(v));
  const auto& costed = tree.costed_by_tin();
  std::vector<int> costed_tin;
  for (int v : costed) costed_tin.push_back(tree.tin(v));
  for (int i = 0; i < tree.k(); ++i) {
    for (int v = 0; v < tree.size(); ++v) {
      if (!per_node && v != tree.root()) continue;
      auto lo = std::lower_bound(costed_tin.begin(), costed_tin.end(), tree.tin(v));
      auto hi = std::lower_bound(costed_tin.begin(), costed_tin.end(), tree.tout(v));
      std::vector<Term> terms;
      for (auto it = lo; it != hi; ++it) {
        int u = costed[it - costed_tin.begin()];
        if (tree.forbidden(u)) continue;
        const Rational& c = tree.cost(u)[i];
        if (c != 0) terms.push_back({u, c});
      }
      if (terms.empty()) continue;
      bool self = false;
      for (auto& t : terms)
        if (t.var == v) {
          t.coef -= gs;
          self = true;
        }
      if (!self) terms.push_back({v, -gs});
      lp.add_constraint(std::move(terms), Relation::LessEq, 0,
                        "cost_a" + std::to_string(i) + "_n" + std::to_string(v));
    }
  }
  lp.add_constraint({{tree.root(), 1}}, Relation::Equal, 1, "root");
  for (int v = 0; v < tree.size(); ++v) {
    if (tree.forbidden(v)) lp.add_constraint({{v, 1}}, Relation::Equal, 0, "phi_n" + std::to_string(v));
    if (tree.kind(v) == NodeKind::Or) {
      std::vector<Term> terms{{v, -1}};
      for (int j = 0; j < tree.num_children(v); ++j) terms.push_back({tree.child(v, j), 1});
      lp.add_constraint(std::move(terms), Relation::Equal, 0, "or_n" + std::to_string(v));
    } else if (tree.kind(v) == NodeKind::And) {
      for (int j = 0; j < tree.num_children(v); ++j)
        lp.add_constraint({{tree.child(v, j), 1}, {v, -1}}, Relation::Equal, 0,
                          "and_n" + std::to_string(v) + "_" + std::to_string(j));
    }
  }
  return lp;
}

std::vector<double> to_doubles(const std::vector<Rational>& x) {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& q : x) out.push_back(q.get_d());
  return out;
}

}  // namespace robustpath
