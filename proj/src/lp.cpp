#include "robustpath/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

namespace robustpath {

int LPModel::add_variable(const std::string& name, const Rational& lower) {
  names_.push_back(name);
  lower_.push_back(lower);
  return static_cast<int>(names_.size()) - 1;
}

void LPModel::add_constraint(std::vector<Term> terms, Relation rel, const Rational& rhs, const std::string& name) {
  for (const auto& t : terms)
    if (t.var < 0 || t.var >= num_variables())
      throw Error(ErrorCode::ValidationError, "constraint references undeclared variable");
  constraints_.push_back({std::move(terms), rel, rhs, name});
}

double max_relative_violation(const LPModel& model, const std::vector<Rational>& x) {
  double worst = 0;
  for (int v = 0; v < model.num_variables(); ++v) {
    Rational gap = model.lower(v) - x[v];
    if (gap > 0) worst = std::max(worst, gap.get_d() / std::max(1.0, std::abs(model.lower(v).get_d())));
  }
  for (const auto& c : model.constraints()) {
    Rational lhs = 0;
    double scale = std::max(1.0, std::abs(c.rhs.get_d()));
    double mass = 0;
    for (const auto& t : c.terms) {
      Rational p = t.coef * x[t.var];
      lhs += p;
      mass += std::abs(p.get_d());
    }
    scale = std::max(scale, mass);
    Rational diff = lhs - c.rhs;
    double viol = c.rel == Relation::Equal ? std::abs(diff.get_d()) : std::max(0.0, diff.get_d());
    worst = std::max(worst, viol / scale);
  }
  return worst;
}

bool satisfies_exactly(const LPModel& model, const std::vector<Rational>& x) {
  if (static_cast<int>(x.size()) != model.num_variables()) return false;
  for (int v = 0; v < model.num_variables(); ++v)
    if (x[v] < model.lower(v)) return false;
  for (const auto& c : model.constraints()) {
    Rational lhs = 0;
    for (const auto& t : c.terms) lhs += t.coef * x[t.var];
    if (c.rel == Relation::Equal ? lhs != c.rhs : lhs > c.rhs) return false;
  }
  return true;
}

namespace {

std::string lp_number(const Rational& q) {
  std::string s = format_rational(q);
  if (s.find('/') == std::string::npos) return s;
  std::ostringstream out;
  out.precision(17);
  out << q.get_d();
  return out.str();
}

}  // namespace

std::string dump_lp(const LPModel& model) {
  std::ostringstream out;
  out << "Minimize\n obj:";
  if (model.num_variables() > 0) out << " 0 " << model.name(0);
  out << "\nSubject To\n";
  int idx = 0;
  for (const auto& c : model.constraints()) {
    out << " " << (c.name.empty() ? "r" + std::to_string(idx) : c.name) << ":";
    if (c.terms.empty()) out << " 0 " << (model.num_variables() ? model.name(0) : "x");
    for (size_t j = 0; j < c.terms.size(); ++j) {
      const auto& t = c.terms[j];
      bool neg = t.coef < 0;
      Rational mag = neg ? Rational(-t.coef) : t.coef;
      out << (j == 0 ? (neg ? " -" : " ") : (neg ? " - " : " + ")) << lp_number(mag) << " " << model.name(t.var);
    }
    out << (c.rel == Relation::Equal ? " = " : " <= ") << lp_number(c.rhs) << "\n";
    ++idx;
  }
  out << "Bounds\n";
  for (int v = 0; v < model.num_variables(); ++v) out << " " << model.name(v) << " >= " << lp_number(model.lower(v)) << "\n";
  out << "End\n";
  return out.str();
}

namespace {

// ---------- presolve (exact) ----------

struct PRow {
  std::vector<std::pair<int, Rational>> terms;
  Relation rel;
  Rational rhs;
  bool alive = true;
};

class Presolver {
 public:
  explicit Presolver(int nv) : parent_(nv), fixed_(nv) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  void fix(int v, const Rational& val) {
    int r = find(v);
    if (val < 0) infeasible = true;
    if (fixed_[r]) {
      if (*fixed_[r] != val) infeasible = true;
      return;
    }
    fixed_[r] = val;
    changed = true;
  }

  void unite(int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return;
    parent_[rb] = ra;
    changed = true;
    if (fixed_[rb]) {
      auto val = *fixed_[rb];
      fixed_[rb].reset();
      if (fixed_[ra]) {
        if (*fixed_[ra] != val) infeasible = true;
      } else {
        fixed_[ra] = val;
      }
    }
  }

  const std::optional<Rational>& fixed_value(int v) { return fixed_[find(v)]; }

  void normalize(PRow& row) {
    std::vector<std::pair<int, Rational>> merged;
    merged.reserve(row.terms.size());
    for (auto& [v, a] : row.terms) {
      int r = find(v);
      if (fixed_[r]) {
        row.rhs -= a * *fixed_[r];
      } else {
        merged.emplace_back(r, a);
      }
    }
    std::sort(merged.begin(), merged.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    row.terms.clear();
    for (auto& [v, a] : merged) {
      if (!row.terms.empty() && row.terms.back().first == v)
        row.terms.back().second += a;
      else
        row.terms.emplace_back(v, a);
    }
    row.terms.erase(std::remove_if(row.terms.begin(), row.terms.end(), [](const auto& t) { return t.second == 0; }),
                    row.terms.end());
  }

  void reduce(PRow& row) {
    normalize(row);
    bool all_nonneg = true, all_nonpos = true;
    for (auto& [v, a] : row.terms) {
      if (a < 0) all_nonneg = false;
      if (a > 0) all_nonpos = false;
    }
    int sign_rhs = sgn(row.rhs);
    if (row.terms.empty()) {
      bool ok = row.rel == Relation::Equal ? sign_rhs == 0 : sign_rhs >= 0;
      if (!ok) infeasible = true;
      row.alive = false;
      return;
    }
    if (row.rel == Relation::LessEq) {
      if (all_nonpos && sign_rhs >= 0) {
        row.alive = false;
        return;
      }
      if (all_nonneg && sign_rhs < 0) {
        infeasible = true;
        return;
      }
      if (all_nonneg && sign_rhs == 0) {
        for (auto& [v, a] : row.terms) fix(v, 0);
        row.alive = false;
      }
      return;
    }
    // equality
    if ((all_nonneg && sign_rhs < 0) || (all_nonpos && sign_rhs > 0)) {
      infeasible = true;
      return;
    }
    if ((all_nonneg || all_nonpos) && sign_rhs == 0) {
      for (auto& [v, a] : row.terms) fix(v, 0);
      row.alive = false;
      return;
    }
    if (row.terms.size() == 1) {
      fix(row.terms[0].first, row.rhs / row.terms[0].second);
      row.alive = false;
      return;
    }
    if (row.terms.size() == 2 && sign_rhs == 0 && row.terms[0].second == -row.terms[1].second) {
      unite(row.terms[0].first, row.terms[1].first);
      row.alive = false;
    }
  }

  bool changed = false;
  bool infeasible = false;

 private:
  std::vector<int> parent_;
  std::vector<std::optional<Rational>> fixed_;
};

// ---------- dense phase-1 simplex ----------

template <class T>
struct DRow {
  std::vector<std::pair<int, T>> terms;
  Relation rel;
  T rhs;
};

enum class Status { Feasible, Infeasible, Failed };

template <class T>
struct Phase1Out {
  Status status;
  T residual;
  std::vector<T> y;
  long pivots = 0;
};

inline bool is_zero(const double& x) { return x == 0.0; }
inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

template <class T>
Phase1Out<T> run_phase1(const std::vector<const DRow<T>*>& rows, int nvars, const T& eps, long max_pivots) {
  const int m = static_cast<int>(rows.size());
  int nslack = 0, nart = 0;
  std::vector<int> slack_col(m, -1), art_col(m, -1);
  std::vector<int> sign(m, 1);
  for (int i = 0; i < m; ++i) {
    if (rows[i]->rhs < 0) sign[i] = -1;
    if (rows[i]->rel == Relation::LessEq) slack_col[i] = nvars + nslack++;
  }
  for (int i = 0; i < m; ++i)
    if (!(rows[i]->rel == Relation::LessEq && sign[i] == 1)) art_col[i] = nvars + nslack + nart++;
  const int ncols = nvars + nslack + nart;
  std::vector<T> tab(static_cast<size_t>(m) * ncols, T(0));
  std::vector<T> rhs(m), obj(ncols, T(0));
  std::vector<int> basis(m);
  std::vector<char> artificial(ncols, 0);
  T objval = 0;
  auto at = [&](int i, int j) -> T& { return tab[static_cast<size_t>(i) * ncols + j]; };
  for (int i = 0; i < m; ++i) {
    for (const auto& [v, a] : rows[i]->terms) at(i, v) = sign[i] == 1 ? a : T(-a);
    rhs[i] = sign[i] == 1 ? rows[i]->rhs : T(-rows[i]->rhs);
    if (slack_col[i] >= 0) at(i, slack_col[i]) = T(sign[i]);
    if (art_col[i] >= 0) {
      at(i, art_col[i]) = T(1);
      artificial[art_col[i]] = 1;
      basis[i] = art_col[i];
      for (int j = 0; j < ncols; ++j)
        if (j != art_col[i] && !is_zero(at(i, j))) obj[j] -= at(i, j);
      objval += rhs[i];
    } else {
      basis[i] = slack_col[i];
    }
  }
  Phase1Out<T> out{Status::Failed, objval, {}, 0};
  int degenerate_streak = 0;
  std::vector<int> nz;
  nz.reserve(ncols);
  for (;;) {
    if (!(objval > eps)) break;
    bool bland = degenerate_streak > 50;
    int enter = -1;
    T best = -eps;
    for (int j = 0; j < ncols; ++j) {
      if (artificial[j]) continue;
      if (obj[j] < best) {
        enter = j;
        if (bland) break;
        best = obj[j];
      }
    }
    if (enter < 0) break;
    int leave = -1;
    T best_ratio = 0, best_piv = 0;
    for (int i = 0; i < m; ++i) {
      const T& a = at(i, enter);
      if (!(a > eps)) continue;
      T ratio = rhs[i] / a;
      bool take = false;
      if (leave < 0 || ratio < best_ratio) {
        take = true;
      } else if (ratio == best_ratio) {
        take = bland ? basis[i] < basis[leave] : a > best_piv;
      }
      if (take) {
        leave = i;
        best_ratio = ratio;
        best_piv = a;
      }
    }
    if (leave < 0) break;  // unbounded direction cannot lower a nonnegative objective
    if (++out.pivots > max_pivots) return out;
    degenerate_streak = is_zero(best_ratio) ? degenerate_streak + 1 : 0;
    // pivot
    T piv = at(leave, enter);
    nz.clear();
    for (int j = 0; j < ncols; ++j) {
      T& x = at(leave, j);
      if (is_zero(x)) continue;
      x /= piv;
      nz.push_back(j);
    }
    rhs[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      T f = at(i, enter);
      if (is_zero(f)) continue;
      for (int j : nz) at(i, j) -= f * at(leave, j);
      rhs[i] -= f * rhs[leave];
      if constexpr (std::is_same_v<T, double>) {
        for (int j : nz)
          if (std::abs(at(i, j)) < 1e-13) at(i, j) = 0.0;
        if (rhs[i] < 0 && rhs[i] > -1e-12) rhs[i] = 0.0;
      }
      at(i, enter) = T(0);
    }
    T f = obj[enter];
    if (!is_zero(f)) {
      for (int j : nz) obj[j] -= f * at(leave, j);
      objval -= f * rhs[leave];
      obj[enter] = T(0);
    }
    if (artificial[basis[leave]]) {
      // a departed artificial never re-enters
    }
    basis[leave] = enter;
  }
  T residual = 0;
  for (int i = 0; i < m; ++i)
    if (artificial[basis[i]]) residual += rhs[i];
  out.residual = residual;
  out.y.assign(nvars, T(0));
  for (int i = 0; i < m; ++i)
    if (basis[i] < nvars) out.y[basis[i]] = rhs[i];
  if constexpr (std::is_same_v<T, double>) {
    for (auto& v : out.y)
      if (v < 0) v = 0;
  }
  out.status = Status::Feasible;
  return out;
}

template <class T>
struct LazyOut {
  Status status;
  T residual;
  std::vector<T> y;
};

template <class T>
LazyOut<T> lazy_solve(const std::vector<DRow<T>>& rows, int nvars, const T& eps, const T& accept, double rel_tol,
                      long max_pivots, SolveStats* stats) {
  std::vector<char> active(rows.size(), 0);
  std::vector<const DRow<T>*> act;
  for (size_t r = 0; r < rows.size(); ++r)
    if (rows[r].rel == Relation::Equal) {
      active[r] = 1;
      act.push_back(&rows[r]);
    }
  long pivots = 0;
  for (int round = 0;; ++round) {
    if (stats) stats->lazy_rounds = round + 1;
    auto p1 = run_phase1<T>(act, nvars, eps, max_pivots - pivots);
    pivots += p1.pivots;
    if (stats) stats->pivots = pivots;
    if (p1.status == Status::Failed) return {Status::Failed, p1.residual, {}};
    if (p1.residual > accept) return {Status::Infeasible, p1.residual, {}};
    std::vector<std::pair<double, size_t>> violated;
    for (size_t r = 0; r < rows.size(); ++r) {
      if (active[r]) continue;
      T lhs = 0;
      double mass = 0;
      for (const auto& [v, a] : rows[r].terms) {
        T p = a * p1.y[v];
        lhs += p;
        if constexpr (std::is_same_v<T, double>) mass += std::abs(p);
      }
      T diff = lhs - rows[r].rhs;
      if constexpr (std::is_same_v<T, double>) {
        double scale = std::max({1.0, std::abs(rows[r].rhs), mass});
        if (diff / scale > rel_tol) violated.emplace_back(-diff / scale, r);
      } else {
        if (diff > 0) violated.emplace_back(0.0, r);
      }
    }
    if (violated.empty()) return {Status::Feasible, p1.residual, std::move(p1.y)};
    std::sort(violated.begin(), violated.end());
    for (auto& [score, r] : violated) {
      active[r] = 1;
      act.push_back(&rows[r]);
    }
  }
}

}  // namespace

FeasibilityVerdict solve_feasibility(const LPModel& model, const SolveOptions& opts, SolveStats* stats) {
  const int nv = model.num_variables();
  Presolver pre(nv);
  std::vector<PRow> rows;
  rows.reserve(model.constraints().size());
  for (const auto& c : model.constraints()) {
    PRow r;
    r.rel = c.rel;
    r.rhs = c.rhs;
    for (const auto& t : c.terms) {
      r.terms.emplace_back(t.var, t.coef);
      r.rhs -= t.coef * model.lower(t.var);
    }
    rows.push_back(std::move(r));
  }
  FeasibilityVerdict infeasible{false, {}, true};
  do {
    pre.changed = false;
    for (auto& r : rows) {
      if (!r.alive) continue;
      pre.reduce(r);
      if (pre.infeasible) return infeasible;
    }
  } while (pre.changed);
  for (auto& r : rows)
    if (r.alive) pre.normalize(r);

  std::vector<int> index(nv, -1);
  int nred = 0;
  std::vector<const PRow*> live;
  for (auto& r : rows) {
    if (!r.alive) continue;
    live.push_back(&r);
    for (auto& [v, a] : r.terms)
      if (index[v] < 0) index[v] = nred++;
  }
  if (stats) {
    stats->presolved_rows = static_cast<int>(live.size());
    stats->presolved_vars = nred;
  }

  auto assemble = [&](const std::vector<Rational>& y) {
    std::vector<Rational> x(nv);
    for (int v = 0; v < nv; ++v) {
      int r = pre.find(v);
      Rational val = 0;
      if (pre.fixed_value(r))
        val = *pre.fixed_value(r);
      else if (index[r] >= 0)
        val = y[index[r]];
      x[v] = val + model.lower(v);
    }
    return x;
  };

  auto solve_exact = [&]() -> FeasibilityVerdict {
    std::vector<DRow<Rational>> er;
    for (const PRow* r : live) {
      DRow<Rational> d{{}, r->rel, r->rhs};
      for (auto& [v, a] : r->terms) d.terms.emplace_back(index[v], a);
      er.push_back(std::move(d));
    }
    auto res = lazy_solve<Rational>(er, nred, Rational(0), Rational(0), 0.0, opts.max_pivots, stats);
    if (res.status == Status::Failed) throw Error(ErrorCode::NumericalFailure, "pivot budget exhausted (exact)");
    if (res.status == Status::Infeasible) return infeasible;
    auto x = assemble(res.y);
    if (!satisfies_exactly(model, x)) throw Error(ErrorCode::NumericalFailure, "exact post-solve check failed");
    return {true, std::move(x), true};
  };

  if (opts.exact == ExactMode::Always) return solve_exact();

  std::vector<DRow<double>> dr;
  for (const PRow* r : live) {
    double scale = 0;
    for (auto& [v, a] : r->terms) scale = std::max(scale, std::abs(a.get_d()));
    DRow<double> d{{}, r->rel, r->rhs.get_d() / scale};
    for (auto& [v, a] : r->terms) d.terms.emplace_back(index[v], a.get_d() / scale);
    dr.push_back(std::move(d));
  }
  const double tau = opts.tolerance;
  auto res = lazy_solve<double>(dr, nred, 1e-9, 10 * tau, tau, opts.max_pivots, stats);
  bool ambiguous = res.status == Status::Failed;
  if (res.status == Status::Infeasible) {
    if (res.residual > 10 * tau) return {false, {}, false};
    ambiguous = true;
  }
  if (res.status == Status::Feasible) {
    std::vector<Rational> y(nred);
    for (int j = 0; j < nred; ++j) y[j] = Rational(res.y[j]);
    auto x = assemble(y);
    if (res.residual <= tau && max_relative_violation(model, x) <= tau) return {true, std::move(x), false};
    ambiguous = true;
  }
  long entries = static_cast<long>(live.size()) * (nred + 2L * static_cast<long>(live.size()));
  if (ambiguous && opts.exact != ExactMode::Never && entries <= opts.exact_entry_cap) return solve_exact();
  throw Error(ErrorCode::NumericalFailure, "could not certify feasibility either way");
}

}  // namespace robustpath
