#include "fpp/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fpp::lp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-7;

// Tableau in standard form: min c.y, W y = r, y >= 0. The tableau stores W
// and r; the basis maps each row to its basic column.
struct Tableau {
  std::size_t m = 0, n = 0;
  std::vector<double> W;  // row-major m x n
  Vector r;
  std::vector<std::size_t> basis;

  double& at(std::size_t i, std::size_t j) { return W[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return W[i * n + j]; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = at(row, col);
    for (std::size_t j = 0; j < n; ++j) at(row, j) /= p;
    r[row] /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) at(i, j) -= f * at(row, j);
      r[i] -= f * r[row];
      at(i, col) = 0.0;  // kill rounding residue in the pivot column
    }
    at(row, col) = 1.0;
    basis[row] = col;
  }
};

// One simplex phase under Bland's rule. `cost` has length n. Returns the
// status; on Optimal/IterationLimit the tableau holds the final basis.
LPStatus run_phase(Tableau& t, const Vector& cost, std::size_t& pivots,
                   std::size_t max_pivots) {
  const std::size_t m = t.m, n = t.n;
  while (true) {
    // Reduced costs: cost_j - cost_B . column_j.
    Vector y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = cost[t.basis[i]];
    std::size_t enter = n;
    for (std::size_t j = 0; j < n; ++j) {
      double red = cost[j];
      for (std::size_t i = 0; i < m; ++i) red -= y[i] * t.at(i, j);
      if (red < -kCostTol) {
        enter = j;  // Bland: smallest eligible index
        break;
      }
    }
    if (enter == n) return LPStatus::Optimal;

    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double a = t.at(i, enter);
      if (a <= kPivotTol) continue;
      const double ratio = t.r[i] / a;
      if (ratio < best_ratio - 1e-15 ||
          (std::fabs(ratio - best_ratio) <= 1e-15 &&
           (leave == m || t.basis[i] < t.basis[leave]))) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave == m) return LPStatus::Unbounded;
    t.pivot(leave, enter);
    if (++pivots >= max_pivots) return LPStatus::IterationLimit;
  }
}

}  // namespace

LPResult solve_lp(const LinearProgram& lp, std::size_t max_pivots) {
  const std::size_t m = lp.rows();
  const std::size_t n_orig = lp.cols();
  if (lp.b.size() != m || lp.rels.size() != m || lp.c.size() != n_orig)
    throw DimMismatch("LP dimensions are inconsistent");
  if (!lp.free_vars.empty() && lp.free_vars.size() != n_orig)
    throw DimMismatch("free-variable mask length mismatch");

  // Column layout: for each original variable one column (nonneg) or two
  // columns (free split x = x+ - x-), then one slack/surplus per inequality,
  // then one artificial per row.
  std::vector<std::size_t> col_of(n_orig);      // first column of variable j
  std::vector<bool> is_free(n_orig, false);
  std::size_t n_var = 0;
  for (std::size_t j = 0; j < n_orig; ++j) {
    is_free[j] = !lp.free_vars.empty() && lp.free_vars[j];
    col_of[j] = n_var;
    n_var += is_free[j] ? 2 : 1;
  }
  std::size_t n_slack = 0;
  for (auto rel : lp.rels)
    if (rel != Rel::Eq) ++n_slack;
  const std::size_t n = n_var + n_slack + m;

  Tableau t;
  t.m = m;
  t.n = n;
  t.W.assign(m * n, 0.0);
  t.r.resize(m);
  t.basis.resize(m);

  std::size_t slack_col = n_var;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;  // keep r >= 0
    for (std::size_t j = 0; j < n_orig; ++j) {
      const double a = sign * lp.A.at(i, j);
      t.at(i, col_of[j]) = a;
      if (is_free[j]) t.at(i, col_of[j] + 1) = -a;
    }
    if (lp.rels[i] != Rel::Eq) {
      const double s = lp.rels[i] == Rel::LessEq ? 1.0 : -1.0;
      t.at(i, slack_col++) = sign * s;
    }
    t.r[i] = sign * lp.b[i];
    t.at(i, n_var + n_slack + i) = 1.0;  // artificial
    t.basis[i] = n_var + n_slack + i;
  }

  std::size_t pivots = 0;

  // Phase 1: drive the artificial variables to zero.
  Vector phase1_cost(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) phase1_cost[n_var + n_slack + i] = 1.0;
  LPStatus st = run_phase(t, phase1_cost, pivots, max_pivots);
  LPResult res;
  res.iterations = pivots;
  if (st == LPStatus::IterationLimit) {
    res.status = st;
    return res;
  }
  double phase1_obj = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis[i] >= n_var + n_slack) phase1_obj += t.r[i];
  if (phase1_obj > kFeasTol) {
    res.status = LPStatus::Infeasible;
    res.iterations = pivots;
    return res;
  }

  // Pivot any zero-level artificial out of the basis; drop its row's
  // redundancy by leaving it basic on a structural column when one exists.
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis[i] < n_var + n_slack) continue;
    std::size_t col = n;
    for (std::size_t j = 0; j < n_var + n_slack; ++j)
      if (std::fabs(t.at(i, j)) > kPivotTol) {
        col = j;
        break;
      }
    if (col < n) t.pivot(i, col);
    // Otherwise the row is all zeros in structural columns (redundant
    // constraint); the artificial stays basic at level 0 and phase 2 keeps it
    // there because its cost is +inf-like (blocked below).
  }

  // Phase 2: original objective; artificial columns are fenced off with a
  // prohibitive cost so they never re-enter.
  Vector phase2_cost(n, 0.0);
  for (std::size_t j = 0; j < n_orig; ++j) {
    phase2_cost[col_of[j]] = lp.c[j];
    if (is_free[j]) phase2_cost[col_of[j] + 1] = -lp.c[j];
  }
  double big = 1.0;
  for (double cj : lp.c) big = std::max(big, std::fabs(cj));
  for (std::size_t i = 0; i < m; ++i)
    phase2_cost[n_var + n_slack + i] = 1e6 * big;
  st = run_phase(t, phase2_cost, pivots, max_pivots);
  res.iterations = pivots;
  res.status = st;
  if (st != LPStatus::Optimal) return res;

  Vector y(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) y[t.basis[i]] = t.r[i];
  res.x.assign(n_orig, 0.0);
  for (std::size_t j = 0; j < n_orig; ++j) {
    res.x[j] = y[col_of[j]];
    if (is_free[j]) res.x[j] -= y[col_of[j] + 1];
  }
  res.objective = 0.0;
  for (std::size_t j = 0; j < n_orig; ++j) res.objective += lp.c[j] * res.x[j];
  return res;
}

}  // namespace fpp::lp
