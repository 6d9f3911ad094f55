// Dense two-phase primal simplex with Bland's anti-cycling rule. Built for
// the tiny LPs used elsewhere in this library (tens of rows/columns), not for
// sparse or large-scale work.
#pragma once

#include <cstddef>
#include <vector>

#include "fpp/vectorspace.hpp"

namespace fpp::lp {

enum class Rel { LessEq, Eq, GreaterEq };

/// min c.x  subject to  A x (rel) b  rowwise, with x_j >= 0 unless free.
struct LinearProgram {
  Matrix A;
  Vector b;
  Vector c;
  std::vector<Rel> rels;            // one per row
  std::vector<bool> free_vars;      // one per column; default all false

  std::size_t rows() const { return A.rows; }
  std::size_t cols() const { return A.cols; }
};

enum class LPStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LPResult {
  LPStatus status = LPStatus::IterationLimit;
  Vector x;              // primal solution in the caller's variables
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Bland's rule guarantees termination, so IterationLimit only appears if the
/// cap (default 100000 pivots across both phases) is hit.
LPResult solve_lp(const LinearProgram& lp, std::size_t max_pivots = 100000);

}  // namespace fpp::lp
