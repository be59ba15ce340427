#pragma once

#include "sntp/types.hpp"

namespace sntp {

// maximize objective . x  subject to  a_eq x = b_eq,  0 <= x <= upper.
struct LpProblem {
  Matrix a_eq;
  Vector b_eq;
  Vector objective;
  Vector upper;
};

enum class LpStatus { Optimal, Infeasible };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Vector x;
};

// Dense two-phase tableau simplex with Bland's rule. Redundant equality
// rows are dropped after phase one. Throws LpError when pivoting fails to
// terminate or the tableau loses finiteness.
LpResult solve_lp(const LpProblem& problem);

}  // namespace sntp
