#pragma once

#include <Eigen/Core>

#include "gapcert/poly.hpp"

namespace gapcert {

/// Dense linear program over nonnegative variables:
///   minimize c'x  s.t.  A x {<=,=,>=} b,  x >= 0.
/// Free variables must be split by the caller. Solved with a two-phase
/// tableau simplex (Dantzig pricing, Bland fallback against cycling).
struct LinearProgram {
  enum Rel : char { LE = 'L', EQ = 'E', GE = 'G' };

  int ncols = 0;
  Vec c;           // empty => pure feasibility (c = 0)
  Mat A;           // rows x ncols
  Vec b;
  std::vector<Rel> rel;

  void reserve_rows(int rows);
  int add_row(const Vec& coeffs, Rel r, double rhs);
};

struct LpResult {
  enum class Status { optimal, infeasible, unbounded, iteration_limit };
  Status status = Status::iteration_limit;
  Vec x;
  double objective = 0.0;
  int iterations = 0;

  bool feasible() const { return status == Status::optimal || status == Status::unbounded; }
};

LpResult lp_solve(const LinearProgram& lp, int max_iterations = 200000);

}  // namespace gapcert
