#pragma once

#include "gapcert/solver.hpp"

namespace gapcert {

struct ProbeOptions {
  double delta = 0.5;
  std::vector<double> eps_levels = {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32,
                                    1.0 / 64, 1.0 / 128};
  SolveOptions solve;
  bool extrapolate = true;
  double feasibility_tol = 1e-6;
};

struct GapRow {
  double eps = 0.0;
  double objective = 0.0;
  FeasibilityReport feas;
  double d_infinity = 0.0;  // to the anchor
  bool feasible = false;    // residuals and trust radius both satisfied
};

enum class GapVerdict { no_gap_observed, gap_suspected };

struct GapReport {
  double extended_objective = 0.0;  // J_e at the anchor
  std::vector<GapRow> rows;         // eps descending
  double strict_limit_estimate = 0.0;
  double estimated_gap = 0.0;  // max(0, strict limit - J_e)
  GapVerdict verdict = GapVerdict::gap_suspected;
  std::string note;  // one-sided validity statement
};

/// Empirical probe of the local infimum gap at an extended minimizer: solves
/// the omega0 >= eps restrictions inside the d_infty ball of radius delta
/// around the anchor, one row per eps, warm-starting each row with the
/// previous one. Evidence only: the verdict never certifies gap absence
/// (that is the qualification machinery's job) and never asserts a gap.
GapReport probe(const ProblemSpec& p, const ExtendedProcess& anchor, const ProbeOptions& opts);

}  // namespace gapcert
