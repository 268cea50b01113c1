#pragma once

#include "gapcert/process.hpp"

namespace gapcert {

/// The monotone time change sigma(t) = t - t1 + v(t) and its inverse y0,
/// stored as piecewise-linear tables with exact node inversion.
struct TimeChange {
  std::vector<double> t_nodes;
  std::vector<double> s_nodes;  // sigma(t_nodes), strictly increasing

  double S() const { return s_nodes.back(); }
  double sigma(double t) const;
  double inverse(double s) const;  // y0

  static TimeChange from_strict(const StrictProcess& sp);
};

/// Embedding of a strict process into the extended problem. Node-exact: the
/// pseudo-time grid is the sigma image of the t-grid, endpoints and cost are
/// preserved bitwise.
ExtendedProcess embed(const ProblemSpec& p, const StrictProcess& sp);

/// Inverse of the embedding for processes with omega0 >= threshold on every
/// cell; resamples onto a uniform t-grid with the same cell count. Throws
/// FastArcError naming the offending cells otherwise.
StrictProcess invert(const ProblemSpec& p, const ExtendedProcess& proc, double threshold);

struct StrictifyResult {
  ExtendedProcess process;
  std::vector<int> replaced_cells;   // cells where omega0 < eps was lifted
  std::vector<int> degenerate_cells; // cells with omega = 0 forced to pure drift
};

/// Cell-wise control surgery (omega0, omega) -> (eps, (1-eps) omega/|omega|)
/// wherever omega0 < eps, followed by re-integration from the same initial
/// point. Cells with omega = 0 fall back to (1, 0) and are flagged.
StrictifyResult strictify(const ProblemSpec& p, const ExtendedProcess& proc, double eps);

}  // namespace gapcert
