#include "gapcert/gap_probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapcert/errors.hpp"

namespace gapcert {

GapReport probe(const ProblemSpec& p, const ExtendedProcess& anchor, const ProbeOptions& opts) {
  if (opts.eps_levels.empty()) throw Error(ErrorKind::bad_input, "probe: empty eps sequence");
  for (size_t i = 1; i < opts.eps_levels.size(); ++i)
    if (!(opts.eps_levels[i] < opts.eps_levels[i - 1]))
      throw Error(ErrorKind::bad_input, "probe: eps levels must be strictly decreasing");
  FeasibilityReport afeas = feasibility(p, anchor);
  if (afeas.worst() > opts.feasibility_tol * 100)
    throw Error(ErrorKind::bad_input, "probe: anchor is not feasible");

  GapReport rep;
  rep.extended_objective = cost(p, anchor);
  DInftyGraph anchor_graph = graph_of(anchor);

  const ExtendedProcess* warm = nullptr;
  ExtendedProcess warm_store;
  GapRow carried;  // last feasible row's data, valid at every smaller eps
  bool have_carried = false;
  for (double eps : opts.eps_levels) {
    SolveResult sr = solve_strict(p, eps, anchor, opts.delta, opts.solve, warm);
    GapRow row;
    row.eps = eps;
    row.objective = sr.objective;
    row.feas = sr.feas;
    row.d_infinity = d_infty(graph_of(sr.process), anchor_graph);
    row.feasible = sr.feas.worst() <= opts.feasibility_tol &&
                   row.d_infinity <= opts.delta + opts.feasibility_tol;
    // A feasible point found at a larger eps is feasible here as well; it
    // bounds this row's value if the local solve did worse.
    if (have_carried && (!row.feasible || carried.objective < row.objective - 1e-12)) {
      row.objective = carried.objective;
      row.feas = carried.feas;
      row.d_infinity = carried.d_infinity;
      row.feasible = true;
    } else if (row.feasible) {
      warm_store = sr.process;
      warm = &warm_store;
      carried = row;
      have_carried = true;
    }
    rep.rows.push_back(row);
  }

  // Extrapolate the strict-restricted value to eps -> 0 from the last rows.
  std::vector<const GapRow*> feas_rows;
  for (const auto& r : rep.rows)
    if (r.feasible) feas_rows.push_back(&r);
  if (feas_rows.empty()) {
    rep.strict_limit_estimate = std::numeric_limits<double>::infinity();
    rep.verdict = GapVerdict::gap_suspected;
    rep.estimated_gap = std::numeric_limits<double>::infinity();
    rep.note =
        "no feasible strict process found at any eps level inside the trust ball; "
        "isolation suspected (one-sided evidence, not a certificate)";
    return rep;
  }
  if (opts.extrapolate && feas_rows.size() >= 2) {
    const GapRow* a = feas_rows[feas_rows.size() - 2];
    const GapRow* b = feas_rows.back();
    double slope = (b->objective - a->objective) / (b->eps - a->eps);
    rep.strict_limit_estimate = b->objective - slope * b->eps;
  } else {
    rep.strict_limit_estimate = feas_rows.back()->objective;
  }
  rep.estimated_gap = std::max(0.0, rep.strict_limit_estimate - rep.extended_objective);
  rep.verdict = rep.estimated_gap <= 10 * opts.feasibility_tol + 1e-9
                    ? GapVerdict::no_gap_observed
                    : GapVerdict::gap_suspected;
  rep.note =
      "one-sided evidence from local solves at finite eps; 'no gap observed' is not a "
      "certificate and 'gap suspected' is not a proof";
  return rep;
}

}  // namespace gapcert
