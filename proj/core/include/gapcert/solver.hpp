#pragma once

#include <cstdint>
#include <optional>

#include "gapcert/process.hpp"

namespace gapcert {

struct SolveOptions {
  int cells = 400;
  int multistarts = 16;
  std::uint64_t seed = 1;
  double penalty_growth = 10.0;
  double smoothing = 0.0;        // reserved for the direct-omega mode
  double kkt_tol = 1e-9;         // projected-gradient stopping tolerance
  double constraint_tol = 1e-6;  // outer feasibility target
  double eps_restriction = 0.0;  // omega0 >= eps (0 = none)
  double horizon_cap_factor = 10.0;
  int max_outer = 18;
  int max_inner = 600;
  bool parallel = true;
};

struct SolveDiagnostics {
  int starts = 0;
  int best_start = -1;
  bool converged = false;
  bool inner_monotone = true;           // merit never increased within inner solves
  std::vector<double> outer_objective;  // Psi after each outer stage (best start)
  std::vector<double> outer_violation;
  std::string message;
};

/// Discrete dual estimates from the final augmented-Lagrangian state; rough
/// initial guesses for the certificate machinery, not certificates themselves.
struct MultiplierEstimates {
  std::vector<Vec> costate;                        // node-wise (1+n+1)
  std::vector<std::vector<double>> h_multipliers;  // per constraint, per node
  Vec endpoint_multiplier;
  double variation_multiplier = 0.0;
};

struct SolveResult {
  ExtendedProcess process;
  double objective = 0.0;
  FeasibilityReport feas;
  MultiplierEstimates duals;
  SolveDiagnostics diag;
};

/// Direct transcription of the extended problem, solved by augmented
/// Lagrangian with projected Barzilai-Borwein gradient steps and
/// deterministic multi-start (fixed seed => identical result).
SolveResult solve(const ProblemSpec& p, const SolveOptions& opts);

/// Restriction omega0 >= eps with a d_infty trust region of radius delta
/// around the anchor; initial guess is strictify(anchor, eps). `warm`
/// optionally injects an extra starting point (e.g. the previous probe row).
SolveResult solve_strict(const ProblemSpec& p, double eps, const ExtendedProcess& anchor,
                         double delta, const SolveOptions& opts,
                         const ExtendedProcess* warm = nullptr);

}  // namespace gapcert
