#pragma once

#include <optional>

#include "gapcert/lp.hpp"
#include "gapcert/pmp.hpp"
#include "gapcert/process.hpp"

namespace gapcert {

struct NormalityOptions {
  int lp_cells = 24;        // LP discretization (refined 2x for confirmation)
  int directions = 16;      // C-sphere samples for Hamiltonian dominance
  int a_samples_per_dim = 3;
  double active_tol = 1e-6;    // nodes where constraint measures may live
  double geometry_tol = 1e-6;  // boundary activity for the endpoint cone
  int nondeg_probe_cells = 5;  // cells at which ||q|| != 0 is probed
  double feasibility_tol = 1e-4;
  PmpTolerances certificate_tol;
};

/// The abnormal-multiplier linear program at lambda = 0 on a fixed process:
/// variables are split costate node values, weighted subdifferential
/// coefficients (one block per active node and constraint), the variation
/// multiplier and transversality cone coefficients. A normalization row is
/// appended per query before solving.
struct AbnormalLp {
  LinearProgram lp;             // rows without any normalization pinning
  int cells = 0;
  int n = 0;
  int n_constraints = 0;
  // column layout
  int col_p_plus = 0, col_p_minus = 0;  // (cells+1)*(1+n) each
  int col_pi = 0;                       // piP >= 0, pi = -piP
  int col_cone = 0;                     // transversality cone coefficients
  int col_theta = 0;                    // start of theta blocks
  struct ThetaCol {
    int constraint = 0;
    int node = 0;
    Vec gradient;  // (1+n)
  };
  std::vector<ThetaCol> theta;
  ExtendedProcess grid_process;  // the resampled process the LP refers to

  int p_index(int node, int comp, bool plus) const {
    return (plus ? col_p_plus : col_p_minus) + node * (n + 1) + comp;
  }
  /// Extract a multiplier set (lambda = 0) from an LP solution vector.
  MultiplierSet extract(const Vec& x) const;
};

AbnormalLp assemble(const ProblemSpec& p, const ExtendedProcess& proc,
                    const NormalityOptions& opts);

enum class NormalityKind { normal, abnormal, degenerate_abnormal, inconclusive };

struct NormalityVerdict {
  NormalityKind verdict = NormalityKind::inconclusive;
  std::optional<MultiplierSet> certificate;  // lambda = 0 witness when abnormal
  std::optional<PmpReport> certificate_check;
  ExtendedProcess certificate_process;  // grid the certificate lives on
  NondegeneracyMargin certificate_margin;
  // diagnostics
  int base_cells = 0, refined_cells = 0;
  std::vector<std::string> lp_log;
  std::string note;

  bool is_abnormal() const {
    return verdict == NormalityKind::abnormal || verdict == NormalityKind::degenerate_abnormal;
  }
};

/// Normal / abnormal / degenerate-abnormal classification by linear-feasibility
/// search over multiplier sets with lambda = 0. "normal" (LP infeasible) is
/// confirmed at two grid resolutions; abnormal certificates are re-verified
/// through check_pmp. Verdicts are certified only up to the discretization
/// recorded in the diagnostics.
NormalityVerdict classify(const ProblemSpec& p, const ExtendedProcess& proc,
                          const NormalityOptions& opts = {});

}  // namespace gapcert
