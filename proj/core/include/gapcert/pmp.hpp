#pragma once

#include "gapcert/process.hpp"

namespace gapcert {

/// One state-constraint multiplier measure: nonnegative atoms at grid nodes
/// plus a piecewise-constant density, each carrying its (m0,m) value in
/// R^{1+n} (defined mu-a.e.).
struct ConstraintMeasure {
  struct Atom {
    double s = 0.0;
    double mass = 0.0;
    Vec m;  // (m0, m) at the atom
  };
  std::vector<Atom> atoms;
  std::vector<double> density;  // per cell rate, may be empty
  std::vector<Vec> density_m;   // per cell (m0,m), same length as density

  double total_variation(const ControlGrid& grid) const;
  double mass_after_zero(const ControlGrid& grid) const;
};

/// PMP certificate candidate: costate path, cost multiplier, variation
/// multiplier and per-constraint measures. The costate is stored as node
/// samples of (p0, p) in R^{1+n}.
struct MultiplierSet {
  std::vector<Vec> ptx;  // M+1 nodes, each (1+n)
  double pi = 0.0;       // <= 0
  double lambda = 0.0;   // >= 0
  std::vector<ConstraintMeasure> mu;  // one per state constraint

  MultiplierSet scaled(double c) const;
};

/// q = p + running mu-integral of (m0,m): cell values follow the left-open
/// convention (value a.e. on ]s_k, s_{k+1}[ includes atoms at s <= s_k), the
/// terminal value carries the full mass including atoms at S.
struct QPaths {
  std::vector<Vec> cell;  // M entries, each (1+n)
  Vec at_end;             // (1+n)
};

QPaths accumulate_q(const MultiplierSet& mult, const ControlGrid& grid);

/// Unmaximized Hamiltonian p0 w0 + p.(f w0 + sum g_j w^j) + pi |w|.
double hamiltonian(const ProblemSpec& p, double t, const Vec& x, double q0, const Vec& q,
                   double pi, double w0, const Vec& w, const Vec& a);

struct PmpTolerances {
  double algebraic = 1e-6;      // H = 0, measure signs
  double maximization = 1e-4;   // condition (iv) defect
  double adjoint = 1e-4;        // condition (ii)
  double transversality = 1e-6; // condition (iii)
  double nontrivial = 1e-8;     // conditions (i)/(viii)
  double support = 1e-6;        // condition (vi) activity tolerance
  double geometry = 1e-6;       // boundary-activity tolerance for cones
  int omega0_levels = 17;       // maximization grid on C
  int directions = 64;
  int a_samples_per_dim = 5;
};

struct PmpReport {
  double nontriviality_margin = 0.0;   // (i)
  double adjoint_residual = 0.0;       // (ii)
  double transversality_distance = 0.0;  // (iii)
  double hamiltonian_abs = 0.0;        // (iv), |H| along the process
  double maximization_defect = 0.0;    // (iv), sup over the C x A grid minus H
  double subdiff_distance = 0.0;       // (v)
  double support_violation = 0.0;      // (vi)
  double pi_residual = 0.0;            // (vii)
  double strengthened_margin = 0.0;    // (viii)
  bool strengthened_applicable = false;
  bool inconclusive = false;           // a geometry oracle refused
  std::string note;

  bool pass(const PmpTolerances& tol) const;
};

PmpReport check_pmp(const ProblemSpec& p, const ExtendedProcess& proc, const MultiplierSet& mult,
                    const PmpTolerances& tol = {});

struct NondegeneracyMargin {
  double margin = 0.0;
  bool advancing = false;  // y0(S) > y0(0): the mu(]0,S]) + ||q|| + lambda case
  double mass_after_zero = 0.0;
  double q_ess_sup = 0.0;
  double q0_ess_sup = 0.0;
};

/// Strengthened non-triviality of the nondegenerate Maximum Principle,
/// evaluated on the given multipliers.
NondegeneracyMargin check_nondegeneracy(const ExtendedProcess& proc, const MultiplierSet& mult);

}  // namespace gapcert
