#include "gapcert/pmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapcert/errors.hpp"
#include "gapcert/nnls.hpp"

namespace gapcert {

double ConstraintMeasure::total_variation(const ControlGrid& grid) const {
  double tv = 0.0;
  for (const auto& a : atoms) tv += a.mass;
  for (size_t k = 0; k < density.size(); ++k) tv += density[k] * grid.ds(static_cast<int>(k));
  return tv;
}

double ConstraintMeasure::mass_after_zero(const ControlGrid& grid) const {
  double tv = 0.0;
  for (const auto& a : atoms)
    if (a.s > 1e-12 * std::max(1.0, grid.S())) tv += a.mass;
  for (size_t k = 0; k < density.size(); ++k) tv += density[k] * grid.ds(static_cast<int>(k));
  return tv;
}

MultiplierSet MultiplierSet::scaled(double c) const {
  MultiplierSet out = *this;
  for (auto& v : out.ptx) v *= c;
  out.pi *= c;
  out.lambda *= c;
  for (auto& cm : out.mu) {
    for (auto& a : cm.atoms) a.mass *= c;
    for (auto& d : cm.density) d *= c;
  }
  return out;
}

QPaths accumulate_q(const MultiplierSet& mult, const ControlGrid& grid) {
  const int M = grid.cells();
  const int d = static_cast<int>(mult.ptx.front().size());
  if (static_cast<int>(mult.ptx.size()) != M + 1)
    throw Error(ErrorKind::grid_mismatch, "accumulate_q: costate path does not match the grid");

  // Atom masses snapped to nodes; cumulative weighted-gradient sums.
  std::vector<Vec> node_jump(M + 1, Vec::Zero(d));
  for (const auto& cm : mult.mu) {
    for (const auto& a : cm.atoms) {
      int best = 0;
      double bd = std::abs(grid.s[0] - a.s);
      for (int k = 1; k <= M; ++k) {
        double cand = std::abs(grid.s[k] - a.s);
        if (cand < bd) {
          bd = cand;
          best = k;
        }
      }
      if (bd > 1e-9 * std::max(1.0, grid.S()))
        throw Error(ErrorKind::atom_outside_grid,
                    "accumulate_q: atom at s=" + std::to_string(a.s) + " is not on the grid");
      if (a.mass < -1e-12) throw Error(ErrorKind::bad_input, "accumulate_q: negative atom mass");
      node_jump[best] += a.mass * a.m;
    }
  }

  QPaths q;
  q.cell.resize(M);
  Vec acc = Vec::Zero(d);
  for (int k = 0; k < M; ++k) {
    acc += node_jump[k];  // atoms at s_k enter ]s_k, s_{k+1}[
    q.cell[k] = mult.ptx[k] + acc;
  }
  acc += node_jump[M];
  q.at_end = mult.ptx[M] + acc;

  // Densities: integral over [0, s_k] enters cell k; full integral at S.
  for (const auto& cm : mult.mu) {
    if (cm.density.empty()) continue;
    if (static_cast<int>(cm.density.size()) != M || cm.density_m.size() != cm.density.size())
      throw Error(ErrorKind::grid_mismatch, "accumulate_q: density does not match the grid");
    Vec run = Vec::Zero(d);
    for (int k = 0; k < M; ++k) {
      q.cell[k] += run;
      if (cm.density[k] < -1e-12)
        throw Error(ErrorKind::bad_input, "accumulate_q: negative density");
      run += cm.density[k] * grid.ds(k) * cm.density_m[k];
    }
    q.at_end += run;
  }
  return q;
}

double hamiltonian(const ProblemSpec& p, double t, const Vec& x, double q0, const Vec& q,
                   double pi, double w0, const Vec& w, const Vec& a) {
  return q0 * w0 + q.dot(p.combined_field(t, x, w0, w, a)) + pi * w.norm();
}

bool PmpReport::pass(const PmpTolerances& tol) const {
  if (inconclusive) return false;
  return nontriviality_margin > tol.nontrivial && adjoint_residual <= tol.adjoint &&
         transversality_distance <= tol.transversality && hamiltonian_abs <= tol.algebraic &&
         maximization_defect <= tol.maximization && subdiff_distance <= tol.algebraic &&
         support_violation <= tol.algebraic && pi_residual <= tol.algebraic &&
         (!strengthened_applicable || strengthened_margin > tol.nontrivial);
}

namespace {

// Normal cone of T = T0 x ]-inf, K] at the process endpoints, lifted to
// R^{2(1+n)+1}.
ConeHull endpoint_normal_cone(const ProblemSpec& p, const ExtendedProcess& proc, double tol) {
  const int d = 2 * (1 + p.n);
  Vec e(d);
  e[0] = proc.y0.front();
  e.segment(1, p.n) = proc.y.front();
  e[1 + p.n] = proc.y0.back();
  e.segment(2 + p.n, p.n) = proc.y.back();
  ConeHull base = normal_cone(p.target, e, tol);
  ConeHull lifted = ConeHull::zero(d + 1);
  lifted.gens = Mat::Zero(d + 1, base.gens.cols());
  if (base.gens.cols() > 0) lifted.gens.topRows(d) = base.gens;
  lifted.lin = Mat::Zero(d + 1, base.lin.cols());
  if (base.lin.cols() > 0) lifted.lin.topRows(d) = base.lin;
  if (std::isfinite(p.K) && proc.nu.back() >= p.K - tol) {
    Mat g = Mat::Zero(d + 1, lifted.gens.cols() + 1);
    g.leftCols(lifted.gens.cols()) = lifted.gens;
    g(d, lifted.gens.cols()) = 1.0;
    lifted.gens = g;
  }
  return lifted;
}

}  // namespace

PmpReport check_pmp(const ProblemSpec& p, const ExtendedProcess& proc, const MultiplierSet& mult,
                    const PmpTolerances& tol) {
  PmpReport rep;
  const int M = proc.cells();
  const ControlGrid& grid = proc.ctrl;
  if (static_cast<int>(mult.ptx.size()) != M + 1)
    throw Error(ErrorKind::grid_mismatch, "check_pmp: multipliers on a different grid");
  if (static_cast<int>(mult.mu.size()) != p.constraint_count())
    throw Error(ErrorKind::grid_mismatch, "check_pmp: wrong number of constraint measures");

  QPaths q = accumulate_q(mult, grid);

  // (i) non-triviality and (viii) strengthening
  double p0_sup = 0.0, p_sup = 0.0, tv = 0.0;
  for (int k = 0; k <= M; ++k) {
    p0_sup = std::max(p0_sup, std::abs(mult.ptx[k][0]));
    p_sup = std::max(p_sup, mult.ptx[k].tail(p.n).template lpNorm<Eigen::Infinity>());
  }
  for (const auto& cm : mult.mu) tv += cm.total_variation(grid);
  rep.nontriviality_margin = p0_sup + p_sup + tv + mult.lambda;
  rep.strengthened_applicable = proc.y0.back() > proc.y0.front() + 1e-12;
  rep.strengthened_margin =
      rep.strengthened_applicable ? p_sup + tv + mult.lambda : rep.nontriviality_margin;

  // (ii) adjoint residual against the (t,x) gradient of q . F
  for (int k = 0; k < M; ++k) {
    Mat J = p.combined_jac_tx(proc.y0[k], proc.y[k], grid.omega0[k], grid.omega[k],
                              grid.alpha[k]);
    Vec rhs = J.transpose() * q.cell[k].tail(p.n);
    Vec resid = (mult.ptx[k + 1] - mult.ptx[k]) / grid.ds(k) + rhs;
    rep.adjoint_residual =
        std::max(rep.adjoint_residual, resid.template lpNorm<Eigen::Infinity>());
  }

  // (iii) transversality
  try {
    ConeHull N = endpoint_normal_cone(p, proc, tol.geometry);
    Vec grad = p.cost.gradient(proc.y0.front(), proc.y.front(), proc.y0.back(), proc.y.back(),
                               proc.nu.back());
    Vec v(2 * (1 + p.n) + 1);
    v[0] = mult.ptx.front()[0];
    v.segment(1, p.n) = mult.ptx.front().tail(p.n);
    v[1 + p.n] = -q.at_end[0];
    v.segment(2 + p.n, p.n) = -q.at_end.tail(p.n);
    v[2 * (1 + p.n)] = -mult.pi;
    rep.transversality_distance = N.distance(v - mult.lambda * grad);
  } catch (const Error& err) {
    rep.inconclusive = true;
    rep.note = std::string("transversality: ") + err.what();
  }

  // (iv) vanishing and maximization of H along the process
  auto dirs = p.cone.unit_directions(tol.directions);
  auto a_samples = p.a_set.samples(tol.a_samples_per_dim);
  for (int k = 0; k < M; ++k) {
    double t = proc.y0[k];
    const Vec& x = proc.y[k];
    double q0k = q.cell[k][0];
    Vec qk = q.cell[k].tail(p.n);
    double h_here = hamiltonian(p, t, x, q0k, qk, mult.pi, grid.omega0[k], grid.omega[k],
                                grid.alpha[k]);
    rep.hamiltonian_abs = std::max(rep.hamiltonian_abs, std::abs(h_here));

    double drift_best = -std::numeric_limits<double>::infinity();
    for (const auto& a : a_samples) drift_best = std::max(drift_best, q0k + qk.dot(p.f.eval(t, x, a)));
    double imp_best = -std::numeric_limits<double>::infinity();
    Mat G = p.impulse_matrix(t, x);
    for (const auto& d : dirs) imp_best = std::max(imp_best, qk.dot(G * d) + mult.pi);
    double best = drift_best;
    if (!dirs.empty()) {
      for (int lev = 0; lev < tol.omega0_levels; ++lev) {
        double w0 = tol.omega0_levels == 1 ? 1.0 : static_cast<double>(lev) / (tol.omega0_levels - 1);
        best = std::max(best, w0 * drift_best + (1.0 - w0) * imp_best);
      }
    }
    rep.maximization_defect = std::max(rep.maximization_defect, std::max(0.0, best - h_here));
  }

  // (v) subdifferential membership and (vi) support of the measures
  auto state_at = [&](double s_loc) {
    int k = static_cast<int>(std::upper_bound(grid.s.begin(), grid.s.end(), s_loc) -
                             grid.s.begin()) -
            1;
    k = std::clamp(k, 0, M);
    return k;
  };
  for (int i = 0; i < p.constraint_count(); ++i) {
    const auto& cm = mult.mu[i];
    auto account = [&](double s_loc, double mass, const Vec& mval) {
      if (mass <= 1e-15) return;
      int k = state_at(s_loc);
      double hv = p.h[i].value(proc.y0[k], proc.y[k]);
      if (hv < -tol.support) {
        rep.support_violation += mass;
        return;
      }
      try {
        Mat hull = hybrid_subdiff(p.h[i], proc.y0[k], proc.y[k]);
        if (hull.cols() == 0) {
          rep.support_violation += mass;
          return;
        }
        rep.subdiff_distance = std::max(rep.subdiff_distance, distance_to_polytope(mval, hull));
      } catch (const Error& err) {
        rep.inconclusive = true;
        rep.note = std::string("subdifferential: ") + err.what();
      }
    };
    for (const auto& a : cm.atoms) account(a.s, a.mass, a.m);
    for (size_t k = 0; k < cm.density.size(); ++k)
      account(grid.s[k], cm.density[k] * grid.ds(static_cast<int>(k)),
              cm.density_m[k]);
  }

  // (vii) pi must vanish when the variation constraint is slack and the cost
  // has no variation sensitivity.
  double dv = mult.lambda * p.cost.dv(proc.y0.front(), proc.y.front(), proc.y0.back(),
                                      proc.y.back(), proc.nu.back());
  bool slack = !std::isfinite(p.K) || proc.nu.back() < p.K - 1e-8;
  if (std::abs(dv) <= 1e-12 && slack) rep.pi_residual = std::abs(mult.pi);
  if (mult.pi > 1e-12) rep.pi_residual = std::max(rep.pi_residual, mult.pi);
  if (mult.lambda < -1e-12) rep.nontriviality_margin = 0.0;

  return rep;
}

NondegeneracyMargin check_nondegeneracy(const ExtendedProcess& proc, const MultiplierSet& mult) {
  NondegeneracyMargin out;
  out.advancing = proc.y0.back() > proc.y0.front() + 1e-12;
  QPaths q = accumulate_q(mult, proc.ctrl);
  const int n = static_cast<int>(mult.ptx.front().size()) - 1;
  for (const auto& qc : q.cell) {
    out.q0_ess_sup = std::max(out.q0_ess_sup, std::abs(qc[0]));
    out.q_ess_sup = std::max(out.q_ess_sup, qc.tail(n).template lpNorm<Eigen::Infinity>());
  }
  for (const auto& cm : mult.mu) out.mass_after_zero += cm.mass_after_zero(proc.ctrl);
  out.margin = out.mass_after_zero + out.q_ess_sup + mult.lambda +
               (out.advancing ? 0.0 : out.q0_ess_sup);
  return out;
}

}  // namespace gapcert
