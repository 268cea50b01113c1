#include "gapcert/normality.hpp"

#include <algorithm>
#include <cmath>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {

// Lifted N_T cone at the process endpoints (see pmp.cpp for the convention).
ConeHull lifted_endpoint_cone(const ProblemSpec& p, const ExtendedProcess& proc, double tol) {
  const int d = 2 * (1 + p.n);
  Vec e(d);
  e[0] = proc.y0.front();
  e.segment(1, p.n) = proc.y.front();
  e[1 + p.n] = proc.y0.back();
  e.segment(2 + p.n, p.n) = proc.y.back();
  Vec ep = set_project(p.target, e);  // snap within tolerance
  if ((ep - e).norm() > tol * 10 + 1e-9)
    throw Error(ErrorKind::point_not_in_set, "normality: endpoints too far from the target set");
  ConeHull base = normal_cone(p.target, ep, tol);
  ConeHull lifted = ConeHull::zero(d + 1);
  lifted.gens = Mat::Zero(d + 1, base.gens.cols());
  if (base.gens.cols() > 0) lifted.gens.topRows(d) = base.gens;
  lifted.lin = Mat::Zero(d + 1, base.lin.cols());
  if (base.lin.cols() > 0) lifted.lin.topRows(d) = base.lin;
  if (std::isfinite(p.K) && proc.nu.back() >= p.K - 1e-8) {
    Mat g = Mat::Zero(d + 1, lifted.gens.cols() + 1);
    g.leftCols(lifted.gens.cols()) = lifted.gens;
    g(d, lifted.gens.cols()) = 1.0;
    lifted.gens = g;
  }
  return lifted;
}

}  // namespace

MultiplierSet AbnormalLp::extract(const Vec& x) const {
  const int M = cells;
  MultiplierSet mult;
  mult.lambda = 0.0;
  mult.pi = -x[col_pi];
  mult.ptx.resize(M + 1);
  for (int k = 0; k <= M; ++k) {
    Vec v(n + 1);
    for (int j = 0; j <= n; ++j) v[j] = x[p_index(k, j, true)] - x[p_index(k, j, false)];
    mult.ptx[k] = v;
  }
  mult.mu.resize(n_constraints);
  // group theta columns by (constraint, node)
  for (size_t idx = 0; idx < theta.size();) {
    int i = theta[idx].constraint, node = theta[idx].node;
    double mass = 0.0;
    Vec weighted = Vec::Zero(n + 1);
    while (idx < theta.size() && theta[idx].constraint == i && theta[idx].node == node) {
      double t = x[col_theta + static_cast<int>(idx)];
      mass += t;
      weighted += t * theta[idx].gradient;
      ++idx;
    }
    if (mass > 1e-12) {
      ConstraintMeasure::Atom a;
      a.s = grid_process.ctrl.s[node];
      a.mass = mass;
      a.m = weighted / mass;
      mult.mu[i].atoms.push_back(a);
    }
  }
  return mult;
}

AbnormalLp assemble(const ProblemSpec& p, const ExtendedProcess& proc,
                    const NormalityOptions& opts) {
  AbnormalLp A;
  A.cells = opts.lp_cells;
  A.n = p.n;
  A.n_constraints = p.constraint_count();
  A.grid_process = resample(proc, opts.lp_cells);
  const ExtendedProcess& gp = A.grid_process;
  const int M = A.cells, n = p.n;
  const int pvars = (M + 1) * (n + 1);

  ConeHull N = lifted_endpoint_cone(p, gp, opts.geometry_tol);
  const int ng = static_cast<int>(N.gens.cols());
  const int nl = static_cast<int>(N.lin.cols());

  // Theta columns: per active node per constraint per hybrid generator.
  for (int i = 0; i < p.constraint_count(); ++i) {
    for (int k = 0; k <= M; ++k) {
      if (p.h[i].value(gp.y0[k], gp.y[k]) < -opts.active_tol) continue;
      Mat hull = hybrid_subdiff(p.h[i], gp.y0[k], gp.y[k]);  // may throw vanishing_gradient
      for (int g = 0; g < hull.cols(); ++g) A.theta.push_back({i, k, hull.col(g)});
    }
  }

  A.col_p_plus = 0;
  A.col_p_minus = pvars;
  A.col_pi = 2 * pvars;
  A.col_cone = A.col_pi + 1;
  A.col_theta = A.col_cone + ng + 2 * nl;
  const int ncols = A.col_theta + static_cast<int>(A.theta.size());
  A.lp.ncols = ncols;

  auto zero_row = [&]() { return Vec(Vec::Zero(ncols)); };
  // Adds the coefficients of q(cell) . w for a (1+n)-weight w into the row.
  auto add_q_cell = [&](Vec& row, int cell, const Vec& w) {
    for (int j = 0; j <= n; ++j) {
      row[A.p_index(cell, j, true)] += w[j];
      row[A.p_index(cell, j, false)] -= w[j];
    }
    for (size_t t = 0; t < A.theta.size(); ++t)
      if (A.theta[t].node <= cell) row[A.col_theta + static_cast<int>(t)] += A.theta[t].gradient.dot(w);
  };
  auto add_q_end = [&](Vec& row, const Vec& w) {
    for (int j = 0; j <= n; ++j) {
      row[A.p_index(M, j, true)] += w[j];
      row[A.p_index(M, j, false)] -= w[j];
    }
    for (size_t t = 0; t < A.theta.size(); ++t)
      row[A.col_theta + static_cast<int>(t)] += A.theta[t].gradient.dot(w);
  };

  // (ii) adjoint equality: p_{k+1} - p_k + ds * J^T q_x(cell k) = 0.
  for (int k = 0; k < M; ++k) {
    double ds = gp.ctrl.ds(k);
    Mat J = p.combined_jac_tx(gp.y0[k], gp.y[k], gp.ctrl.omega0[k], gp.ctrl.omega[k],
                              gp.ctrl.alpha[k]);
    for (int j = 0; j <= n; ++j) {
      Vec row = zero_row();
      row[A.p_index(k + 1, j, true)] += 1.0;
      row[A.p_index(k + 1, j, false)] -= 1.0;
      row[A.p_index(k, j, true)] -= 1.0;
      row[A.p_index(k, j, false)] += 1.0;
      // ds * (J^T q_x)_j: weight on the x-part of q(cell k)
      Vec w = Vec::Zero(n + 1);
      w.tail(n) = ds * J.col(j);  // J^T row j = J column j over x-outputs
      add_q_cell(row, k, w);
      A.lp.add_row(row, LinearProgram::EQ, 0.0);
    }
  }

  // (iii) transversality: (p0(0), p(0), -q0(S), -q(S), -pi) = N-cone element.
  auto cone_coeff = [&](Vec& row, int out_coord, double sign) {
    for (int j = 0; j < ng; ++j) row[A.col_cone + j] += sign * N.gens(out_coord, j);
    for (int j = 0; j < nl; ++j) {
      row[A.col_cone + ng + j] += sign * N.lin(out_coord, j);
      row[A.col_cone + ng + nl + j] -= sign * N.lin(out_coord, j);
    }
  };
  for (int j = 0; j <= n; ++j) {  // initial block
    Vec row = zero_row();
    row[A.p_index(0, j, true)] += 1.0;
    row[A.p_index(0, j, false)] -= 1.0;
    cone_coeff(row, j, -1.0);
    A.lp.add_row(row, LinearProgram::EQ, 0.0);
  }
  for (int j = 0; j <= n; ++j) {  // terminal block: -q(S)
    Vec row = zero_row();
    Vec w = Vec::Zero(n + 1);
    w[j] = -1.0;
    add_q_end(row, w);
    cone_coeff(row, (n + 1) + j, -1.0);
    A.lp.add_row(row, LinearProgram::EQ, 0.0);
  }
  {
    Vec row = zero_row();
    row[A.col_pi] += 1.0;  // -pi = piP
    cone_coeff(row, 2 * (n + 1), -1.0);
    A.lp.add_row(row, LinearProgram::EQ, 0.0);
  }

  // (vii): pi = 0 when the variation constraint is slack (lambda = 0 here).
  if (!std::isfinite(p.K) || gp.nu.back() < p.K - 1e-8) {
    Vec row = zero_row();
    row[A.col_pi] = 1.0;
    A.lp.add_row(row, LinearProgram::EQ, 0.0);
  }

  // (iv) vanishing of H along the process and dominance over the C x A grid.
  auto dirs = p.cone.unit_directions(opts.directions);
  auto a_samples = p.a_set.samples(opts.a_samples_per_dim);
  for (int k = 0; k < M; ++k) {
    double t = gp.y0[k];
    const Vec& x = gp.y[k];
    {
      Vec row = zero_row();
      Vec w = Vec::Zero(n + 1);
      w[0] = gp.ctrl.omega0[k];
      w.tail(n) = p.combined_field(t, x, gp.ctrl.omega0[k], gp.ctrl.omega[k], gp.ctrl.alpha[k]);
      add_q_cell(row, k, w);
      row[A.col_pi] -= gp.ctrl.omega[k].norm();  // pi |w| = -piP |w|
      A.lp.add_row(row, LinearProgram::EQ, 0.0);
    }
    for (const auto& a : a_samples) {  // drift vertices (w0 = 1)
      Vec row = zero_row();
      Vec w = Vec::Zero(n + 1);
      w[0] = 1.0;
      w.tail(n) = p.f.eval(t, x, a);
      add_q_cell(row, k, w);
      A.lp.add_row(row, LinearProgram::LE, 0.0);
    }
    Mat G = p.impulse_matrix(t, x);
    for (const auto& d : dirs) {  // impulse vertices (w0 = 0)
      Vec row = zero_row();
      Vec w = Vec::Zero(n + 1);
      w.tail(n) = G * d;
      add_q_cell(row, k, w);
      row[A.col_pi] -= 1.0;
      A.lp.add_row(row, LinearProgram::LE, 0.0);
    }
  }

  return A;
}

namespace {

struct Pinning {
  std::string label;
  Vec row;
  double rhs = 1.0;
};

std::vector<Pinning> base_pinnings(const AbnormalLp& A, bool advancing) {
  std::vector<Pinning> pins;
  const int n = A.n;
  {
    Pinning pin;
    pin.label = "total measure mass = 1";
    pin.row = Vec::Zero(A.lp.ncols);
    for (size_t t = 0; t < A.theta.size(); ++t) pin.row[A.col_theta + static_cast<int>(t)] = 1.0;
    if (!A.theta.empty()) pins.push_back(pin);
  }
  for (int j = advancing ? 1 : 0; j <= n; ++j) {
    for (double sgn : {1.0, -1.0}) {
      Pinning pin;
      pin.label = (sgn > 0 ? "+" : "-") + std::string("p_") + std::to_string(j) + "(0) = 1";
      pin.row = Vec::Zero(A.lp.ncols);
      pin.row[A.p_index(0, j, true)] = sgn;
      pin.row[A.p_index(0, j, false)] = -sgn;
      pins.push_back(pin);
    }
  }
  return pins;
}

std::vector<Pinning> nondeg_pinnings(const AbnormalLp& A, bool advancing, int probe_cells) {
  std::vector<Pinning> pins;
  const int n = A.n, M = A.cells;
  {
    Pinning pin;
    pin.label = "measure mass on ]0,S] = 1";
    pin.row = Vec::Zero(A.lp.ncols);
    bool any = false;
    for (size_t t = 0; t < A.theta.size(); ++t)
      if (A.theta[t].node > 0) {
        pin.row[A.col_theta + static_cast<int>(t)] = 1.0;
        any = true;
      }
    if (any) pins.push_back(pin);
  }
  std::vector<int> cells;
  for (int i = 0; i < probe_cells; ++i) {
    int k = probe_cells == 1 ? 0 : static_cast<int>(std::llround(double(i) * (M - 1) / (probe_cells - 1)));
    if (cells.empty() || cells.back() != k) cells.push_back(k);
  }
  for (int k : cells) {
    for (int j = advancing ? 1 : 0; j <= n; ++j) {
      for (double sgn : {1.0, -1.0}) {
        Pinning pin;
        pin.label = (sgn > 0 ? "+" : "-") + std::string("q_") + std::to_string(j) + "(cell " +
                    std::to_string(k) + ") = 1";
        pin.row = Vec::Zero(A.lp.ncols);
        pin.row[A.p_index(k, j, true)] += sgn;
        pin.row[A.p_index(k, j, false)] -= sgn;
        for (size_t t = 0; t < A.theta.size(); ++t)
          if (A.theta[t].node <= k)
            pin.row[A.col_theta + static_cast<int>(t)] += sgn * A.theta[t].gradient[j];
        pins.push_back(pin);
      }
    }
  }
  return pins;
}

enum class SearchOutcome { found, infeasible, failure };

SearchOutcome search(const AbnormalLp& A, const std::vector<Pinning>& pins, Vec* solution,
                     std::string* which, std::vector<std::string>* log) {
  for (const auto& pin : pins) {
    LinearProgram lp = A.lp;
    lp.add_row(pin.row, LinearProgram::EQ, pin.rhs);
    LpResult r = lp_solve(lp);
    if (log) log->push_back(pin.label + ": " +
                            (r.status == LpResult::Status::optimal
                                 ? "feasible"
                                 : r.status == LpResult::Status::infeasible ? "infeasible"
                                                                            : "solver failure"));
    if (r.status == LpResult::Status::optimal) {
      if (solution) *solution = r.x;
      if (which) *which = pin.label;
      return SearchOutcome::found;
    }
    if (r.status != LpResult::Status::infeasible) return SearchOutcome::failure;
  }
  return SearchOutcome::infeasible;
}

}  // namespace

NormalityVerdict classify(const ProblemSpec& p, const ExtendedProcess& proc,
                          const NormalityOptions& opts) {
  NormalityVerdict out;
  out.base_cells = opts.lp_cells;
  out.refined_cells = 2 * opts.lp_cells;

  FeasibilityReport feas = feasibility(p, proc);
  if (feas.worst() > std::max(opts.feasibility_tol, 1e-2))
    throw Error(ErrorKind::bad_input, "classify: process is not feasible");
  if (feas.worst() > opts.feasibility_tol)
    out.note = "process feasibility residual " + std::to_string(feas.worst()) +
               " above tolerance; verdict is best-effort. ";

  bool advancing = proc.y0.back() > proc.y0.front() + 1e-12;

  AbnormalLp base;
  NormalityOptions refined_opts = opts;
  refined_opts.lp_cells = 2 * opts.lp_cells;
  AbnormalLp refined;
  try {
    base = assemble(p, proc, opts);
    refined = assemble(p, proc, refined_opts);
  } catch (const Error& e) {
    out.verdict = NormalityKind::inconclusive;
    out.note += std::string("assembly refused: ") + e.what();
    return out;
  }

  Vec sol;
  std::string which;
  SearchOutcome base_out =
      search(base, base_pinnings(base, advancing), &sol, &which, &out.lp_log);
  if (base_out == SearchOutcome::failure) {
    out.verdict = NormalityKind::inconclusive;
    out.note += "LP solver failure during the base search";
    return out;
  }

  if (base_out == SearchOutcome::infeasible) {
    // candidate "normal": confirm at the refined resolution
    SearchOutcome ref_out =
        search(refined, base_pinnings(refined, advancing), nullptr, nullptr, &out.lp_log);
    if (ref_out == SearchOutcome::infeasible) {
      out.verdict = NormalityKind::normal;
      return out;
    }
    out.verdict = NormalityKind::inconclusive;
    out.note += ref_out == SearchOutcome::failure
                    ? "LP solver failure during refinement"
                    : "grid disagreement: infeasible at base, feasible at refinement";
    return out;
  }

  // Abnormal candidate: re-confirm at the refined resolution before reporting.
  SearchOutcome ref_out =
      search(refined, base_pinnings(refined, advancing), nullptr, nullptr, &out.lp_log);
  if (ref_out != SearchOutcome::found) {
    out.verdict = NormalityKind::inconclusive;
    out.note += "abnormal at base grid but not re-confirmed at 2x refinement";
    return out;
  }

  MultiplierSet cert = base.extract(sol);
  out.certificate_process = base.grid_process;
  PmpReport check = check_pmp(p, base.grid_process, cert, opts.certificate_tol);
  out.certificate_check = check;
  if (!check.pass(opts.certificate_tol)) {
    out.verdict = NormalityKind::inconclusive;
    out.note += "abnormal certificate failed re-verification (pinning " + which + ")";
    out.certificate = cert;
    return out;
  }
  out.certificate = cert;
  out.certificate_margin = check_nondegeneracy(base.grid_process, cert);

  // degenerate vs nondegenerate: search again with the nondegeneracy rows
  SearchOutcome nd =
      search(base, nondeg_pinnings(base, advancing, opts.nondeg_probe_cells), nullptr, nullptr,
             &out.lp_log);
  if (nd == SearchOutcome::failure) {
    out.verdict = NormalityKind::inconclusive;
    out.note += "LP solver failure during the nondegeneracy search";
    return out;
  }
  out.verdict =
      nd == SearchOutcome::found ? NormalityKind::abnormal : NormalityKind::degenerate_abnormal;
  return out;
}

}  // namespace gapcert
