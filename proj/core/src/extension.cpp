#include "gapcert/extension.hpp"

#include <algorithm>
#include <cmath>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  int hi = static_cast<int>(it - xs.begin());
  int lo = hi - 1;
  double den = xs[hi] - xs[lo];
  double w = den > 0 ? (x - xs[lo]) / den : 0.0;
  return (1 - w) * ys[lo] + w * ys[hi];
}

Vec interp_vec(const std::vector<double>& xs, const std::vector<Vec>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  int hi = static_cast<int>(it - xs.begin());
  int lo = hi - 1;
  double den = xs[hi] - xs[lo];
  double w = den > 0 ? (x - xs[lo]) / den : 0.0;
  return (1 - w) * ys[lo] + w * ys[hi];
}

}  // namespace

double TimeChange::sigma(double t) const { return interp(t_nodes, s_nodes, t); }
double TimeChange::inverse(double s) const { return interp(s_nodes, t_nodes, s); }

TimeChange TimeChange::from_strict(const StrictProcess& sp) {
  TimeChange tc;
  const int M = sp.cells();
  tc.t_nodes.resize(M + 1);
  tc.s_nodes.resize(M + 1);
  for (int k = 0; k <= M; ++k) {
    tc.t_nodes[k] = sp.t_node(k);
    tc.s_nodes[k] = (tc.t_nodes[k] - sp.t1) + sp.v[k];
  }
  for (int k = 0; k < M; ++k) {
    if (!(tc.s_nodes[k + 1] > tc.s_nodes[k]))
      throw Error(ErrorKind::bad_input, "time change is not strictly increasing (corrupt v)");
  }
  return tc;
}

ExtendedProcess embed(const ProblemSpec& p, const StrictProcess& sp) {
  TimeChange tc = TimeChange::from_strict(sp);
  const int M = sp.cells();
  ExtendedProcess proc;
  proc.ctrl.s = tc.s_nodes;
  proc.ctrl.omega0.resize(M);
  proc.ctrl.omega.resize(M);
  proc.ctrl.alpha = sp.alpha;
  proc.y0 = tc.t_nodes;
  proc.y = sp.x;
  proc.nu = sp.v;
  double dt = sp.dt();
  for (int k = 0; k < M; ++k) {
    double dsig = tc.s_nodes[k + 1] - tc.s_nodes[k];  // dt + |du|
    proc.ctrl.omega0[k] = dt / dsig;
    proc.ctrl.omega[k] = (dt / dsig) * sp.dudt[k];
  }
  (void)p;
  return proc;
}

StrictProcess invert(const ProblemSpec& p, const ExtendedProcess& proc, double threshold) {
  if (!(threshold > 0))
    throw Error(ErrorKind::bad_input, "invert: positivity threshold must be > 0");
  const int M = proc.cells();
  std::vector<int> bad;
  for (int k = 0; k < M; ++k)
    if (proc.ctrl.omega0[k] < threshold) bad.push_back(k);
  if (!bad.empty()) {
    std::string msg = "invert: fast arc present (omega0 < threshold) on cells";
    int shown = 0;
    for (int c : bad) {
      if (shown++ == 12) {
        msg += " ...";
        break;
      }
      msg += " " + std::to_string(c);
    }
    throw FastArcError(msg, bad);
  }

  // Non-uniform image grid t_k = y0(s_k), then resample onto a uniform grid.
  std::vector<double> t_nodes = proc.y0;
  std::vector<Vec> u_nodes(M + 1);
  u_nodes[0] = Vec::Zero(p.m);
  for (int k = 0; k < M; ++k)
    u_nodes[k + 1] = u_nodes[k] + proc.ctrl.ds(k) * proc.ctrl.omega[k];

  StrictProcess sp;
  sp.t1 = t_nodes.front();
  sp.t2 = t_nodes.back();
  if (!(sp.t1 < sp.t2)) throw Error(ErrorKind::bad_input, "invert: degenerate time span");
  sp.u.resize(M + 1);
  sp.x.resize(M + 1);
  sp.v.resize(M + 1);
  sp.dudt.resize(M);
  sp.alpha.resize(M);
  double dt = (sp.t2 - sp.t1) / M;
  for (int k = 0; k <= M; ++k) {
    double t = sp.t1 + dt * k;
    sp.u[k] = interp_vec(t_nodes, u_nodes, t);
    sp.x[k] = interp_vec(t_nodes, proc.y, t);
    sp.v[k] = interp(t_nodes, proc.nu, t);
  }
  for (int k = 0; k < M; ++k) {
    sp.dudt[k] = (sp.u[k + 1] - sp.u[k]) / dt;
    // alpha = alpha(sigma(t)) with sigma the inverse table of y0.
    double t_mid = sp.t1 + dt * (k + 0.5);
    double s_mid = interp(t_nodes, proc.ctrl.s, t_mid);
    int cell = static_cast<int>(std::upper_bound(proc.ctrl.s.begin(), proc.ctrl.s.end(), s_mid) -
                                proc.ctrl.s.begin()) -
               1;
    cell = std::clamp(cell, 0, M - 1);
    sp.alpha[k] = proc.ctrl.alpha[cell];
  }
  return sp;
}

StrictifyResult strictify(const ProblemSpec& p, const ExtendedProcess& proc, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw Error(ErrorKind::bad_input, "strictify: need 0 < eps < 1");
  const int M = proc.cells();
  ControlGrid ctrl = proc.ctrl;
  StrictifyResult res;
  for (int k = 0; k < M; ++k) {
    if (ctrl.omega0[k] >= eps) continue;
    double wn = ctrl.omega[k].norm();
    if (wn <= 1e-14) {
      ctrl.omega0[k] = 1.0;
      ctrl.omega[k].setZero();
      res.degenerate_cells.push_back(k);
    } else {
      ctrl.omega0[k] = eps;
      ctrl.omega[k] = (1.0 - eps) / wn * ctrl.omega[k];
      res.replaced_cells.push_back(k);
    }
  }
  res.process = integrate(p, ctrl, proc.y0.front(), proc.y.front(), proc.nu.front(),
                          /*check_controls=*/false);
  return res;
}

}  // namespace gapcert
