#include "gapcert/process.hpp"

#include <algorithm>
#include <cmath>

#include "gapcert/errors.hpp"

namespace gapcert {

ControlGrid ControlGrid::uniform(double S, int M, int m, int q) {
  if (!(S > 0) || M <= 0) throw Error(ErrorKind::bad_input, "ControlGrid: need S > 0, M > 0");
  ControlGrid g;
  g.s.resize(M + 1);
  for (int k = 0; k <= M; ++k) g.s[k] = S * k / M;
  g.s[M] = S;
  g.omega0.assign(M, 1.0);
  g.omega.assign(M, Vec::Zero(m));
  g.alpha.assign(M, Vec::Zero(q));
  return g;
}

double FeasibilityReport::worst() const {
  return std::max(std::max(state_violation, endpoint_distance),
                  std::max(variation_excess, initial_variation));
}

ExtendedProcess integrate(const ProblemSpec& p, const ControlGrid& ctrl, double y0_init,
                          const Vec& y_init, double nu_init, bool check_controls) {
  const int M = ctrl.cells();
  if (static_cast<int>(ctrl.s.size()) != M + 1 || static_cast<int>(ctrl.omega.size()) != M ||
      static_cast<int>(ctrl.alpha.size()) != M)
    throw Error(ErrorKind::bad_input, "integrate: ragged control grid");
  if (check_controls) {
    for (int k = 0; k < M; ++k) {
      double w0 = ctrl.omega0[k];
      const Vec& w = ctrl.omega[k];
      if (w0 < -1e-9 || std::abs(w0 + w.norm() - 1.0) > 1e-9 || !p.cone.contains(w, 1e-7))
        throw Error(ErrorKind::control_outside_C,
                    "integrate: control outside C at cell " + std::to_string(k));
    }
  }

  ExtendedProcess proc;
  proc.ctrl = ctrl;
  proc.y0.resize(M + 1);
  proc.y.resize(M + 1);
  proc.nu.resize(M + 1);
  proc.y0[0] = y0_init;
  proc.y[0] = y_init;
  proc.nu[0] = nu_init;
  for (int k = 0; k < M; ++k) {
    double ds = ctrl.ds(k);
    proc.y0[k + 1] = proc.y0[k] + ds * ctrl.omega0[k];
    proc.y[k + 1] = proc.y[k] + ds * p.combined_field(proc.y0[k], proc.y[k], ctrl.omega0[k],
                                                      ctrl.omega[k], ctrl.alpha[k]);
    proc.nu[k + 1] = proc.nu[k] + ds * ctrl.omega[k].norm();
  }
  return proc;
}

StrictProcess strict_integrate(const ProblemSpec& p, double t1, double t2,
                               const std::vector<Vec>& dudt, const std::vector<Vec>& alpha,
                               const Vec& x_init) {
  if (!(t1 < t2)) throw Error(ErrorKind::bad_input, "strict_integrate: need t1 < t2");
  const int M = static_cast<int>(dudt.size());
  StrictProcess sp;
  sp.t1 = t1;
  sp.t2 = t2;
  sp.dudt = dudt;
  sp.alpha = alpha;
  sp.u.resize(M + 1);
  sp.x.resize(M + 1);
  sp.v.resize(M + 1);
  sp.u[0] = Vec::Zero(p.m);
  sp.x[0] = x_init;
  sp.v[0] = 0.0;
  double dt = (t2 - t1) / M;
  for (int k = 0; k < M; ++k) {
    if (!p.cone.contains(dudt[k], 1e-7 * (1.0 + dudt[k].norm())))
      throw Error(ErrorKind::control_outside_C,
                  "strict_integrate: du/dt outside the cone at cell " + std::to_string(k));
    double t = t1 + dt * k;
    Vec rhs = p.f.eval(t, sp.x[k], alpha[k]);
    for (int j = 0; j < p.m; ++j) rhs += dudt[k][j] * p.g[j].eval(t, sp.x[k]);
    sp.x[k + 1] = sp.x[k] + dt * rhs;
    sp.u[k + 1] = sp.u[k] + dt * dudt[k];
    sp.v[k + 1] = sp.v[k] + dt * dudt[k].norm();
  }
  return sp;
}

FeasibilityReport feasibility(const ProblemSpec& p, const ExtendedProcess& proc) {
  FeasibilityReport r;
  const int M = proc.cells();
  for (int k = 0; k <= M; ++k) {
    for (const auto& hi : p.h)
      r.state_violation = std::max(r.state_violation, hi.value(proc.y0[k], proc.y[k]));
  }
  r.state_violation = std::max(0.0, r.state_violation);
  Vec endpoints(2 * (1 + p.n));
  endpoints[0] = proc.y0.front();
  endpoints.segment(1, p.n) = proc.y.front();
  endpoints[1 + p.n] = proc.y0.back();
  endpoints.segment(2 + p.n, p.n) = proc.y.back();
  r.endpoint_distance = set_distance(p.target, endpoints);
  r.variation_excess = std::isfinite(p.K) ? std::max(0.0, proc.nu.back() - p.K) : 0.0;
  r.initial_variation = std::abs(proc.nu.front());
  return r;
}

double cost(const ProblemSpec& p, const ExtendedProcess& proc) {
  return p.cost.value(proc.y0.front(), proc.y.front(), proc.y0.back(), proc.y.back(),
                      proc.nu.back());
}

double cost(const ProblemSpec& p, const StrictProcess& proc) {
  return p.cost.value(proc.t1, proc.x.front(), proc.t2, proc.x.back(), proc.v.back());
}

namespace {

Vec eval_graph(const DInftyGraph& g, double s) {
  if (g.s.empty()) throw Error(ErrorKind::bad_input, "d_infty: empty graph");
  if (s <= g.s.front()) return g.z.front();
  if (s >= g.s.back()) return g.z.back();
  auto it = std::upper_bound(g.s.begin(), g.s.end(), s);
  int hi = static_cast<int>(it - g.s.begin());
  int lo = hi - 1;
  double den = g.s[hi] - g.s[lo];
  double w = den > 0 ? (s - g.s[lo]) / den : 0.0;
  return (1 - w) * g.z[lo] + w * g.z[hi];
}

}  // namespace

double d_infty(const DInftyGraph& a, const DInftyGraph& b) {
  double d = std::abs(a.tag1 - b.tag1) + std::abs(a.tag2 - b.tag2);
  // Piecewise-linear paths: the sup of the difference is attained at a node of
  // the merged partition (after constant extension).
  std::vector<double> pts;
  pts.reserve(a.s.size() + b.s.size());
  pts.insert(pts.end(), a.s.begin(), a.s.end());
  pts.insert(pts.end(), b.s.begin(), b.s.end());
  std::sort(pts.begin(), pts.end());
  double sup = 0.0;
  for (double s : pts) sup = std::max(sup, (eval_graph(a, s) - eval_graph(b, s)).norm());
  return d + sup;
}

ExtendedProcess resample(const ExtendedProcess& proc, int cells) {
  const double S = proc.S();
  ExtendedProcess out;
  out.ctrl.s.resize(cells + 1);
  for (int k = 0; k <= cells; ++k) out.ctrl.s[k] = S * k / cells;
  out.ctrl.s[cells] = S;
  out.ctrl.omega0.resize(cells);
  out.ctrl.omega.resize(cells);
  out.ctrl.alpha.resize(cells);
  out.y0.resize(cells + 1);
  out.y.resize(cells + 1);
  out.nu.resize(cells + 1);
  auto interp1 = [&](const std::vector<double>& ys, double s) {
    auto it = std::upper_bound(proc.ctrl.s.begin(), proc.ctrl.s.end(), s);
    int hi = std::clamp(static_cast<int>(it - proc.ctrl.s.begin()), 1, proc.cells());
    int lo = hi - 1;
    double den = proc.ctrl.s[hi] - proc.ctrl.s[lo];
    double w = den > 0 ? (s - proc.ctrl.s[lo]) / den : 0.0;
    w = std::clamp(w, 0.0, 1.0);
    return (1 - w) * ys[lo] + w * ys[hi];
  };
  for (int k = 0; k <= cells; ++k) {
    double s = out.ctrl.s[k];
    out.y0[k] = interp1(proc.y0, s);
    out.nu[k] = interp1(proc.nu, s);
    auto it = std::upper_bound(proc.ctrl.s.begin(), proc.ctrl.s.end(), s);
    int hi = std::clamp(static_cast<int>(it - proc.ctrl.s.begin()), 1, proc.cells());
    int lo = hi - 1;
    double den = proc.ctrl.s[hi] - proc.ctrl.s[lo];
    double w = den > 0 ? std::clamp((s - proc.ctrl.s[lo]) / den, 0.0, 1.0) : 0.0;
    out.y[k] = (1 - w) * proc.y[lo] + w * proc.y[hi];
  }
  for (int k = 0; k < cells; ++k) {
    double mid = S * (k + 0.5) / cells;
    int c = static_cast<int>(std::upper_bound(proc.ctrl.s.begin(), proc.ctrl.s.end(), mid) -
                             proc.ctrl.s.begin()) -
            1;
    c = std::clamp(c, 0, proc.cells() - 1);
    out.ctrl.omega0[k] = proc.ctrl.omega0[c];
    out.ctrl.omega[k] = proc.ctrl.omega[c];
    out.ctrl.alpha[k] = proc.ctrl.alpha[c];
  }
  return out;
}

DInftyGraph graph_of(const ExtendedProcess& proc) {
  DInftyGraph g;
  g.tag1 = proc.y0.front();
  g.tag2 = proc.y0.back();
  g.s = proc.ctrl.s;
  const int n = static_cast<int>(proc.y.front().size());
  for (size_t k = 0; k < proc.y.size(); ++k) {
    Vec z(n + 1);
    z.head(n) = proc.y[k];
    z[n] = proc.nu[k];
    g.z.push_back(z);
  }
  return g;
}

DInftyGraph graph_of(const StrictProcess& proc) {
  DInftyGraph g;
  g.tag1 = proc.t1;
  g.tag2 = proc.t2;
  const int n = static_cast<int>(proc.x.front().size());
  for (int k = 0; k <= proc.cells(); ++k) {
    g.s.push_back(proc.t_node(k));
    Vec z(n + 1);
    z.head(n) = proc.x[k];
    z[n] = proc.v[k];
    g.z.push_back(z);
  }
  return g;
}

}  // namespace gapcert
