#include "gapcert/qualifications.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec endpoints_of(const ProblemSpec& p, const ExtendedProcess& proc) {
  Vec e(2 * (1 + p.n));
  e[0] = proc.y0.front();
  e.segment(1, p.n) = proc.y.front();
  e[1 + p.n] = proc.y0.back();
  e.segment(2 + p.n, p.n) = proc.y.back();
  return e;
}

ConeHull target_normal_cone(const ProblemSpec& p, const ExtendedProcess& proc, double tol) {
  Vec e = endpoints_of(p, proc);
  Vec ep = set_project(p.target, e);
  if ((ep - e).norm() > 10 * tol + 1e-9)
    throw Error(ErrorKind::point_not_in_set, "endpoints too far from the target set");
  return normal_cone(p.target, ep, tol);
}

std::vector<int> active_constraints_at(const ProblemSpec& p, const ExtendedProcess& proc, int node,
                                       double tol) {
  std::vector<int> idx;
  for (int i = 0; i < p.constraint_count(); ++i)
    if (p.h[i].value(proc.y0[node], proc.y[node]) >= -tol) idx.push_back(i);
  return idx;
}

// Boundary-contact nodes in the direction's quantifier range (]0,S] backward,
// [0,S[ forward).
std::vector<int> contact_nodes(const ProblemSpec& p, const ExtendedProcess& proc, Direction dir,
                               double tol) {
  std::vector<int> out;
  const int M = proc.cells();
  int lo = dir == Direction::backward ? 1 : 0;
  int hi = dir == Direction::backward ? M : M - 1;
  for (int k = lo; k <= hi; ++k)
    if (!active_constraints_at(p, proc, k, tol).empty()) out.push_back(k);
  return out;
}

struct ConeVars {
  // Cone Z = { G c + L d } with the functional machinery below.
  Mat G, L;
  int dim() const { return static_cast<int>(G.rows() > 0 ? G.rows() : L.rows()); }
};

// sup over nonzero zeta in Z (coordinate-normalized) of min_k f_k . zeta.
// Returns -inf when Z = {0} (no nonzero zeta exists). `coords` restricts the
// pinned coordinates (e.g. only the x-block for the zeta_x != 0 quantifier).
double worst_min_functional(const ConeVars& Z, const std::vector<Vec>& funcs,
                            const std::vector<int>& coords) {
  const int d = Z.dim();
  const int ng = static_cast<int>(Z.G.cols());
  const int nl = static_cast<int>(Z.L.cols());
  if (ng == 0 && nl == 0) return -kInf;
  double best = -kInf;
  for (int coord : coords) {
    for (double sgn : {1.0, -1.0}) {
      // vars: c (ng), d+ (nl), d- (nl), tau+ , tau-
      LinearProgram lp;
      lp.ncols = ng + 2 * nl + 2;
      auto zeta_row = [&](int out_coord) {
        Vec row = Vec::Zero(lp.ncols);
        for (int j = 0; j < ng; ++j) row[j] = Z.G(out_coord, j);
        for (int j = 0; j < nl; ++j) {
          row[ng + j] = Z.L(out_coord, j);
          row[ng + nl + j] = -Z.L(out_coord, j);
        }
        return row;
      };
      lp.add_row(sgn * zeta_row(coord), LinearProgram::EQ, 1.0);
      for (const auto& f : funcs) {
        Vec row = Vec::Zero(lp.ncols);
        for (int oc = 0; oc < d; ++oc)
          if (f[oc] != 0.0) row += f[oc] * zeta_row(oc);
        row[ng + 2 * nl] = -1.0;      // - tau+
        row[ng + 2 * nl + 1] = 1.0;   // + tau-
        lp.add_row(row, LinearProgram::GE, 0.0);  // f.zeta >= tau
      }
      lp.c = Vec::Zero(lp.ncols);
      lp.c[ng + 2 * nl] = -1.0;  // maximize tau
      lp.c[ng + 2 * nl + 1] = 1.0;
      LpResult r = lp_solve(lp);
      if (r.status == LpResult::Status::unbounded) return kInf;
      if (r.status == LpResult::Status::optimal) best = std::max(best, -r.objective);
    }
  }
  return best;
}

std::vector<int> range_vec(int lo, int count) {
  std::vector<int> v(count);
  for (int i = 0; i < count; ++i) v[i] = lo + i;
  return v;
}

}  // namespace

const char* to_string(CondStatus s) {
  switch (s) {
    case CondStatus::holds:
      return "holds";
    case CondStatus::fails:
      return "fails";
    default:
      return "inconclusive";
  }
}

const char* to_string(GapVerdictKind k) {
  return k == GapVerdictKind::no_gap_certified ? "NO-GAP-CERTIFIED" : "GAP-POSSIBLE";
}

const char* to_string(NormalityKind k) {
  switch (k) {
    case NormalityKind::normal:
      return "normal";
    case NormalityKind::abnormal:
      return "abnormal";
    case NormalityKind::degenerate_abnormal:
      return "degenerate-abnormal";
    default:
      return "inconclusive";
  }
}

ConditionReport check_cna(const ProblemSpec& p, const ExtendedProcess& proc,
                          const QualOptions& opts) {
  ConditionReport rep;
  rep.condition = "CNa";
  double t0 = proc.y0.front();
  const Vec& x0 = proc.y.front();

  std::vector<Vec> gens;
  try {
    for (int i = 0; i < p.constraint_count(); ++i) {
      Mat hull = hybrid_subdiff(p.h[i], t0, x0);
      for (int j = 0; j < hull.cols(); ++j) gens.push_back(hull.col(j));
    }
  } catch (const Error& e) {
    rep.status = CondStatus::inconclusive;
    rep.witnesses.push_back(std::string("geometry refusal: ") + e.what());
    return rep;
  }
  if (gens.empty()) {
    rep.status = CondStatus::holds;
    rep.margin = kInf;
    rep.witnesses.push_back("hybrid subdifferential empty at the initial point (interior)");
    return rep;
  }

  ConeHull projN;
  try {
    projN = cone_project_component(target_normal_cone(p, proc, opts.geometry_tol), 0, 1 + p.n);
  } catch (const Error& e) {
    rep.status = CondStatus::inconclusive;
    rep.witnesses.push_back(std::string("geometry refusal: ") + e.what());
    return rep;
  }
  ConeHull neg = projN.negated();

  Mat P(1 + p.n, gens.size());
  for (size_t j = 0; j < gens.size(); ++j) P.col(j) = gens[j];
  bool time_indep = true;
  for (const auto& hi : p.h) time_indep = time_indep && hi.time_independent();
  if (time_indep) rep.witnesses.push_back("time-independent state constraint reduction applies");

  if (polytope_meets_cone(P, neg, /*exclude_zero=*/false)) {
    rep.status = CondStatus::fails;
    rep.margin = 0.0;
    rep.witnesses.push_back(
        "a convex combination of hybrid-subdifferential generators lies in the negated "
        "projected target normal cone");
  } else {
    rep.status = CondStatus::holds;
    rep.margin = polytope_cone_distance(P, neg);
  }
  return rep;
}

std::vector<int> active_window(const ProblemSpec& p, const ExtendedProcess& proc, double s,
                               double eps, Direction dir, const std::vector<int>& constraints) {
  std::vector<int> out;
  const int M = proc.cells();
  double lo = dir == Direction::backward ? s - eps : s;
  double hi = dir == Direction::backward ? s : s + eps;
  for (int k = 0; k < M; ++k) {
    double sk = proc.ctrl.s[k];
    if (sk < lo - 1e-12 || sk > hi + 1e-12) continue;
    double w0 = proc.ctrl.omega0[k];
    Vec F = p.combined_field(proc.y0[k], proc.y[k], w0, proc.ctrl.omega[k], proc.ctrl.alpha[k]);
    bool all = true;
    for (int i : constraints) {
      Mat grads = reachable_gradients(p.h[i], proc.y0[k], proc.y[k]);
      double ext = dir == Direction::backward ? -kInf : kInf;
      for (int j = 0; j < grads.cols(); ++j) {
        double val = grads(0, j) * w0 + grads.col(j).tail(p.n).dot(F);
        ext = dir == Direction::backward ? std::max(ext, val) : std::min(ext, val);
      }
      bool crosses = dir == Direction::backward ? ext >= 0.0 : ext <= 0.0;
      if (!crosses) {
        all = false;
        break;
      }
    }
    if (all) out.push_back(k);
  }
  return out;
}

namespace {

// One contact instant of (CQn): the worst (largest) left-hand side over the
// window at a given eps; the condition wants it < -delta.
struct CqnScan {
  double worst = -kInf;
  bool drift_unsatisfiable = false;
  int worst_cell = -1;
};

CqnScan scan_full(const ProblemSpec& p, const ExtendedProcess& proc, int kc,
                  const std::vector<int>& act, const std::vector<int>& window, Direction dir,
                  const QualOptions& opts) {
  CqnScan out;
  double tc = proc.y0[kc];
  const Vec& xc = proc.y[kc];
  auto dirs = p.cone.unit_directions(opts.directions);
  auto a_samples = p.a_set.samples(opts.a_samples_per_dim);
  Mat G = p.impulse_matrix(tc, xc);
  if (!p.f.depends_on_a()) out.drift_unsatisfiable = true;

  std::vector<double> vals;
  for (int cell : window) {
    for (int i : act) {
      Mat grads = reachable_gradients(p.h[i], tc, xc);
      // drift part: inf_a max_xi xi_x . (f(c,a) - f(c, alpha(cell)))
      Vec f_ref = p.f.eval(tc, xc, proc.ctrl.alpha[cell]);
      double drift = kInf;
      for (const auto& a : a_samples) {
        Vec df = p.f.eval(tc, xc, a) - f_ref;
        double mx = -kInf;
        for (int j = 0; j < grads.cols(); ++j) mx = std::max(mx, grads.col(j).tail(p.n).dot(df));
        drift = std::min(drift, mx);
      }
      // impulse part: inf_{w in C on the sphere} max_xi xi_x . G (w - wbar/|wbar|)
      Vec wbar = proc.ctrl.omega[cell];
      Vec wdir = wbar.norm() > 1e-14 ? Vec(wbar / wbar.norm()) : Vec(Vec::Zero(p.m));
      double imp = kInf;
      for (const auto& d : dirs) {
        Vec dw = G * (d - wdir);
        double mx = -kInf;
        for (int j = 0; j < grads.cols(); ++j) mx = std::max(mx, grads.col(j).tail(p.n).dot(dw));
        imp = std::min(imp, mx);
      }
      if (dir == Direction::forward) {
        // forward: sup_a min_xi ... > delta and likewise for the impulse part;
        // flip signs so "worst" stays a max and the target stays < -delta.
        drift = -kInf;
        for (const auto& a : a_samples) {
          Vec df = p.f.eval(tc, xc, a) - f_ref;
          double mn = kInf;
          for (int j = 0; j < grads.cols(); ++j) mn = std::min(mn, grads.col(j).tail(p.n).dot(df));
          drift = std::max(drift, mn);
        }
        imp = -kInf;
        for (const auto& d : dirs) {
          Vec dw = G * (d - wdir);
          double mn = kInf;
          for (int j = 0; j < grads.cols(); ++j) mn = std::min(mn, grads.col(j).tail(p.n).dot(dw));
          imp = std::max(imp, mn);
        }
        drift = -drift;
        imp = -imp;
      }
      double v = std::max(drift, imp);
      vals.push_back(v);
      if (v > out.worst) {
        out.worst = v;
        out.worst_cell = cell;
      }
    }
  }
  if (!vals.empty() && opts.exemption_fraction > 0) {
    std::sort(vals.begin(), vals.end());
    int keep = static_cast<int>(std::floor((1.0 - opts.exemption_fraction) * vals.size()));
    keep = std::clamp(keep, 1, static_cast<int>(vals.size()));
    out.worst = vals[keep - 1];
  }
  return out;
}

CqnScan scan_primed(const ProblemSpec& p, const ExtendedProcess& proc, int /*kc*/,
                    const std::vector<int>& act, const std::vector<int>& window, Direction dir,
                    const QualOptions& opts) {
  CqnScan out;
  auto dirs = p.cone.unit_directions(opts.directions);
  auto a_samples = p.a_set.samples(opts.a_samples_per_dim);
  for (int cell : window) {
    double t = proc.y0[cell];
    const Vec& x = proc.y[cell];
    double w0 = proc.ctrl.omega0[cell];
    Vec Fbar = p.combined_field(t, x, w0, proc.ctrl.omega[cell], proc.ctrl.alpha[cell]);
    Mat G = p.impulse_matrix(t, x);
    double cell_worst = kInf;  // best available control
    for (const auto& a : a_samples) {
      Vec f_term = w0 * p.f.eval(t, x, a);
      for (const auto& d : dirs) {
        Vec F = f_term + (1.0 - w0) * (G * d);
        double v_allcons = -kInf;
        for (int i : act) {
          Mat grads = reachable_gradients(p.h[i], t, x);
          double ext = dir == Direction::backward ? -kInf : kInf;
          for (int j = 0; j < grads.cols(); ++j) {
            double val = grads.col(j).tail(p.n).dot(F - Fbar);
            ext = dir == Direction::backward ? std::max(ext, val) : std::min(ext, val);
          }
          if (dir == Direction::forward) ext = -ext;
          v_allcons = std::max(v_allcons, ext);
        }
        cell_worst = std::min(cell_worst, v_allcons);
      }
    }
    if (cell_worst > out.worst) {
      out.worst = cell_worst;
      out.worst_cell = cell;
    }
  }
  return out;
}

CqnScan scan_smooth(const ProblemSpec& p, const ExtendedProcess& proc, int kc,
                    const std::vector<int>& act, Direction dir, const QualOptions& opts,
                    bool* not_smooth) {
  CqnScan out;
  double tc = proc.y0[kc];
  const Vec& xc = proc.y[kc];
  auto dirs = p.cone.unit_directions(opts.directions);
  auto a_samples = p.a_set.samples(opts.a_samples_per_dim);
  Mat G = p.impulse_matrix(tc, xc);
  for (int i : act) {
    Mat grads = reachable_gradients(p.h[i], tc, xc);
    if (grads.cols() != 1) {
      *not_smooth = true;
      return out;
    }
    Vec gx = grads.col(0).tail(p.n);
    double drift = kInf, imp = kInf;
    for (const auto& a : a_samples) drift = std::min(drift, gx.dot(p.f.eval(tc, xc, a)));
    for (const auto& d : dirs) imp = std::min(imp, gx.dot(G * d));
    if (dir == Direction::forward) {
      drift = -kInf;
      imp = -kInf;
      for (const auto& a : a_samples) drift = std::max(drift, gx.dot(p.f.eval(tc, xc, a)));
      for (const auto& d : dirs) imp = std::max(imp, gx.dot(G * d));
      drift = -drift;
      imp = -imp;
    }
    out.worst = std::max(out.worst, std::max(drift, imp));
  }
  return out;
}

}  // namespace

ConditionReport check_cqn(const ProblemSpec& p, const ExtendedProcess& proc, Direction dir,
                          CqnVariant variant, const QualOptions& opts) {
  ConditionReport rep;
  rep.condition = std::string("CQn_") + (dir == Direction::backward ? "b" : "f");
  if (variant == CqnVariant::primed) rep.condition += "'";
  if (variant == CqnVariant::smooth)
    rep.condition = std::string("IPFCn_") + (dir == Direction::backward ? "b" : "f");

  auto contacts = contact_nodes(p, proc, dir, opts.contact_tol);
  if (contacts.empty()) {
    rep.status = CondStatus::holds;
    rep.margin = kInf;
    rep.witnesses.push_back("no boundary-contact instants in the quantifier range (vacuous)");
    return rep;
  }
  for (int kc : contacts) rep.contact_instants.push_back(proc.ctrl.s[kc]);

  const double S = proc.S();
  double min_margin = kInf;
  double eps_used = 0.0;
  bool drift_note = false;
  for (int kc : contacts) {
    auto act = active_constraints_at(p, proc, kc, opts.contact_tol);
    double best = -kInf;
    double best_eps = 0.0;
    if (variant == CqnVariant::smooth) {
      bool not_smooth = false;
      CqnScan scan = scan_smooth(p, proc, kc, act, dir, opts, &not_smooth);
      if (not_smooth) {
        rep.status = CondStatus::inconclusive;
        rep.witnesses.push_back("constraint not C^1 at contact s=" +
                                std::to_string(proc.ctrl.s[kc]) +
                                "; smooth variant inapplicable");
        return rep;
      }
      best = -scan.worst;
    } else {
      for (int j = 0; j < opts.eps_grid; ++j) {
        double eps = S / 10.0 / std::pow(2.0, j);
        auto window = active_window(p, proc, proc.ctrl.s[kc], eps, dir, act);
        if (window.empty()) {
          best = std::max(best, kInf);
          best_eps = eps;
          continue;
        }
        CqnScan scan = variant == CqnVariant::full
                           ? scan_full(p, proc, kc, act, window, dir, opts)
                           : scan_primed(p, proc, kc, act, window, dir, opts);
        if (scan.drift_unsatisfiable) drift_note = true;
        if (-scan.worst > best) {
          best = -scan.worst;
          best_eps = eps;
        }
      }
    }
    if (best < min_margin) {
      min_margin = best;
      eps_used = best_eps;
      if (min_margin <= opts.delta_threshold) {
        rep.witnesses.push_back("violated at contact s=" + std::to_string(proc.ctrl.s[kc]) +
                                " (margin " + std::to_string(best) + ")");
      }
    }
  }
  rep.margin = min_margin;
  rep.eps_used = eps_used;
  rep.status = min_margin > opts.delta_threshold ? CondStatus::holds : CondStatus::fails;
  if (drift_note && variant == CqnVariant::full)
    rep.witnesses.push_back(
        "drift inequality unsatisfiable: f does not depend on the ordinary control; "
        "consider the primed variant");
  return rep;
}

ConditionReport check_tqn(const ProblemSpec& p, const ExtendedProcess& proc, Direction dir,
                          const QualOptions& opts) {
  ConditionReport rep;
  rep.condition = std::string("TQn_") + (dir == Direction::backward ? "b" : "f");
  const int M = proc.cells();
  const double S = proc.S();
  const bool backward = dir == Direction::backward;

  // interiority window next to the relevant endpoint (endpoint itself excluded)
  double eps_ok = 0.0;
  for (int j = 0; j < opts.eps_grid; ++j) {
    double eps = S / 10.0 / std::pow(2.0, j);
    bool interior = true;
    bool nonempty = false;
    for (int k = 0; k <= M; ++k) {
      double sk = proc.ctrl.s[k];
      bool in_range = backward ? (sk >= S - eps - 1e-12 && sk < S - 1e-12)
                               : (sk > 1e-12 && sk <= eps + 1e-12);
      if (!in_range) continue;
      nonempty = true;
      for (int i = 0; i < p.constraint_count(); ++i)
        if (p.h[i].value(proc.y0[k], proc.y[k]) >= -opts.contact_tol) interior = false;
    }
    if (nonempty && interior) {
      eps_ok = eps;
      break;
    }
  }
  if (eps_ok == 0.0) {
    rep.status = CondStatus::fails;
    rep.margin = 0.0;
    rep.witnesses.push_back("state constraint active arbitrarily close to the endpoint");
    return rep;
  }
  rep.eps_used = eps_ok;

  int node = backward ? M : 0;
  double te = proc.y0[node];
  const Vec& xe = proc.y[node];

  std::vector<Vec> hyb;
  try {
    for (int i = 0; i < p.constraint_count(); ++i) {
      Mat hull = hybrid_subdiff(p.h[i], te, xe);
      for (int j = 0; j < hull.cols(); ++j) hyb.push_back(hull.col(j));
    }
  } catch (const Error& e) {
    rep.status = CondStatus::inconclusive;
    rep.witnesses.push_back(std::string("geometry refusal: ") + e.what());
    return rep;
  }

  ConeHull projT;  // proj of N_T0 on the relevant (t,x)-endpoint block
  try {
    ConeHull N = target_normal_cone(p, proc, opts.geometry_tol);
    projT = cone_project_component(N, backward ? 1 + p.n : 0, 1 + p.n);
  } catch (const Error& e) {
    rep.status = CondStatus::inconclusive;
    rep.witnesses.push_back(std::string("geometry refusal: ") + e.what());
    return rep;
  }

  // Z = proj N + [0,inf) . hybrid subdifferentials (convention X + empty = X)
  ConeVars Z;
  Z.G = Mat(1 + p.n, projT.gens.cols() + hyb.size());
  if (projT.gens.cols() > 0) Z.G.leftCols(projT.gens.cols()) = projT.gens;
  for (size_t j = 0; j < hyb.size(); ++j) Z.G.col(projT.gens.cols() + j) = hyb[j];
  Z.L = projT.lin;

  auto a_samples = p.a_set.samples(opts.a_samples_per_dim);
  auto dirs = p.cone.unit_directions(opts.directions);
  Mat G = p.impulse_matrix(te, xe);

  double margin_a = -kInf, margin_b = -kInf;
  std::string why_a, why_b;

  // case (a)
  {
    bool test1 = true;
    if (!hyb.empty()) {
      Mat P(1 + p.n, hyb.size());
      for (size_t j = 0; j < hyb.size(); ++j) P.col(j) = hyb[j];
      test1 = !polytope_meets_cone(P, projT.negated(), /*exclude_zero=*/true);
    }
    if (!test1) {
      why_a = "case (a): hybrid subdifferential meets the negated projected normal cone";
    } else {
      // for all nonzero zeta in Z: min_a [zeta_x . f + zeta_t] < 0 (backward)
      std::vector<Vec> funcs;
      for (const auto& a : a_samples) {
        Vec fa = p.f.eval(te, xe, a);
        Vec f = Vec::Zero(1 + p.n);
        f[0] = backward ? 1.0 : -1.0;
        f.tail(p.n) = backward ? fa : Vec(-fa);
        funcs.push_back(f);
      }
      double sup = worst_min_functional(Z, funcs, range_vec(0, 1 + p.n));
      // backward wants min_a [...] < 0, i.e. sup over zeta of min_a < 0
      margin_a = sup == -kInf ? kInf : -sup;
      if (margin_a <= opts.delta_threshold)
        why_a = "case (a): endpoint drift inequality not strictly negative";
    }
  }
  // case (b)
  {
    bool test1 = true;
    if (!hyb.empty()) {
      ConeHull hx = ConeHull::zero(p.n);
      hx.gens = Mat(p.n, hyb.size());
      for (size_t j = 0; j < hyb.size(); ++j) hx.gens.col(j) = hyb[j].tail(p.n);
      ConeHull projX =
          cone_project_component(projT, 1, p.n).negated();  // x-part of the block
      test1 = cone_intersection_empty(&hx, &projX, /*exclude_zero=*/true);
    }
    if (!test1) {
      why_b = "case (b): projected hybrid subdifferential meets the negated x-projection";
    } else {
      std::vector<Vec> funcs;
      for (const auto& d : dirs) {
        Vec gd = G * d;
        Vec f = Vec::Zero(1 + p.n);
        f.tail(p.n) = backward ? gd : Vec(-gd);
        funcs.push_back(f);
      }
      double sup = worst_min_functional(Z, funcs, range_vec(1, p.n));
      if (sup == -kInf) {
        margin_b = kInf;  // no zeta with zeta_x != 0: vacuous
      } else {
        bool advancing = proc.y0.back() > proc.y0.front() + 1e-12;
        bool slack = !std::isfinite(p.K) || proc.nu.back() < p.K - 1e-8;
        if (!advancing || !slack) {
          why_b = "case (b): side conditions (time advance / variation slack) fail";
        } else {
          margin_b = -sup;
          if (margin_b <= opts.delta_threshold)
            why_b = "case (b): endpoint impulse inequality not strictly negative";
        }
      }
    }
  }

  rep.margin = std::max(margin_a, margin_b);
  rep.status = rep.margin > opts.delta_threshold ? CondStatus::holds : CondStatus::fails;
  if (rep.status == CondStatus::holds) {
    rep.witnesses.push_back(margin_a >= margin_b ? "case (a) applies" : "case (b) applies");
  } else {
    if (!why_a.empty()) rep.witnesses.push_back(why_a);
    if (!why_b.empty()) rep.witnesses.push_back(why_b);
  }
  return rep;
}

QualificationReport check_all_qualifications(const ProblemSpec& p, const ExtendedProcess& proc,
                                             const QualOptions& opts) {
  QualificationReport rep;
  rep.cna = check_cna(p, proc, opts);
  rep.cqn_b = check_cqn(p, proc, Direction::backward, CqnVariant::full, opts);
  rep.cqn_f = check_cqn(p, proc, Direction::forward, CqnVariant::full, opts);
  rep.tqn_b = check_tqn(p, proc, Direction::backward, opts);
  rep.tqn_f = check_tqn(p, proc, Direction::forward, opts);
  return rep;
}

CompositeVerdict no_gap_verdict(const ProblemSpec& p, const ExtendedProcess& proc,
                                const QualificationReport& reports,
                                const NormalityVerdict* normality) {
  (void)p;
  (void)proc;
  CompositeVerdict v;
  auto holds = [](const ConditionReport& r) { return r.status == CondStatus::holds; };
  auto inconcl = [](const ConditionReport& r) { return r.status == CondStatus::inconclusive; };
  v.any_inconclusive = inconcl(reports.cna) || inconcl(reports.cqn_b) || inconcl(reports.cqn_f) ||
                       inconcl(reports.tqn_b) || inconcl(reports.tqn_f);

  if (holds(reports.cna) && holds(reports.cqn_b) && holds(reports.tqn_b)) {
    v.kind = GapVerdictKind::no_gap_certified;
    v.route = "qualification chain (CNa, CQn_b, TQn_b)";
    return v;
  }
  if (holds(reports.cna) && holds(reports.cqn_f) && holds(reports.tqn_f)) {
    v.kind = GapVerdictKind::no_gap_certified;
    v.route = "qualification chain (CNa, CQn_f, TQn_f)";
    return v;
  }
  if (normality != nullptr && normality->verdict == NormalityKind::normal) {
    v.kind = GapVerdictKind::no_gap_certified;
    v.route = "normality of the extremal";
    return v;
  }
  v.kind = GapVerdictKind::gap_possible;
  v.route = "none";
  v.note =
      "abnormality is necessary for an infimum gap, not sufficient; no gap is asserted";
  if (normality != nullptr && normality->is_abnormal())
    v.abnormality_certificate = normality->certificate;
  return v;
}

}  // namespace gapcert
