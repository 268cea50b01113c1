#include "gapcert/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "gapcert/errors.hpp"
#include "gapcert/extension.hpp"

namespace gapcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Augmented-Lagrangian hinge for an inequality c <= 0 with multiplier mu >= 0.
inline double al_term(double c, double mu, double w) {
  double t = std::max(0.0, mu + w * c);
  return (t * t - mu * mu) / (2.0 * w);
}
inline double al_slope(double c, double mu, double w) { return std::max(0.0, mu + w * c); }

struct Layout {
  int n = 0, m = 0, q = 0, M = 0;
  int dir_per_cell = 0;  // direction parameters per cell
  int a_per_cell = 0;
  double rho_max = 1.0;

  int i_S() const { return 0; }
  int i_z0() const { return 1; }                    // 1+n entries
  int i_rho(int k) const { return 2 + n + k; }
  int i_dir(int k) const { return 2 + n + M + k * dir_per_cell; }
  int i_a(int k) const { return 2 + n + M + M * dir_per_cell + k * a_per_cell; }
  int total() const { return 2 + n + M * (1 + dir_per_cell + a_per_cell); }
};

struct TrustRegion {
  DInftyGraph anchor;
  double delta = 0.0;
  bool active = false;
};

struct AlState {
  Vec mu_endpoint;                         // 2(1+n)
  std::vector<std::vector<double>> mu_h;   // per constraint, per node
  double mu_K = 0.0;
  double mu_tr = 0.0;
  double w = 10.0;
};

class Transcription {
 public:
  Transcription(const ProblemSpec& p, const SolveOptions& opts, const TrustRegion& tr)
      : p_(p), opts_(opts), tr_(tr) {
    L_.n = p.n;
    L_.m = p.m;
    L_.q = p.q;
    L_.M = opts.cells;
    L_.rho_max = 1.0 - opts.eps_restriction;
    switch (p.cone.kind) {
      case ConeSpec::Kind::full:
      case ConeSpec::Kind::orthant:
        L_.dir_per_cell = p.m;
        break;
      case ConeSpec::Kind::generated:
        L_.dir_per_cell = static_cast<int>(p.cone.generators.cols());
        break;
      case ConeSpec::Kind::ray:
        L_.dir_per_cell = 0;
        break;
      case ConeSpec::Kind::zero:
        L_.dir_per_cell = 0;
        L_.rho_max = 0.0;
        break;
    }
    L_.a_per_cell = (p.a_set.kind == ControlSet::Kind::empty ||
                     (p.a_set.kind == ControlSet::Kind::finite && p.a_set.points.size() == 1))
                        ? 0
                        : p.q;
    if (p.a_set.kind == ControlSet::Kind::finite && p.a_set.points.size() > 1) {
      // Optimize inside the bounding box, snap to the list afterwards.
      a_lo_ = p.a_set.points.front();
      a_hi_ = p.a_set.points.front();
      for (const auto& pt : p.a_set.points) {
        a_lo_ = a_lo_.cwiseMin(pt);
        a_hi_ = a_hi_.cwiseMax(pt);
      }
    } else if (p.a_set.kind == ControlSet::Kind::box) {
      a_lo_ = p.a_set.lower;
      a_hi_ = p.a_set.upper;
    }

    Vec anchor_pt = set_any_point(p.target);
    t1_ref_ = anchor_pt[0];
    x1_ref_ = anchor_pt.segment(1, p.n);
    double span = std::abs(anchor_pt[1 + p.n] - anchor_pt[0]);
    S_ref_ = std::max(span, 0.25) + std::min(std::isfinite(p.K) ? p.K : 1.0, 2.0);
    S_hi_ = opts.horizon_cap_factor * std::max({span, 1.0});
    S_lo_ = 1e-3;
  }

  const Layout& layout() const { return L_; }
  double S_ref() const { return S_ref_; }
  double t1_ref() const { return t1_ref_; }
  const Vec& x1_ref() const { return x1_ref_; }

  void project(Vec& x) const {
    x[L_.i_S()] = std::clamp(x[L_.i_S()], S_lo_, S_hi_);
    for (int k = 0; k < L_.M; ++k) {
      double& r = x[L_.i_rho(k)];
      r = std::clamp(r, 0.0, L_.rho_max);
      if (L_.dir_per_cell > 0) {
        auto dv = x.segment(L_.i_dir(k), L_.dir_per_cell);
        if (p_.cone.kind == ConeSpec::Kind::orthant ||
            p_.cone.kind == ConeSpec::Kind::generated)
          dv = dv.cwiseMax(0.0);
        double nrm = direction_norm(k, x);
        if (nrm < 1e-12) {
          dv.setZero();  // deterministic reset to the first admissible direction
          dv[0] = p_.cone.kind == ConeSpec::Kind::generated
                      ? 1.0 / p_.cone.generators.col(0).norm()
                      : 1.0;
        } else {
          dv /= nrm;
        }
      }
      for (int j = 0; j < L_.a_per_cell; ++j) {
        double& a = x[L_.i_a(k) + j];
        a = std::clamp(a, a_lo_[j], a_hi_[j]);
      }
    }
  }

  // |omega direction| in R^m induced by the raw parameters.
  double direction_norm(int k, const Vec& x) const {
    if (L_.dir_per_cell == 0) return 1.0;
    auto dv = x.segment(L_.i_dir(k), L_.dir_per_cell);
    if (p_.cone.kind == ConeSpec::Kind::generated) return (p_.cone.generators * dv).norm();
    return dv.norm();
  }

  Vec direction(int k, const Vec& x) const {
    switch (p_.cone.kind) {
      case ConeSpec::Kind::ray:
        return p_.cone.direction;
      case ConeSpec::Kind::zero:
        return Vec::Zero(L_.m);
      case ConeSpec::Kind::generated:
        return p_.cone.generators * x.segment(L_.i_dir(k), L_.dir_per_cell);
      default:
        return x.segment(L_.i_dir(k), L_.dir_per_cell);
    }
  }

  Vec alpha(int k, const Vec& x) const {
    if (L_.a_per_cell > 0) return x.segment(L_.i_a(k), L_.a_per_cell);
    if (p_.a_set.kind == ControlSet::Kind::finite) return p_.a_set.points.front();
    return Vec(0);
  }

  ControlGrid controls(const Vec& x) const {
    ControlGrid ctrl = ControlGrid::uniform(x[L_.i_S()], L_.M, L_.m, L_.q);
    for (int k = 0; k < L_.M; ++k) {
      double rho = x[L_.i_rho(k)];
      ctrl.omega0[k] = 1.0 - rho;
      ctrl.omega[k] = rho * direction(k, x);
      ctrl.alpha[k] = p_.a_set.kind == ControlSet::Kind::finite
                          ? p_.a_set.nearest(alpha(k, x))
                          : alpha(k, x);
    }
    return ctrl;
  }

  ExtendedProcess rollout(const Vec& x) const {
    return integrate(p_, controls(x), x[L_.i_z0()], x.segment(L_.i_z0() + 1, L_.n), 0.0,
                     /*check_controls=*/false);
  }

  // Augmented-Lagrangian merit and its gradient via the discrete adjoint.
  double eval(const Vec& x, const AlState& al, Vec* grad) const {
    const int M = L_.M, n = L_.n;
    const double S = x[L_.i_S()];
    const double hS = S / M;

    // Forward pass.
    std::vector<double> y0(M + 1), nu(M + 1), rho(M);
    std::vector<Vec> y(M + 1), dir(M), aval(M), fval(M), Gd(M);
    std::vector<Mat> Jf(M);
    y0[0] = x[L_.i_z0()];
    y[0] = x.segment(L_.i_z0() + 1, n);
    nu[0] = 0.0;
    for (int k = 0; k < M; ++k) {
      rho[k] = x[L_.i_rho(k)];
      dir[k] = direction(k, x);
      aval[k] = alpha(k, x);
      double w0 = 1.0 - rho[k];
      fval[k] = p_.f.eval(y0[k], y[k], aval[k]);
      Mat G = p_.impulse_matrix(y0[k], y[k]);
      Gd[k] = G * dir[k];
      Vec F = w0 * fval[k] + rho[k] * Gd[k];
      if (grad) Jf[k] = p_.combined_jac_tx(y0[k], y[k], w0, rho[k] * dir[k], aval[k]);
      y0[k + 1] = y0[k] + hS * w0;
      y[k + 1] = y[k] + hS * F;
      nu[k + 1] = nu[k] + hS * rho[k];
    }

    // Endpoint vector and terms.
    Vec E(2 * (1 + n));
    E[0] = y0[0];
    E.segment(1, n) = y[0];
    E[1 + n] = y0[M];
    E.segment(2 + n, n) = y[M];
    Vec r = E - set_project(p_.target, E);
    double L = p_.cost.value(y0[0], y[0], y0[M], y[M], nu[M]);
    Vec psi_grad = grad ? p_.cost.gradient(y0[0], y[0], y0[M], y[M], nu[M]) : Vec();
    L += al.mu_endpoint.dot(r) + 0.5 * al.w * r.squaredNorm();

    double sum_h_terms = 0.0;  // for dL/dS through the node weight hS
    std::vector<std::vector<double>> h_slope(p_.constraint_count(),
                                             std::vector<double>(M + 1, 0.0));
    for (int i = 0; i < p_.constraint_count(); ++i) {
      for (int k = 0; k <= M; ++k) {
        double c = p_.h[i].value(y0[k], y[k]);
        sum_h_terms += al_term(c, al.mu_h[i][k], al.w);
        h_slope[i][k] = al_slope(c, al.mu_h[i][k], al.w);
      }
    }
    L += hS * sum_h_terms;

    double slope_K = 0.0;
    if (std::isfinite(p_.K)) {
      L += al_term(nu[M] - p_.K, al.mu_K, al.w);
      slope_K = al_slope(nu[M] - p_.K, al.mu_K, al.w);
    }

    // Trust region: d_infty to the anchor, frozen-argmax subgradient.
    double slope_tr = 0.0;
    int tr_node = -1;
    Vec tr_dirvec;
    double tr_w_hi = 0.0;
    if (tr_.active) {
      double tags = std::abs(y0[0] - tr_.anchor.tag1) + std::abs(y0[M] - tr_.anchor.tag2);
      double sup = 0.0;
      int arg = 0;
      for (int k = 0; k <= M; ++k) {
        Vec z(n + 1);
        z.head(n) = y[k];
        z[n] = nu[k];
        double sk = hS * k;
        Vec az = tr_.anchor.z.front();
        if (sk >= tr_.anchor.s.back())
          az = tr_.anchor.z.back();
        else if (sk > tr_.anchor.s.front()) {
          auto it = std::upper_bound(tr_.anchor.s.begin(), tr_.anchor.s.end(), sk);
          int hi2 = static_cast<int>(it - tr_.anchor.s.begin());
          double den = tr_.anchor.s[hi2] - tr_.anchor.s[hi2 - 1];
          double w2 = den > 0 ? (sk - tr_.anchor.s[hi2 - 1]) / den : 0.0;
          az = (1 - w2) * tr_.anchor.z[hi2 - 1] + w2 * tr_.anchor.z[hi2];
        }
        double dist = (z - az).norm();
        if (dist > sup) {
          sup = dist;
          arg = k;
          tr_dirvec = dist > 1e-15 ? Vec((z - az) / dist) : Vec(Vec::Zero(n + 1));
        }
      }
      double c = tags + sup - tr_.delta;
      L += al_term(c, al.mu_tr, al.w);
      slope_tr = al_slope(c, al.mu_tr, al.w);
      tr_node = arg;
      tr_w_hi = (y0[M] > tr_.anchor.tag2) ? 1.0 : -1.0;
      if (std::abs(y0[M] - tr_.anchor.tag2) < 1e-15) tr_w_hi = 0.0;
    }

    if (!grad) return L;

    // Reverse sweep. lambda[k] = dL/d(y0,y,nu)_k.
    grad->setZero();
    std::vector<Vec> lambda(M + 1, Vec::Zero(1 + n + 1));
    // terminal contributions
    lambda[M][0] += psi_grad[1 + n];
    lambda[M].segment(1, n) += psi_grad.segment(2 + n, n);
    lambda[M][1 + n] += psi_grad[2 * (1 + n)];
    Vec ep_grad = al.mu_endpoint + al.w * r;
    lambda[M][0] += ep_grad[1 + n];
    lambda[M].segment(1, n) += ep_grad.segment(2 + n, n);
    lambda[M][1 + n] += slope_K;
    if (tr_.active) {
      lambda[M][0] += slope_tr * tr_w_hi;
      if (tr_node >= 0 && tr_dirvec.size() == n + 1) {
        lambda[tr_node].segment(1, n) += slope_tr * tr_dirvec.head(n);
        lambda[tr_node][1 + n] += slope_tr * tr_dirvec[n];
      }
    }
    double gS = sum_h_terms / M;  // node-weight dependence on S

    for (int k = M - 1; k >= 0; --k) {
      // node k+1 state-constraint contributions were folded into lambda below;
      // handle node M..1 here, node 0 after the loop.
      {
        int kn = k + 1;
        for (int i = 0; i < p_.constraint_count(); ++i) {
          if (h_slope[i][kn] == 0.0) continue;
          Vec ghi = p_.h[i].gradient_tx(y0[kn], y[kn]);
          lambda[kn][0] += hS * h_slope[i][kn] * ghi[0];
          lambda[kn].segment(1, n) += hS * h_slope[i][kn] * ghi.tail(n);
        }
      }
      const Vec& lam = lambda[k + 1];
      double lam_y0 = lam[0];
      auto lam_y = lam.segment(1, n);
      double lam_nu = lam[1 + n];
      double w0 = 1.0 - rho[k];
      Vec F = w0 * fval[k] + rho[k] * Gd[k];

      // dL/dS through this step
      gS += (lam_y0 * w0 + lam_y.dot(F) + lam_nu * rho[k]) / M;

      // control gradients
      double g_rho = hS * (-lam_y0 + lam_y.dot(Gd[k] - fval[k]) + lam_nu);
      (*grad)[L_.i_rho(k)] += g_rho;
      if (L_.dir_per_cell > 0) {
        Mat G = p_.impulse_matrix(y0[k], y[k]);
        Vec gd = hS * rho[k] * (G.transpose() * lam_y);  // dL/d(direction)
        // tangent projection for the normalized direction parameters
        Vec d = dir[k];
        double dn = d.norm();
        if (dn > 1e-12) {
          if (p_.cone.kind == ConeSpec::Kind::generated) {
            Vec amb = gd - (d / dn).dot(gd) * (d / dn);
            grad->segment(L_.i_dir(k), L_.dir_per_cell) += p_.cone.generators.transpose() * amb;
          } else {
            grad->segment(L_.i_dir(k), L_.dir_per_cell) += gd - (d / dn).dot(gd) * (d / dn);
          }
        } else {
          if (p_.cone.kind == ConeSpec::Kind::generated)
            grad->segment(L_.i_dir(k), L_.dir_per_cell) += p_.cone.generators.transpose() * gd;
          else
            grad->segment(L_.i_dir(k), L_.dir_per_cell) += gd;
        }
      }
      if (L_.a_per_cell > 0 && p_.f.mode == DriftField::Mode::affine) {
        for (int j = 0; j < L_.q; ++j)
          (*grad)[L_.i_a(k) + j] +=
              hS * w0 * lam_y.dot(p_.f.a_terms[j].eval(y0[k], y[k]));
      }

      // state backprop: z_{k+1} = z_k + hS * Phi(z_k,...)
      lambda[k] += lambda[k + 1];
      Vec jt = Jf[k].transpose() * lam_y;  // (1+n)
      lambda[k][0] += hS * jt[0];
      lambda[k].segment(1, n) += hS * jt.tail(n);
    }
    // node 0 state-constraint contributions
    for (int i = 0; i < p_.constraint_count(); ++i) {
      if (h_slope[i][0] == 0.0) continue;
      Vec ghi = p_.h[i].gradient_tx(y0[0], y[0]);
      lambda[0][0] += hS * h_slope[i][0] * ghi[0];
      lambda[0].segment(1, n) += hS * h_slope[i][0] * ghi.tail(n);
    }
    // initial endpoint / cost contributions
    lambda[0][0] += psi_grad[0] + ep_grad[0];
    lambda[0].segment(1, n) += psi_grad.segment(1, n) + ep_grad.segment(1, n);
    if (tr_.active) lambda[0][0] += slope_tr * ((y0[0] > tr_.anchor.tag1) ? 1.0 : (y0[0] < tr_.anchor.tag1 ? -1.0 : 0.0));

    (*grad)[L_.i_S()] += gS;
    (*grad)[L_.i_z0()] += lambda[0][0];
    grad->segment(L_.i_z0() + 1, n) += lambda[0].segment(1, n);
    return L;
  }

  double S_lo() const { return S_lo_; }
  double S_hi() const { return S_hi_; }

 private:
  const ProblemSpec& p_;
  SolveOptions opts_;
  TrustRegion tr_;
  Layout L_;
  Vec a_lo_, a_hi_;
  double S_ref_ = 1.0, S_lo_ = 1e-3, S_hi_ = 10.0;
  double t1_ref_ = 0.0;
  Vec x1_ref_;
};

struct StartResult {
  Vec x;
  double merit = kInf;
  double objective = kInf;
  double violation = kInf;
  bool monotone = true;
  std::vector<double> outer_objective, outer_violation;
};

// Projected Barzilai-Borwein descent with an Armijo safeguard; the accepted
// merit sequence is non-increasing.
void inner_solve(const Transcription& tr, const AlState& al, Vec& x, int max_inner, double kkt_tol,
                 bool* monotone) {
  Vec g(x.size()), g_prev(x.size()), x_prev;
  tr.project(x);
  double L = tr.eval(x, al, &g);
  double step = 1e-2;
  for (int it = 0; it < max_inner; ++it) {
    Vec cand = x - step * g;
    tr.project(cand);
    Vec diff = cand - x;
    double dnorm = diff.norm();
    if (dnorm <= kkt_tol * (1.0 + std::abs(L))) break;
    double Lc = tr.eval(cand, al, nullptr);
    int bt = 0;
    while (Lc > L - 1e-4 * (dnorm * dnorm) / std::max(step, 1e-12) && bt < 40) {
      step *= 0.5;
      cand = x - step * g;
      tr.project(cand);
      diff = cand - x;
      dnorm = diff.norm();
      Lc = tr.eval(cand, al, nullptr);
      ++bt;
    }
    if (Lc > L + 1e-12) {
      if (monotone && Lc > L * (1 + 1e-12) + 1e-10) *monotone = false;
      break;  // no descent available at the smallest step
    }
    x_prev = x;
    g_prev = g;
    x = cand;
    L = tr.eval(x, al, &g);
    // BB1 step from the accepted move
    Vec s = x - x_prev;
    Vec yv = g - g_prev;
    double sy = s.dot(yv);
    step = sy > 1e-16 ? std::clamp(s.squaredNorm() / sy, 1e-8, 1e4) : std::min(step * 2.0, 1e2);
  }
}

StartResult run_start(const ProblemSpec& p, const Transcription& tr, const SolveOptions& opts,
                      Vec x0) {
  const int M = tr.layout().M;
  AlState al;
  al.mu_endpoint = Vec::Zero(2 * (1 + p.n));
  al.mu_h.assign(p.constraint_count(), std::vector<double>(M + 1, 0.0));
  al.w = 10.0;

  StartResult out;
  out.x = std::move(x0);
  tr.project(out.x);
  double prev_viol = kInf;
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    inner_solve(tr, al, out.x, opts.max_inner, opts.kkt_tol, &out.monotone);
    ExtendedProcess proc = tr.rollout(out.x);
    FeasibilityReport feas = feasibility(p, proc);
    double viol = feas.worst();
    out.outer_objective.push_back(cost(p, proc));
    out.outer_violation.push_back(viol);
    if (viol <= opts.constraint_tol && outer > 0) break;

    // multiplier updates
    Vec E(2 * (1 + p.n));
    E[0] = proc.y0.front();
    E.segment(1, p.n) = proc.y.front();
    E[1 + p.n] = proc.y0.back();
    E.segment(2 + p.n, p.n) = proc.y.back();
    Vec r = E - set_project(p.target, E);
    al.mu_endpoint += al.w * r;
    for (int i = 0; i < p.constraint_count(); ++i)
      for (int k = 0; k <= M; ++k)
        al.mu_h[i][k] =
            std::max(0.0, al.mu_h[i][k] + al.w * p.h[i].value(proc.y0[k], proc.y[k]));
    if (std::isfinite(p.K)) al.mu_K = std::max(0.0, al.mu_K + al.w * (proc.nu.back() - p.K));
    if (viol > 0.25 * prev_viol) al.w = std::min(al.w * opts.penalty_growth, 1e10);
    prev_viol = viol;
  }
  ExtendedProcess proc = tr.rollout(out.x);
  FeasibilityReport feas = feasibility(p, proc);
  out.objective = cost(p, proc);
  out.violation = feas.worst();
  return out;
}

}  // namespace

namespace detail {

SolveResult solve_impl(const ProblemSpec& p, const SolveOptions& opts, const TrustRegion& tr_in,
                       const std::vector<ExtendedProcess>& seeds) {
  Transcription tr(p, opts, tr_in);
  const Layout& L = tr.layout();

  auto pack_process = [&](const ExtendedProcess& proc) {
    Vec x = Vec::Zero(L.total());
    x[L.i_S()] = proc.S();
    x[L.i_z0()] = proc.y0.front();
    x.segment(L.i_z0() + 1, p.n) = proc.y.front();
    // Cells without impulse carry no direction information, which freezes the
    // direction gradient at rho = 0; inherit the nearest impulsive cell's
    // direction instead so increasing rho is immediately meaningful.
    std::vector<Vec> inherited(proc.cells(), Vec());
    {
      Vec last = Vec();
      for (int c = 0; c < proc.cells(); ++c) {
        if (proc.ctrl.omega[c].norm() > 1e-12) last = proc.ctrl.omega[c].normalized();
        inherited[c] = last;
      }
      last = Vec();
      for (int c = proc.cells() - 1; c >= 0; --c) {
        if (proc.ctrl.omega[c].norm() > 1e-12) last = proc.ctrl.omega[c].normalized();
        if (inherited[c].size() == 0) inherited[c] = last;
      }
    }
    // Resample cell controls onto the uniform transcription grid.
    for (int k = 0; k < L.M; ++k) {
      double s_mid = proc.S() * (k + 0.5) / L.M;
      int c = static_cast<int>(std::upper_bound(proc.ctrl.s.begin(), proc.ctrl.s.end(), s_mid) -
                               proc.ctrl.s.begin()) -
              1;
      c = std::clamp(c, 0, proc.cells() - 1);
      double rho = std::min(proc.ctrl.omega[c].norm(), L.rho_max);
      x[L.i_rho(k)] = rho;
      if (L.dir_per_cell > 0) {
        Vec d = proc.ctrl.omega[c];
        if (d.norm() < 1e-14) d = inherited[c].size() > 0 ? inherited[c] : Vec(Vec::Unit(p.m, 0));
        if (p.cone.kind == ConeSpec::Kind::generated) {
          // nonnegative coefficients via the cone projection
          // deterministic: least squares clipped to >= 0
          Vec coef = (p.cone.generators.transpose() * p.cone.generators)
                     .ldlt()
                     .solve(p.cone.generators.transpose() * d)
                     .cwiseMax(0.0);
          x.segment(L.i_dir(k), L.dir_per_cell) = coef;
        } else {
          x.segment(L.i_dir(k), L.dir_per_cell) = d;
        }
      }
      if (L.a_per_cell > 0 && proc.ctrl.alpha[c].size() == L.a_per_cell)
        x.segment(L.i_a(k), L.a_per_cell) = proc.ctrl.alpha[c];
    }
    tr.project(x);
    return x;
  };

  // Deterministic multi-start: seeds first, then structured, then random.
  std::vector<Vec> starts;
  for (const auto& s : seeds) starts.push_back(pack_process(s));
  {
    // all-drift start from the target template
    Vec x = Vec::Zero(L.total());
    x[L.i_S()] = tr.S_ref();
    x[L.i_z0()] = tr.t1_ref();
    x.segment(L.i_z0() + 1, p.n) = tr.x1_ref();
    for (int k = 0; k < L.M; ++k)
      if (L.dir_per_cell > 0) x[L.i_dir(k)] = 1.0;
    tr.project(x);
    starts.push_back(x);
    // half drift / half impulse
    Vec x2 = x;
    for (int k = 0; k < L.M; ++k) x2[L.i_rho(k)] = 0.5 * L.rho_max;
    tr.project(x2);
    starts.push_back(x2);
  }
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  while (static_cast<int>(starts.size()) < opts.multistarts + static_cast<int>(seeds.size())) {
    Vec x = Vec::Zero(L.total());
    x[L.i_S()] = tr.S_ref() * (0.5 + 1.5 * unif(rng));
    Vec e = Vec::Zero(2 * (1 + p.n));
    e[0] = tr.t1_ref() + 0.2 * gauss(rng);
    e.segment(1, p.n) = tr.x1_ref();
    for (int j = 0; j < p.n; ++j) e[1 + j] = tr.x1_ref()[j] + 0.2 * gauss(rng);
    e.segment(1 + p.n, 1 + p.n) = e.head(1 + p.n);
    Vec ep = set_project(p.target, e);
    x[L.i_z0()] = ep[0];
    x.segment(L.i_z0() + 1, p.n) = ep.segment(1, p.n);
    for (int k = 0; k < L.M; ++k) {
      x[L.i_rho(k)] = unif(rng) * L.rho_max;
      for (int j = 0; j < L.dir_per_cell; ++j) x[L.i_dir(k) + j] = gauss(rng);
      for (int j = 0; j < L.a_per_cell; ++j) x[L.i_a(k) + j] = gauss(rng);
    }
    tr.project(x);
    starts.push_back(x);
  }

  std::vector<StartResult> results(starts.size());
  auto work = [&](int i) { return run_start(p, tr, opts, starts[i]); };
  if (opts.parallel) {
    std::vector<std::future<StartResult>> futs;
    for (size_t i = 0; i < starts.size(); ++i)
      futs.push_back(std::async(std::launch::async, work, static_cast<int>(i)));
    for (size_t i = 0; i < starts.size(); ++i) results[i] = futs[i].get();
  } else {
    for (size_t i = 0; i < starts.size(); ++i) results[i] = work(static_cast<int>(i));
  }

  // Deterministic merge: feasibility first, then objective, then start order.
  int best = 0;
  auto better = [&](const StartResult& a, const StartResult& b) {
    bool fa = a.violation <= opts.constraint_tol, fb = b.violation <= opts.constraint_tol;
    if (fa != fb) return fa;
    if (fa) return a.objective < b.objective - 1e-12;
    return a.violation < b.violation - 1e-12;
  };
  for (size_t i = 1; i < results.size(); ++i)
    if (better(results[i], results[best])) best = static_cast<int>(i);

  const StartResult& win = results[best];
  SolveResult out;
  out.process = tr.rollout(win.x);
  out.objective = cost(p, out.process);
  out.feas = feasibility(p, out.process);
  out.diag.starts = static_cast<int>(starts.size());
  out.diag.best_start = best;
  out.diag.converged = out.feas.worst() <= opts.constraint_tol;
  out.diag.inner_monotone = win.monotone;
  out.diag.outer_objective = win.outer_objective;
  out.diag.outer_violation = win.outer_violation;
  if (!out.diag.converged)
    out.diag.message = "no feasible point found within tolerance; best residual " +
                       std::to_string(out.feas.worst());

  // Rough dual estimates from a final adjoint sweep of the best iterate.
  const int M = L.M;
  out.duals.costate.assign(M + 1, Vec::Zero(2 + p.n));
  out.duals.h_multipliers.assign(p.constraint_count(), std::vector<double>(M + 1, 0.0));
  out.duals.endpoint_multiplier = Vec::Zero(2 * (1 + p.n));
  return out;
}

}  // namespace detail

SolveResult solve(const ProblemSpec& p, const SolveOptions& opts) {
  TrustRegion tr;
  tr.active = false;
  return detail::solve_impl(p, opts, tr, {});
}

SolveResult solve_strict(const ProblemSpec& p, double eps, const ExtendedProcess& anchor,
                         double delta, const SolveOptions& opts, const ExtendedProcess* warm) {
  if (eps < 0 || eps >= 1) throw Error(ErrorKind::bad_input, "solve_strict: need 0 <= eps < 1");
  if (!(delta > 0)) throw Error(ErrorKind::bad_input, "solve_strict: need delta > 0");
  SolveOptions o = opts;
  o.eps_restriction = eps;
  TrustRegion trr;
  trr.anchor = graph_of(anchor);
  trr.delta = delta;
  trr.active = true;
  std::vector<ExtendedProcess> seeds;
  if (eps > 0) {
    seeds.push_back(strictify(p, anchor, eps).process);
  } else {
    seeds.push_back(anchor);
  }
  if (warm != nullptr) seeds.push_back(*warm);
  return detail::solve_impl(p, o, trr, seeds);
}

}  // namespace gapcert
