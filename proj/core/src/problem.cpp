#include "gapcert/problem.hpp"

#include <cmath>

#include "gapcert/errors.hpp"

namespace gapcert {

Vec VectorFieldTX::eval(double t, const Vec& x) const {
  Vec z(1 + x.size());
  z[0] = t;
  z.tail(x.size()) = x;
  Vec out(out_dim());
  for (int i = 0; i < out_dim(); ++i) out[i] = comp[i].eval(z);
  return out;
}

Mat VectorFieldTX::jac_tx(double t, const Vec& x) const {
  Vec z(1 + x.size());
  z[0] = t;
  z.tail(x.size()) = x;
  Mat J(out_dim(), z.size());
  for (int i = 0; i < out_dim(); ++i) J.row(i) = comp[i].gradient(z).transpose();
  return J;
}

VectorFieldTX VectorFieldTX::zero(int n_out, int n_state) {
  VectorFieldTX f;
  for (int i = 0; i < n_out; ++i) f.comp.push_back(Poly::constant(1 + n_state, 0.0));
  return f;
}

VectorFieldTX VectorFieldTX::constant(const Vec& v, int n_state) {
  VectorFieldTX f;
  for (int i = 0; i < v.size(); ++i) f.comp.push_back(Poly::constant(1 + n_state, v[i]));
  return f;
}

Vec DriftField::eval(double t, const Vec& x, const Vec& a) const {
  if (mode == Mode::affine) {
    Vec out = base.eval(t, x);
    for (size_t k = 0; k < a_terms.size(); ++k) out += a[static_cast<int>(k)] * a_terms[k].eval(t, x);
    return out;
  }
  // tabulated: exact match (finite A), nearest as a safety net
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < table_points.size(); ++i) {
    double d = (table_points[i] - a).norm();
    if (d < bd) {
      bd = d;
      best = static_cast<int>(i);
    }
  }
  return table[best].eval(t, x);
}

Mat DriftField::jac_tx(double t, const Vec& x, const Vec& a) const {
  if (mode == Mode::affine) {
    Mat J = base.jac_tx(t, x);
    for (size_t k = 0; k < a_terms.size(); ++k) J += a[static_cast<int>(k)] * a_terms[k].jac_tx(t, x);
    return J;
  }
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < table_points.size(); ++i) {
    double d = (table_points[i] - a).norm();
    if (d < bd) {
      bd = d;
      best = static_cast<int>(i);
    }
  }
  return table[best].jac_tx(t, x);
}

bool DriftField::depends_on_a() const {
  if (mode == Mode::tabulated) return table.size() > 1;
  for (const auto& f : a_terms)
    for (const auto& p : f.comp)
      if (!p.is_zero()) return true;
  return false;
}

Vec CostFn::pack(double t1, const Vec& x1, double t2, const Vec& x2, double v2) {
  int n = static_cast<int>(x1.size());
  Vec z(2 * (1 + n) + 1);
  z[0] = t1;
  z.segment(1, n) = x1;
  z[1 + n] = t2;
  z.segment(2 + n, n) = x2;
  z[2 * (1 + n)] = v2;
  return z;
}

double CostFn::value(double t1, const Vec& x1, double t2, const Vec& x2, double v2) const {
  return psi.eval(pack(t1, x1, t2, x2, v2));
}

Vec CostFn::gradient(double t1, const Vec& x1, double t2, const Vec& x2, double v2) const {
  return psi.gradient(pack(t1, x1, t2, x2, v2));
}

double CostFn::dv(double t1, const Vec& x1, double t2, const Vec& x2, double v2) const {
  Vec z = pack(t1, x1, t2, x2, v2);
  return psi.derivative(psi.nvars() - 1).eval(z);
}

ControlSet ControlSet::make_empty() {
  ControlSet a;
  a.kind = Kind::empty;
  a.dim = 0;
  return a;
}

ControlSet ControlSet::make_finite(std::vector<Vec> pts) {
  if (pts.empty()) throw Error(ErrorKind::bad_input, "finite control set needs points");
  ControlSet a;
  a.kind = Kind::finite;
  a.dim = static_cast<int>(pts.front().size());
  a.points = std::move(pts);
  return a;
}

ControlSet ControlSet::make_box(const Vec& lo, const Vec& hi) {
  ControlSet a;
  a.kind = Kind::box;
  a.dim = static_cast<int>(lo.size());
  a.lower = lo;
  a.upper = hi;
  for (int i = 0; i < a.dim; ++i) {
    if (!(lo[i] <= hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i]))
      throw Error(ErrorKind::bad_input, "control box must be compact");
  }
  return a;
}

std::vector<Vec> ControlSet::samples(int per_dim) const {
  std::vector<Vec> out;
  switch (kind) {
    case Kind::empty:
      out.push_back(Vec(0));
      return out;
    case Kind::finite:
      return points;
    case Kind::box: {
      std::vector<int> idx(dim, 0);
      while (true) {
        Vec a(dim);
        for (int i = 0; i < dim; ++i) {
          double w = per_dim == 1 ? 0.5 : static_cast<double>(idx[i]) / (per_dim - 1);
          a[i] = lower[i] + w * (upper[i] - lower[i]);
        }
        out.push_back(a);
        int carry = 0;
        while (carry < dim && ++idx[carry] == per_dim) idx[carry++] = 0;
        if (carry == dim) break;
      }
      return out;
    }
  }
  return out;
}

Vec ControlSet::clamp(const Vec& a) const {
  if (kind != Kind::box) return nearest(a);
  Vec out = a;
  for (int i = 0; i < dim; ++i) out[i] = std::clamp(out[i], lower[i], upper[i]);
  return out;
}

Vec ControlSet::nearest(const Vec& a) const {
  switch (kind) {
    case Kind::empty:
      return Vec(0);
    case Kind::box:
      return clamp(a);
    case Kind::finite: {
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < points.size(); ++i) {
        double d = (points[i] - a).norm();
        if (d < bd) {
          bd = d;
          best = static_cast<int>(i);
        }
      }
      return points[best];
    }
  }
  return a;
}

bool ControlSet::contains(const Vec& a, double tol) const {
  return (nearest(a) - a).norm() <= tol;
}

Vec ProblemSpec::combined_field(double t, const Vec& x, double w0, const Vec& w,
                                const Vec& a) const {
  Vec out = w0 != 0.0 ? Vec(f.eval(t, x, a) * w0) : Vec(Vec::Zero(n));
  for (int j = 0; j < m; ++j)
    if (w[j] != 0.0) out += w[j] * g[j].eval(t, x);
  return out;
}

Mat ProblemSpec::combined_jac_tx(double t, const Vec& x, double w0, const Vec& w,
                                 const Vec& a) const {
  Mat J = Mat::Zero(n, 1 + n);
  if (w0 != 0.0) J = w0 * f.jac_tx(t, x, a);
  for (int j = 0; j < m; ++j)
    if (w[j] != 0.0) J += w[j] * g[j].jac_tx(t, x);
  return J;
}

Mat ProblemSpec::impulse_matrix(double t, const Vec& x) const {
  Mat G(n, m);
  for (int j = 0; j < m; ++j) G.col(j) = g[j].eval(t, x);
  return G;
}

std::vector<std::string> validate(const ProblemSpec& p) {
  std::vector<std::string> issues;
  if (p.n <= 0) issues.push_back("state dimension n must be positive");
  if (p.m < 0 || p.q < 0) issues.push_back("control dimensions must be nonnegative");
  if (static_cast<int>(p.g.size()) != p.m) issues.push_back("impulse field count != m");
  if (p.cone.dim != p.m) issues.push_back("cone dimension != m");
  if (p.target.dim != 2 * (1 + p.n)) issues.push_back("target dimension != 2(1+n)");
  if (p.a_set.dim != p.q) issues.push_back("control set dimension != q");
  if (!(p.K > 0)) issues.push_back("variation bound K must be positive");
  if (p.a_set.kind == ControlSet::Kind::box) {
    for (int i = 0; i < p.q; ++i)
      if (!std::isfinite(p.a_set.lower[i]) || !std::isfinite(p.a_set.upper[i]))
        issues.push_back("control box is not compact");
  }
  // Psi monotone nondecreasing in v2 on a sampled grid around a target point.
  Vec anchor = set_any_point(p.target);
  double t1 = anchor[0], t2 = anchor[1 + p.n];
  Vec x1 = anchor.segment(1, p.n), x2 = anchor.segment(2 + p.n, p.n);
  double vmax = std::isfinite(p.K) ? p.K : 10.0;
  for (int i = 0; i + 1 < 9; ++i) {
    double va = vmax * i / 8.0, vb = vmax * (i + 1) / 8.0;
    if (p.cost.value(t1, x1, t2, x2, vb) < p.cost.value(t1, x1, t2, x2, va) - 1e-9) {
      issues.push_back("cost is decreasing in the total-variation argument");
      break;
    }
  }
  return issues;
}

}  // namespace gapcert
