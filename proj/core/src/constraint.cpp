#include "gapcert/constraint.hpp"

#include <cmath>

#include "gapcert/errors.hpp"

namespace gapcert {

std::vector<Vec> sphere_directions(int dim, int count) {
  std::vector<Vec> out;
  if (dim <= 0) return out;
  if (dim == 1) {
    out.push_back(Vec::Constant(1, 1.0));
    out.push_back(Vec::Constant(1, -1.0));
    return out;
  }
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    Vec v(dim);
    if (dim == 2) {
      double th = 2.0 * M_PI * k / count;
      v << std::cos(th), std::sin(th);
    } else {
      double z = 1.0 - 2.0 * (k + 0.5) / count;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double th = golden * k;
      v.setZero();
      v[0] = r * std::cos(th);
      v[1] = r * std::sin(th);
      v[2] = z;
      for (int j = 3; j < dim; ++j) v[j] = std::cos(golden * (k + 1) * (j + 1));
      v /= v.norm();
    }
    out.push_back(v);
  }
  return out;
}

namespace {

Vec pack_tx(double t, const Vec& x) {
  Vec z(1 + x.size());
  z[0] = t;
  z.tail(x.size()) = x;
  return z;
}

}  // namespace

double ConstraintFunction::value(double t, const Vec& x) const {
  if (pieces.empty()) throw Error(ErrorKind::bad_input, "ConstraintFunction has no pieces");
  Vec z = pack_tx(t, x);
  double v = pieces.front().eval(z);
  for (size_t j = 1; j < pieces.size(); ++j) v = std::max(v, pieces[j].eval(z));
  return v;
}

Vec ConstraintFunction::gradient_tx(double t, const Vec& x) const {
  Vec z = pack_tx(t, x);
  int arg = 0;
  double best = pieces.front().eval(z);
  for (size_t j = 1; j < pieces.size(); ++j) {
    double v = pieces[j].eval(z);
    if (v > best) {
      best = v;
      arg = static_cast<int>(j);
    }
  }
  return pieces[arg].gradient(z);
}

bool ConstraintFunction::time_independent() const {
  for (const auto& p : pieces)
    if (!p.independent_of(0)) return false;
  return true;
}

ConstraintFunction ConstraintFunction::smooth_scalar(Poly p, double tol) {
  ConstraintFunction h;
  h.pieces = {std::move(p)};
  h.activity_tol = tol;
  return h;
}

ConstraintFunction ConstraintFunction::max_of_smooth(std::vector<Poly> ps, double tol) {
  if (ps.empty()) throw Error(ErrorKind::bad_input, "max_of_smooth needs pieces");
  ConstraintFunction h;
  h.pieces = std::move(ps);
  h.activity_tol = tol;
  return h;
}

Mat reachable_gradients(const ConstraintFunction& h, double t, const Vec& x) {
  Vec z = pack_tx(t, x);
  double v = h.value(t, x);
  std::vector<Vec> grads;
  for (const auto& p : h.pieces)
    if (p.eval(z) >= v - h.activity_tol) grads.push_back(p.gradient(z));
  Mat out(z.size(), grads.size());
  for (size_t j = 0; j < grads.size(); ++j) out.col(j) = grads[j];
  return out;
}

Mat hybrid_subdiff(const ConstraintFunction& h, double t, const Vec& x) {
  Vec z = pack_tx(t, x);
  const int d = static_cast<int>(z.size());
  double v = h.value(t, x);
  if (v < -h.activity_tol) return Mat(d, 0);

  std::vector<Vec> grads;
  if (h.smooth()) {
    Vec g = h.pieces.front().gradient(z);
    if (g.norm() < 1e-10)
      throw Error(ErrorKind::vanishing_gradient,
                  "hybrid_subdiff: gradient vanishes at an active boundary point");
    grads.push_back(g);
  } else {
    // The reachable hybrid subdifferential is defined through limits taken
    // along {h > 0}; probe a punctured neighborhood for pieces that are active
    // here and achieve the (positive) max arbitrarily nearby.
    const double radius = 1e-4;
    auto dirs = sphere_directions(d, 32);
    double level = std::max(v, 0.0);
    for (const auto& p : h.pieces) {
      if (p.eval(z) < level - h.activity_tol) continue;
      bool positive_nearby = false;
      for (const auto& dir : dirs) {
        Vec zp = z + radius * dir;
        double hv = h.pieces.front().eval(zp);
        for (size_t j = 1; j < h.pieces.size(); ++j) hv = std::max(hv, h.pieces[j].eval(zp));
        if (hv > 0 && p.eval(zp) >= hv - 1e-10) {
          positive_nearby = true;
          break;
        }
      }
      if (positive_nearby) {
        Vec g = p.gradient(z);
        if (g.norm() < 1e-10)
          throw Error(ErrorKind::vanishing_gradient,
                      "hybrid_subdiff: active piece has vanishing gradient");
        grads.push_back(g);
      }
    }
  }
  Mat out(d, grads.size());
  for (size_t j = 0; j < grads.size(); ++j) out.col(j) = grads[j];
  return out;
}

}  // namespace gapcert
