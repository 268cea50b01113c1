#include "gapcert/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SetSpec SetSpec::make_box(const Vec& lo, const Vec& hi) {
  if (lo.size() != hi.size()) throw Error(ErrorKind::bad_input, "box bounds size mismatch");
  for (int i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) throw Error(ErrorKind::bad_input, "box is empty (lower > upper)");
  SetSpec s;
  s.kind = Kind::box;
  s.dim = static_cast<int>(lo.size());
  s.lower = lo;
  s.upper = hi;
  return s;
}

SetSpec SetSpec::make_ball(const Vec& center, double radius) {
  if (radius < 0) throw Error(ErrorKind::bad_input, "ball radius must be >= 0");
  SetSpec s;
  s.kind = Kind::ball;
  s.dim = static_cast<int>(center.size());
  s.center = center;
  s.radius = radius;
  return s;
}

SetSpec SetSpec::make_half_space(const Vec& normal, double offset) {
  if (normal.norm() == 0) throw Error(ErrorKind::bad_input, "half-space normal must be nonzero");
  SetSpec s;
  s.kind = Kind::half_space;
  s.dim = static_cast<int>(normal.size());
  s.normal = normal;
  s.offset = offset;
  return s;
}

SetSpec SetSpec::make_singleton(const Vec& point) {
  SetSpec s;
  s.kind = Kind::singleton;
  s.dim = static_cast<int>(point.size());
  s.point = point;
  return s;
}

SetSpec SetSpec::make_polyhedron(const Mat& A, const Vec& b) {
  if (A.rows() != b.size()) throw Error(ErrorKind::bad_input, "polyhedron row count mismatch");
  SetSpec s;
  s.kind = Kind::polyhedron;
  s.dim = static_cast<int>(A.cols());
  s.Ain = A;
  s.bin = b;
  return s;
}

SetSpec SetSpec::make_product(std::vector<SetSpec> factors) {
  SetSpec s;
  s.kind = Kind::product;
  s.dim = 0;
  for (auto& f : factors) s.dim += f.dim;
  s.factors = std::move(factors);
  return s;
}

SetSpec SetSpec::make_intersection(std::vector<SetSpec> factors, bool transversal) {
  if (factors.empty()) throw Error(ErrorKind::bad_input, "intersection needs factors");
  SetSpec s;
  s.kind = Kind::intersection;
  s.dim = factors.front().dim;
  for (auto& f : factors)
    if (f.dim != s.dim) throw Error(ErrorKind::bad_input, "intersection dimension mismatch");
  s.factors = std::move(factors);
  s.transversal = transversal;
  return s;
}

SetSpec SetSpec::make_free(int d) {
  return make_box(Vec::Constant(d, -kInf), Vec::Constant(d, kInf));
}

bool set_membership(const SetSpec& s, const Vec& z, double tol) {
  if (z.size() != s.dim) throw Error(ErrorKind::bad_input, "set_membership: dimension mismatch");
  switch (s.kind) {
    case SetSpec::Kind::box:
      for (int i = 0; i < s.dim; ++i)
        if (z[i] < s.lower[i] - tol || z[i] > s.upper[i] + tol) return false;
      return true;
    case SetSpec::Kind::ball:
      return (z - s.center).norm() <= s.radius + tol;
    case SetSpec::Kind::half_space:
      return s.normal.dot(z) <= s.offset + tol * s.normal.norm();
    case SetSpec::Kind::singleton:
      return (z - s.point).norm() <= tol;
    case SetSpec::Kind::polyhedron:
      for (int i = 0; i < s.Ain.rows(); ++i)
        if (s.Ain.row(i).dot(z) > s.bin[i] + tol * std::max(1.0, s.Ain.row(i).norm()))
          return false;
      return true;
    case SetSpec::Kind::product: {
      int off = 0;
      for (const auto& f : s.factors) {
        if (!set_membership(f, z.segment(off, f.dim), tol)) return false;
        off += f.dim;
      }
      return true;
    }
    case SetSpec::Kind::intersection:
      for (const auto& f : s.factors)
        if (!set_membership(f, z, tol)) return false;
      return true;
  }
  return false;
}

namespace {

Vec project_simple(const SetSpec& s, const Vec& z) {
  switch (s.kind) {
    case SetSpec::Kind::box: {
      Vec p = z;
      for (int i = 0; i < s.dim; ++i) p[i] = std::clamp(p[i], s.lower[i], s.upper[i]);
      return p;
    }
    case SetSpec::Kind::ball: {
      Vec d = z - s.center;
      double n = d.norm();
      if (n <= s.radius) return z;
      return s.center + (s.radius / n) * d;
    }
    case SetSpec::Kind::half_space: {
      double viol = s.normal.dot(z) - s.offset;
      if (viol <= 0) return z;
      return z - (viol / s.normal.squaredNorm()) * s.normal;
    }
    case SetSpec::Kind::singleton:
      return s.point;
    default:
      throw Error(ErrorKind::bad_input, "project_simple: unsupported variant");
  }
}

// Dykstra's alternating projection, exact in the limit for intersections of
// convex pieces; we run it to numerical stagnation.
Vec dykstra(const std::vector<SetSpec>& pieces, const Vec& z) {
  const int n = static_cast<int>(z.size());
  const int m = static_cast<int>(pieces.size());
  Vec x = z;
  std::vector<Vec> corr(m, Vec::Zero(n));
  for (int sweep = 0; sweep < 1000; ++sweep) {
    Vec prev = x;
    for (int i = 0; i < m; ++i) {
      Vec y = x + corr[i];
      Vec px = set_project(pieces[i], y);
      corr[i] = y - px;
      x = px;
    }
    if ((x - prev).norm() <= 1e-14 * std::max(1.0, x.norm()) && sweep > 2) break;
  }
  return x;
}

}  // namespace

Vec set_project(const SetSpec& s, const Vec& z) {
  if (z.size() != s.dim) throw Error(ErrorKind::bad_input, "set_project: dimension mismatch");
  switch (s.kind) {
    case SetSpec::Kind::box:
    case SetSpec::Kind::ball:
    case SetSpec::Kind::half_space:
    case SetSpec::Kind::singleton:
      return project_simple(s, z);
    case SetSpec::Kind::polyhedron: {
      std::vector<SetSpec> pieces;
      for (int i = 0; i < s.Ain.rows(); ++i)
        pieces.push_back(SetSpec::make_half_space(s.Ain.row(i).transpose(), s.bin[i]));
      if (pieces.empty()) return z;
      return dykstra(pieces, z);
    }
    case SetSpec::Kind::product: {
      Vec p(z.size());
      int off = 0;
      for (const auto& f : s.factors) {
        p.segment(off, f.dim) = set_project(f, z.segment(off, f.dim));
        off += f.dim;
      }
      return p;
    }
    case SetSpec::Kind::intersection:
      return dykstra(s.factors, z);
  }
  return z;
}

double set_distance(const SetSpec& s, const Vec& z) { return (z - set_project(s, z)).norm(); }

Vec set_any_point(const SetSpec& s) { return set_project(s, Vec::Zero(s.dim)); }

}  // namespace gapcert
