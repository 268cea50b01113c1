#include "gapcert/cones.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapcert/errors.hpp"
#include "gapcert/constraint.hpp"
#include "gapcert/lp.hpp"
#include "gapcert/nnls.hpp"

namespace gapcert {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Mat append_col(const Mat& m, const Vec& v) {
  Mat out(v.size(), m.cols() + 1);
  if (m.cols() > 0) out.leftCols(m.cols()) = m;
  out.col(m.cols()) = v;
  return out;
}
}  // namespace

ConeSpec ConeSpec::make_full(int dim) {
  ConeSpec c;
  c.kind = Kind::full;
  c.dim = dim;
  return c;
}

ConeSpec ConeSpec::make_zero(int dim) {
  ConeSpec c;
  c.kind = Kind::zero;
  c.dim = dim;
  return c;
}

ConeSpec ConeSpec::make_orthant(int dim) {
  ConeSpec c;
  c.kind = Kind::orthant;
  c.dim = dim;
  return c;
}

ConeSpec ConeSpec::make_ray(const Vec& direction) {
  if (direction.norm() == 0) throw Error(ErrorKind::bad_input, "ray direction must be nonzero");
  ConeSpec c;
  c.kind = Kind::ray;
  c.dim = static_cast<int>(direction.size());
  c.direction = direction / direction.norm();
  return c;
}

ConeSpec ConeSpec::make_generated(const Mat& generators) {
  ConeSpec c;
  c.kind = Kind::generated;
  c.dim = static_cast<int>(generators.rows());
  c.generators = generators;
  for (int j = 0; j < generators.cols(); ++j)
    if (generators.col(j).norm() == 0)
      throw Error(ErrorKind::bad_input, "generated cone: zero generator");
  return c;
}

bool ConeSpec::contains(const Vec& v, double tol) const {
  switch (kind) {
    case Kind::full:
      return true;
    case Kind::zero:
      return v.norm() <= tol;
    case Kind::orthant:
      return (v.array() >= -tol).all();
    case Kind::ray: {
      double t = std::max(0.0, v.dot(direction));
      return (v - t * direction).norm() <= tol;
    }
    case Kind::generated:
      return distance_to_cone(v, generators, Mat(dim, 0)) <= tol;
  }
  return false;
}

Vec ConeSpec::project(const Vec& v) const {
  switch (kind) {
    case Kind::full:
      return v;
    case Kind::zero:
      return Vec::Zero(dim);
    case Kind::orthant:
      return v.cwiseMax(0.0);
    case Kind::ray:
      return std::max(0.0, v.dot(direction)) * direction;
    case Kind::generated:
      return generators * nnls(generators, v);
  }
  return v;
}

namespace {

void push_unique(std::vector<Vec>& dirs, const Vec& v) {
  for (const auto& d : dirs)
    if ((d - v).norm() < 1e-12) return;
  dirs.push_back(v);
}

}  // namespace

std::vector<Vec> ConeSpec::unit_directions(int count) const {
  std::vector<Vec> out;
  switch (kind) {
    case Kind::zero:
      return out;
    case Kind::ray:
      out.push_back(direction);
      return out;
    case Kind::full: {
      out = sphere_directions(dim, count);
      for (int i = 0; i < dim; ++i) {
        push_unique(out, Vec::Unit(dim, i));
        push_unique(out, -Vec::Unit(dim, i));
      }
      return out;
    }
    case Kind::orthant: {
      for (auto& v : sphere_directions(dim, count)) {
        Vec w = v.cwiseAbs();
        double n = w.norm();
        if (n > 0) push_unique(out, w / n);
      }
      for (int i = 0; i < dim; ++i) push_unique(out, Vec::Unit(dim, i));
      return out;
    }
    case Kind::generated: {
      const int g = static_cast<int>(generators.cols());
      if (g == 0) return out;
      for (int j = 0; j < g; ++j) push_unique(out, generators.col(j).normalized());
      // Pairwise blends give a workable covering for small generator counts.
      int blends = std::max(1, count / std::max(1, g * (g - 1) / 2 + 1));
      for (int a = 0; a < g; ++a)
        for (int b = a + 1; b < g; ++b)
          for (int t = 1; t <= blends; ++t) {
            double w = static_cast<double>(t) / (blends + 1);
            Vec v = (1 - w) * generators.col(a).normalized() + w * generators.col(b).normalized();
            double n = v.norm();
            if (n > 1e-12) push_unique(out, v / n);
          }
      return out;
    }
  }
  return out;
}

bool ConeSpec::is_pointed() const {
  switch (kind) {
    case Kind::full:
      return dim == 0;
    case Kind::zero:
    case Kind::ray:
      return true;
    case Kind::orthant:
      return true;
    case Kind::generated: {
      ConeHull c;
      c.dim = dim;
      c.gens = generators;
      ConeHull neg = c.negated();
      return cone_intersection_empty(&c, &neg, true);
    }
  }
  return true;
}

ConeHull ConeHull::zero(int dim) {
  ConeHull c;
  c.dim = dim;
  c.gens = Mat(dim, 0);
  c.lin = Mat(dim, 0);
  return c;
}

ConeHull ConeHull::full(int dim) {
  ConeHull c = zero(dim);
  c.lin = Mat::Identity(dim, dim);
  return c;
}

ConeHull ConeHull::ray(const Vec& g) {
  ConeHull c = zero(static_cast<int>(g.size()));
  c.gens = append_col(c.gens, g);
  return c;
}

bool ConeHull::is_zero_only(double tol) const {
  if (lin.cols() > 0 && lin.norm() > tol) return false;
  for (int j = 0; j < gens.cols(); ++j)
    if (gens.col(j).norm() > tol) return false;
  return true;
}

double ConeHull::distance(const Vec& v) const { return distance_to_cone(v, gens, lin); }

bool ConeHull::contains(const Vec& v, double tol) const { return distance(v) <= tol; }

ConeHull ConeHull::negated() const {
  ConeHull c = *this;
  if (c.gens.cols() > 0) c.gens = -c.gens;
  return c;
}

ConeHull cone_sum(const ConeHull& a, const ConeHull& b) {
  if (a.dim != b.dim) throw Error(ErrorKind::bad_input, "cone_sum: dimension mismatch");
  ConeHull c = ConeHull::zero(a.dim);
  c.gens = Mat(a.dim, a.gens.cols() + b.gens.cols());
  if (a.gens.cols() > 0) c.gens.leftCols(a.gens.cols()) = a.gens;
  if (b.gens.cols() > 0) c.gens.rightCols(b.gens.cols()) = b.gens;
  c.lin = Mat(a.dim, a.lin.cols() + b.lin.cols());
  if (a.lin.cols() > 0) c.lin.leftCols(a.lin.cols()) = a.lin;
  if (b.lin.cols() > 0) c.lin.rightCols(b.lin.cols()) = b.lin;
  return c;
}

ConeHull normal_cone(const SetSpec& s, const Vec& point, double tol) {
  if (!set_membership(s, point, tol))
    throw Error(ErrorKind::point_not_in_set, "normal_cone: point is not in the set");
  ConeHull c = ConeHull::zero(s.dim);
  switch (s.kind) {
    case SetSpec::Kind::box: {
      for (int i = 0; i < s.dim; ++i) {
        bool at_lo = std::isfinite(s.lower[i]) && point[i] <= s.lower[i] + tol;
        bool at_hi = std::isfinite(s.upper[i]) && point[i] >= s.upper[i] - tol;
        if (at_lo && at_hi)
          c.lin = append_col(c.lin, Vec::Unit(s.dim, i));
        else if (at_hi)
          c.gens = append_col(c.gens, Vec::Unit(s.dim, i));
        else if (at_lo)
          c.gens = append_col(c.gens, -Vec::Unit(s.dim, i));
      }
      return c;
    }
    case SetSpec::Kind::ball: {
      if (s.radius <= tol) return ConeHull::full(s.dim);
      Vec d = point - s.center;
      if (d.norm() >= s.radius - tol) c.gens = append_col(c.gens, d / d.norm());
      return c;
    }
    case SetSpec::Kind::half_space: {
      if (s.normal.dot(point) >= s.offset - tol * s.normal.norm())
        c.gens = append_col(c.gens, s.normal.normalized());
      return c;
    }
    case SetSpec::Kind::singleton:
      return ConeHull::full(s.dim);
    case SetSpec::Kind::polyhedron: {
      for (int i = 0; i < s.Ain.rows(); ++i) {
        double nrm = s.Ain.row(i).norm();
        if (s.Ain.row(i).dot(point) >= s.bin[i] - tol * std::max(1.0, nrm))
          c.gens = append_col(c.gens, s.Ain.row(i).transpose() / nrm);
      }
      return c;
    }
    case SetSpec::Kind::product: {
      int off = 0;
      for (const auto& f : s.factors) {
        ConeHull fc = normal_cone(f, point.segment(off, f.dim), tol);
        for (int j = 0; j < fc.gens.cols(); ++j) {
          Vec g = Vec::Zero(s.dim);
          g.segment(off, f.dim) = fc.gens.col(j);
          c.gens = append_col(c.gens, g);
        }
        for (int j = 0; j < fc.lin.cols(); ++j) {
          Vec g = Vec::Zero(s.dim);
          g.segment(off, f.dim) = fc.lin.col(j);
          c.lin = append_col(c.lin, g);
        }
        off += f.dim;
      }
      return c;
    }
    case SetSpec::Kind::intersection: {
      if (!s.transversal)
        throw Error(ErrorKind::non_transversal_intersection,
                    "normal_cone: intersection not asserted transversal; the sum rule "
                    "would be unsound");
      ConeHull acc = ConeHull::zero(s.dim);
      for (const auto& f : s.factors) acc = cone_sum(acc, normal_cone(f, point, tol));
      return acc;
    }
  }
  return c;
}

ConeHull cone_project_component(const ConeHull& c, int offset, int len) {
  if (offset < 0 || offset + len > c.dim)
    throw Error(ErrorKind::bad_input, "cone_project_component: block out of range");
  ConeHull out = ConeHull::zero(len);
  for (int j = 0; j < c.gens.cols(); ++j) {
    Vec g = c.gens.col(j).segment(offset, len);
    if (g.norm() > 1e-14) out.gens = append_col(out.gens, g);
  }
  for (int j = 0; j < c.lin.cols(); ++j) {
    Vec g = c.lin.col(j).segment(offset, len);
    if (g.norm() > 1e-14) out.lin = append_col(out.lin, g);
  }
  return out;
}

namespace {

// Columns for [c_a; d_a+; d_a-; c_b; d_b+; d_b-] fitted into rows expressing
// (element of a) - (element of b) = 0.
struct PairLayout {
  int ca, da, cb, db;
  int total;
};

void fill_pair_rows(const ConeHull& a, const ConeHull& b, LinearProgram& lp, PairLayout& L) {
  L.ca = static_cast<int>(a.gens.cols());
  L.da = static_cast<int>(a.lin.cols());
  L.cb = static_cast<int>(b.gens.cols());
  L.db = static_cast<int>(b.lin.cols());
  L.total = L.ca + 2 * L.da + L.cb + 2 * L.db;
  lp.ncols = L.total;
  for (int r = 0; r < a.dim; ++r) {
    Vec row = Vec::Zero(L.total);
    int off = 0;
    for (int j = 0; j < L.ca; ++j) row[off + j] = a.gens(r, j);
    off += L.ca;
    for (int j = 0; j < L.da; ++j) {
      row[off + j] = a.lin(r, j);
      row[off + L.da + j] = -a.lin(r, j);
    }
    off += 2 * L.da;
    for (int j = 0; j < L.cb; ++j) row[off + j] = -b.gens(r, j);
    off += L.cb;
    for (int j = 0; j < L.db; ++j) {
      row[off + j] = -b.lin(r, j);
      row[off + L.db + j] = b.lin(r, j);
    }
    lp.add_row(row, LinearProgram::EQ, 0.0);
  }
}

// Row expressing coordinate `coord` of the common element (the a-side expression).
Vec coord_row(const ConeHull& a, const PairLayout& L, int coord) {
  Vec row = Vec::Zero(L.total);
  int off = 0;
  for (int j = 0; j < L.ca; ++j) row[off + j] = a.gens(coord, j);
  off += L.ca;
  for (int j = 0; j < L.da; ++j) {
    row[off + j] = a.lin(coord, j);
    row[off + L.da + j] = -a.lin(coord, j);
  }
  return row;
}

}  // namespace

bool cone_intersection_empty(const ConeHull* a, const ConeHull* b, bool exclude_zero) {
  if (a == nullptr || b == nullptr) return true;
  if (a->dim != b->dim)
    throw Error(ErrorKind::bad_input, "cone_intersection_empty: dimension mismatch");
  if (!exclude_zero) return false;  // both cones contain 0
  if (a->is_zero_only() || b->is_zero_only()) return true;

  for (int coord = 0; coord < a->dim; ++coord) {
    for (double sgn : {1.0, -1.0}) {
      LinearProgram lp;
      PairLayout L{};
      fill_pair_rows(*a, *b, lp, L);
      lp.add_row(sgn * coord_row(*a, L, coord), LinearProgram::EQ, 1.0);
      if (lp_solve(lp).feasible()) return false;
    }
  }
  return true;
}

bool polytope_meets_cone(const Mat& P, const ConeHull& cone, bool exclude_zero) {
  const int k = static_cast<int>(P.cols());
  if (k == 0) return false;
  const int d = static_cast<int>(P.rows());
  const int cg = static_cast<int>(cone.gens.cols());
  const int cl = static_cast<int>(cone.lin.cols());
  auto build = [&](LinearProgram& lp) {
    lp.ncols = k + cg + 2 * cl;
    for (int r = 0; r < d; ++r) {
      Vec row = Vec::Zero(lp.ncols);
      for (int j = 0; j < k; ++j) row[j] = P(r, j);
      for (int j = 0; j < cg; ++j) row[k + j] = -cone.gens(r, j);
      for (int j = 0; j < cl; ++j) {
        row[k + cg + j] = -cone.lin(r, j);
        row[k + cg + cl + j] = cone.lin(r, j);
      }
      lp.add_row(row, LinearProgram::EQ, 0.0);
    }
    Vec ones = Vec::Zero(lp.ncols);
    ones.head(k).setOnes();
    lp.add_row(ones, LinearProgram::EQ, 1.0);
  };

  if (!exclude_zero) {
    LinearProgram lp;
    build(lp);
    return lp_solve(lp).feasible();
  }
  // Look for a common element with some coordinate bounded away from zero by
  // maximizing each signed coordinate of the hull element.
  for (int coord = 0; coord < d; ++coord) {
    for (double sgn : {1.0, -1.0}) {
      LinearProgram lp;
      build(lp);
      lp.c = Vec::Zero(lp.ncols);
      for (int j = 0; j < k; ++j) lp.c[j] = -sgn * P(coord, j);
      LpResult r = lp_solve(lp);
      if (r.status == LpResult::Status::optimal && -r.objective > 1e-9) return true;
      if (r.status == LpResult::Status::unbounded) return true;
    }
  }
  return false;
}

double polytope_cone_distance(const Mat& P, const ConeHull& cone) {
  if (P.cols() == 0) return std::numeric_limits<double>::infinity();
  if (polytope_meets_cone(P, cone, false)) return 0.0;
  // Alternating projections between the (compact) polytope and the cone
  // converge to a minimum-distance pair for disjoint closed convex sets.
  Vec u = P.col(0);
  double dist = kInf;
  for (int it = 0; it < 400; ++it) {
    Vec v = u;
    // project onto the cone
    Mat G = cone.gens, Lm = cone.lin;
    Vec target = v;
    if (Lm.cols() > 0) {
      Eigen::JacobiSVD<Mat> svd(Lm, Eigen::ComputeThinU);
      int rank = 0;
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 1e-12) ++rank;
      Mat Ur = svd.matrixU().leftCols(rank);
      Vec perp = v - Ur * (Ur.transpose() * v);
      Vec conic = Vec::Zero(v.size());
      if (G.cols() > 0) {
        Mat Gp = G - Ur * (Ur.transpose() * G);
        conic = G * nnls(Gp, perp);
      }
      v = conic + Ur * (Ur.transpose() * (v - conic));
    } else if (G.cols() > 0) {
      v = G * nnls(G, v);
    } else {
      v.setZero();
    }
    Vec nu = project_to_polytope(v, P);
    double d = (nu - v).norm();
    if (std::abs(dist - d) < 1e-14) {
      dist = d;
      break;
    }
    dist = d;
    u = nu;
  }
  return dist;
}

}  // namespace gapcert
