#pragma once

#include <vector>

#include "gapcert/poly.hpp"
#include "gapcert/sets.hpp"

namespace gapcert {

/// The control cone C of the problem data.
struct ConeSpec {
  enum class Kind { full, zero, orthant, ray, generated };

  Kind kind = Kind::full;
  int dim = 0;
  Vec direction;  // ray
  Mat generators;  // generated: columns

  static ConeSpec make_full(int dim);
  static ConeSpec make_zero(int dim);
  static ConeSpec make_orthant(int dim);
  static ConeSpec make_ray(const Vec& direction);
  static ConeSpec make_generated(const Mat& generators);

  bool contains(const Vec& v, double tol = 1e-9) const;
  Vec project(const Vec& v) const;

  /// Deterministic sample of C intersected with the unit sphere. Includes the
  /// cone's axis directions whenever they belong to it; may return fewer than
  /// `count` points (and none for the zero cone).
  std::vector<Vec> unit_directions(int count) const;

  bool is_pointed() const;
};

/// Finitely generated cone { sum c_k g_k : c_k >= 0 } + span(lineality).
/// Normal cones of every catalog set land in this form.
struct ConeHull {
  int dim = 0;
  Mat gens = Mat(0, 0);  // columns
  Mat lin = Mat(0, 0);   // columns spanning the lineality space

  static ConeHull zero(int dim);
  static ConeHull full(int dim);
  static ConeHull ray(const Vec& g);

  bool is_zero_only(double tol = 1e-12) const;
  bool contains(const Vec& v, double tol = 1e-9) const;
  double distance(const Vec& v) const;

  ConeHull negated() const;
};

ConeHull cone_sum(const ConeHull& a, const ConeHull& b);

/// Limiting normal cone of a catalog set at a member point. Refuses with
/// point_not_in_set / non_transversal_intersection instead of guessing.
ConeHull normal_cone(const SetSpec& s, const Vec& point, double tol = 1e-8);

/// Projection of a cone onto a coordinate block [offset, offset+len).
ConeHull cone_project_component(const ConeHull& c, int offset, int len);

/// True iff the two cones share no element (excluding or including 0).
/// Missing (empty-set) arguments make the intersection empty. Decided by
/// linear programming over generator coefficients.
bool cone_intersection_empty(const ConeHull* a, const ConeHull* b, bool exclude_zero);

/// True iff co{columns of P} meets the cone. With `exclude_zero` only nonzero
/// common elements count. An empty P never meets anything.
bool polytope_meets_cone(const Mat& P, const ConeHull& cone, bool exclude_zero = false);

/// Distance between co{columns of P} (nonempty) and the cone; 0 when they meet.
double polytope_cone_distance(const Mat& P, const ConeHull& cone);

}  // namespace gapcert
