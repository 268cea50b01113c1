#pragma once

#include <vector>

#include "gapcert/poly.hpp"

namespace gapcert {

/// Closed convex set catalog. Everything the toolkit certifies against is one
/// of these variants, so membership, projection and normal cones stay exact.
struct SetSpec {
  enum class Kind { box, ball, half_space, singleton, polyhedron, product, intersection };

  Kind kind = Kind::box;
  int dim = 0;

  Vec lower, upper;          // box (entries may be +-inf)
  Vec center;                // ball
  double radius = 0.0;       // ball
  Vec normal;                // half_space: normal . x <= offset
  double offset = 0.0;       // half_space
  Vec point;                 // singleton
  Mat Ain;                   // polyhedron: Ain x <= bin, row-wise
  Vec bin;                   // polyhedron
  std::vector<SetSpec> factors;  // product / intersection
  bool transversal = false;      // user-asserted for intersections

  static SetSpec make_box(const Vec& lo, const Vec& hi);
  static SetSpec make_ball(const Vec& center, double radius);
  static SetSpec make_half_space(const Vec& normal, double offset);
  static SetSpec make_singleton(const Vec& point);
  static SetSpec make_polyhedron(const Mat& A, const Vec& b);
  static SetSpec make_product(std::vector<SetSpec> factors);
  static SetSpec make_intersection(std::vector<SetSpec> factors, bool transversal);

  /// Full space in d dimensions, expressed as an unbounded box.
  static SetSpec make_free(int d);
};

bool set_membership(const SetSpec& s, const Vec& z, double tol = 1e-8);
Vec set_project(const SetSpec& s, const Vec& z);
double set_distance(const SetSpec& s, const Vec& z);

/// Some point of the set (projection of the origin).
Vec set_any_point(const SetSpec& s);

}  // namespace gapcert
