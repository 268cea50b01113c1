#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gapcert/cones.hpp"
#include "gapcert/constraint.hpp"
#include "gapcert/poly.hpp"
#include "gapcert/sets.hpp"

namespace gapcert {

/// Vector field over (t,x) with polynomial components; Jacobians are exact.
struct VectorFieldTX {
  std::vector<Poly> comp;  // each over 1+n variables

  int out_dim() const { return static_cast<int>(comp.size()); }
  Vec eval(double t, const Vec& x) const;
  /// Jacobian wrt (t,x): out_dim x (1+n).
  Mat jac_tx(double t, const Vec& x) const;

  static VectorFieldTX zero(int n_out, int n_state);
  static VectorFieldTX constant(const Vec& v, int n_state);
};

/// Drift f(t,x,a): affine in the ordinary control, or tabulated over a finite
/// control list. q == 0 (no ordinary control) is the base-only affine case.
struct DriftField {
  enum class Mode { affine, tabulated };
  Mode mode = Mode::affine;

  VectorFieldTX base;                    // affine: f0
  std::vector<VectorFieldTX> a_terms;    // affine: one field per a-coordinate
  std::vector<Vec> table_points;         // tabulated
  std::vector<VectorFieldTX> table;      // tabulated, same length

  Vec eval(double t, const Vec& x, const Vec& a) const;
  Mat jac_tx(double t, const Vec& x, const Vec& a) const;
  bool depends_on_a() const;
};

/// Endpoint cost Psi(t1, x1, t2, x2, v2) as a polynomial in 2(1+n)+1 variables.
struct CostFn {
  Poly psi;

  double value(double t1, const Vec& x1, double t2, const Vec& x2, double v2) const;
  Vec gradient(double t1, const Vec& x1, double t2, const Vec& x2, double v2) const;
  double dv(double t1, const Vec& x1, double t2, const Vec& x2, double v2) const;

  static Vec pack(double t1, const Vec& x1, double t2, const Vec& x2, double v2);
};

/// Ordinary control set A: a compact box or an explicit finite list.
struct ControlSet {
  enum class Kind { empty, finite, box };
  Kind kind = Kind::empty;
  int dim = 0;
  std::vector<Vec> points;  // finite
  Vec lower, upper;         // box

  static ControlSet make_empty();
  static ControlSet make_finite(std::vector<Vec> pts);
  static ControlSet make_box(const Vec& lo, const Vec& hi);

  /// Deterministic sample used by maximization/qualification scans.
  std::vector<Vec> samples(int per_dim = 5) const;
  Vec clamp(const Vec& a) const;
  Vec nearest(const Vec& a) const;
  bool contains(const Vec& a, double tol = 1e-9) const;
};

/// The full data tuple of problems (P) / (P_e).
struct ProblemSpec {
  std::string name;
  int n = 0;  // state dimension
  int m = 0;  // impulsive control dimension
  int q = 0;  // ordinary control dimension

  DriftField f;
  std::vector<VectorFieldTX> g;       // m impulse fields
  std::vector<ConstraintFunction> h;  // N state constraints
  CostFn cost;
  SetSpec target;      // T0 in R^{2(1+n)}
  ConeSpec cone;       // C in R^m
  ControlSet a_set;    // A in R^q
  double K = std::numeric_limits<double>::infinity();

  int constraint_count() const { return static_cast<int>(h.size()); }
  bool variation_bounded() const { return std::isfinite(K); }

  /// Combined field F(t,x,w0,w,a) = f(t,x,a) w0 + sum_j g_j(t,x) w^j.
  Vec combined_field(double t, const Vec& x, double w0, const Vec& w, const Vec& a) const;
  Mat combined_jac_tx(double t, const Vec& x, double w0, const Vec& w, const Vec& a) const;
  /// Impulse matrix G(t,x) with columns g_j(t,x).
  Mat impulse_matrix(double t, const Vec& x) const;
};

/// Mechanical hypothesis checks: Psi nondecreasing in v2 on a sampled grid,
/// compact A, cone/target well-formedness. Returns human-readable violations.
std::vector<std::string> validate(const ProblemSpec& p);

}  // namespace gapcert
