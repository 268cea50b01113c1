#pragma once

#include <vector>

#include "gapcert/poly.hpp"

namespace gapcert {

/// Deterministic unit directions used by the sampling oracles (shared with
/// the geometry tests).
std::vector<Vec> sphere_directions(int dim, int count);

/// Scalar state constraint h(t,x) <= 0: a smooth polynomial piece or a finite
/// max of them. Locally Lipschitz by construction.
struct ConstraintFunction {
  std::vector<Poly> pieces;    // each over (t, x_1..x_n), i.e. 1+n variables
  double activity_tol = 1e-8;

  int tx_dim() const { return pieces.empty() ? 0 : pieces.front().nvars(); }
  bool smooth() const { return pieces.size() == 1; }

  double value(double t, const Vec& x) const;
  /// Gradient of the active piece (ties broken by first index).
  Vec gradient_tx(double t, const Vec& x) const;
  /// True if every piece is constant in t.
  bool time_independent() const;

  static ConstraintFunction smooth_scalar(Poly p, double tol = 1e-8);
  static ConstraintFunction max_of_smooth(std::vector<Poly> ps, double tol = 1e-8);
};

/// Reachable gradients (the set whose convex hull is the Clarke
/// subdifferential): gradients of all pieces achieving the max within the
/// activity tolerance. Columns of the result.
Mat reachable_gradients(const ConstraintFunction& h, double t, const Vec& x);

/// Generators of the hybrid subdifferential co ∂^{*>}h at (t,x). Empty matrix
/// (0 columns) when h < -tol near the point. For a smooth active piece with
/// nonvanishing gradient this is {grad h}; for a max of pieces, gradients of
/// pieces that are active and achieve positive values in a sampled punctured
/// neighborhood (radius 1e-4, 32 samples). Throws ErrorKind::vanishing_gradient
/// when an active piece has (numerically) zero gradient at the boundary.
Mat hybrid_subdiff(const ConstraintFunction& h, double t, const Vec& x);

}  // namespace gapcert
