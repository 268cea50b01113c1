#include "gapcert/fixtures.hpp"

#include <cmath>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {

// Variables for (t,x)-polynomials: 0 = t, 1..3 = x1..x3.
Poly tx_const(double c) { return Poly::constant(4, c); }
Poly tx_var(int i, double c = 1.0) { return Poly::variable(4, i, c); }

VectorFieldTX drift_field() {
  // f(x) = (0, x2 x3, 0)
  VectorFieldTX f;
  f.comp.push_back(tx_const(0.0));
  Poly p(4);
  p.add_term(1.0, {0, 0, 1, 1});
  f.comp.push_back(p);
  f.comp.push_back(tx_const(0.0));
  return f;
}

std::vector<VectorFieldTX> impulse_fields() {
  // g1 = (1,0,0), g2 = (0,-1,-x1)
  VectorFieldTX g1, g2;
  g1.comp = {tx_const(1.0), tx_const(0.0), tx_const(0.0)};
  g2.comp = {tx_const(0.0), tx_const(-1.0), tx_var(1, -1.0)};
  return {g1, g2};
}

std::vector<ConstraintFunction> box_constraints(bool moving_face) {
  // -1 <= x1 <= 1 (+t when the face moves), -1 <= x2,x3 <= 1
  std::vector<ConstraintFunction> h;
  Poly up1 = tx_var(1);
  up1.add_term(-1.0, {0, 0, 0, 0});
  if (moving_face) up1.add_term(-1.0, {1, 0, 0, 0});  // x1 - 1 - t
  h.push_back(ConstraintFunction::smooth_scalar(up1));
  Poly lo1 = tx_var(1, -1.0);
  lo1.add_term(-1.0, {0, 0, 0, 0});
  h.push_back(ConstraintFunction::smooth_scalar(lo1));
  for (int i = 2; i <= 3; ++i) {
    Poly up = tx_var(i);
    up.add_term(-1.0, {0, 0, 0, 0});
    h.push_back(ConstraintFunction::smooth_scalar(up));
    Poly lo = tx_var(i, -1.0);
    lo.add_term(-1.0, {0, 0, 0, 0});
    h.push_back(ConstraintFunction::smooth_scalar(lo));
  }
  return h;
}

SetSpec initial_ball_target() {
  // {|x - (1,0,0)| <= 1/3} intersected with {x1 <= 1}
  Vec c(3);
  c << 1, 0, 0;
  Vec n1(3);
  n1 << 1, 0, 0;
  return SetSpec::make_intersection(
      {SetSpec::make_ball(c, 1.0 / 3.0), SetSpec::make_half_space(n1, 1.0)},
      /*transversal=*/true);
}

SetSpec final_target_41() {
  // {|x + (1,0,0)| <= 1} intersected with {x1 >= -1}
  Vec c(3);
  c << -1, 0, 0;
  Vec n1(3);
  n1 << -1, 0, 0;
  return SetSpec::make_intersection(
      {SetSpec::make_ball(c, 1.0), SetSpec::make_half_space(n1, 1.0)},
      /*transversal=*/true);
}

SetSpec final_target_box() {
  Vec lo(3), hi(3);
  lo << -1, 0, 0;
  hi << 0, 1, 1;
  return SetSpec::make_box(lo, hi);
}

Poly cost_poly() {
  // Psi(t1,x1,t2,x2,v2) = -x2^1; variables: (t1, x1^{1..3}, t2, x2^{1..3}, v2)
  return Poly::variable(9, 5, -1.0);
}

}  // namespace

std::vector<std::string> fixture_names() {
  return {"example-4.1", "example-4.2", "example-4.3"};
}

bool is_fixture(const std::string& name) {
  for (const auto& n : fixture_names())
    if (n == name) return true;
  return false;
}

ProblemSpec make_fixture(const std::string& name) {
  if (!is_fixture(name)) throw Error(ErrorKind::bad_input, "unknown fixture: " + name);
  ProblemSpec p;
  p.name = name;
  p.n = 3;
  p.m = 2;
  p.q = 0;
  p.f.mode = DriftField::Mode::affine;
  p.f.base = drift_field();
  p.g = impulse_fields();
  p.cone = ConeSpec::make_full(2);
  p.a_set = ControlSet::make_empty();
  p.K = 2.0;
  p.cost.psi = cost_poly();

  bool is41 = name == "example-4.1";
  bool is43 = name == "example-4.3";
  p.h = box_constraints(/*moving_face=*/is41);

  SetSpec t1 = SetSpec::make_singleton(Vec::Zero(1));
  SetSpec t2 = SetSpec::make_singleton(Vec::Ones(1));
  SetSpec x1set;
  if (is43) {
    Vec pt(3);
    pt << 1, 0, 0;
    x1set = SetSpec::make_singleton(pt);
  } else {
    x1set = initial_ball_target();
  }
  SetSpec x2set = is41 ? final_target_41() : final_target_box();
  p.target = SetSpec::make_product({t1, x1set, t2, x2set});
  return p;
}

ExtendedProcess reference_process(const std::string& name, int cells) {
  if (cells % 2 != 0)
    throw Error(ErrorKind::bad_input, "reference_process: even cell count required");
  ProblemSpec p = make_fixture(name);
  ControlGrid ctrl = ControlGrid::uniform(2.0, cells, 2, 0);
  Vec down(2);
  down << -1.0, 0.0;
  for (int k = 0; k < cells; ++k) {
    bool first_half = k < cells / 2;  // s < 1: pure drift; s > 1: fast arc
    ctrl.omega0[k] = first_half ? 1.0 : 0.0;
    ctrl.omega[k] = first_half ? Vec(Vec::Zero(2)) : down;
  }
  Vec x0(3);
  x0 << 1, 0, 0;
  return integrate(p, ctrl, 0.0, x0, 0.0);
}

std::optional<MultiplierSet> reference_multipliers(const std::string& name, int cells) {
  if (!is_fixture(name)) return std::nullopt;
  MultiplierSet mult;
  mult.mu.resize(6);
  if (name == "example-4.3") {
    // Degenerate abnormal set: p = (0,-1,0,0) constant, unit atom of mu_1 at
    // s = 0 with (m0,m) = (0,1,0,0), lambda = 0, pi = 0.
    Vec ptx(4);
    ptx << 0, -1, 0, 0;
    mult.ptx.assign(cells + 1, ptx);
    mult.lambda = 0.0;
    mult.pi = 0.0;
    ConstraintMeasure::Atom a;
    a.s = 0.0;
    a.mass = 1.0;
    a.m = Vec::Zero(4);
    a.m[1] = 1.0;
    mult.mu[0].atoms.push_back(a);
    return mult;
  }
  // 4.1 / 4.2: the normal certificate with lambda = 1 and every other
  // multiplier zero (the transversality residual is absorbed by the
  // outward normal of the final target at its contact point).
  mult.ptx.assign(cells + 1, Vec::Zero(4));
  mult.lambda = 1.0;
  mult.pi = 0.0;
  return mult;
}

}  // namespace gapcert
