#pragma once

#include <vector>

#include "gapcert/problem.hpp"

namespace gapcert {

/// Cell-wise extended controls on a (possibly non-uniform) pseudo-time grid.
struct ControlGrid {
  std::vector<double> s;       // M+1 nodes, s[0]=0, strictly increasing
  std::vector<double> omega0;  // M cells
  std::vector<Vec> omega;      // M cells, each in R^m
  std::vector<Vec> alpha;      // M cells, each in R^q

  int cells() const { return static_cast<int>(omega0.size()); }
  double S() const { return s.back(); }
  double ds(int k) const { return s[k + 1] - s[k]; }

  static ControlGrid uniform(double S, int M, int m, int q);
};

/// Extended (space-time) process: controls plus node-sampled states.
struct ExtendedProcess {
  ControlGrid ctrl;
  std::vector<double> y0;  // M+1
  std::vector<Vec> y;      // M+1
  std::vector<double> nu;  // M+1

  int cells() const { return ctrl.cells(); }
  double S() const { return ctrl.S(); }
  double t_begin() const { return y0.front(); }
  double t_end() const { return y0.back(); }
};

/// Strict-sense process on a uniform t-grid; u is piecewise linear
/// (du/dt cell-wise constant), states are node samples.
struct StrictProcess {
  double t1 = 0.0, t2 = 1.0;
  std::vector<Vec> dudt;   // M cells
  std::vector<Vec> alpha;  // M cells
  std::vector<Vec> u;      // M+1 nodes, u[0] = 0
  std::vector<Vec> x;      // M+1 nodes
  std::vector<double> v;   // M+1 nodes, v[0] = 0

  int cells() const { return static_cast<int>(dudt.size()); }
  double dt() const { return (t2 - t1) / cells(); }
  double t_node(int k) const { return t1 + dt() * k; }
};

struct FeasibilityReport {
  double state_violation = 0.0;    // max_i,s h_i(y0,y)^+
  double endpoint_distance = 0.0;  // d_{T0}(endpoints)
  double variation_excess = 0.0;   // (nu(S) - K)^+
  double initial_variation = 0.0;  // |nu(0)|

  double worst() const;
  bool feasible(double tol = 1e-6) const { return worst() <= tol; }
};

/// Explicit-Euler integration of the extended system from the given initial
/// state. Controls must lie in C x A cell-wise (throws control_outside_C).
ExtendedProcess integrate(const ProblemSpec& p, const ControlGrid& ctrl, double y0_init,
                          const Vec& y_init, double nu_init = 0.0,
                          bool check_controls = true);

/// Explicit-Euler integration of the strict system.
StrictProcess strict_integrate(const ProblemSpec& p, double t1, double t2,
                               const std::vector<Vec>& dudt, const std::vector<Vec>& alpha,
                               const Vec& x_init);

FeasibilityReport feasibility(const ProblemSpec& p, const ExtendedProcess& proc);

double cost(const ProblemSpec& p, const ExtendedProcess& proc);
double cost(const ProblemSpec& p, const StrictProcess& proc);

/// Graph datum for the d_infty metric: two endpoint tags plus a sampled path
/// (piecewise linear, constant-extended to all of R).
struct DInftyGraph {
  double tag1 = 0.0, tag2 = 0.0;
  std::vector<double> s;
  std::vector<Vec> z;
};

double d_infty(const DInftyGraph& a, const DInftyGraph& b);

/// Resample a process onto a uniform grid with the given cell count: states by
/// piecewise-linear interpolation, controls by cell-midpoint lookup.
ExtendedProcess resample(const ExtendedProcess& proc, int cells);

/// Space-time graph of an extended process: tags (y0(0), y0(S)), path (y, nu).
DInftyGraph graph_of(const ExtendedProcess& proc);
/// Graph of a strict process: tags (t1, t2), path (x, v).
DInftyGraph graph_of(const StrictProcess& proc);

}  // namespace gapcert
