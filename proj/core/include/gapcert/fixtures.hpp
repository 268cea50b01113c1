#pragma once

#include <optional>

#include "gapcert/pmp.hpp"
#include "gapcert/problem.hpp"
#include "gapcert/process.hpp"

namespace gapcert {

/// Built-in problems "example-4.1", "example-4.2", "example-4.3": a
/// three-state system with drift (0, x2 x3, 0), impulse fields (1,0,0) and
/// (0,-1,-x1), full-plane impulse cone, variation bound 2 and cost -x1(final),
/// under three combinations of state/endpoint constraints.
std::vector<std::string> fixture_names();
bool is_fixture(const std::string& name);

ProblemSpec make_fixture(const std::string& name);

/// The known extended-sense minimizer on a uniform grid (cells must be even so
/// the control switch lands on a node; the trajectory is then exact).
ExtendedProcess reference_process(const std::string& name, int cells);

/// Analytically derived multiplier sets: a normal certificate (lambda = 1) for
/// 4.1/4.2 and the degenerate abnormal set of 4.3. Grids as above.
std::optional<MultiplierSet> reference_multipliers(const std::string& name, int cells);

}  // namespace gapcert
