#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gapcert {

/// Typed failure reasons. Every refusal in the library carries one of these so
/// callers can distinguish "inconclusive" from hard input errors.
enum class ErrorKind {
  bad_input,
  point_not_in_set,
  non_transversal_intersection,
  vanishing_gradient,
  control_outside_C,
  fast_arc_present,
  grid_mismatch,
  atom_outside_grid,
  lp_failure,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// invert() refusal: names the pseudo-time cells where omega0 falls below the
/// positivity threshold.
class FastArcError : public Error {
 public:
  FastArcError(const std::string& what, std::vector<int> cells)
      : Error(ErrorKind::fast_arc_present, what), cells_(std::move(cells)) {}
  const std::vector<int>& cells() const { return cells_; }

 private:
  std::vector<int> cells_;
};

}  // namespace gapcert
