#pragma once

#include <Eigen/Core>
#include <vector>

namespace gapcert {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Sparse multivariate polynomial with integer exponents. This is the whole
/// field catalog: drift/impulse components, constraint pieces and costs are
/// polynomials in their arguments, so values and gradients are exact.
class Poly {
 public:
  struct Term {
    double coef = 0.0;
    std::vector<int> exps;  // one exponent per variable
  };

  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {}

  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(double coef, std::vector<int> exps);

  double eval(const Vec& vars) const;
  Poly derivative(int var) const;
  Vec gradient(const Vec& vars) const;

  /// True if no term has a positive exponent on `var`.
  bool independent_of(int var) const;

  Poly scaled(double c) const;

  static Poly constant(int nvars, double c);
  static Poly variable(int nvars, int var, double coef = 1.0);

 private:
  void normalize();

  int nvars_ = 0;
  std::vector<Term> terms_;
};

}  // namespace gapcert
