#include "gapcert/poly.hpp"

#include <algorithm>
#include <cmath>

#include "gapcert/errors.hpp"

namespace gapcert {

void Poly::add_term(double coef, std::vector<int> exps) {
  if (static_cast<int>(exps.size()) != nvars_)
    throw Error(ErrorKind::bad_input, "Poly::add_term: exponent list size mismatch");
  for (int e : exps)
    if (e < 0) throw Error(ErrorKind::bad_input, "Poly::add_term: negative exponent");
  terms_.push_back({coef, std::move(exps)});
  normalize();
}

void Poly::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.exps < b.exps; });
  std::vector<Term> out;
  for (auto& t : terms_) {
    if (!out.empty() && out.back().exps == t.exps)
      out.back().coef += t.coef;
    else
      out.push_back(t);
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const Term& t) { return t.coef == 0.0; }),
            out.end());
  terms_ = std::move(out);
}

double Poly::eval(const Vec& vars) const {
  if (vars.size() != nvars_)
    throw Error(ErrorKind::bad_input, "Poly::eval: variable count mismatch");
  double acc = 0.0;
  for (const auto& t : terms_) {
    double m = t.coef;
    for (int v = 0; v < nvars_; ++v) {
      for (int k = 0; k < t.exps[v]; ++k) m *= vars[v];
    }
    acc += m;
  }
  return acc;
}

Poly Poly::derivative(int var) const {
  Poly d(nvars_);
  for (const auto& t : terms_) {
    if (t.exps[var] == 0) continue;
    Term nt = t;
    nt.coef = t.coef * t.exps[var];
    nt.exps[var] -= 1;
    d.terms_.push_back(std::move(nt));
  }
  d.normalize();
  return d;
}

Vec Poly::gradient(const Vec& vars) const {
  Vec g(nvars_);
  for (int v = 0; v < nvars_; ++v) g[v] = derivative(v).eval(vars);
  return g;
}

bool Poly::independent_of(int var) const {
  for (const auto& t : terms_)
    if (t.exps[var] > 0) return false;
  return true;
}

Poly Poly::scaled(double c) const {
  Poly p(nvars_);
  for (const auto& t : terms_) p.terms_.push_back({t.coef * c, t.exps});
  p.normalize();
  return p;
}

Poly Poly::constant(int nvars, double c) {
  Poly p(nvars);
  if (c != 0.0) p.terms_.push_back({c, std::vector<int>(nvars, 0)});
  return p;
}

Poly Poly::variable(int nvars, int var, double coef) {
  Poly p(nvars);
  std::vector<int> e(nvars, 0);
  e[var] = 1;
  if (coef != 0.0) p.terms_.push_back({coef, std::move(e)});
  return p;
}

}  // namespace gapcert
