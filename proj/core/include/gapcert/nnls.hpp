#pragma once

#include "gapcert/poly.hpp"

namespace gapcert {

/// Lawson-Hanson nonnegative least squares: argmin_{x>=0} |A x - b|.
Vec nnls(const Mat& A, const Vec& b, double tol = 1e-12, int max_iter = 2000);

/// Euclidean distance from v to the finitely generated cone
/// { G c : c >= 0 } + span(L). Columns of G are generators, columns of L span
/// the lineality space. Either may have zero columns.
double distance_to_cone(const Vec& v, const Mat& G, const Mat& L);

/// Euclidean distance from v to co{p_1,...,p_k} (columns of P). Exact via
/// active-set enumeration for k <= 14, NNLS lifting otherwise.
double distance_to_polytope(const Vec& v, const Mat& P);

/// Nearest point in co{columns of P} to v.
Vec project_to_polytope(const Vec& v, const Mat& P);

}  // namespace gapcert
