#include "gapcert/nnls.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace gapcert {

Vec nnls(const Mat& A, const Vec& b, double tol, int max_iter) {
  const int n = static_cast<int>(A.cols());
  Vec x = Vec::Zero(n);
  if (n == 0) return x;
  std::vector<bool> passive(n, false);
  Vec w = A.transpose() * (b - A * x);

  for (int iter = 0; iter < max_iter; ++iter) {
    int t = -1;
    double wmax = tol * std::max(1.0, b.norm());
    for (int j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > wmax) {
        wmax = w[j];
        t = j;
      }
    }
    if (t < 0) break;
    passive[t] = true;

    while (true) {
      std::vector<int> idx;
      for (int j = 0; j < n; ++j)
        if (passive[j]) idx.push_back(j);
      Mat Ap(A.rows(), idx.size());
      for (size_t k = 0; k < idx.size(); ++k) Ap.col(k) = A.col(idx[k]);
      Vec z = Ap.colPivHouseholderQr().solve(b);

      bool all_pos = true;
      for (size_t k = 0; k < idx.size(); ++k)
        if (z[k] <= tol) all_pos = false;
      if (all_pos) {
        x.setZero();
        for (size_t k = 0; k < idx.size(); ++k) x[idx[k]] = z[k];
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < idx.size(); ++k) {
        if (z[k] <= tol) {
          double xi = x[idx[k]];
          if (xi - z[k] > 0) alpha = std::min(alpha, xi / (xi - z[k]));
        }
      }
      if (!std::isfinite(alpha)) alpha = 0.0;
      for (size_t k = 0; k < idx.size(); ++k) {
        x[idx[k]] += alpha * (z[k] - x[idx[k]]);
        if (x[idx[k]] <= tol) {
          x[idx[k]] = 0.0;
          passive[idx[k]] = false;
        }
      }
    }
    w = A.transpose() * (b - A * x);
  }
  return x;
}

double distance_to_cone(const Vec& v, const Mat& G, const Mat& L) {
  Vec target = v;
  Mat Gp = G;
  if (L.cols() > 0) {
    // Eliminate the lineality space: project everything onto its complement.
    Eigen::JacobiSVD<Mat> svd(L, Eigen::ComputeThinU);
    Mat U = svd.matrixU();
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-12) ++rank;
    Mat Ur = U.leftCols(rank);
    target = v - Ur * (Ur.transpose() * v);
    if (G.cols() > 0) Gp = G - Ur * (Ur.transpose() * G);
  }
  if (Gp.cols() == 0) return target.norm();
  Vec c = nnls(Gp, target);
  return (Gp * c - target).norm();
}

namespace {

// Equality-constrained least squares min |v - P theta|, sum(theta) = 1 on a
// support subset, solved through the KKT system.
double subset_distance(const Vec& v, const Mat& P, const std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  Mat Ps(P.rows(), k);
  for (int j = 0; j < k; ++j) Ps.col(j) = P.col(idx[j]);
  Mat K = Mat::Zero(k + 1, k + 1);
  K.topLeftCorner(k, k) = Ps.transpose() * Ps;
  K.topRightCorner(k, 1).setOnes();
  K.bottomLeftCorner(1, k).setOnes();
  Vec rhs(k + 1);
  rhs.head(k) = Ps.transpose() * v;
  rhs[k] = 1.0;
  Vec sol = K.colPivHouseholderQr().solve(rhs);
  if ((K * sol - rhs).norm() > 1e-8 * std::max(1.0, rhs.norm()))
    return std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j)
    if (sol[j] < -1e-10) return std::numeric_limits<double>::infinity();
  return (Ps * sol.head(k) - v).norm();
}

}  // namespace

Vec project_to_polytope(const Vec& v, const Mat& P) {
  const int k = static_cast<int>(P.cols());
  if (k == 0) return Vec::Zero(v.size());
  if (k == 1) return P.col(0);
  // NNLS lifting with a weighted simplex row; exact enough for projections and
  // refined below by a best-vertex fallback.
  const double W = 1e7;
  Mat A(P.rows() + 1, k);
  A.topRows(P.rows()) = P;
  A.row(P.rows()).setConstant(W);
  Vec b(P.rows() + 1);
  b.head(P.rows()) = v;
  b[P.rows()] = W;
  Vec theta = nnls(A, b);
  double s = theta.sum();
  if (s > 1e-12) theta /= s;
  Vec best = P * theta;
  for (int j = 0; j < k; ++j)
    if ((P.col(j) - v).norm() < (best - v).norm()) best = P.col(j);
  return best;
}

double distance_to_polytope(const Vec& v, const Mat& P) {
  const int k = static_cast<int>(P.cols());
  if (k == 0) return std::numeric_limits<double>::infinity();
  if (k <= 14) {
    // Exact: the projection's support is some subset of the vertices.
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      std::vector<int> idx;
      for (int j = 0; j < k; ++j)
        if (mask & (1u << j)) idx.push_back(j);
      best = std::min(best, subset_distance(v, P, idx));
    }
    return best;
  }
  return (project_to_polytope(v, P) - v).norm();
}

}  // namespace gapcert
