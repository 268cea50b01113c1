#include "gapcert/lp.hpp"

#include <cmath>
#include <limits>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {
constexpr double kPivotEps = 1e-9;
constexpr double kFeasEps = 1e-8;
}  // namespace

void LinearProgram::reserve_rows(int rows) {
  A.conservativeResize(rows, ncols);
  b.conservativeResize(rows);
}

int LinearProgram::add_row(const Vec& coeffs, Rel r, double rhs) {
  if (coeffs.size() != ncols) throw Error(ErrorKind::bad_input, "LinearProgram: row size mismatch");
  int i = static_cast<int>(rel.size());
  if (A.rows() <= i) {
    int cap = std::max(16, 2 * i);
    Mat na = Mat::Zero(cap, ncols);
    if (i > 0) na.topRows(i) = A.topRows(i);
    A = std::move(na);
    b.conservativeResize(cap);
  }
  A.row(i) = coeffs.transpose();
  b[i] = rhs;
  rel.push_back(r);
  return i;
}

namespace {

// Two-phase tableau simplex. Rows are sign-normalized to b >= 0; slack columns
// whose coefficient ends up +1 seed the basis directly, so artificials are
// only introduced for the remaining (mostly equality) rows.
class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp) {
    m_ = static_cast<int>(lp.rel.size());
    int nslack = 0;
    for (auto r : lp.rel)
      if (r != LinearProgram::EQ) ++nslack;
    // Count artificials: rows whose slack cannot serve as the initial basis.
    nart_ = 0;
    for (int i = 0; i < m_; ++i) {
      double sgn = lp.b[i] < 0 ? -1.0 : 1.0;
      double slack_coef = lp.rel[i] == LinearProgram::LE
                              ? sgn
                              : (lp.rel[i] == LinearProgram::GE ? -sgn : 0.0);
      if (slack_coef <= 0.0) ++nart_;
    }
    nstruct_ = lp.ncols + nslack;
    ncols_ = nstruct_ + nart_;
    T_.setZero(m_ + 1, ncols_ + 1);
    basis_.assign(m_, -1);

    int sc = lp.ncols;
    int ac = nstruct_;
    for (int i = 0; i < m_; ++i) {
      double sgn = lp.b[i] < 0 ? -1.0 : 1.0;
      T_.block(i, 0, 1, lp.ncols) = sgn * lp.A.topRows(m_).row(i);
      T_(i, ncols_) = sgn * lp.b[i];
      double slack_coef = 0.0;
      int slack_col = -1;
      if (lp.rel[i] != LinearProgram::EQ) {
        slack_col = sc++;
        slack_coef = lp.rel[i] == LinearProgram::LE ? sgn : -sgn;
        T_(i, slack_col) = slack_coef;
      }
      if (slack_coef > 0.0) {
        basis_[i] = slack_col;
      } else {
        int art = ac++;
        T_(i, art) = 1.0;
        basis_[i] = art;
        art_rows_.push_back(i);
      }
    }
    scale_rows();
  }

  bool phase1(int max_iter, int& used) {
    if (nart_ == 0) {
      feasible_ = true;
      used = 0;
      return true;
    }
    Vec cost = Vec::Zero(ncols_);
    for (int j = nstruct_; j < ncols_; ++j) cost[j] = 1.0;
    load_costs(cost);
    Status st = iterate(max_iter, used, /*block_artificials=*/false);
    if (st == Status::stalled) return false;
    double art = 0.0;
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= nstruct_) art += T_(i, ncols_);
    feasible_ = art <= kFeasEps * std::max(1.0, bscale_);
    if (feasible_) pivot_out_artificials();
    return true;
  }

  LpResult::Status phase2(const Vec& c0, int max_iter, int& used) {
    Vec cost = Vec::Zero(ncols_);
    if (c0.size() > 0) cost.head(c0.size()) = c0;
    load_costs(cost);
    Status st = iterate(max_iter, used, /*block_artificials=*/true);
    if (st == Status::stalled) return LpResult::Status::iteration_limit;
    if (st == Status::unbounded) return LpResult::Status::unbounded;
    return LpResult::Status::optimal;
  }

  bool feasible() const { return feasible_; }

  Vec solution(int orig_cols) const {
    Vec x = Vec::Zero(orig_cols);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < orig_cols) x[basis_[i]] = T_(i, ncols_);
    return x;
  }

 private:
  enum class Status { optimal, unbounded, stalled };

  void scale_rows() {
    bscale_ = 0.0;
    for (int i = 0; i < m_; ++i) {
      double mx = T_.row(i).head(nstruct_).cwiseAbs().maxCoeff();
      if (mx > 0) {
        double inv = 1.0 / mx;
        T_.row(i).head(nstruct_) *= inv;
        T_(i, ncols_) *= inv;
      }
      // keep any artificial at exactly 1
      if (basis_[i] >= nstruct_) T_(i, basis_[i]) = 1.0;
      bscale_ = std::max(bscale_, std::abs(T_(i, ncols_)));
    }
  }

  void load_costs(const Vec& cost) {
    T_.row(m_).setZero();
    T_.row(m_).head(ncols_) = cost.transpose();
    for (int i = 0; i < m_; ++i) {
      double cb = cost[basis_[i]];
      if (cb != 0.0) T_.row(m_) -= cb * T_.row(i);
    }
  }

  Status iterate(int max_iter, int& used, bool block_artificials) {
    int stall = 0;
    for (used = 0; used < max_iter; ++used) {
      int col = pick_column(stall > 2 * m_ + 50, block_artificials);
      if (col < 0) return Status::optimal;
      int row = pick_row(col);
      if (row < 0) return Status::unbounded;
      double before = T_(m_, ncols_);
      pivot(row, col);
      if (std::abs(T_(m_, ncols_) - before) < 1e-15)
        ++stall;
      else
        stall = 0;
    }
    return Status::stalled;
  }

  int pick_column(bool bland, bool block_artificials) const {
    int limit = block_artificials ? nstruct_ : ncols_;
    int best = -1;
    double bestv = -kPivotEps;
    for (int j = 0; j < limit; ++j) {
      double rc = T_(m_, j);
      if (rc < -kPivotEps) {
        if (bland) return j;
        if (rc < bestv) {
          bestv = rc;
          best = j;
        }
      }
    }
    return best;
  }

  int pick_row(int col) const {
    int best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m_; ++i) {
      double a = T_(i, col);
      if (a > kPivotEps) {
        double ratio = T_(i, ncols_) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && (best < 0 || basis_[i] < basis_[best]))) {
          best_ratio = ratio;
          best = i;
        }
      }
    }
    return best;
  }

  void pivot(int row, int col) {
    T_.row(row) /= T_(row, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      double f = T_(i, col);
      if (f != 0.0) T_.row(i) -= f * T_.row(row);
    }
    basis_[row] = col;
  }

  void pivot_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < nstruct_) continue;
      int col = -1;
      for (int j = 0; j < nstruct_; ++j) {
        if (std::abs(T_(i, j)) > 1e-7) {
          col = j;
          break;
        }
      }
      if (col >= 0) pivot(i, col);
      // else: redundant row; the artificial stays basic at level ~0 and can
      // never change (its row is structurally zero).
    }
  }

  int m_ = 0, nstruct_ = 0, ncols_ = 0, nart_ = 0;
  Mat T_;
  std::vector<int> basis_;
  std::vector<int> art_rows_;
  bool feasible_ = false;
  double bscale_ = 1.0;
};

}  // namespace

LpResult lp_solve(const LinearProgram& lp, int max_iterations) {
  LpResult res;
  if (lp.ncols == 0 || lp.rel.empty()) {
    bool ok = true;
    for (size_t i = 0; i < lp.rel.size(); ++i) {
      double bi = lp.b[static_cast<int>(i)];
      if (lp.rel[i] == LinearProgram::EQ && std::abs(bi) > kFeasEps) ok = false;
      if (lp.rel[i] == LinearProgram::LE && bi < -kFeasEps) ok = false;
      if (lp.rel[i] == LinearProgram::GE && bi > kFeasEps) ok = false;
    }
    res.status = ok ? LpResult::Status::optimal : LpResult::Status::infeasible;
    res.x = Vec::Zero(lp.ncols);
    return res;
  }

  Tableau tab(lp);
  int it1 = 0, it2 = 0;
  if (!tab.phase1(max_iterations, it1)) {
    res.status = LpResult::Status::iteration_limit;
    res.iterations = it1;
    return res;
  }
  if (!tab.feasible()) {
    res.status = LpResult::Status::infeasible;
    res.iterations = it1;
    return res;
  }
  res.status = tab.phase2(lp.c, max_iterations, it2);
  res.iterations = it1 + it2;
  res.x = tab.solution(lp.ncols);
  res.objective = lp.c.size() > 0 ? lp.c.dot(res.x) : 0.0;
  return res;
}

}  // namespace gapcert
