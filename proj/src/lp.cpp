#include "nwidths/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nwidths::lp {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;

// Tableau layout: rows 0..m-1 are constraints, row m is the objective row
// holding reduced costs; the last column is the right-hand side.
struct Tableau {
  Eigen::MatrixXd t;
  std::vector<int> basis;
  int m = 0;
  int cols = 0;  // number of structural + artificial columns

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int r = 0; r < t.rows(); ++r) {
      if (r == row) continue;
      const double f = t(r, col);
      if (f != 0.0) t.row(r) -= f * t.row(row);
    }
    basis[row] = col;
  }

  // Bland's rule: lowest-index column with negative reduced cost enters;
  // ratio-test ties go to the lowest basis index.
  Status run(int allowed_cols, int& pivots, int max_pivots) {
    const int rhs = cols;
    while (true) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (t(m, j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Status::Optimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double a = t(i, enter);
        if (a > kPivotTol) {
          const double ratio = t(i, rhs) / a;
          if (ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
               basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return Status::Unbounded;
      pivot(leave, enter);
      if (++pivots > max_pivots) return Status::IterationLimit;
    }
  }
};

}  // namespace

Solution solve_standard_form(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                             const Eigen::VectorXd& b, int max_pivots) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (c.size() != n || b.size() != m) {
    throw std::invalid_argument("lp: dimension mismatch");
  }
  Solution sol;
  sol.x = Eigen::VectorXd::Zero(n);
  sol.dual = Eigen::VectorXd::Zero(m);

  Eigen::MatrixXd Ab = A;
  Eigen::VectorXd bb = b;
  std::vector<double> row_sign(m, 1.0);
  for (int i = 0; i < m; ++i) {
    if (bb(i) < 0) {
      Ab.row(i) *= -1.0;
      bb(i) *= -1.0;
      row_sign[i] = -1.0;
    }
  }

  Tableau tab;
  tab.m = m;
  tab.cols = n + m;
  tab.t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  tab.t.topLeftCorner(m, n) = Ab;
  tab.t.block(0, n, m, m).setIdentity();
  tab.t.col(n + m).head(m) = bb;
  tab.basis.resize(m);
  for (int i = 0; i < m; ++i) tab.basis[i] = n + i;

  // Phase one: minimize the sum of artificials.
  for (int i = 0; i < m; ++i) tab.t.row(m) -= tab.t.row(i);
  for (int i = 0; i < m; ++i) tab.t(m, n + i) = 0.0;

  int pivots = 0;
  Status st = tab.run(n + m, pivots, max_pivots);
  if (st == Status::IterationLimit) {
    sol.status = st;
    return sol;
  }
  if (-tab.t(m, n + m) > kFeasTol * (1.0 + bb.lpNorm<Eigen::Infinity>())) {
    sol.status = Status::Infeasible;
    return sol;
  }

  // Drive artificials out of the basis; rows where that is impossible are
  // redundant and get dropped from phase two.
  std::vector<bool> redundant(m, false);
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.t(i, j)) > 1e-9) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.pivot(i, col);
    } else {
      redundant[i] = true;
    }
  }

  // Phase two objective row.
  tab.t.row(m).setZero();
  tab.t.row(m).head(n) = c.transpose();
  for (int i = 0; i < m; ++i) {
    if (redundant[i]) continue;
    const int j = tab.basis[i];
    const double cj = tab.t(m, j);
    if (cj != 0.0) tab.t.row(m) -= cj * tab.t.row(i);
  }
  // Artificial columns may no longer enter.
  for (int i = 0; i < m; ++i) {
    if (redundant[i]) tab.t.row(i).setZero();
  }
  st = tab.run(n, pivots, max_pivots);
  sol.status = st;
  if (st != Status::Optimal) return sol;

  for (int i = 0; i < m; ++i) {
    if (!redundant[i] && tab.basis[i] < n) sol.x(tab.basis[i]) = tab.t(i, n + m);
  }
  sol.objective = c.dot(sol.x);

  // Duals from the final basis: B^T y = c_B over non-redundant rows.
  std::vector<int> rows;
  std::vector<int> bcols;
  for (int i = 0; i < m; ++i) {
    if (redundant[i]) continue;
    rows.push_back(i);
    bcols.push_back(tab.basis[i]);
  }
  const int k = static_cast<int>(rows.size());
  if (k > 0) {
    Eigen::MatrixXd Bt(k, k);
    Eigen::VectorXd cb(k);
    for (int r = 0; r < k; ++r) {
      const int col = bcols[r];
      cb(r) = col < n ? c(col) : 0.0;
      for (int s = 0; s < k; ++s) {
        Bt(r, s) = col < n ? Ab(rows[s], col) : (col - n == rows[s] ? 1.0 : 0.0);
      }
    }
    const Eigen::VectorXd y = Bt.fullPivLu().solve(cb);
    for (int r = 0; r < k; ++r) sol.dual(rows[r]) = y(r) * row_sign[rows[r]];
  }
  return sol;
}

Eigen::VectorXd nnls(const Eigen::MatrixXd& E, const Eigen::VectorXd& f,
                     int max_iter) {
  const int n = static_cast<int>(E.cols());
  if (max_iter <= 0) max_iter = 30 * (n + 1);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 1e-12 * (1.0 + E.norm() * (1.0 + f.norm()));

  for (int outer = 0; outer < max_iter; ++outer) {
    const Eigen::VectorXd w = E.transpose() * (f - E * x);
    int t = -1;
    double wmax = tol;
    for (int j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > wmax) {
        wmax = w(j);
        t = j;
      }
    }
    if (t < 0) break;
    passive[t] = true;

    for (int inner = 0; inner < 3 * n + 3; ++inner) {
      std::vector<int> idx;
      for (int j = 0; j < n; ++j) {
        if (passive[j]) idx.push_back(j);
      }
      Eigen::MatrixXd Ep(E.rows(), static_cast<Eigen::Index>(idx.size()));
      for (std::size_t k = 0; k < idx.size(); ++k) Ep.col(k) = E.col(idx[k]);
      const Eigen::VectorXd zp = Ep.completeOrthogonalDecomposition().solve(f);
      bool feasible = true;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (zp(k) <= 0) feasible = false;
      }
      if (feasible) {
        x.setZero();
        for (std::size_t k = 0; k < idx.size(); ++k) x(idx[k]) = zp(k);
        break;
      }
      double alpha = 1.0;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (zp(k) <= 0) {
          const double denom = x(idx[k]) - zp(k);
          if (denom > 0) alpha = std::min(alpha, x(idx[k]) / denom);
        }
      }
      for (std::size_t k = 0; k < idx.size(); ++k) {
        x(idx[k]) += alpha * (zp(k) - x(idx[k]));
        if (x(idx[k]) <= 1e-15) {
          x(idx[k]) = 0.0;
          passive[idx[k]] = false;
        }
      }
    }
  }
  return x;
}

bool least_distance(const Eigen::MatrixXd& G, const Eigen::VectorXd& h,
                    Eigen::VectorXd& x) {
  // Lawson & Hanson, ch. 23: solve NNLS with E = [G^T; h^T], f = e_{n+1}.
  const int n = static_cast<int>(G.cols());
  const int m = static_cast<int>(G.rows());
  Eigen::MatrixXd E(n + 1, m);
  E.topRows(n) = G.transpose();
  E.row(n) = h.transpose();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n + 1);
  f(n) = 1.0;
  const Eigen::VectorXd u = nnls(E, f);
  const Eigen::VectorXd r = E * u - f;
  if (r.norm() < 1e-12) return false;
  x = -r.head(n) / r(n);
  return true;
}

}  // namespace nwidths::lp
