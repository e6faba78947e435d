#pragma once

#include <Eigen/Dense>

namespace nwidths::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Solution {
  Status status = Status::IterationLimit;
  double objective = 0.0;
  Eigen::VectorXd x;     // primal point
  Eigen::VectorXd dual;  // y with A^T y <= c, b^T y = objective at optimum
};

/// Minimizes c^T x subject to A x = b, x >= 0.
///
/// Dense two-phase tableau simplex with Bland's rule, intended for the small
/// problems that arise from polytope norms (tens of rows, a few hundred
/// columns). Redundant equality rows are detected in phase one and receive a
/// zero dual.
Solution solve_standard_form(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                             const Eigen::VectorXd& b, int max_pivots = 20000);

/// Lawson-Hanson non-negative least squares: argmin ||E u - f||_2, u >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& E, const Eigen::VectorXd& f,
                     int max_iter = 0);

/// Least-distance program: argmin ||x||_2 subject to G x >= h.
/// Returns false when the constraint set is empty.
bool least_distance(const Eigen::MatrixXd& G, const Eigen::VectorXd& h,
                    Eigen::VectorXd& x);

}  // namespace nwidths::lp
