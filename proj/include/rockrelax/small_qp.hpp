#pragma once

#include <Eigen/Core>

namespace rockrelax {

/// minimize 1/2 z^T H z + g^T z  subject to  A_eq z = b_eq,  A_in z <= b_in,
/// with H symmetric positive definite. Sized for a few dozen variables.
struct QpProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd A_in;
  Eigen::VectorXd b_in;
};

struct QpResult {
  Eigen::VectorXd z;
  double value = 0.0;
  /// Multipliers of the inequality rows (zero for inactive rows).
  Eigen::VectorXd lambda_in;
  int iterations = 0;
};

/// Primal active-set method started from a feasible point. Throws DomainError
/// when the start is infeasible beyond tol and BudgetError if the iteration
/// cap is hit.
QpResult solve_qp(const QpProblem& problem, const Eigen::VectorXd& feasible_start, double tol = 1e-12);

}  // namespace rockrelax
