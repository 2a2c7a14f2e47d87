#include "rockrelax/small_qp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "rockrelax/errors.hpp"

namespace rockrelax {
namespace {

Eigen::MatrixXd stack_rows(const QpProblem& qp, const std::vector<Eigen::Index>& working) {
  const Eigen::Index n = qp.H.rows();
  Eigen::MatrixXd a(qp.A_eq.rows() + static_cast<Eigen::Index>(working.size()), n);
  if (qp.A_eq.rows() > 0) a.topRows(qp.A_eq.rows()) = qp.A_eq;
  for (std::size_t k = 0; k < working.size(); ++k) a.row(qp.A_eq.rows() + static_cast<Eigen::Index>(k)) = qp.A_in.row(working[k]);
  return a;
}

Eigen::Index rank_of(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  return lu.rank();
}

}  // namespace

QpResult solve_qp(const QpProblem& qp, const Eigen::VectorXd& start, double tol) {
  const Eigen::Index n = qp.H.rows();
  if (qp.H.cols() != n || qp.g.size() != n || start.size() != n) throw DimensionError("solve_qp: size mismatch");
  const Eigen::Index m_eq = qp.A_eq.rows();
  const Eigen::Index m_in = qp.A_in.rows();
  if ((m_eq > 0 && qp.A_eq.cols() != n) || (m_in > 0 && qp.A_in.cols() != n) || qp.b_eq.size() != m_eq ||
      qp.b_in.size() != m_in)
    throw DimensionError("solve_qp: constraint shapes");

  Eigen::VectorXd z = start;
  const double feas_tol = 1e-9;
  if (m_eq > 0 && (qp.A_eq * z - qp.b_eq).cwiseAbs().maxCoeff() > feas_tol) throw DomainError("solve_qp: start violates equalities");
  if (m_in > 0 && (qp.A_in * z - qp.b_in).maxCoeff() > feas_tol) throw DomainError("solve_qp: start violates inequalities");

  // Initial working set: active rows kept linearly independent of the rest.
  std::vector<Eigen::Index> working;
  Eigen::Index current_rank = rank_of(qp.A_eq);
  for (Eigen::Index i = 0; i < m_in; ++i) {
    if (qp.b_in(i) - qp.A_in.row(i).dot(z) > feas_tol) continue;
    working.push_back(i);
    const Eigen::Index r = rank_of(stack_rows(qp, working));
    if (r > current_rank) current_rank = r; else working.pop_back();
  }

  QpResult result;
  const int max_iter = 50 * static_cast<int>(n + m_in + 1);
  for (int iter = 0; iter < max_iter; ++iter) {
    result.iterations = iter + 1;
    const Eigen::MatrixXd a = stack_rows(qp, working);
    const Eigen::VectorXd grad = qp.H * z + qp.g;

    Eigen::VectorXd step = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd basis;
    if (a.rows() == 0) {
      basis = Eigen::MatrixXd::Identity(n, n);
    } else {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      lu.setThreshold(1e-10);
      basis = lu.kernel();
      if (lu.rank() == n) basis.resize(n, 0);
    }
    if (basis.cols() > 0) {
      const Eigen::MatrixXd reduced = basis.transpose() * qp.H * basis;
      step = -basis * reduced.ldlt().solve(basis.transpose() * grad);
    }

    const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
    if (step.cwiseAbs().maxCoeff() <= tol * scale) {
      // Stationary on the working set: check inequality multipliers.
      Eigen::VectorXd lambda = Eigen::VectorXd::Zero(a.rows());
      if (a.rows() > 0) lambda = a.transpose().completeOrthogonalDecomposition().solve(-(grad + qp.H * step));
      Eigen::Index worst = -1;
      double most_negative = -1e-12 * std::max(1.0, grad.cwiseAbs().maxCoeff());
      for (std::size_t k = 0; k < working.size(); ++k) {
        const double l = lambda(m_eq + static_cast<Eigen::Index>(k));
        if (l < most_negative) {
          most_negative = l;
          worst = static_cast<Eigen::Index>(k);
        }
      }
      if (worst < 0) {
        result.lambda_in = Eigen::VectorXd::Zero(m_in);
        for (std::size_t k = 0; k < working.size(); ++k)
          result.lambda_in(working[k]) = lambda(m_eq + static_cast<Eigen::Index>(k));
        result.z = z;
        result.value = 0.5 * z.dot(qp.H * z) + qp.g.dot(z);
        return result;
      }
      working.erase(working.begin() + worst);
      continue;
    }

    // Longest feasible step along `step`, up to the full step.
    double alpha = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index i = 0; i < m_in; ++i) {
      if (std::find(working.begin(), working.end(), i) != working.end()) continue;
      const double rate = qp.A_in.row(i).dot(step);
      if (rate <= 1e-14 * step.cwiseAbs().maxCoeff() * std::max(1.0, qp.A_in.row(i).cwiseAbs().maxCoeff())) continue;
      const double slack = std::max(0.0, qp.b_in(i) - qp.A_in.row(i).dot(z));
      const double reach = slack / rate;
      if (reach < alpha) {
        alpha = reach;
        blocking = i;
      }
    }
    z += alpha * step;
    if (blocking >= 0) working.push_back(blocking);
  }
  throw BudgetError("solve_qp: iteration limit reached");
}

}  // namespace rockrelax
