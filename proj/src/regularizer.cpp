#include "rockrelax/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rockrelax/errors.hpp"

namespace rockrelax {
namespace {

Eigen::VectorXd finite_costs(const RegularizerContext& ctx, const Eigen::VectorXd& x) {
  Eigen::VectorXd f = ctx.F(x);
  if (f.size() != ctx.p_nu.size()) throw DimensionError("negative_regularizer: F(x) has wrong length");
  if (!f.allFinite()) throw DomainError("negative_regularizer: F(x) is not finite");
  return f;
}

}  // namespace

RegularizerContext::RegularizerContext(ProbVector p, double theta, Eigen::VectorXd y, Map f, Jacobian df)
    : p_nu(std::move(p)), theta_nu(theta), y_nu(std::move(y)), F(std::move(f)), dF(std::move(df)) {
  if (!(theta_nu > 0.0)) throw DomainError("RegularizerContext: theta must be positive");
  if (y_nu.size() != p_nu.size()) throw DimensionError("RegularizerContext: tilt has wrong length");
}

RegularizerResult negative_regularizer(const RegularizerContext& ctx, const Eigen::VectorXd& x) {
  const Eigen::VectorXd c = ctx.y_nu - finite_costs(ctx, x);
  const Eigen::VectorXd z = ctx.p_nu.entries() + c / ctx.theta_nu;
  const auto projection = simplex_projection(z);

  RegularizerResult result;
  result.q_star = projection.point;
  result.u_star = result.q_star - ctx.p_nu.entries();
  result.value = c.dot(result.u_star) - 0.5 * ctx.theta_nu * result.u_star.squaredNorm();
  // The anchor u = 0 is feasible, so the supremum is nonnegative; clip rounding.
  result.value = std::max(0.0, result.value);
  result.w_hat = c - ctx.theta_nu * result.u_star;
  result.active_set_margin = (z.array() - projection.threshold).abs().minCoeff();
  return result;
}

double negative_regularizer_envelope(const RegularizerContext& ctx, const Eigen::VectorXd& x) {
  const Eigen::VectorXd c = ctx.y_nu - finite_costs(ctx, x);
  const double theta = ctx.theta_nu;
  const Eigen::VectorXd d = c + theta * ctx.p_nu.entries();
  auto objective = [&](double t) {
    double total = t;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      const double w = std::min(t, d(i));
      total += -ctx.p_nu(i) * w + (c(i) - w) * (c(i) - w) / (2.0 * theta);
    }
    return total;
  };
  // psi'(t) = 1 - sum_i (d_i - t)_+ / theta is increasing; bisect its root.
  auto slope = [&](double t) { return 1.0 - (d.array() - t).cwiseMax(0.0).sum() / theta; };
  double lo = d.maxCoeff() - theta, hi = d.maxCoeff();
  for (int it = 0; it < 200 && hi > lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (slope(mid) < 0.0) lo = mid; else hi = mid;
  }
  return std::min(objective(lo), objective(hi));
}

RegularizerGradient negative_regularizer_gradient(const RegularizerContext& ctx, const Eigen::VectorXd& x) {
  if (!ctx.dF) throw DomainError("negative_regularizer_gradient: no Jacobian supplied");
  const RegularizerResult r = negative_regularizer(ctx, x);
  const Eigen::MatrixXd jac = ctx.dF(x);
  if (jac.rows() != ctx.p_nu.size() || jac.cols() != x.size())
    throw DimensionError("negative_regularizer_gradient: Jacobian has wrong shape");
  const Eigen::VectorXd c = ctx.y_nu - ctx.F(x);
  RegularizerGradient out;
  out.gradient = -(1.0 / ctx.theta_nu) * jac.transpose() * (c - r.w_hat);
  out.active_set_stable = r.active_set_margin > 1e-9 * std::max(1.0, c.cwiseAbs().maxCoeff() / ctx.theta_nu);
  return out;
}

SmoothedConstraint smoothed_constraint(const Eigen::VectorXd& b, double theta, const Eigen::VectorXd& y,
                                       const Eigen::VectorXd& v) {
  if (!(theta > 0.0)) throw DomainError("smoothed_constraint: theta must be positive");
  if (b.size() != v.size() || y.size() != v.size()) throw DimensionError("smoothed_constraint: size mismatch");
  SmoothedConstraint out;
  out.w_hat = (y + theta * (v - b)).cwiseMax(0.0);
  out.value = (v - b).dot(out.w_hat) - (y - out.w_hat).squaredNorm() / (2.0 * theta);
  out.shift = (y - out.w_hat) / theta;
  return out;
}

ConjProx upper_bound_conj_prox(Eigen::VectorXd b) {
  return [b = std::move(b)](const Eigen::VectorXd& point, double weight) {
    ConjProxResult r;
    r.w = (point - weight * b).cwiseMax(0.0);
    r.conj_value = b.dot(r.w);
    return r;
  };
}

SmoothedConstraint smoothed_constraint_generic(const ConjProx& conj_prox, double theta, const Eigen::VectorXd& y,
                                               const Eigen::VectorXd& v) {
  if (!(theta > 0.0)) throw DomainError("smoothed_constraint_generic: theta must be positive");
  if (y.size() != v.size()) throw DimensionError("smoothed_constraint_generic: size mismatch");
  const ConjProxResult prox = conj_prox(y + theta * v, theta);
  if (prox.w.size() != v.size()) throw DimensionError("smoothed_constraint_generic: oracle returned wrong size");
  SmoothedConstraint out;
  out.w_hat = prox.w;
  out.value = -(prox.conj_value - v.dot(prox.w) + (y - prox.w).squaredNorm() / (2.0 * theta));
  out.shift = (y - prox.w) / theta;
  return out;
}

}  // namespace rockrelax
