#pragma once

#include <Eigen/Core>
#include <functional>

#include "rockrelax/simplex.hpp"

namespace rockrelax {

/// Data defining the negative regularizer r(x) for the quadratic penalty:
/// nominal weights p_nu, penalty theta_nu > 0, tilt y_nu and the scenario map
/// F(x) = (f_1(x), ..., f_s(x)) with optional Jacobian.
struct RegularizerContext {
  using Map = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using Jacobian = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  RegularizerContext(ProbVector p_nu, double theta_nu, Eigen::VectorXd y_nu, Map F, Jacobian dF = {});

  ProbVector p_nu;
  double theta_nu;
  Eigen::VectorXd y_nu;
  Map F;
  Jacobian dF;
};

struct RegularizerResult {
  double value = 0.0;
  Eigen::VectorXd u_star;
  Eigen::VectorXd w_hat;
  Eigen::VectorXd q_star;
  /// Smallest gap between a projected coordinate and the projection threshold.
  /// Zero means the active set is degenerate.
  double active_set_margin = 0.0;
};

/// r(x) = sup_u { <c, u> - theta/2 |u|^2 : p_nu + u in simplex } with
/// c = y_nu - F(x), evaluated through the simplex projection.
RegularizerResult negative_regularizer(const RegularizerContext& ctx, const Eigen::VectorXd& x);

/// Same quantity through min_w { max_i w_i - <p_nu, w> + |c - w|^2 / (2 theta) }.
/// For fixed t = max_i w_i the inner minimizer is w_i = min(t, c_i + theta p_i),
/// leaving a convex problem in t.
double negative_regularizer_envelope(const RegularizerContext& ctx, const Eigen::VectorXd& x);

struct RegularizerGradient {
  Eigen::VectorXd gradient;
  /// False when the projection active set is degenerate at x; the gradient is
  /// then one element of the subdifferential.
  bool active_set_stable = true;
};

/// grad r(x) = -(1/theta) dF(x)^T (y_nu - F(x) - w_hat) = -dF(x)^T u_star.
RegularizerGradient negative_regularizer_gradient(const RegularizerContext& ctx, const Eigen::VectorXd& x);

struct SmoothedConstraint {
  double value = 0.0;
  /// Maximizer w_hat, also the gradient of the smoothed function at v.
  Eigen::VectorXd w_hat;
  /// Minimizing shift u* = (y - w_hat) / theta, so that u* + v <= b.
  Eigen::VectorXd shift;
};

/// Smoothed upper-bound indicator:
/// h_nu(v) = inf_u { iota(u + v <= b) + theta/2 |u|^2 - <y, u> }
///         = max_{w >= 0} <v - b, w> - |y - w|^2 / (2 theta).
SmoothedConstraint smoothed_constraint(const Eigen::VectorXd& b, double theta_nu, const Eigen::VectorXd& y_nu,
                                       const Eigen::VectorXd& v);

/// Proximal point of the conjugate h* with the value of h* there.
struct ConjProxResult {
  Eigen::VectorXd w;
  double conj_value = 0.0;
};
/// conj_prox(point, weight) = argmin_w { h*(w) + |w - point|^2 / (2 weight) }.
using ConjProx = std::function<ConjProxResult(const Eigen::VectorXd& point, double weight)>;

/// Oracle for h = indicator of {v <= b}: h*(w) = <b, w> on w >= 0.
ConjProx upper_bound_conj_prox(Eigen::VectorXd b);

/// h_nu(v) = -min_w { h*(w) - <v, w> + |y - w|^2 / (2 theta) } for a caller's
/// proper lsc convex h given through its conjugate prox.
SmoothedConstraint smoothed_constraint_generic(const ConjProx& conj_prox, double theta_nu, const Eigen::VectorXd& y_nu,
                                               const Eigen::VectorXd& v);

}  // namespace rockrelax
