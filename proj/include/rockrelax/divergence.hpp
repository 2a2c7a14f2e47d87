#pragma once

#include <Eigen/Core>
#include <string_view>
#include <vector>

#include "rockrelax/extreal.hpp"
#include "rockrelax/simplex.hpp"

namespace rockrelax {

enum class PhiKind { kKullbackLeibler, kBurg, kJDivergence, kChiSquared, kModifiedChiSquared, kVariational, kHellinger };

/// Closed interval [lo, hi] of minimizers, hi possibly +inf.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// A convex Phi with Phi(1) = 0 and a unique minimizer at 1, together with
/// lim_{t -> inf} Phi(t) / t.
class PhiFamily {
 public:
  explicit PhiFamily(PhiKind kind);

  PhiKind kind() const { return kind_; }
  std::string_view name() const;
  /// Phi(t); +inf for t < 0.
  ExtReal operator()(double t) const;
  /// lim Phi(t)/t as t -> inf; +inf for superlinear families.
  double limit_slope() const { return limit_slope_; }

  /// argmin over t >= 0 of Phi(t) - slope * t, i.e. the inverse of the
  /// subdifferential of Phi restricted to [0, inf). Set-valued in general.
  Interval conjugate_argmax(double slope) const;

 private:
  PhiKind kind_;
  double limit_slope_;
};

/// All seven families in a fixed order.
const std::vector<PhiFamily>& all_phi_families();

/// Parse a family tag such as "kl", "burg", "j", "chi2", "modchi2",
/// "variational", "hellinger". Throws ConfigError on an unknown tag.
PhiFamily phi_family_from_tag(std::string_view tag);

ExtReal phi_eval(const PhiFamily& family, double t);

/// sum_i q_base_i Phi(q_i / q_base_i) with 0 Phi(0/0) = 0 and
/// 0 Phi(b/0) = b * limit_slope.
ExtReal phi_divergence(const PhiFamily& family, const Eigen::VectorXd& q, const Eigen::VectorXd& q_base);
inline ExtReal phi_divergence(const PhiFamily& family, const ProbVector& q, const ProbVector& q_base) {
  return phi_divergence(family, q.entries(), q_base.entries());
}

struct PhiAxiomReport {
  bool value_at_one_zero = false;
  bool positive_off_one = false;
  bool midpoint_convex = false;
  double worst_convexity_violation = 0.0;
  bool ok() const { return value_at_one_zero && positive_off_one && midpoint_convex; }
};

/// Samples Phi on [0, 10]: Phi(1) = 0, Phi(t) > 0 for t != 1 and the midpoint
/// inequality with the given slack.
PhiAxiomReport check_phi_axioms(const PhiFamily& family, int samples = 2001, double slack = 1e-10);

}  // namespace rockrelax
