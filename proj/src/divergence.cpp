#include "rockrelax/divergence.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rockrelax/errors.hpp"

namespace rockrelax {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double limit_slope_of(PhiKind kind) {
  switch (kind) {
    case PhiKind::kKullbackLeibler:
    case PhiKind::kJDivergence:
    case PhiKind::kChiSquared:
      return kInf;
    case PhiKind::kBurg:
    case PhiKind::kModifiedChiSquared:
    case PhiKind::kVariational:
    case PhiKind::kHellinger:
      return 1.0;
  }
  return kInf;
}

// Solves ln t + 1 - 1/t = slope for t > 0; the left side is increasing.
double j_divergence_inverse(double slope) {
  double lo = 0.0, hi = 1.0;
  while (std::log(hi) + 1.0 - 1.0 / hi < slope) hi *= 2.0;
  if (slope < 0.0) {
    lo = hi = 1.0;
    while (std::log(lo) + 1.0 - 1.0 / lo > slope) lo *= 0.5;
    if (lo == 0.0) return 0.0;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (std::log(mid) + 1.0 - 1.0 / mid < slope) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

PhiFamily::PhiFamily(PhiKind kind) : kind_(kind), limit_slope_(limit_slope_of(kind)) {}

std::string_view PhiFamily::name() const {
  switch (kind_) {
    case PhiKind::kKullbackLeibler: return "kl";
    case PhiKind::kBurg: return "burg";
    case PhiKind::kJDivergence: return "j";
    case PhiKind::kChiSquared: return "chi2";
    case PhiKind::kModifiedChiSquared: return "modchi2";
    case PhiKind::kVariational: return "variational";
    case PhiKind::kHellinger: return "hellinger";
  }
  return "unknown";
}

ExtReal PhiFamily::operator()(double t) const {
  if (std::isnan(t)) throw DomainError("phi: NaN argument");
  if (t < 0.0) return ExtReal::pos_inf();
  if (std::isinf(t)) return ExtReal::pos_inf();
  switch (kind_) {
    case PhiKind::kKullbackLeibler:
      return t == 0.0 ? 1.0 : t * std::log(t) - t + 1.0;
    case PhiKind::kBurg:
      if (t == 0.0) return ExtReal::pos_inf();
      return -std::log(t) + t - 1.0;
    case PhiKind::kJDivergence:
      if (t == 0.0) return ExtReal::pos_inf();
      return (t - 1.0) * std::log(t);
    case PhiKind::kChiSquared:
      return (t - 1.0) * (t - 1.0);
    case PhiKind::kModifiedChiSquared:
      if (t == 0.0) return ExtReal::pos_inf();
      return (t - 1.0) * (t - 1.0) / t;
    case PhiKind::kVariational:
      return std::abs(t - 1.0);
    case PhiKind::kHellinger: {
      const double r = std::sqrt(t) - 1.0;
      return r * r;
    }
  }
  return ExtReal::pos_inf();
}

Interval PhiFamily::conjugate_argmax(double slope) const {
  switch (kind_) {
    case PhiKind::kKullbackLeibler:
      return {std::exp(slope), std::exp(slope)};
    case PhiKind::kBurg: {
      if (slope >= 1.0) return {kInf, kInf};
      const double t = 1.0 / (1.0 - slope);
      return {t, t};
    }
    case PhiKind::kJDivergence: {
      const double t = j_divergence_inverse(slope);
      return {t, t};
    }
    case PhiKind::kChiSquared: {
      const double t = std::max(0.0, 1.0 + 0.5 * slope);
      return {t, t};
    }
    case PhiKind::kModifiedChiSquared: {
      if (slope >= 1.0) return {kInf, kInf};
      const double t = 1.0 / std::sqrt(1.0 - slope);
      return {t, t};
    }
    case PhiKind::kVariational:
      if (slope < -1.0) return {0.0, 0.0};
      if (slope == -1.0) return {0.0, 1.0};
      if (slope < 1.0) return {1.0, 1.0};
      if (slope == 1.0) return {1.0, kInf};
      return {kInf, kInf};
    case PhiKind::kHellinger: {
      if (slope >= 1.0) return {kInf, kInf};
      const double r = 1.0 / (1.0 - slope);
      return {r * r, r * r};
    }
  }
  return {kInf, kInf};
}

const std::vector<PhiFamily>& all_phi_families() {
  static const std::vector<PhiFamily> families = {
      PhiFamily(PhiKind::kKullbackLeibler), PhiFamily(PhiKind::kBurg),
      PhiFamily(PhiKind::kJDivergence),     PhiFamily(PhiKind::kChiSquared),
      PhiFamily(PhiKind::kModifiedChiSquared), PhiFamily(PhiKind::kVariational),
      PhiFamily(PhiKind::kHellinger)};
  return families;
}

PhiFamily phi_family_from_tag(std::string_view tag) {
  for (const auto& family : all_phi_families()) {
    if (family.name() == tag) return family;
  }
  throw ConfigError("unknown divergence family '" + std::string(tag) + "'");
}

ExtReal phi_eval(const PhiFamily& family, double t) { return family(t); }

ExtReal phi_divergence(const PhiFamily& family, const Eigen::VectorXd& q, const Eigen::VectorXd& q_base) {
  if (q.size() != q_base.size()) throw DimensionError("phi_divergence: length mismatch");
  ExtReal total = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double base = q_base(i);
    if (base > 0.0) {
      total += ExtReal(base) * family(q(i) / base);
    } else if (q(i) > 0.0) {
      total += ExtReal(q(i)) * ExtReal(family.limit_slope());
    } else if (q(i) < 0.0) {
      return ExtReal::pos_inf();
    }
  }
  return total;
}

PhiAxiomReport check_phi_axioms(const PhiFamily& family, int samples, double slack) {
  PhiAxiomReport report;
  report.value_at_one_zero = family(1.0) == ExtReal(0.0);
  report.positive_off_one = true;
  report.midpoint_convex = true;
  const double step = 10.0 / (samples - 1);
  for (int k = 0; k < samples; ++k) {
    const double t = k * step;
    if (t != 1.0 && !(family(t) > ExtReal(0.0))) report.positive_off_one = false;
  }
  // Midpoint inequality over all pairs on a coarser subgrid.
  const int stride = std::max(1, samples / 200);
  for (int a = 0; a < samples; a += stride) {
    for (int b = a + stride; b < samples; b += stride) {
      const double ta = a * step, tb = b * step;
      const ExtReal fa = family(ta), fb = family(tb);
      if (!fa.is_finite() || !fb.is_finite()) continue;
      const double mid = family(0.5 * (ta + tb)).value();
      const double gap = mid - 0.5 * (fa.value() + fb.value());
      if (gap > report.worst_convexity_violation) report.worst_convexity_violation = gap;
    }
  }
  report.midpoint_convex = report.worst_convexity_violation <= slack;
  return report;
}

}  // namespace rockrelax
