#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "rockrelax/divergence.hpp"
#include "rockrelax/extreal.hpp"
#include "rockrelax/program.hpp"
#include "rockrelax/simplex.hpp"

namespace rockrelax {

enum class Variant { kExactIndicator, kQuadraticPenalty, kPhiDivergence, kSupportPerturbation, kL1Penalty, kComposite };

std::string_view variant_name(Variant variant);
/// Inverse of variant_name ("exact", "quadratic", "phi", "support", "l1",
/// "composite"). Throws ConfigError.
Variant variant_from_name(std::string_view name);

/// Selects a Rockafellian and its penalty parameters.
///
/// - ExactIndicator: f(u,x) = f0 + sum (p_i + u_i) f_i + iota_{0}(u), using the
///   program's own p.
/// - QuadraticPenalty: f0 + sum (p_nu + u)_i f_i + theta/2 |u|^2 + iota_simplex(p_nu + u).
/// - PhiDivergence: as above with theta * d_Phi(p_nu + u | p_nu).
/// - SupportPerturbation: f0 + sum (p_nu + u)_i g(xi_nu_i + v_i, x)
///   + theta/2 |u|^2 + lambda/2 |v|^2 + iota_simplex(p_nu + u).
/// - L1Penalty: f0 + sum (p_nu + u)_i f_i + theta |u|_1 + iota_simplex(p_nu + u).
/// - Composite: f0 + sum (p_nu + u)_i f_i + iota(v + sum (p_nu + u)_i G_i(x) <= b)
///   + theta/2 |u|^2 + theta/2 |v|^2 + iota_simplex(p_nu + u). With
///   perturb_weights off, u is pinned to 0 and only the constraint shift v moves.
struct RockafellianSpec {
  Variant variant = Variant::kExactIndicator;
  std::optional<ProbVector> p_nu;
  double theta = 0.0;
  double lambda = 0.0;
  /// Tilt on u (length s); empty means zero.
  Eigen::VectorXd y_nu;
  /// Tilt on v (length s*m for support, m for composite); empty means zero.
  Eigen::VectorXd y_shift;
  std::optional<PhiFamily> phi;
  std::vector<Eigen::VectorXd> xi_nu;
  bool perturb_weights = true;

  static RockafellianSpec exact();
  static RockafellianSpec quadratic(ProbVector p_nu, double theta, Eigen::VectorXd y_nu = {});
  static RockafellianSpec phi_divergence(ProbVector p_nu, double theta, PhiFamily family);
  static RockafellianSpec support(ProbVector p_nu, std::vector<Eigen::VectorXd> xi_nu, double theta, double lambda);
  static RockafellianSpec l1(ProbVector p_nu, double theta);
  static RockafellianSpec composite(ProbVector p_nu, double theta, bool perturb_weights = true);

  /// Throws DimensionError/DomainError when inconsistent with the program.
  void validate(const StochasticProgram& program) const;

  /// p_nu, or the program's p for ExactIndicator.
  const ProbVector& weights(const StochasticProgram& program) const;
  Eigen::VectorXd tilt_u(Eigen::Index s) const;
  Eigen::VectorXd tilt_v(Eigen::Index size) const;
};

/// Perturbation (u, v): u in R^s moves probabilities, v moves the support
/// points (length s*m) or the constraint (length m). Empty v means none.
struct PerturbationPoint {
  Eigen::VectorXd u;
  Eigen::VectorXd v;

  static PerturbationPoint zero(const StochasticProgram& program, const RockafellianSpec& spec);
};

/// f(u, x) of the exact Rockafellian anchored at u = 0.
ExtReal eval_exact(const StochasticProgram& program, const PerturbationPoint& perturbation, const Point& x);

/// The approximating f_nu(u, x) of the variant, minus <y, u> (and <y_shift, v>)
/// when include_tilt is set.
ExtReal eval_approx(const RockafellianSpec& spec, const StochasticProgram& program,
                    const PerturbationPoint& perturbation, const Point& x, bool include_tilt = true);

/// eval_exact for ExactIndicator, eval_approx without tilt otherwise.
ExtReal eval_rockafellian(const RockafellianSpec& spec, const StochasticProgram& program,
                          const PerturbationPoint& perturbation, const Point& x);

/// inf over x of a function of x (a grid oracle, typically).
using XOracle = std::function<ExtReal(const std::function<ExtReal(const Point&)>&)>;

struct ExactnessCertificate {
  bool passed = true;
  /// The inequality is strict at every sample u != 0.
  bool strict = true;
  double anchor_value = 0.0;
  /// min over samples of inf_x f(u,x) - inf_x f(0,x) - <y_bar, u>.
  double worst_gap = std::numeric_limits<double>::infinity();
  std::size_t worst_index = 0;
  std::size_t violations = 0;
  std::vector<double> gaps;
};

/// Checks inf_x f(u,x) >= inf_x f(0,x) + <y_bar, u> over the sampled u.
/// Samples run in parallel; the reduction is in sample order.
ExactnessCertificate check_exactness_certificate(const RockafellianSpec& spec, const StochasticProgram& program,
                                                 const Eigen::VectorXd& y_bar,
                                                 const std::vector<PerturbationPoint>& u_samples,
                                                 const XOracle& x_oracle, double tol = 1e-12);

/// Vertices of simplex - base followed by `count` seeded uniform points of
/// simplex - base, as perturbations u.
std::vector<PerturbationPoint> default_u_samples(const ProbVector& base, std::size_t count, std::uint64_t seed);

}  // namespace rockrelax
