#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rockrelax/grid.hpp"
#include "rockrelax/program.hpp"
#include "rockrelax/rockafellian.hpp"
#include "rockrelax/solver.hpp"

namespace rockrelax {

/// f0 restricted to a box: value(x) inside, +inf outside. The gradient is
/// declared on the box and the subdifferential distance accounts for the
/// box normal cone.
ScenarioFunction box_restricted(const Box& box, ScenarioFunction::Evaluator value = {},
                                ScenarioFunction::Gradient gradient = {});

enum class CatalogTag { kLinear, kQuadratic, kHinge, kHeaviside, kIndicatorBox, kCrossEntropy };

std::string_view catalog_tag_name(CatalogTag tag);
/// "linear", "quadratic", "hinge", "heaviside", "indicator-box",
/// "cross-entropy". Throws ConfigError.
CatalogTag catalog_tag_from_name(std::string_view name);

/// One function from the formula catalog.
///
/// - linear: <a, x> + b
/// - quadratic: weight/2 |x - a|^2 + b
/// - hinge: max{0, 1 - b <a, x>} with label b in {-1, 1}
/// - heaviside: H(<a, x> + b), H(t) = 1 for t > 0 and 0 otherwise
/// - indicator-box: 0 on [lo, hi], +inf elsewhere
/// - cross-entropy: log(1 + exp(-b <a, x>)) with label b in {-1, 1}
struct CatalogTerm {
  CatalogTag tag = CatalogTag::kLinear;
  Eigen::VectorXd a;
  double b = 0.0;
  double weight = 1.0;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

/// Heaviside terms have no declared gradient; every other tag does.
bool catalog_has_gradient(CatalogTag tag);
ScenarioFunction make_catalog_function(const CatalogTerm& term);

/// How the nominal weights p_nu depend on nu.
///
/// - none: p_nu = p
/// - mix: p_nu = (1 - 1/nu) p + (1/nu) direction
/// - shift: p_nu = projection of p + direction / nu onto the simplex
/// - empirical: frequencies of nu draws from p
enum class PerturbationKind { kNone, kMix, kShift, kEmpirical };

struct PerturbationDef {
  PerturbationKind kind = PerturbationKind::kNone;
  Eigen::VectorXd direction;
};

/// Where the constant z_bar of a covariance block comes from.
enum class ZbarMode { kNominal, kFrozen };

/// Expectation constraint sum_i w_i G_i(x) <= bound with affine maps
/// G_i(x) = matrices[i] x + offsets[i], or in covariance form
/// G_i(x) = (z_i - z_bar) <features_i, x> with z_bar = sum_i w_i z_i.
struct CompositeDef {
  Eigen::VectorXd bound;
  std::vector<Eigen::MatrixXd> matrices;
  std::vector<Eigen::VectorXd> offsets;
  bool covariance = false;
  Eigen::VectorXd z;
  std::vector<Eigen::VectorXd> features;
  ZbarMode zbar = ZbarMode::kNominal;
};

/// A fully resolved instance. f0 is the sum of f0_terms restricted to box.
struct InstanceDef {
  std::string name;
  Eigen::Index n = 1;
  Eigen::Index s = 1;
  std::vector<CatalogTerm> f0_terms;
  std::vector<CatalogTerm> scenarios;
  ProbVector p{Eigen::VectorXd::Ones(1)};
  Box box = Box::cube(1, 0.0, 1.0);
  std::optional<CompositeDef> composite;
  PerturbationDef perturbation;

  /// Every f0 term and scenario has a declared gradient.
  bool has_gradients() const;
  ProbVector weights_at(std::uint64_t nu, std::uint64_t seed = 0) const;
  StochasticProgram program(const ProbVector& weights) const;
  StochasticProgram actual() const { return program(p); }
  StochasticProgram perturbed(std::uint64_t nu, std::uint64_t seed = 0) const { return program(weights_at(nu, seed)); }
};

/// Parses an instance document
///   {name, n, s, scenarios: [{tag, params}], p, box: {lo, hi}, f0?: [{tag, params}],
///    composite?, perturbation?: {kind, params}, x_method?}.
/// Throws ConfigError naming the offending field as a JSON pointer.
InstanceDef build_from_config(const nlohmann::json& doc);

/// {"kind": "grid", "resolution": r} or {"kind": "gradient", "initial_step"?,
/// "iterations"?, "tolerance"?} over the given box.
XMethod parse_x_method(const nlohmann::json& doc, const Box& box, const std::string& path);

/// Rejects gradient-based x-methods on instances without declared gradients.
void check_x_method(const InstanceDef& instance, const XMethod& method);

struct ExampleInstance {
  StochasticProgram actual;
  StochasticProgram perturbed;
  RockafellianSpec spec;
  Box box;
  /// Grid spacing at which the example is reproduced.
  double resolution = 1e-3;
};

/// ex21: g(xi, x) = xi x + (1 - x)/2 on [0, 1], support {0, nu}, actual p = (1, 0),
///   perturbed (1 - 1/nu, 1/nu); quadratic penalty on the theta schedule.
/// ex22: fair linear SVM in x = (a, alpha) on [-1, 1]^2 with hinge losses, a^2
///   and the covariance constraint at t = 1/4; data (-1,-1,0), (1,1,1), (nu,1,1)
///   with actual p = (1/2, 1/2, 0) and perturbed (1/2, 1/2 - 1/nu, 1/nu);
///   composite relaxation on the theta schedule.
/// ex23: f0 = (x - 1)^2 / 4 on [0, 1], f_i = H(xi_i + x) on support {0, 1}
///   against {1/nu, 1}, p = (1/2, 1/2); support relaxation with
///   lambda = nu^(4/3).
/// Throws ConfigError for unknown names and DomainError for nu < 2.
ExampleInstance build_example(std::string_view name, std::uint64_t nu, ZbarMode zbar = ZbarMode::kNominal);

std::vector<std::string> builtin_example_names();

/// f_1 = 2x, f_2 = 1.3 (1 - x) on [0, 1] with p = (1/2, 1/2). The L1
/// relaxation anchored at p is exact exactly when theta >= 0.65.
StochasticProgram l1_calmness_instance();

/// Seeded strongly convex instance on [-1, 1]^n: f_i = w_i/2 |x - c_i|^2 with
/// p bounded below by 1/(2s) and a shift perturbation of size about 1/nu.
InstanceDef random_convex_instance(std::uint64_t seed, Eigen::Index n, Eigen::Index s);

/// f0 = x^2 on [-10, 10], three affine scenarios, shift perturbation.
InstanceDef smooth_convex_instance();

}  // namespace rockrelax
