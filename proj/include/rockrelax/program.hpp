#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "rockrelax/extreal.hpp"
#include "rockrelax/simplex.hpp"

namespace rockrelax {

using Point = Eigen::VectorXd;

/// A proper extended-real function on R^n, optionally with a gradient that
/// the caller declares valid on a region (the function may be discontinuous
/// elsewhere).
///
/// Evaluators must be re-entrant. An evaluator that returns -inf violates
/// properness and makes evaluation throw ImproperFunctionError.
class ScenarioFunction {
 public:
  using Evaluator = std::function<ExtReal(const Point&)>;
  using Gradient = std::function<Eigen::VectorXd(const Point&)>;
  using Region = std::function<bool(const Point&)>;
  /// dist(w, subdifferential at x); +inf where the subdifferential is empty.
  using SubgradientDistance = std::function<double(const Point&, const Eigen::VectorXd&)>;

  explicit ScenarioFunction(Evaluator evaluate);
  ScenarioFunction(Evaluator evaluate, Gradient gradient, Region valid_region = {});

  ExtReal operator()(const Point& x) const;

  bool has_gradient() const { return static_cast<bool>(gradient_); }
  bool smooth() const { return has_gradient() && !valid_region_; }
  bool gradient_valid_at(const Point& x) const;
  /// Throws DomainError when no gradient is declared or x is outside its region.
  Eigen::VectorXd gradient(const Point& x) const;

  /// Attach a subdifferential distance oracle (used for nonsmooth f0 such as
  /// indicators of convex sets).
  ScenarioFunction& with_subgradient_distance(SubgradientDistance oracle);
  /// dist(w, df(x)). Falls back to ||w - grad f(x)|| for smooth functions.
  double subgradient_distance(const Point& x, const Eigen::VectorXd& w) const;
  bool has_subgradient_distance() const { return static_cast<bool>(subgradient_distance_) || smooth(); }

 private:
  Evaluator evaluate_;
  Gradient gradient_;
  Region valid_region_;
  SubgradientDistance subgradient_distance_;
};

/// True when the declared gradient matches central differences at x within
/// rel_tol (relative to max(1, |fd|)).
bool gradient_matches_finite_differences(const ScenarioFunction& f, const Point& x, double step = 1e-6,
                                         double rel_tol = 1e-5);

/// Support points xi_i in R^m with a generator g(xi, x): scenario i is
/// g(xi_i, .).
struct SupportModel {
  using Generator = std::function<ExtReal(const Eigen::VectorXd& xi, const Point& x)>;
  using GeneratorGradient = std::function<Eigen::VectorXd(const Eigen::VectorXd& xi, const Point& x)>;
  /// Exact minimizer over v of weight * g(xi + v, x) + lambda/2 ||v||^2, when
  /// the generator has one in closed form.
  using SupportProx =
      std::function<Eigen::VectorXd(const Eigen::VectorXd& xi, const Point& x, double weight, double lambda)>;

  std::vector<Eigen::VectorXd> points;
  Generator generator;
  GeneratorGradient generator_gradient;  // optional, gradient in x
  SupportProx prox;                      // optional
  Eigen::Index m = 1;
};

/// Expectation constraint block: h(sum_i w_i G_i(x)) with h the indicator of
/// { v <= bound } componentwise.
struct CompositeBlock {
  using Map = std::function<Eigen::VectorXd(const Point&)>;
  std::vector<Map> maps;  // G_i : R^n -> R^m, one per scenario
  Eigen::VectorXd bound;
  /// Absolute slack on the bound, absorbing rounding in the weighted sum.
  double feasibility_tol = 1e-12;

  Eigen::Index m() const { return bound.size(); }
  /// sum_i weights_i G_i(x).
  Eigen::VectorXd aggregate(const Eigen::VectorXd& weights, const Point& x) const;
  Eigen::MatrixXd component_matrix(const Point& x) const;  // column i = G_i(x)
  bool satisfied(const Eigen::VectorXd& value) const;
};

/// minimize f0(x) + sum_i p_i f_i(x) [+ h(sum_i p_i G_i(x))] over x in R^n.
class StochasticProgram {
 public:
  StochasticProgram(Eigen::Index n, ScenarioFunction f0, std::vector<ScenarioFunction> scenarios, ProbVector p,
                    std::optional<CompositeBlock> composite = std::nullopt);

  /// Builds the scenarios from a support model, so scenario i agrees with
  /// g(xi_i, .) by construction.
  static StochasticProgram from_support(Eigen::Index n, ScenarioFunction f0, SupportModel support, ProbVector p);

  Eigen::Index n() const { return n_; }
  Eigen::Index s() const { return static_cast<Eigen::Index>(scenarios_.size()); }
  const ScenarioFunction& f0() const { return f0_; }
  const ScenarioFunction& scenario(Eigen::Index i) const { return scenarios_.at(static_cast<std::size_t>(i)); }
  const ProbVector& p() const { return p_; }
  const std::optional<SupportModel>& support() const { return support_; }
  const std::optional<CompositeBlock>& composite() const { return composite_; }

  /// (f_1(x), ..., f_s(x)).
  std::vector<ExtReal> scenario_values(const Point& x) const;
  /// Jacobian of F at x (row i = grad f_i(x)); throws when a gradient is missing.
  Eigen::MatrixXd scenario_jacobian(const Point& x) const;

  /// Same functions with a different probability vector.
  StochasticProgram with_weights(ProbVector p) const;

 private:
  Eigen::Index n_;
  ScenarioFunction f0_;
  std::vector<ScenarioFunction> scenarios_;
  ProbVector p_;
  std::optional<SupportModel> support_;
  std::optional<CompositeBlock> composite_;
};

/// f0(x) + sum_i weights_i * f_i(x) (+ the composite indicator), with
/// extended arithmetic: a zero weight annihilates an infinite scenario value.
ExtReal weighted_objective(const StochasticProgram& program, const Eigen::VectorXd& weights, const Point& x);

/// weighted_objective at the program's own p.
ExtReal actual_objective(const StochasticProgram& program, const Point& x);

/// sum_i weights_i * values_i in extended arithmetic.
ExtReal weighted_sum(const Eigen::VectorXd& weights, const std::vector<ExtReal>& values);

}  // namespace rockrelax
