#include "rockrelax/program.hpp"

#include <cmath>
#include <string>

#include "rockrelax/errors.hpp"

namespace rockrelax {

ScenarioFunction::ScenarioFunction(Evaluator evaluate) : evaluate_(std::move(evaluate)) {}

ScenarioFunction::ScenarioFunction(Evaluator evaluate, Gradient gradient, Region valid_region)
    : evaluate_(std::move(evaluate)), gradient_(std::move(gradient)), valid_region_(std::move(valid_region)) {}

ExtReal ScenarioFunction::operator()(const Point& x) const {
  const ExtReal value = evaluate_(x);
  if (value.is_neg_inf()) throw ImproperFunctionError("scenario function returned -inf");
  return value;
}

bool ScenarioFunction::gradient_valid_at(const Point& x) const {
  if (!gradient_) return false;
  return !valid_region_ || valid_region_(x);
}

Eigen::VectorXd ScenarioFunction::gradient(const Point& x) const {
  if (!gradient_) throw DomainError("scenario function has no declared gradient");
  if (valid_region_ && !valid_region_(x)) throw DomainError("gradient requested outside its validity region");
  return gradient_(x);
}

ScenarioFunction& ScenarioFunction::with_subgradient_distance(SubgradientDistance oracle) {
  subgradient_distance_ = std::move(oracle);
  return *this;
}

double ScenarioFunction::subgradient_distance(const Point& x, const Eigen::VectorXd& w) const {
  if (subgradient_distance_) return subgradient_distance_(x, w);
  if (!(*this)(x).is_finite()) return std::numeric_limits<double>::infinity();
  return (w - gradient(x)).norm();
}

bool gradient_matches_finite_differences(const ScenarioFunction& f, const Point& x, double step, double rel_tol) {
  const Eigen::VectorXd g = f.gradient(x);
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Point plus = x, minus = x;
    plus(j) += step;
    minus(j) -= step;
    const ExtReal fp = f(plus), fm = f(minus);
    if (!fp.is_finite() || !fm.is_finite()) return false;
    const double fd = (fp.value() - fm.value()) / (2.0 * step);
    if (std::abs(fd - g(j)) > rel_tol * std::max(1.0, std::abs(fd))) return false;
  }
  return true;
}

Eigen::VectorXd CompositeBlock::aggregate(const Eigen::VectorXd& weights, const Point& x) const {
  if (static_cast<std::size_t>(weights.size()) != maps.size()) throw DimensionError("composite: weight size mismatch");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(m());
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const double w = weights(static_cast<Eigen::Index>(i));
    if (w == 0.0) continue;
    acc += w * maps[i](x);
  }
  return acc;
}

Eigen::MatrixXd CompositeBlock::component_matrix(const Point& x) const {
  Eigen::MatrixXd g(m(), static_cast<Eigen::Index>(maps.size()));
  for (std::size_t i = 0; i < maps.size(); ++i) g.col(static_cast<Eigen::Index>(i)) = maps[i](x);
  return g;
}

bool CompositeBlock::satisfied(const Eigen::VectorXd& value) const {
  return ((value - bound).array() <= feasibility_tol).all();
}

StochasticProgram::StochasticProgram(Eigen::Index n, ScenarioFunction f0, std::vector<ScenarioFunction> scenarios,
                                     ProbVector p, std::optional<CompositeBlock> composite)
    : n_(n), f0_(std::move(f0)), scenarios_(std::move(scenarios)), p_(std::move(p)), composite_(std::move(composite)) {
  if (n_ < 1) throw DimensionError("StochasticProgram: dimension must be positive");
  if (scenarios_.empty()) throw DimensionError("StochasticProgram: need at least one scenario");
  if (p_.size() != s()) throw DimensionError("StochasticProgram: p has " + std::to_string(p_.size()) +
                                             " entries for " + std::to_string(s()) + " scenarios");
  if (composite_) {
    if (static_cast<Eigen::Index>(composite_->maps.size()) != s())
      throw DimensionError("StochasticProgram: composite block needs one map per scenario");
  }
}

StochasticProgram StochasticProgram::from_support(Eigen::Index n, ScenarioFunction f0, SupportModel support,
                                                  ProbVector p) {
  std::vector<ScenarioFunction> scenarios;
  for (const auto& xi : support.points) {
    if (xi.size() != support.m) throw DimensionError("support point has wrong dimension");
    auto g = support.generator;
    ScenarioFunction::Evaluator eval = [g, xi](const Point& x) { return g(xi, x); };
    if (support.generator_gradient) {
      auto dg = support.generator_gradient;
      scenarios.emplace_back(eval, [dg, xi](const Point& x) { return dg(xi, x); });
    } else {
      scenarios.emplace_back(eval);
    }
  }
  StochasticProgram program(n, std::move(f0), std::move(scenarios), std::move(p));
  program.support_ = std::move(support);
  return program;
}

std::vector<ExtReal> StochasticProgram::scenario_values(const Point& x) const {
  if (x.size() != n_) throw DimensionError("StochasticProgram: point has wrong dimension");
  std::vector<ExtReal> out;
  out.reserve(scenarios_.size());
  for (const auto& f : scenarios_) out.push_back(f(x));
  return out;
}

Eigen::MatrixXd StochasticProgram::scenario_jacobian(const Point& x) const {
  Eigen::MatrixXd jac(s(), n_);
  for (Eigen::Index i = 0; i < s(); ++i) jac.row(i) = scenario(i).gradient(x).transpose();
  return jac;
}

StochasticProgram StochasticProgram::with_weights(ProbVector p) const {
  StochasticProgram copy = *this;
  if (p.size() != s()) throw DimensionError("with_weights: size mismatch");
  copy.p_ = std::move(p);
  return copy;
}

ExtReal weighted_sum(const Eigen::VectorXd& weights, const std::vector<ExtReal>& values) {
  if (static_cast<std::size_t>(weights.size()) != values.size()) throw DimensionError("weighted_sum: size mismatch");
  ExtReal acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += ExtReal(weights(static_cast<Eigen::Index>(i))) * values[i];
  return acc;
}

ExtReal weighted_objective(const StochasticProgram& program, const Eigen::VectorXd& weights, const Point& x) {
  if (weights.size() != program.s()) throw DimensionError("weighted_objective: weights do not match scenarios");
  ExtReal value = program.f0()(x);
  if (value.is_pos_inf()) return value;
  value += weighted_sum(weights, program.scenario_values(x));
  if (program.composite() && !value.is_pos_inf()) {
    if (!program.composite()->satisfied(program.composite()->aggregate(weights, x))) return ExtReal::pos_inf();
  }
  return value;
}

ExtReal actual_objective(const StochasticProgram& program, const Point& x) {
  return weighted_objective(program, program.p().entries(), x);
}

}  // namespace rockrelax
