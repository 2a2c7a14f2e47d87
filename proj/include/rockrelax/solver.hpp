#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "rockrelax/grid.hpp"
#include "rockrelax/program.hpp"
#include "rockrelax/rockafellian.hpp"

namespace rockrelax {

/// Exhaustive search over a regular grid of the box.
struct GridMethod {
  Box box;
  double resolution = 1e-3;
};

/// Projected gradient with backtracking from initial_step; needs declared
/// gradients for f0 and every scenario.
struct ProjectedGradientMethod {
  Box box;
  double initial_step = 1.0;
  int iterations = 1000;
  double tolerance = 1e-14;
};

using XMethod = std::variant<GridMethod, ProjectedGradientMethod>;

const Box& method_box(const XMethod& method);

struct SolveConfig {
  int max_outer_iters = 100;
  /// Stop once an outer iteration moves (u, x) by at most u_tolerance and
  /// lowers the objective by at most objective_tolerance (relative to
  /// max(1, |value|)).
  double u_tolerance = 1e-12;
  double objective_tolerance = 1e-10;
  XMethod x_method = GridMethod{Box::cube(1, 0.0, 1.0), 1e-3};
  std::uint64_t seed = 0;
  std::optional<Eigen::VectorXd> x_start;
  /// Compare the final value with brute_force_oracle on the same grid.
  bool oracle = false;
  /// Support shifts without a closed-form prox are searched coordinatewise on
  /// [-radius, radius] with this spacing.
  double support_v_radius = 2.0;
  double support_v_resolution = 1e-3;
  int inner_iters = 50;
};

struct UStepResult {
  Eigen::VectorXd u;
  /// sum_i (p_nu + u)_i costs_i + penalty(u) - <y, u>, with 0 * inf = 0.
  ExtReal value;
};

/// Exact minimizer of the u-subproblem at fixed scenario costs over
/// { u : p_nu + u in simplex }. Entries of costs equal to +inf pin their
/// probability to zero (the step is solved on the remaining face); the value
/// is +inf when that face is empty or the penalty is infinite on it.
UStepResult u_step(const RockafellianSpec& spec, const Eigen::VectorXd& costs, const Eigen::VectorXd& y_nu);

struct InnerSolution {
  PerturbationPoint perturbation;
  ExtReal value;
};

/// min over the perturbation of f_nu(., x) - tilt at fixed x. Exact for every
/// variant except support shifts without a prox, which use the coordinate
/// grid; the support variant alternates u- and v-steps.
InnerSolution inner_minimize(const StochasticProgram& program, const RockafellianSpec& spec, const Point& x,
                             const SolveConfig& config = {});

struct XStepResult {
  Point x;
  ExtReal value;
};

/// Minimizes f_nu(perturbation, .) - tilt over x with the perturbation fixed.
/// Throws InfeasibleError when every grid point is +inf.
XStepResult x_step(const StochasticProgram& program, const RockafellianSpec& spec,
                   const PerturbationPoint& perturbation, const XMethod& method, const Point& x_start);

struct SolveReport {
  PerturbationPoint perturbation;
  Point x_final;
  ExtReal value;
  std::vector<double> objective_trace;
  /// value minus the grid oracle's value when the oracle was run.
  std::optional<double> epsilon_certificate;
  /// Optimality residual when computable (quadratic variant, declared gradients).
  std::optional<double> residual;
  int iterations = 0;
  bool converged = false;
};

/// Alternates exact perturbation steps with x-steps from u = 0 and the box
/// center. With a grid x-method each grid point is scored by its exact inner
/// minimum, so the x-step is global over the grid; projected gradient uses the
/// current perturbation. Throws UnboundedError below -1e15.
SolveReport solve_joint(const StochasticProgram& program, const RockafellianSpec& spec, const SolveConfig& config);

struct OracleResult {
  PerturbationPoint perturbation;
  Point x;
  ExtReal value;
  std::vector<double> deltas;
  /// Grid points whose (profiled) value is within deltas[k] of the minimum.
  std::vector<std::vector<Point>> argmin_sets;
  std::size_t evaluations = 0;
};

/// Exhaustive evaluation over an x-grid. For probability-only variants with
/// u_resolution > 0 the perturbation ranges over the simplex grid of that
/// spacing (s <= 4); otherwise each x is scored by inner_minimize. Throws
/// BudgetError beyond 1e8 evaluations.
OracleResult brute_force_oracle(const StochasticProgram& program, const RockafellianSpec& spec, double u_resolution,
                                const Box& x_box, double x_resolution, std::vector<double> deltas = {0.0},
                                const SolveConfig& inner = {});

/// inf over a grid of the box, as an XOracle.
XOracle grid_x_oracle(Box box, double resolution);

}  // namespace rockrelax
