#include "rockrelax/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "rockrelax/analysis.hpp"
#include "rockrelax/errors.hpp"
#include "rockrelax/regularizer.hpp"
#include "rockrelax/small_qp.hpp"

namespace rockrelax {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUnboundedThreshold = -1e15;
constexpr std::size_t kMaxEvaluations = 100'000'000;

std::vector<bool> finite_face(const Eigen::VectorXd& costs) {
  std::vector<bool> face(static_cast<std::size_t>(costs.size()));
  for (Eigen::Index i = 0; i < costs.size(); ++i) {
    if (std::isnan(costs(i)) || costs(i) == -kInf) throw DomainError("u_step: costs must be finite or +inf");
    face[static_cast<std::size_t>(i)] = costs(i) < kInf;
  }
  return face;
}

Eigen::Index first_min_on_face(const Eigen::VectorXd& c, const std::vector<bool>& face) {
  Eigen::Index best = -1;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (face[static_cast<std::size_t>(i)] && (best < 0 || c(i) < c(best))) best = i;
  }
  return best;
}

Eigen::VectorXd vertex_on(Eigen::Index s, Eigen::Index j) {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(s);
  q(j) = 1.0;
  return q;
}

// sum_i q_i costs_i (0 * inf = 0) + penalty(u) - <y, u>.
ExtReal subproblem_value(const RockafellianSpec& spec, const Eigen::VectorXd& p, const Eigen::VectorXd& costs,
                         const Eigen::VectorXd& y, const Eigen::VectorXd& u) {
  const Eigen::VectorXd q = p + u;
  ExtReal total = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (q(i) > 0.0) total += ExtReal(q(i)) * ExtReal(costs(i));
  }
  switch (spec.variant) {
    case Variant::kQuadraticPenalty:
    case Variant::kSupportPerturbation:
    case Variant::kComposite:
      total += 0.5 * spec.theta * u.squaredNorm();
      break;
    case Variant::kPhiDivergence:
      if (spec.theta > 0.0) total += ExtReal(spec.theta) * phi_divergence(*spec.phi, q, p);
      break;
    case Variant::kL1Penalty:
      total += spec.theta * u.lpNorm<1>();
      break;
    case Variant::kExactIndicator:
      break;
  }
  if (total.is_pos_inf()) return total;
  return total + ExtReal(-y.dot(u));
}

Eigen::VectorXd quadratic_weights(const Eigen::VectorXd& p, double theta, const Eigen::VectorXd& c,
                                  const std::vector<bool>& face) {
  const Eigen::Index s = p.size();
  if (theta == 0.0) return vertex_on(s, first_min_on_face(c, face));
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < s; ++i) {
    if (face[static_cast<std::size_t>(i)]) idx.push_back(i);
  }
  Eigen::VectorXd z(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) z(static_cast<Eigen::Index>(k)) = p(idx[k]) - c(idx[k]) / theta;
  const auto proj = simplex_projection(z);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(s);
  for (std::size_t k = 0; k < idx.size(); ++k) q(idx[k]) = proj.point(static_cast<Eigen::Index>(k));
  return q;
}

// Donors are coordinates whose cost exceeds the cheapest by more than 2 theta;
// all donated mass goes to the cheapest coordinate.
Eigen::VectorXd l1_weights(const Eigen::VectorXd& p, double theta, const Eigen::VectorXd& c,
                           const std::vector<bool>& face) {
  const Eigen::Index j = first_min_on_face(c, face);
  Eigen::VectorXd q = p;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i == j) continue;
    if (!face[static_cast<std::size_t>(i)] || c(i) > c(j) + 2.0 * theta) q(i) = 0.0;
  }
  q(j) = 0.0;
  q(j) = 1.0 - q.sum();
  return q;
}

// Separable dual with one multiplier mu for sum q = 1: coordinate i takes
// q_i = p_i t with t in argmin Phi(t) - ((mu - c_i)/theta) t, and a zero-weight
// coordinate absorbs mass only at mu = c_i + theta * limit_slope.
std::optional<Eigen::VectorXd> phi_weights(const PhiFamily& phi, const Eigen::VectorXd& p, double theta,
                                           const Eigen::VectorXd& c, const std::vector<bool>& face) {
  const Eigen::Index s = p.size();
  if (theta == 0.0) return vertex_on(s, first_min_on_face(c, face));
  const double slope_cap = phi.limit_slope();

  auto interval = [&](Eigen::Index i, double mu) -> Interval {
    if (p(i) > 0.0) {
      const Interval t = phi.conjugate_argmax((mu - c(i)) / theta);
      return {p(i) * t.lo, p(i) * t.hi};
    }
    if (mu < c(i) + theta * slope_cap) return {0.0, 0.0};
    return {0.0, kInf};
  };
  auto mass = [&](double mu, bool upper) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < s; ++i) {
      if (!face[static_cast<std::size_t>(i)]) continue;
      const Interval iv = interval(i, mu);
      total += upper ? iv.hi : iv.lo;
    }
    return total;
  };

  double cap = kInf, lo = kInf, hi = -kInf;
  for (Eigen::Index i = 0; i < s; ++i) {
    if (!face[static_cast<std::size_t>(i)]) continue;
    cap = std::min(cap, c(i) + theta * slope_cap);
    lo = std::min(lo, c(i));
    hi = std::max(hi, c(i));
  }
  hi = std::min(hi, cap);
  for (int k = 0; mass(lo, false) > 1.0; ++k) {
    if (k > 2000) return std::nullopt;
    lo -= theta * std::ldexp(1.0, k);
  }
  for (int k = 0; mass(hi, true) < 1.0; ++k) {
    if (k > 2000 || hi >= cap) return std::nullopt;
    hi = std::min(cap, hi + theta * std::ldexp(1.0, k));
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (mass(mid, true) >= 1.0) hi = mid; else lo = mid;
  }

  Eigen::VectorXd q = Eigen::VectorXd::Zero(s);
  Eigen::VectorXd room = Eigen::VectorXd::Zero(s);
  for (Eigen::Index i = 0; i < s; ++i) {
    if (!face[static_cast<std::size_t>(i)]) continue;
    q(i) = interval(i, lo).lo;
    room(i) = interval(i, hi).hi - q(i);
  }
  double remainder = 1.0 - q.sum();
  for (Eigen::Index i = 0; i < s && remainder > 0.0; ++i) {
    const double add = std::min(std::max(0.0, room(i)), remainder);
    q(i) += add;
    remainder -= add;
  }
  if (!q.allFinite() || !(q.sum() > 0.0)) return std::nullopt;
  return q / q.sum();
}

ExtReal objective_at(const StochasticProgram& program, const RockafellianSpec& spec,
                     const PerturbationPoint& perturbation, const Point& x) {
  if (spec.variant == Variant::kExactIndicator) return eval_exact(program, perturbation, x);
  return eval_approx(spec, program, perturbation, x, true);
}

void check_bounded(const ExtReal& value) {
  if (value.value() < kUnboundedThreshold) throw UnboundedError("objective fell below -1e15");
}

Eigen::VectorXd scenario_costs(const StochasticProgram& program, const Point& x) {
  const auto values = program.scenario_values(x);
  Eigen::VectorXd costs(program.s());
  for (Eigen::Index i = 0; i < program.s(); ++i) costs(i) = values[static_cast<std::size_t>(i)].value();
  return costs;
}

// Coordinatewise grid search for min_v weight * g(xi + v, x) + lambda/2 |v|^2 - <y, v>.
Eigen::VectorXd support_shift_by_grid(const SupportModel& support, const Eigen::VectorXd& xi, const Point& x,
                                      double weight, double lambda, const Eigen::VectorXd& y,
                                      Eigen::VectorXd v, const SolveConfig& config) {
  auto score = [&](const Eigen::VectorXd& shift) {
    const ExtReal g = support.generator(xi + shift, x);
    ExtReal total = weight > 0.0 ? ExtReal(weight) * g : ExtReal(0.0);
    return (total + ExtReal(0.5 * lambda * shift.squaredNorm() - y.dot(shift))).value();
  };
  const long steps = std::lround(2.0 * config.support_v_radius / config.support_v_resolution);
  double best = score(v);
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    Eigen::VectorXd trial = v;
    for (long k = 0; k <= steps; ++k) {
      trial(j) = -config.support_v_radius + (static_cast<double>(k) * 2.0 * config.support_v_radius) / static_cast<double>(steps);
      const double value = score(trial);
      if (value < best) {
        best = value;
        v(j) = trial(j);
      }
    }
  }
  return v;
}

InnerSolution support_inner(const StochasticProgram& program, const RockafellianSpec& spec, const Point& x,
                            const SolveConfig& config) {
  const auto& support = *program.support();
  const Eigen::Index s = program.s(), m = support.m;
  if (!(spec.lambda > 0.0)) throw DomainError("support variant needs lambda > 0 to move support points");
  const Eigen::VectorXd y_u = spec.tilt_u(s);
  const Eigen::VectorXd y_v = spec.tilt_v(s * m);
  if (support.prox && !(y_v.array() == 0.0).all()) throw DomainError("support prox does not take a tilt on v");

  InnerSolution best{PerturbationPoint::zero(program, spec), objective_at(program, spec, PerturbationPoint::zero(program, spec), x)};
  if (program.f0()(x).is_pos_inf()) return best;
  PerturbationPoint current = best.perturbation;
  for (int it = 0; it < config.inner_iters; ++it) {
    Eigen::VectorXd costs(s);
    for (Eigen::Index i = 0; i < s; ++i)
      costs(i) = support.generator(spec.xi_nu[static_cast<std::size_t>(i)] + current.v.segment(i * m, m), x).value();
    current.u = u_step(spec, costs, y_u).u;
    const Eigen::VectorXd q = spec.p_nu->entries() + current.u;
    for (Eigen::Index i = 0; i < s; ++i) {
      const Eigen::VectorXd& xi = spec.xi_nu[static_cast<std::size_t>(i)];
      Eigen::VectorXd vi;
      if (support.prox) {
        vi = support.prox(xi, x, std::max(0.0, q(i)), spec.lambda);
      } else {
        vi = support_shift_by_grid(support, xi, x, std::max(0.0, q(i)), spec.lambda, y_v.segment(i * m, m),
                                   current.v.segment(i * m, m), config);
      }
      current.v.segment(i * m, m) = vi;
    }
    const ExtReal value = objective_at(program, spec, current, x);
    const bool clear_gain = value.is_finite() && (best.value.is_pos_inf() ||
                            value.value() < best.value.value() - 1e-15 * std::max(1.0, std::abs(value.value())));
    if (value < best.value) best = {current, value};
    if (!clear_gain) break;
  }
  return best;
}

InnerSolution composite_inner(const StochasticProgram& program, const RockafellianSpec& spec, const Point& x) {
  const auto& block = *program.composite();
  const Eigen::Index s = program.s(), m = block.m();
  const Eigen::VectorXd& p = spec.p_nu->entries();
  const Eigen::VectorXd y_u = spec.tilt_u(s);
  const Eigen::VectorXd y_v = spec.tilt_v(m);
  PerturbationPoint point = PerturbationPoint::zero(program, spec);
  if (program.f0()(x).is_pos_inf()) return {point, ExtReal::pos_inf()};

  if (!spec.perturb_weights) {
    point.v = smoothed_constraint(block.bound, spec.theta, y_v, block.aggregate(p, x)).shift;
    return {point, objective_at(program, spec, point, x)};
  }

  const Eigen::VectorXd costs = scenario_costs(program, x);
  const std::vector<bool> face = finite_face(costs);
  std::vector<Eigen::Index> pinned;
  for (Eigen::Index i = 0; i < s; ++i) {
    if (!face[static_cast<std::size_t>(i)]) pinned.push_back(i);
  }
  if (static_cast<Eigen::Index>(pinned.size()) == s) return {point, ExtReal::pos_inf()};

  const Eigen::MatrixXd g = block.component_matrix(x);
  QpProblem qp;
  const Eigen::Index n = s + m;
  qp.H = spec.theta * Eigen::MatrixXd::Identity(n, n);
  qp.g = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < s; ++i) qp.g(i) = face[static_cast<std::size_t>(i)] ? costs(i) - y_u(i) : 0.0;
  qp.g.tail(m) = -y_v;
  qp.A_eq = Eigen::MatrixXd::Zero(1 + static_cast<Eigen::Index>(pinned.size()), n);
  qp.b_eq = Eigen::VectorXd::Zero(qp.A_eq.rows());
  qp.A_eq.row(0).head(s).setOnes();
  for (std::size_t k = 0; k < pinned.size(); ++k) {
    qp.A_eq(1 + static_cast<Eigen::Index>(k), pinned[k]) = 1.0;
    qp.b_eq(1 + static_cast<Eigen::Index>(k)) = -p(pinned[k]);
  }
  qp.A_in = Eigen::MatrixXd::Zero(s + m, n);
  qp.b_in = Eigen::VectorXd::Zero(s + m);
  for (Eigen::Index i = 0; i < s; ++i) {
    qp.A_in(i, i) = -1.0;
    qp.b_in(i) = p(i);
  }
  qp.A_in.bottomLeftCorner(m, s) = g;
  qp.A_in.bottomRightCorner(m, m).setIdentity();
  qp.b_in.tail(m) = block.bound - g * p;

  // Feasible start: nominal weights restricted to the face, shift pushed down.
  Eigen::VectorXd q0 = Eigen::VectorXd::Zero(s);
  double face_mass = 0.0;
  for (Eigen::Index i = 0; i < s; ++i) {
    if (face[static_cast<std::size_t>(i)]) face_mass += p(i);
  }
  for (Eigen::Index i = 0; i < s; ++i) {
    if (!face[static_cast<std::size_t>(i)]) continue;
    q0(i) = face_mass > 0.0 ? p(i) / face_mass : 1.0 / static_cast<double>(s - static_cast<Eigen::Index>(pinned.size()));
  }
  Eigen::VectorXd start(n);
  start.head(s) = q0 - p;
  start.tail(m) = (block.bound - g * q0).cwiseMin(0.0);
  const QpResult sol = solve_qp(qp, start);

  point.u = sol.z.head(s);
  for (Eigen::Index i : pinned) point.u(i) = -p(i);
  const Eigen::VectorXd q = (p + point.u).cwiseMax(0.0);
  point.u = q / q.sum() - p;
  point.v = smoothed_constraint(block.bound, spec.theta, y_v, block.aggregate(p + point.u, x)).shift;
  return {point, objective_at(program, spec, point, x)};
}

Eigen::VectorXd objective_gradient(const StochasticProgram& program, const Eigen::VectorXd& q, const Point& x) {
  Eigen::VectorXd grad = program.f0().gradient(x);
  for (Eigen::Index i = 0; i < program.s(); ++i) {
    if (q(i) != 0.0) grad += q(i) * program.scenario(i).gradient(x);
  }
  return grad;
}

XStepResult projected_gradient_step(const StochasticProgram& program, const RockafellianSpec& spec,
                                    const PerturbationPoint& perturbation, const ProjectedGradientMethod& method,
                                    const Point& start) {
  if (program.composite()) throw DomainError("projected gradient does not handle composite blocks");
  if (spec.variant == Variant::kSupportPerturbation) throw DomainError("projected gradient does not handle support shifts");
  const Eigen::VectorXd q = spec.weights(program).entries() +
                            (perturbation.u.size() == 0 ? Eigen::VectorXd::Zero(program.s()) : perturbation.u);
  auto value_at = [&](const Point& x) { return objective_at(program, spec, perturbation, x); };

  Point x = method.box.project(start);
  ExtReal fx = value_at(x);
  if (!fx.is_finite()) throw InfeasibleError("projected gradient: start point has infinite objective");
  double step = method.initial_step;
  for (int it = 0; it < method.iterations; ++it) {
    const Eigen::VectorXd grad = objective_gradient(program, q, x);
    bool accepted = false;
    Point next;
    ExtReal f_next;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      next = method.box.project(x - step * grad);
      f_next = value_at(next);
      const Eigen::VectorXd d = next - x;
      // Curvature test on gradients; it stays meaningful after decreases in f drop below rounding.
      if (f_next.is_finite() &&
          (objective_gradient(program, q, next) - grad).dot(d) <= d.squaredNorm() / step) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double moved = (next - x).norm();
    x = next;
    fx = f_next;
    if (moved <= method.tolerance * std::max(1.0, x.norm())) break;
    step *= 2.0;
  }
  return {x, fx};
}

}  // namespace

const Box& method_box(const XMethod& method) {
  return std::visit([](const auto& m) -> const Box& { return m.box; }, method);
}

UStepResult u_step(const RockafellianSpec& spec, const Eigen::VectorXd& costs, const Eigen::VectorXd& y_nu) {
  if (spec.variant == Variant::kComposite) throw DomainError("u_step: composite perturbations are solved jointly with the shift");
  const Eigen::Index s = costs.size();
  const Eigen::VectorXd y = y_nu.size() == 0 ? Eigen::VectorXd::Zero(s) : y_nu;
  if (y.size() != s) throw DimensionError("u_step: tilt has wrong length");
  const std::vector<bool> face = finite_face(costs);

  if (!spec.p_nu) throw DomainError("u_step: ExactIndicator needs its weights in p_nu");
  const Eigen::VectorXd& p = spec.p_nu->entries();
  if (p.size() != s) throw DimensionError("u_step: costs do not match p_nu");
  if (spec.variant == Variant::kExactIndicator) {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(s);
    return {zero, subproblem_value(spec, p, costs, y, zero)};
  }
  if (std::none_of(face.begin(), face.end(), [](bool b) { return b; })) return {Eigen::VectorXd::Zero(s), ExtReal::pos_inf()};

  Eigen::VectorXd c = costs - y;
  for (Eigen::Index i = 0; i < s; ++i) {
    if (!face[static_cast<std::size_t>(i)]) c(i) = kInf;
  }

  Eigen::VectorXd q;
  switch (spec.variant) {
    case Variant::kQuadraticPenalty:
    case Variant::kSupportPerturbation:
      q = quadratic_weights(p, spec.theta, c, face);
      break;
    case Variant::kL1Penalty:
      q = l1_weights(p, spec.theta, c, face);
      break;
    case Variant::kPhiDivergence: {
      const auto solved = phi_weights(*spec.phi, p, spec.theta, c, face);
      if (!solved) return {Eigen::VectorXd::Zero(s), ExtReal::pos_inf()};
      q = *solved;
      break;
    }
    default:
      throw DomainError("u_step: unsupported variant");
  }
  const Eigen::VectorXd u = q - p;
  return {u, subproblem_value(spec, p, costs, y, u)};
}

InnerSolution inner_minimize(const StochasticProgram& program, const RockafellianSpec& spec, const Point& x,
                             const SolveConfig& config) {
  switch (spec.variant) {
    case Variant::kExactIndicator: {
      const PerturbationPoint zero = PerturbationPoint::zero(program, spec);
      return {zero, eval_exact(program, zero, x)};
    }
    case Variant::kSupportPerturbation:
      return support_inner(program, spec, x, config);
    case Variant::kComposite:
      return composite_inner(program, spec, x);
    default:
      break;
  }
  PerturbationPoint point = PerturbationPoint::zero(program, spec);
  const ExtReal f0 = program.f0()(x);
  if (f0.is_pos_inf()) return {point, f0};
  const UStepResult step = u_step(spec, scenario_costs(program, x), spec.tilt_u(program.s()));
  if (step.value.is_pos_inf()) return {point, ExtReal::pos_inf()};
  point.u = step.u;
  return {point, objective_at(program, spec, point, x)};
}

XStepResult x_step(const StochasticProgram& program, const RockafellianSpec& spec,
                   const PerturbationPoint& perturbation, const XMethod& method, const Point& x_start) {
  if (const auto* pg = std::get_if<ProjectedGradientMethod>(&method))
    return projected_gradient_step(program, spec, perturbation, *pg, x_start);
  const auto& grid_method = std::get<GridMethod>(method);
  const Grid grid(grid_method.box, grid_method.resolution);
  const auto values = evaluate_grid(grid, [&](const Point& x) { return objective_at(program, spec, perturbation, x).value(); });
  const std::size_t k = first_argmin(values);
  if (k == values.size()) throw InfeasibleError("x_step: every grid point is infeasible at this resolution");
  return {grid.point(k), values[k]};
}

SolveReport solve_joint(const StochasticProgram& program, const RockafellianSpec& spec, const SolveConfig& config) {
  spec.validate(program);
  const Box& box = method_box(config.x_method);
  if (box.dimension() != program.n()) throw DimensionError("solve_joint: box dimension does not match the program");

  SolveReport report;
  Point x = config.x_start ? box.project(*config.x_start) : box.center();
  PerturbationPoint perturbation = PerturbationPoint::zero(program, spec);
  ExtReal value = objective_at(program, spec, perturbation, x);
  report.objective_trace.push_back(value.value());

  for (int iter = 1; iter <= config.max_outer_iters; ++iter) {
    report.iterations = iter;
    const ExtReal before = value;
    const Point x_before = x;
    const Eigen::VectorXd u_before = perturbation.u;
    InnerSolution inner = inner_minimize(program, spec, x, config);
    // Closed-form u-steps are exact, so a rounding-level increase is not rejected.
    const bool exact_inner = spec.variant != Variant::kSupportPerturbation && spec.variant != Variant::kComposite;
    if (inner.value <= value || (exact_inner && inner.value.is_finite())) {
      perturbation = inner.perturbation;
      value = inner.value;
    }
    report.objective_trace.push_back(value.value());

    if (const auto* grid_method = std::get_if<GridMethod>(&config.x_method)) {
      // The profile min_u f(u, .) does not depend on the current u, so one
      // global pass over the grid settles x.
      const Grid grid(grid_method->box, grid_method->resolution);
      const auto profile =
          evaluate_grid(grid, [&](const Point& z) { return inner_minimize(program, spec, z, config).value.value(); });
      const std::size_t k = first_argmin(profile);
      if (k == profile.size() && !value.is_finite()) throw InfeasibleError("solve_joint: every grid point is infeasible");
      if (k < profile.size() && ExtReal(profile[k]) < value) {
        x = grid.point(k);
        inner = inner_minimize(program, spec, x, config);
        perturbation = inner.perturbation;
        value = inner.value;
      }
      report.objective_trace.push_back(value.value());
      check_bounded(value);
      report.converged = true;
      break;
    }

    const XStepResult step = x_step(program, spec, perturbation, config.x_method, x);
    const double slack = value.is_finite() ? 8.0 * std::numeric_limits<double>::epsilon() *
                                                 std::max(1.0, std::abs(value.value()))
                                           : 0.0;
    if (step.value <= value + ExtReal(slack)) {
      x = step.x;
      value = step.value;
    }
    report.objective_trace.push_back(value.value());
    check_bounded(value);
    const double moved = std::max((x - x_before).norm(), (perturbation.u - u_before).norm());
    if (before.is_finite() && value.is_finite() &&
        before.value() - value.value() <= config.objective_tolerance * std::max(1.0, std::abs(value.value())) &&
        moved <= config.u_tolerance) {
      report.converged = true;
      break;
    }
  }

  report.perturbation = perturbation;
  report.x_final = x;
  report.value = value;

  if (config.oracle) {
    const double resolution = std::holds_alternative<GridMethod>(config.x_method)
                                  ? std::get<GridMethod>(config.x_method).resolution
                                  : 1e-3;
    const OracleResult oracle = brute_force_oracle(program, spec, 0.0, box, resolution, {0.0}, config);
    report.epsilon_certificate = (value - oracle.value).value();
  }
  if (spec.variant == Variant::kQuadraticPenalty) {
    try {
      report.residual = optimality_residual(program, spec, perturbation.u, x, spec.tilt_u(program.s())).total;
    } catch (const DomainError&) {
      report.residual.reset();
    }
  }
  return report;
}

OracleResult brute_force_oracle(const StochasticProgram& program, const RockafellianSpec& spec, double u_resolution,
                                const Box& x_box, double x_resolution, std::vector<double> deltas,
                                const SolveConfig& inner) {
  spec.validate(program);
  const Grid grid(x_box, x_resolution);
  const bool probability_only = spec.variant == Variant::kQuadraticPenalty ||
                                spec.variant == Variant::kPhiDivergence || spec.variant == Variant::kL1Penalty;
  std::vector<Eigen::VectorXd> weights;
  if (u_resolution > 0.0 && probability_only) {
    if (program.s() > 4) throw BudgetError("brute_force_oracle: simplex grids need s <= 4");
    weights = simplex_grid(program.s(), static_cast<int>(std::lround(1.0 / u_resolution)));
  }
  OracleResult result;
  result.evaluations = grid.size() * std::max<std::size_t>(1, weights.size());
  if (result.evaluations > kMaxEvaluations) throw BudgetError("brute_force_oracle: more than 1e8 evaluations");

  std::vector<double> values;
  if (weights.empty()) {
    values = evaluate_grid(grid, [&](const Point& x) { return inner_minimize(program, spec, x, inner).value.value(); });
  } else {
    const Eigen::VectorXd& p = spec.p_nu->entries();
    values = evaluate_grid(grid, [&](const Point& x) {
      double best = kInf;
      for (const auto& q : weights) {
        const PerturbationPoint point{q - p, {}};
        best = std::min(best, objective_at(program, spec, point, x).value());
      }
      return best;
    });
  }
  const std::size_t k = first_argmin(values);
  if (k == values.size()) throw InfeasibleError("brute_force_oracle: every grid point is infeasible");
  result.x = grid.point(k);
  result.value = values[k];
  check_bounded(result.value);
  if (weights.empty()) {
    result.perturbation = inner_minimize(program, spec, result.x, inner).perturbation;
  } else {
    const Eigen::VectorXd& p = spec.p_nu->entries();
    double best = kInf;
    for (const auto& q : weights) {
      const PerturbationPoint point{q - p, {}};
      const double v = objective_at(program, spec, point, result.x).value();
      if (v < best) {
        best = v;
        result.perturbation = point;
      }
    }
  }
  result.deltas = std::move(deltas);
  for (double delta : result.deltas) {
    std::vector<Point> set;
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[j] <= values[k] + delta) set.push_back(grid.point(j));
    }
    result.argmin_sets.push_back(std::move(set));
  }
  return result;
}

XOracle grid_x_oracle(Box box, double resolution) {
  return [grid = Grid(std::move(box), resolution)](const std::function<ExtReal(const Point&)>& fn) {
    const auto values = evaluate_grid(grid, [&](const Point& x) { return fn(x).value(); });
    const std::size_t k = first_argmin(values);
    return k == values.size() ? ExtReal::pos_inf() : ExtReal(values[k]);
  };
}

}  // namespace rockrelax
