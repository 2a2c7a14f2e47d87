#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "rockrelax/analysis.hpp"
#include "rockrelax/errors.hpp"
#include "rockrelax/instances.hpp"
#include "rockrelax/random.hpp"
#include "rockrelax/solver.hpp"

namespace rockrelax {
namespace {

const double kInf = std::numeric_limits<double>::infinity();

// sum_i q_i c_i + penalty(q - p), +inf off the simplex.
double subproblem(const RockafellianSpec& spec, const Eigen::VectorXd& c, const Eigen::VectorXd& q) {
  const Eigen::VectorXd& p = spec.p_nu->entries();
  const Eigen::VectorXd u = q - p;
  double penalty = 0.0;
  switch (spec.variant) {
    case Variant::kQuadraticPenalty:
      penalty = 0.5 * spec.theta * u.squaredNorm();
      break;
    case Variant::kL1Penalty:
      penalty = spec.theta * u.lpNorm<1>();
      break;
    case Variant::kPhiDivergence:
      penalty = (ExtReal(spec.theta) * phi_divergence(*spec.phi, q, p)).value();
      break;
    default:
      break;
  }
  return q.dot(c) + penalty;
}

SolveConfig grid_config(const Box& box, double resolution) {
  SolveConfig config;
  config.x_method = GridMethod{box, resolution};
  return config;
}

TEST(UStep, ConstantCostsStayAtAnchor) {
  const ProbVector p(Eigen::Vector3d(0.2, 0.3, 0.5));
  const Eigen::Vector3d costs = Eigen::Vector3d::Constant(1.7);
  for (const auto& spec : {RockafellianSpec::quadratic(p, 2.0), RockafellianSpec::l1(p, 0.5),
                           RockafellianSpec::phi_divergence(p, 1.0, PhiFamily(PhiKind::kKullbackLeibler)),
                           RockafellianSpec::phi_divergence(p, 1.0, PhiFamily(PhiKind::kVariational))}) {
    const UStepResult r = u_step(spec, costs, Eigen::VectorXd());
    EXPECT_LE(r.u.cwiseAbs().maxCoeff(), 1e-9) << variant_name(spec.variant);
    EXPECT_NEAR(r.value.value(), 1.7, 1e-12);
  }
}

TEST(UStep, QuadraticHalfExample) {
  const UStepResult r =
      u_step(RockafellianSpec::quadratic(ProbVector(Eigen::Vector2d(0.5, 0.5)), 1.0), Eigen::Vector2d(1.0, 0.0), {});
  EXPECT_NEAR(r.u(0), -0.5, 1e-15);
  EXPECT_NEAR(r.u(1), 0.5, 1e-15);
  EXPECT_NEAR(r.value.value(), 0.25, 1e-15);
}

TEST(UStep, L1MassShift) {
  const RockafellianSpec spec = RockafellianSpec::l1(ProbVector(Eigen::Vector2d(0.5, 0.5)), 1.0);
  const Eigen::Vector2d costs(0.0, -10.0);
  const auto grid = testing::simplex_line_min([&](const Eigen::VectorXd& q) { return subproblem(spec, costs, q); }, 1e-4);
  EXPECT_NEAR(grid.point(0), 0.0, 1e-12);
  EXPECT_NEAR(grid.value, -9.0, 1e-12);
  const UStepResult r = u_step(spec, costs, {});
  EXPECT_NEAR(r.u(0), -0.5, 1e-12);
  EXPECT_NEAR(r.u(1), 0.5, 1e-12);
  EXPECT_NEAR(r.value.value(), -9.0, 1e-12);
}

TEST(UStep, QuadraticSatisfiesProjectionKkt) {
  SplitMix64 rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd p(5), costs(5);
    for (int i = 0; i < 5; ++i) {
      p(i) = rng.uniform01() + 0.01;
      costs(i) = 4.0 * rng.uniform01() - 2.0;
    }
    p /= p.sum();
    const double theta = 0.5 + 5.0 * rng.uniform01();
    const UStepResult r = u_step(RockafellianSpec::quadratic(ProbVector(p), theta), costs, {});
    const Eigen::VectorXd q = p + r.u;
    // -costs - theta u lies in the normal cone at q.
    EXPECT_LE(simplex_normal_cone_distance(q, Eigen::VectorXd(-costs - theta * r.u)), 1e-12);
  }
}

TEST(UStep, MatchesSimplexGridForPhiAndL1) {
  SplitMix64 rng(67);
  const ProbVector p(Eigen::Vector3d(0.25, 0.35, 0.4));
  std::vector<RockafellianSpec> specs = {RockafellianSpec::l1(p, 0.8)};
  for (const auto& family : all_phi_families()) specs.push_back(RockafellianSpec::phi_divergence(p, 1.5, family));
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Vector3d costs(2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0);
    for (const auto& spec : specs) {
      const auto grid =
          testing::simplex_multilevel_min([&](const Eigen::VectorXd& q) { return subproblem(spec, costs, q); }, 3);
      const UStepResult r = u_step(spec, costs, {});
      EXPECT_NEAR(r.value.value(), grid.value, 1e-6) << (spec.phi ? spec.phi->name() : "l1");
      EXPECT_LE(r.value.value(), grid.value + 1e-12);
    }
  }
}

TEST(UStep, InfiniteCostPinsProbabilityToZero) {
  const RockafellianSpec spec = RockafellianSpec::quadratic(ProbVector(Eigen::Vector3d(0.2, 0.3, 0.5)), 1.0);
  const UStepResult r = u_step(spec, Eigen::Vector3d(0.0, kInf, 0.5), {});
  EXPECT_NEAR(r.u(1), -0.3, 1e-15);
  EXPECT_TRUE(r.value.is_finite());
  EXPECT_TRUE(u_step(spec, Eigen::Vector3d::Constant(kInf), {}).value.is_pos_inf());
  const RockafellianSpec kl =
      RockafellianSpec::phi_divergence(ProbVector(Eigen::Vector3d(0.2, 0.3, 0.5)), 1.0, PhiFamily(PhiKind::kBurg));
  EXPECT_TRUE(u_step(kl, Eigen::Vector3d(0.0, kInf, 0.5), {}).value.is_pos_inf());
}

TEST(XStep, SupportExampleBothSlices) {
  const auto ex = build_example("ex21", 100);
  const GridMethod method{ex.box, 1e-3};
  const Eigen::VectorXd toward_p = ex.actual.p().entries() - ex.spec.p_nu->entries();
  const XStepResult moved = x_step(ex.perturbed, ex.spec, {toward_p, {}}, method, ex.box.center());
  EXPECT_EQ(moved.x(0), 1.0);
  const XStepResult naive =
      x_step(ex.perturbed, ex.spec, {Eigen::VectorXd::Zero(2), {}}, method, ex.box.center());
  EXPECT_EQ(naive.x(0), 0.0);
}

TEST(XStep, ConstantObjectiveTakesFirstGridPoint) {
  const ScenarioFunction flat([](const Point&) { return ExtReal(1.0); });
  const StochasticProgram program(2, flat, {flat}, ProbVector(Eigen::VectorXd::Ones(1)));
  const Box box(Eigen::Vector2d(-1.0, 2.0), Eigen::Vector2d(1.0, 3.0));
  const XStepResult r = x_step(program, RockafellianSpec::exact(), {Eigen::VectorXd::Zero(1), {}},
                               GridMethod{box, 0.1}, box.center());
  EXPECT_EQ(r.x, Eigen::VectorXd(box.lo));
}

TEST(XStep, AllInfiniteIsInfeasible) {
  const ScenarioFunction never([](const Point&) { return ExtReal::pos_inf(); });
  const StochasticProgram program(1, never, {never}, ProbVector(Eigen::VectorXd::Ones(1)));
  EXPECT_THROW(x_step(program, RockafellianSpec::exact(), {Eigen::VectorXd::Zero(1), {}},
                      GridMethod{Box::cube(1, 0.0, 1.0), 0.1}, Point::Zero(1)),
               InfeasibleError);
}

TEST(SolveJoint, SingleScenarioIsPlainMinimization) {
  const ScenarioFunction zero([](const Point&) { return ExtReal(0.0); });
  const ScenarioFunction bowl([](const Point& x) { return ExtReal((x(0) - 0.3) * (x(0) - 0.3)); });
  const StochasticProgram program(1, zero, {bowl}, ProbVector(Eigen::VectorXd::Ones(1)));
  const SolveReport r = solve_joint(program, RockafellianSpec::quadratic(program.p(), 1.0),
                                    grid_config(Box::cube(1, 0.0, 1.0), 1e-3));
  EXPECT_NEAR(r.x_final(0), 0.3, 1e-12);
  EXPECT_EQ(r.perturbation.u(0), 0.0);
}

TEST(SolveJoint, SupportExampleRecoversOne) {
  const auto ex = build_example("ex21", 100);
  SolveConfig config = grid_config(ex.box, 1e-3);
  config.oracle = true;
  const SolveReport r = solve_joint(ex.perturbed, ex.spec, config);
  EXPECT_GE(r.x_final(0), 0.99);
  ASSERT_TRUE(r.epsilon_certificate.has_value());
  EXPECT_LE(std::abs(*r.epsilon_certificate), 1e-9);
  for (std::size_t k = 1; k < r.objective_trace.size(); ++k) {
    EXPECT_LE(r.objective_trace[k], r.objective_trace[k - 1] + 1e-12);
  }
}

TEST(SolveJoint, HeavisideExampleRecoversZero) {
  const auto ex = build_example("ex23", 100);
  const SolveReport r = solve_joint(ex.perturbed, ex.spec, grid_config(ex.box, ex.resolution));
  EXPECT_LE(r.x_final(0), 0.01);
  EXPECT_NEAR(actual_objective(ex.actual, r.x_final).value(), 0.75, 0.01);
}

TEST(SolveJoint, ConvexInstanceMatchesOracle) {
  const InstanceDef def = random_convex_instance(5, 1, 3);
  const StochasticProgram program = def.perturbed(20);
  const RockafellianSpec spec = RockafellianSpec::quadratic(program.p(), 4.0);
  const SolveReport r = solve_joint(program, spec, grid_config(def.box, 1e-3));
  const OracleResult oracle = brute_force_oracle(program, spec, 0.0, def.box, 1e-3);
  EXPECT_NEAR(r.value.value(), oracle.value.value(), 1e-9);
}

TEST(SolveJoint, SeededRunsReproduce) {
  const auto ex = build_example("ex22", 100);
  SolveConfig config = grid_config(ex.box, 2e-2);
  config.seed = 9;
  const SolveReport a = solve_joint(ex.perturbed, ex.spec, config);
  const SolveReport b = solve_joint(ex.perturbed, ex.spec, config);
  EXPECT_EQ(a.x_final, b.x_final);
  EXPECT_EQ(a.perturbation.u, b.perturbation.u);
  EXPECT_EQ(a.objective_trace, b.objective_trace);
}

TEST(SolveJoint, ProjectedGradientOnSmoothInstance) {
  const InstanceDef def = smooth_convex_instance();
  const StochasticProgram program = def.actual();
  SolveConfig config;
  config.x_method = ProjectedGradientMethod{def.box};
  const SolveReport r = solve_joint(program, RockafellianSpec::exact(), config);
  EXPECT_NEAR(r.x_final(0), 0.3, 1e-7);
}

TEST(BruteForceOracle, HeavisideActualProblem) {
  const auto ex = build_example("ex23", 100);
  const OracleResult r = brute_force_oracle(ex.actual, RockafellianSpec::exact(), 0.0, ex.box, 1e-3);
  EXPECT_EQ(r.x(0), 0.0);
  EXPECT_DOUBLE_EQ(r.value.value(), 0.75);
  ASSERT_EQ(r.argmin_sets.size(), 1u);
  ASSERT_EQ(r.argmin_sets[0].size(), 1u);
}

TEST(BruteForceOracle, SupportActualProblem) {
  const auto ex = build_example("ex21", 10);
  const OracleResult r = brute_force_oracle(ex.actual, RockafellianSpec::exact(), 0.0, ex.box, 1e-3);
  EXPECT_EQ(r.x(0), 1.0);
  EXPECT_EQ(r.value.value(), 0.0);
  EXPECT_EQ(r.argmin_sets[0].size(), 1u);
}

TEST(BruteForceOracle, StrictlyConvexQuadratic) {
  const ScenarioFunction zero([](const Point&) { return ExtReal(0.0); });
  const ScenarioFunction bowl([](const Point& x) { return ExtReal((x - Eigen::Vector2d(0.333, -0.25)).squaredNorm()); });
  const StochasticProgram program(2, zero, {bowl}, ProbVector(Eigen::VectorXd::Ones(1)));
  const OracleResult r = brute_force_oracle(program, RockafellianSpec::exact(), 0.0, Box::cube(2, -1.0, 1.0), 1e-2,
                                            {0.0, 1e-3});
  ASSERT_EQ(r.argmin_sets[0].size(), 1u);
  EXPECT_NEAR(r.x(0), 0.33, 1e-12);
  EXPECT_NEAR(r.x(1), -0.25, 1e-12);
  EXPECT_GT(r.argmin_sets[1].size(), 1u);
}

TEST(BruteForceOracle, SimplexGridMatchesProfiledSearch) {
  const auto ex = build_example("ex21", 10);
  const RockafellianSpec spec = RockafellianSpec::quadratic(*ex.spec.p_nu, 3.0);
  const OracleResult profiled = brute_force_oracle(ex.perturbed, spec, 0.0, ex.box, 1e-2);
  const OracleResult gridded = brute_force_oracle(ex.perturbed, spec, 1e-3, ex.box, 1e-2);
  EXPECT_GE(gridded.value.value(), profiled.value.value() - 1e-12);
  EXPECT_NEAR(gridded.value.value(), profiled.value.value(), 1e-3);
}

TEST(BruteForceOracle, BudgetExceeded) {
  const auto ex = build_example("ex22", 100);
  EXPECT_THROW(brute_force_oracle(ex.actual, RockafellianSpec::exact(), 0.0, Box::cube(2, -1.0, 1.0), 1e-5),
               BudgetError);
}

}  // namespace
}  // namespace rockrelax
