#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "rockrelax/analysis.hpp"
#include "rockrelax/errors.hpp"
#include "rockrelax/instances.hpp"

namespace rockrelax {
namespace {

const double kInf = std::numeric_limits<double>::infinity();

RateCertificate unit_certificate() {
  RateCertificate cert;
  cert.sigma = 1.0;
  cert.tau = 1.0;
  return cert;
}

TEST(RateConstants, NonnegativeFunctionsGiveZeroKappa) {
  const auto ex = build_example("ex21", 10);
  const RateCertificate cert = rate_constants(ex.actual, 1.0, 1e-3, 0.5, grid_x_oracle(ex.box, 1e-3), 1e-3);
  EXPECT_EQ(cert.kappa, 0.0);
  EXPECT_DOUBLE_EQ(cert.beta, std::sqrt(2.0 + 2.0 * 0.5));
  EXPECT_DOUBLE_EQ(cert.alpha, 1.0);
  EXPECT_DOUBLE_EQ(cert.tau, cert.beta * cert.sigma);
}

TEST(RateConstants, HeavisideExample) {
  const auto ex = build_example("ex23", 10);
  const RateCertificate cert = rate_constants(ex.actual, 1.0, 1e-3, 0.0, grid_x_oracle(ex.box, 1e-3), 1e-3);
  EXPECT_EQ(cert.kappa, 0.0);
  EXPECT_DOUBLE_EQ(cert.alpha, 0.5);
  EXPECT_DOUBLE_EQ(cert.beta, std::sqrt(2.0));
  // sigma = max{1, sqrt(2) * max{0, sqrt(3) sqrt(2)}} = 2 sqrt(3).
  EXPECT_NEAR(cert.sigma, 2.0 * std::sqrt(3.0), 1e-12);
  EXPECT_GE(cert.sigma, 1.0);
  EXPECT_NEAR(cert.tau, std::sqrt(2.0) * 2.0 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(cert.theta_threshold(), 9.0 * 2.0 / 0.25, 1e-12);
}

TEST(RateConstants, NegativeInfimumSetsKappa) {
  const ScenarioFunction zero([](const Point&) { return ExtReal(0.0); });
  const ScenarioFunction dip([](const Point& x) { return ExtReal(x(0) - 2.0); });
  const StochasticProgram program(1, zero, {dip}, ProbVector(Eigen::VectorXd::Ones(1)));
  const RateCertificate cert =
      rate_constants(program, 1.0, 0.0, 0.0, grid_x_oracle(Box::cube(1, -1.0, 1.0), 1e-3), 1e-3);
  EXPECT_DOUBLE_EQ(cert.kappa, 3.0);
}

TEST(RateConstants, UnboundedBelowRefused) {
  const ScenarioFunction zero([](const Point&) { return ExtReal(0.0); });
  const ScenarioFunction steep([](const Point& x) { return ExtReal(-1e20 * x(0)); });
  const StochasticProgram program(1, zero, {steep}, ProbVector(Eigen::VectorXd::Ones(1)));
  EXPECT_THROW(rate_constants(program, 1.0, 0.0, 0.0, grid_x_oracle(Box::cube(1, -1.0, 1.0), 1e-3), 1e-3),
               UnboundedError);
}

TEST(EtaBound, ZeroDistance) {
  RateCertificate cert = unit_certificate();
  cert.tau = 3.0;
  const Eigen::Vector2d p(0.5, 0.5);
  EXPECT_DOUBLE_EQ(eta_bound(cert, p, p, 16.0), 0.75);
}

TEST(EtaBound, PlugIn) {
  const Eigen::Vector2d p(0.5, 0.5);
  const Eigen::Vector2d p_nu = p + Eigen::Vector2d(0.01, -0.01) / std::sqrt(2.0);
  EXPECT_NEAR(eta_bound(unit_certificate(), p_nu, p, 1e4), 0.51, 1e-12);
}

TEST(EtaBound, ScheduleBalancesBothTerms) {
  const Eigen::Vector2d p(0.5, 0.5);
  for (double d : {1e-2, 1e-4, 1e-6}) {
    const Eigen::Vector2d p_nu = p + Eigen::Vector2d(d, -d) / std::sqrt(2.0);
    const double theta = theta_schedule(p_nu, p);
    const double dist = (p_nu - p).norm();
    EXPECT_NEAR(0.5 * theta * dist * dist / std::pow(dist, 2.0 / 3.0), 0.5, 1e-6);
    EXPECT_NEAR((1.0 / std::sqrt(theta)) / std::pow(dist, 2.0 / 3.0), 1.0, 1e-6);
  }
}

TEST(EtaBound, MonotoneInDistance) {
  const Eigen::Vector2d p(0.5, 0.5);
  double previous = -1.0;
  for (double d = 0.0; d < 0.4; d += 0.01) {
    const double eta = eta_bound(unit_certificate(), Eigen::Vector2d(0.5 + d, 0.5 - d), p, 50.0);
    EXPECT_GT(eta, previous);
    previous = eta;
  }
}

TEST(ThetaSchedule, Values) {
  const Eigen::Vector2d p(1.0, 0.0);
  EXPECT_NEAR(theta_schedule(Eigen::Vector2d(1.0 - 1e-3, 1e-3) / 1.0, p) *
                  std::pow(std::sqrt(2.0) * 1e-3, 4.0 / 3.0),
              1.0, 1e-9);
  const Eigen::Vector2d q(0.5, 0.5);
  const Eigen::Vector2d at_1e3 = q + Eigen::Vector2d(1e-3, -1e-3) / std::sqrt(2.0);
  EXPECT_NEAR(theta_schedule(at_1e3, q), 1e4, 1e-6);
  EXPECT_EQ(theta_schedule(p, p), kThetaCap);
  EXPECT_EQ(theta_schedule(Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(1.0 / std::sqrt(2.0), 1.0 - 1.0 / std::sqrt(2.0)), 2.5),
            2.5);
}

TEST(Applicability, Thresholds) {
  RateCertificate cert = unit_certificate();
  cert.alpha = 0.3;
  cert.beta = 1.0;
  const Eigen::Vector2d p(0.3, 0.7);
  EXPECT_TRUE(rate_applicability(cert, Eigen::Vector2d(0.35, 0.65), p, 100.0).applicable());
  EXPECT_FALSE(rate_applicability(cert, Eigen::Vector2d(0.35, 0.65), p, 99.0).applicable());
  EXPECT_FALSE(rate_applicability(cert, Eigen::Vector2d(0.45, 0.55), p, 1e6).applicable());
}

TEST(VerifyRate, SupportExamplePassesAtEveryNu) {
  const auto base = build_example("ex21", 10);
  const RateCertificate cert = rate_constants(base.actual, 1.0, 1e-3, 0.0, grid_x_oracle(base.box, 1e-3), 1e-3);
  std::vector<RateCase> cases;
  for (std::uint64_t nu : {10u, 100u, 1000u}) {
    auto ex = build_example("ex21", nu);
    cases.push_back({static_cast<double>(nu), ex.perturbed, ex.spec});
  }
  SolveConfig config;
  config.x_method = GridMethod{base.box, 1e-3};
  const RateTable table = verify_rate_inequality(base.actual, cases, cert, config);
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_TRUE(table.passed());
  EXPECT_FALSE(table.rows[0].applicable);
  EXPECT_TRUE(table.rows[1].applicable);
  EXPECT_TRUE(table.rows[2].applicable);
  EXPECT_EQ(table.applicable_rows(), 2u);
  for (const auto& row : table.rows) EXPECT_LE(row.distance, row.eta);
}

TEST(VerifyRate, ExactDataReducesToTauBound) {
  const auto ex = build_example("ex21", 10);
  const RateCertificate cert = rate_constants(ex.actual, 1.0, 1e-3, 0.0, grid_x_oracle(ex.box, 1e-3), 1e-3);
  const double theta = theta_schedule(ex.actual.p().entries(), ex.actual.p().entries());
  std::vector<RateCase> cases{{1.0, ex.actual, RockafellianSpec::quadratic(ex.actual.p(), theta)}};
  SolveConfig config;
  config.x_method = GridMethod{ex.box, 1e-3};
  const RateTable table = verify_rate_inequality(ex.actual, cases, cert, config);
  EXPECT_TRUE(table.rows[0].applicable);
  EXPECT_DOUBLE_EQ(table.rows[0].eta, cert.tau / std::sqrt(theta));
  EXPECT_EQ(table.rows[0].x_nu(0), 1.0);
  EXPECT_TRUE(table.passed());
}

TEST(EmpiricalRate, DegenerateIsIdenticallyZero) {
  const auto report = empirical_rate_check(ProbVector(Eigen::Vector3d(1.0, 0.0, 0.0)), 0.1, {10, 100, 1000}, 20, 3);
  for (const auto& trial : report.statistics) {
    for (double value : trial) EXPECT_EQ(value, 0.0);
  }
  EXPECT_EQ(report.failure_rate, 0.0);
}

TEST(EmpiricalRate, MedianDecreases) {
  const auto report = empirical_rate_check(ProbVector(Eigen::Vector2d(0.5, 0.5)), 0.1, {100, 10000, 1000000}, 200, 1);
  ASSERT_EQ(report.median.size(), 3u);
  EXPECT_TRUE(report.median_strictly_decreasing);
  EXPECT_EQ(report.statistics.size(), 200u);
}

TEST(EmpiricalRate, ReproducibleAndValidated) {
  const ProbVector p(Eigen::Vector2d(0.3, 0.7));
  const auto a = empirical_rate_check(p, 0.2, {10, 1000}, 8, 5);
  const auto b = empirical_rate_check(p, 0.2, {10, 1000}, 8, 5);
  EXPECT_EQ(a.statistics, b.statistics);
  EXPECT_THROW(empirical_rate_check(p, 0.5, {10, 100}, 8, 5), DomainError);
  EXPECT_THROW(empirical_rate_check(p, 0.1, {100, 10}, 8, 5), DomainError);
}

TEST(Residual, SmoothInstanceMinimizer) {
  const InstanceDef def = smooth_convex_instance();
  const StochasticProgram program = def.perturbed(100);
  const RockafellianSpec spec = RockafellianSpec::quadratic(program.p(), theta_schedule(program.p(), def.p));
  SolveConfig config;
  config.x_method = ProjectedGradientMethod{def.box};
  const SolveReport solved = solve_joint(program, spec, config);
  const ResidualReport r =
      optimality_residual(program, spec, solved.perturbation.u, solved.x_final, spec.tilt_u(program.s()));
  EXPECT_LE(r.total, 1e-6);
  ASSERT_TRUE(solved.residual.has_value());
  EXPECT_DOUBLE_EQ(*solved.residual, r.total);
}

TEST(Residual, InteriorConstantOffsetHasZeroFirstBlock) {
  const InstanceDef def = smooth_convex_instance();
  const StochasticProgram program = def.actual();
  const RockafellianSpec spec = RockafellianSpec::quadratic(program.p(), 2.0);
  const Eigen::Vector3d u(0.05, -0.1, 0.05);
  const Point x = Point::Constant(1, 0.4);
  Eigen::Vector3d F;
  for (int i = 0; i < 3; ++i) F(i) = program.scenario(i)(x).value();
  const Eigen::VectorXd y = F + 2.0 * u + Eigen::Vector3d::Constant(0.7);
  EXPECT_LE(optimality_residual(program, spec, u, x, y).block1, 1e-12);
}

TEST(Residual, OutsideDomainIsInfinite) {
  const InstanceDef def = smooth_convex_instance();
  const StochasticProgram program = def.actual();
  const RockafellianSpec spec = RockafellianSpec::quadratic(program.p(), 2.0);
  const Eigen::Vector3d y = Eigen::Vector3d::Zero();
  EXPECT_EQ(optimality_residual(program, spec, Eigen::Vector3d::Zero(), Point::Constant(1, 11.0), y).total, kInf);
  EXPECT_EQ(optimality_residual(program, spec, Eigen::Vector3d(0.9, 0.0, 0.0), Point::Zero(1), y).total, kInf);
}

TEST(Residual, ContinuousOnConstantActiveSet) {
  const InstanceDef def = smooth_convex_instance();
  const StochasticProgram program = def.actual();
  const RockafellianSpec spec = RockafellianSpec::quadratic(program.p(), 2.0);
  const Eigen::Vector3d u(0.05, -0.1, 0.05);
  const Eigen::Vector3d y = Eigen::Vector3d::Zero();
  const double base = optimality_residual(program, spec, u, Point::Constant(1, 0.4), y).total;
  const double moved =
      optimality_residual(program, spec, u + Eigen::Vector3d(1e-7, -1e-7, 0.0), Point::Constant(1, 0.4 + 1e-7), y).total;
  EXPECT_NEAR(base, moved, 1e-5);
}

TEST(EpiDistance, IdenticalFunctions) {
  std::vector<Eigen::VectorXd> points;
  for (int k = 0; k <= 100; ++k) points.push_back(Eigen::VectorXd::Constant(1, -1.0 + 0.02 * k));
  auto f = [](const Eigen::VectorXd& x) { return ExtReal(x.squaredNorm()); };
  EXPECT_EQ(epi_distance_estimate(f, f, 2.0, points, 0.02).estimate, 0.0);
}

TEST(EpiDistance, VerticalTranslation) {
  const double resolution = 1e-3;
  std::vector<Eigen::VectorXd> points;
  for (int k = 0; k <= 2000; ++k) points.push_back(Eigen::VectorXd::Constant(1, -1.0 + resolution * k));
  auto f = [](const Eigen::VectorXd& x) { return ExtReal(x.squaredNorm()); };
  for (double c : {0.05, 0.2}) {
    auto g = [c](const Eigen::VectorXd& x) { return ExtReal(x.squaredNorm() + c); };
    const EpiDistance d = epi_distance_estimate(f, g, 2.0, points, resolution);
    EXPECT_GE(d.estimate, c - 2.0 * resolution) << c;
    EXPECT_LE(d.estimate, c + 1e-12) << c;
    const EpiDistance reversed = epi_distance_estimate(g, f, 2.0, points, resolution);
    EXPECT_EQ(d.estimate, reversed.estimate);
  }
}

TEST(EpiDistance, RelaxationFamilyApproaches) {
  std::vector<Eigen::VectorXd> points;
  for (int k = 0; k <= 200; ++k) points.push_back(Eigen::VectorXd::Constant(1, 0.005 * k));
  double previous = kInf;
  for (std::uint64_t nu : {10u, 100u, 1000u}) {
    const auto ex = build_example("ex21", nu);
    auto relaxed = [&](const Eigen::VectorXd& x) { return inner_minimize(ex.perturbed, ex.spec, x).value; };
    auto actual = [&](const Eigen::VectorXd& x) { return actual_objective(ex.actual, x); };
    const double estimate = epi_distance_estimate(relaxed, actual, 1.0, points, 0.005).estimate;
    EXPECT_LT(estimate, previous);
    previous = estimate;
  }
}

TEST(LogLogSlope, PowerLaw) {
  const std::vector<double> x{1e-3, 1e-2, 1e-1, 1.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 2.0 / 3.0));
  EXPECT_NEAR(log_log_slope(x, y), 2.0 / 3.0, 1e-12);
}

}  // namespace
}  // namespace rockrelax
