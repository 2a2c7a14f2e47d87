#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rockrelax/errors.hpp"
#include "rockrelax/random.hpp"
#include "rockrelax/regularizer.hpp"

namespace rockrelax {
namespace {

RegularizerContext half_half_context(RegularizerContext::Map F, RegularizerContext::Jacobian dF = {}) {
  return RegularizerContext(ProbVector(Eigen::Vector2d(0.5, 0.5)), 1.0, Eigen::Vector2d::Zero(), std::move(F),
                            std::move(dF));
}

// f_1(x) = x, f_2(x) = 0.
RegularizerContext linear_context() {
  return half_half_context([](const Eigen::VectorXd& x) { return Eigen::Vector2d(x(0), 0.0).eval(); },
                           [](const Eigen::VectorXd&) {
                             Eigen::MatrixXd J(2, 1);
                             J << 1.0, 0.0;
                             return J;
                           });
}

// max over q in the simplex of <c, q - p> - theta/2 |q - p|^2, by grid.
double regularizer_by_grid(const Eigen::Vector2d& c, const Eigen::Vector2d& p, double theta) {
  return -testing::simplex_line_min(
              [&](const Eigen::VectorXd& q) {
                const Eigen::VectorXd u = q - p;
                return -(c.dot(u) - 0.5 * theta * u.squaredNorm());
              },
              1e-4)
              .value;
}

TEST(NegativeRegularizer, ConstantCostsGiveZero) {
  for (double gamma : {-3.0, 0.0, 2.5}) {
    const auto ctx = half_half_context([gamma](const Eigen::VectorXd&) { return Eigen::Vector2d::Constant(gamma).eval(); });
    const RegularizerResult r = negative_regularizer(ctx, Eigen::VectorXd::Zero(1));
    EXPECT_EQ(r.value, 0.0);
    EXPECT_LE(r.u_star.cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(NegativeRegularizer, QuarterExample) {
  EXPECT_NEAR(regularizer_by_grid({-1.0, 0.0}, {0.5, 0.5}, 1.0), 0.25, 1e-12);
  const RegularizerResult r = negative_regularizer(linear_context(), Eigen::VectorXd::Ones(1));
  EXPECT_NEAR(r.value, 0.25, 1e-15);
  EXPECT_NEAR(r.u_star(0), -0.5, 1e-15);
  EXPECT_NEAR(r.u_star(1), 0.5, 1e-15);
  EXPECT_NEAR(r.q_star(0), 0.0, 1e-15);
}

TEST(NegativeRegularizer, EnvelopeIdentity) {
  const auto ctx = linear_context();
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.4);
  const RegularizerResult r = negative_regularizer(ctx, x);
  const Eigen::VectorXd expected = ctx.y_nu - ctx.F(x) - ctx.theta_nu * r.u_star;
  EXPECT_LE((r.w_hat - expected).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(negative_regularizer_envelope(ctx, x), r.value, 1e-9);
}

TEST(NegativeRegularizer, RejectsNonfiniteCosts) {
  const auto ctx = half_half_context(
      [](const Eigen::VectorXd&) { return Eigen::Vector2d(1.0, std::numeric_limits<double>::infinity()).eval(); });
  EXPECT_THROW(negative_regularizer(ctx, Eigen::VectorXd::Zero(1)), DomainError);
  EXPECT_THROW(RegularizerContext(ProbVector(Eigen::Vector2d(0.5, 0.5)), 0.0, Eigen::Vector2d::Zero(), ctx.F),
               DomainError);
}

TEST(NegativeRegularizer, MatchesGridOracleOnRandomContexts) {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const double p0 = 0.05 + 0.9 * rng.uniform01();
    const Eigen::Vector2d p(p0, 1.0 - p0);
    const Eigen::Vector2d c(4.0 * rng.uniform01() - 2.0, 4.0 * rng.uniform01() - 2.0);
    const double theta = 0.5 + 3.0 * rng.uniform01();
    const RegularizerContext ctx(ProbVector(p), theta, Eigen::Vector2d::Zero(),
                                 [c](const Eigen::VectorXd&) { return Eigen::VectorXd(-c); });
    EXPECT_NEAR(negative_regularizer(ctx, Eigen::VectorXd::Zero(1)).value, regularizer_by_grid(c, p, theta), 1e-6);
  }
}

TEST(NegativeRegularizer, NonincreasingInTheta) {
  SplitMix64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd p(4), f(4), y(4);
    for (int i = 0; i < 4; ++i) {
      p(i) = rng.uniform01() + 0.01;
      f(i) = 4.0 * rng.uniform01() - 2.0;
      y(i) = rng.uniform01() - 0.5;
    }
    p /= p.sum();
    double previous = std::numeric_limits<double>::infinity();
    for (double theta : {0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) {
      const RegularizerContext ctx(ProbVector(p), theta, y, [f](const Eigen::VectorXd&) { return f; });
      const double value = negative_regularizer(ctx, Eigen::VectorXd::Zero(1)).value;
      EXPECT_GE(value, 0.0);
      EXPECT_LE(value, previous + 1e-12);
      previous = value;
    }
  }
}

TEST(NegativeRegularizerGradient, HalfExample) {
  const auto ctx = linear_context();
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
  // x = 1 is where u* reaches a vertex: the value is C1 with a curvature jump.
  const double h = 1e-7;
  const double fd = (negative_regularizer(ctx, Eigen::VectorXd::Constant(1, 1.0 + h)).value -
                     negative_regularizer(ctx, Eigen::VectorXd::Constant(1, 1.0 - h)).value) /
                    (2.0 * h);
  EXPECT_NEAR(fd, 0.5, 1e-7);
  const RegularizerGradient g = negative_regularizer_gradient(ctx, x);
  EXPECT_NEAR(g.gradient(0), 0.5, 1e-12);
  const RegularizerResult r = negative_regularizer(ctx, x);
  EXPECT_NEAR(g.gradient(0), -(ctx.dF(x).transpose() * r.u_star)(0), 1e-10);
}

TEST(NegativeRegularizerGradient, ZeroCases) {
  const auto flat = half_half_context([](const Eigen::VectorXd&) { return Eigen::Vector2d(1.0, 0.0).eval(); },
                                      [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(2, 1).eval(); });
  EXPECT_EQ(negative_regularizer_gradient(flat, Eigen::VectorXd::Zero(1)).gradient(0), 0.0);
  // u_star = 0 at x = 0 since F(0) is constant.
  EXPECT_EQ(negative_regularizer_gradient(linear_context(), Eigen::VectorXd::Zero(1)).gradient(0), 0.0);
  const auto no_jacobian = half_half_context([](const Eigen::VectorXd&) { return Eigen::Vector2d::Zero().eval(); });
  EXPECT_THROW(negative_regularizer_gradient(no_jacobian, Eigen::VectorXd::Zero(1)), DomainError);
}

TEST(SmoothedConstraint, FeasiblePointGivesZero) {
  const SmoothedConstraint h = smoothed_constraint(Eigen::Vector2d::Zero(), 3.0, Eigen::Vector2d::Zero(),
                                                   Eigen::Vector2d(-1.0, 0.0));
  EXPECT_EQ(h.value, 0.0);
  EXPECT_EQ(h.w_hat, Eigen::VectorXd(Eigen::Vector2d::Zero()));
}

TEST(SmoothedConstraint, ViolatedComponentMatchesGrid) {
  const Eigen::Vector2d v(1.0, -1.0);
  const double theta = 2.0;
  // Separable objective: the maximum over the box is the sum of per-component maxima.
  double grid_value = 0.0;
  Eigen::Vector2d grid_w;
  for (int k = 0; k < 2; ++k) {
    double best = -std::numeric_limits<double>::infinity();
    for (long j = 0; j <= 10000; ++j) {
      const double w = 1e-3 * static_cast<double>(j);
      const double value = v(k) * w - w * w / (2.0 * theta);
      if (value > best) {
        best = value;
        grid_w(k) = w;
      }
    }
    grid_value += best;
  }
  EXPECT_NEAR(grid_value, 1.0, 1e-12);
  EXPECT_NEAR(grid_w(0), 2.0, 1e-12);
  EXPECT_EQ(grid_w(1), 0.0);

  const SmoothedConstraint h = smoothed_constraint(Eigen::Vector2d::Zero(), theta, Eigen::Vector2d::Zero(), v);
  EXPECT_DOUBLE_EQ(h.value, 1.0);
  EXPECT_DOUBLE_EQ(h.w_hat(0), 2.0);
  EXPECT_EQ(h.w_hat(1), 0.0);
}

TEST(SmoothedConstraint, TiltAtOrigin) {
  const SmoothedConstraint h =
      smoothed_constraint(Eigen::Vector2d::Zero(), 1.0, Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d::Zero());
  EXPECT_EQ(h.value, 0.0);
  EXPECT_EQ(h.w_hat, Eigen::VectorXd(Eigen::Vector2d(1.0, 0.0)));
}

TEST(SmoothedConstraint, ShiftIsFeasible) {
  SplitMix64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector3d b, y, v;
    for (int k = 0; k < 3; ++k) {
      b(k) = rng.uniform01() - 0.5;
      y(k) = rng.uniform01() - 0.5;
      v(k) = 2.0 * rng.uniform01() - 1.0;
    }
    const SmoothedConstraint h = smoothed_constraint(b, 1.5, y, v);
    EXPECT_LE((h.shift + v - b).maxCoeff(), 1e-12);
    EXPECT_GE(h.value, -y.squaredNorm() / 3.0 - 1e-12);
  }
}

TEST(SmoothedConstraint, MinorizesIndicatorAndConvex) {
  SplitMix64 rng(43);
  const Eigen::Vector2d b(0.2, -0.1);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Vector2d v1, v2;
    for (int k = 0; k < 2; ++k) {
      v1(k) = 2.0 * rng.uniform01() - 1.0;
      v2(k) = 2.0 * rng.uniform01() - 1.0;
    }
    const double h1 = smoothed_constraint(b, 4.0, Eigen::Vector2d::Zero(), v1).value;
    const double h2 = smoothed_constraint(b, 4.0, Eigen::Vector2d::Zero(), v2).value;
    const double hm = smoothed_constraint(b, 4.0, Eigen::Vector2d::Zero(), Eigen::Vector2d(0.5 * (v1 + v2))).value;
    EXPECT_GE(h1, 0.0);
    if ((v1.array() <= b.array()).all()) EXPECT_EQ(h1, 0.0);
    EXPECT_LE(hm, 0.5 * (h1 + h2) + 1e-10);
  }
}

TEST(SmoothedConstraintGeneric, UpperBoundOracle) {
  const ConjProx prox = upper_bound_conj_prox(Eigen::VectorXd::Zero(1));
  EXPECT_EQ(smoothed_constraint_generic(prox, 1.0, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)).value, 0.0);
  EXPECT_NEAR(smoothed_constraint_generic(prox, 2.0, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)).value, 1.0,
              1e-15);
  SplitMix64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector3d b, y, v;
    for (int k = 0; k < 3; ++k) {
      b(k) = rng.uniform01() - 0.5;
      y(k) = rng.uniform01() - 0.5;
      v(k) = 2.0 * rng.uniform01() - 1.0;
    }
    const SmoothedConstraint direct = smoothed_constraint(b, 0.7, y, v);
    const SmoothedConstraint generic = smoothed_constraint_generic(upper_bound_conj_prox(b), 0.7, y, v);
    EXPECT_NEAR(direct.value, generic.value, 1e-8);
    EXPECT_LE((direct.w_hat - generic.w_hat).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(SmoothedConstraintGeneric, LinearFunction) {
  // h = <a, .> has h* = indicator of {a}; its prox is the constant a.
  const Eigen::Vector2d a(0.5, -2.0);
  const ConjProx prox = [a](const Eigen::VectorXd&, double) { return ConjProxResult{a, 0.0}; };
  const Eigen::Vector2d y(1.0, 1.0), v(0.3, 0.7);
  const double theta = 2.0;
  const double expected = v.dot(a) - (y - a).squaredNorm() / (2.0 * theta);
  EXPECT_NEAR(smoothed_constraint_generic(prox, theta, y, v).value, expected, 1e-15);
}

}  // namespace
}  // namespace rockrelax
