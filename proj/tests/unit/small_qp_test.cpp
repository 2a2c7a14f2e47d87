#include <gtest/gtest.h>

#include <algorithm>

#include "rockrelax/errors.hpp"
#include "rockrelax/random.hpp"
#include "rockrelax/small_qp.hpp"

namespace rockrelax {
namespace {

QpProblem simplex_qp(Eigen::Vector2d target) {
  QpProblem qp;
  qp.H = Eigen::Matrix2d::Identity();
  qp.g = -target;
  qp.A_eq = Eigen::RowVector2d(1.0, 1.0);
  qp.b_eq = Eigen::VectorXd::Ones(1);
  qp.A_in = -Eigen::Matrix2d::Identity();
  qp.b_in = Eigen::Vector2d::Zero();
  return qp;
}

TEST(SmallQp, EqualityOnly) {
  const QpResult r = solve_qp(simplex_qp({1.0, 1.0}), Eigen::Vector2d(0.0, 1.0));
  EXPECT_NEAR(r.z(0), 0.5, 1e-12);
  EXPECT_NEAR(r.z(1), 0.5, 1e-12);
}

TEST(SmallQp, ActiveInequality) {
  QpProblem qp = simplex_qp({1.0, 1.0});
  qp.A_in.conservativeResize(3, 2);
  qp.A_in.row(2) << 1.0, 0.0;
  qp.b_in.conservativeResize(3);
  qp.b_in(2) = 0.2;
  const QpResult r = solve_qp(qp, Eigen::Vector2d(0.0, 1.0));
  EXPECT_NEAR(r.z(0), 0.2, 1e-12);
  EXPECT_NEAR(r.z(1), 0.8, 1e-12);
  EXPECT_GT(r.lambda_in(2), 0.0);
  EXPECT_EQ(r.lambda_in(0), 0.0);
}

TEST(SmallQp, MatchesSimplexProjection) {
  SplitMix64 rng(59);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Vector2d target(3.0 * rng.uniform01() - 1.0, 3.0 * rng.uniform01() - 1.0);
    const QpResult r = solve_qp(simplex_qp(target), Eigen::Vector2d(0.5, 0.5));
    // Projection onto the segment from (1, 0) to (0, 1).
    const double t = std::clamp(0.5 * (target(0) - target(1) + 1.0), 0.0, 1.0);
    EXPECT_NEAR(r.z(0), t, 1e-10);
    EXPECT_NEAR(r.z(1), 1.0 - t, 1e-10);
  }
}

TEST(SmallQp, InfeasibleStartThrows) {
  EXPECT_THROW(solve_qp(simplex_qp({1.0, 1.0}), Eigen::Vector2d(1.0, 1.0)), DomainError);
}

}  // namespace
}  // namespace rockrelax
