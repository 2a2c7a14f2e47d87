#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "rockrelax/divergence.hpp"
#include "rockrelax/errors.hpp"
#include "rockrelax/random.hpp"

namespace rockrelax {
namespace {

const double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd random_point(SplitMix64& rng, Eigen::Index s) {
  Eigen::VectorXd q(s);
  for (Eigen::Index i = 0; i < s; ++i) q(i) = rng.uniform01() + 1e-3;
  return q / q.sum();
}

TEST(Phi, PointValues) {
  const PhiFamily kl(PhiKind::kKullbackLeibler);
  EXPECT_EQ(phi_eval(kl, 1.0), ExtReal(0.0));
  EXPECT_EQ(phi_eval(kl, 0.0), ExtReal(1.0));
  EXPECT_EQ(phi_eval(PhiFamily(PhiKind::kVariational), 3.0), ExtReal(2.0));
  EXPECT_DOUBLE_EQ(phi_eval(PhiFamily(PhiKind::kChiSquared), 3.0).value(), 4.0);
  EXPECT_DOUBLE_EQ(phi_eval(PhiFamily(PhiKind::kHellinger), 4.0).value(), 1.0);
  EXPECT_DOUBLE_EQ(phi_eval(PhiFamily(PhiKind::kModifiedChiSquared), 2.0).value(), 0.5);
  EXPECT_DOUBLE_EQ(phi_eval(PhiFamily(PhiKind::kJDivergence), std::exp(1.0)).value(), std::exp(1.0) - 1.0);
  EXPECT_DOUBLE_EQ(phi_eval(PhiFamily(PhiKind::kBurg), std::exp(1.0)).value(), std::exp(1.0) - 2.0);
}

TEST(Phi, NegativeArgumentIsInfinite) {
  for (const auto& family : all_phi_families()) EXPECT_TRUE(phi_eval(family, -0.1).is_pos_inf()) << family.name();
}

TEST(Phi, AllFamiliesSatisfyAxioms) {
  ASSERT_EQ(all_phi_families().size(), 7u);
  for (const auto& family : all_phi_families()) {
    const PhiAxiomReport report = check_phi_axioms(family);
    EXPECT_TRUE(report.ok()) << family.name() << " worst violation " << report.worst_convexity_violation;
  }
}

TEST(Phi, LimitSlopes) {
  EXPECT_EQ(PhiFamily(PhiKind::kKullbackLeibler).limit_slope(), kInf);
  EXPECT_EQ(PhiFamily(PhiKind::kChiSquared).limit_slope(), kInf);
  EXPECT_EQ(PhiFamily(PhiKind::kVariational).limit_slope(), 1.0);
  // -ln t + t - 1 grows like t.
  EXPECT_EQ(PhiFamily(PhiKind::kBurg).limit_slope(), 1.0);
  for (const auto& family : all_phi_families()) {
    const double ratio = phi_eval(family, 1e8).value() / 1e8;
    if (std::isfinite(family.limit_slope())) {
      EXPECT_NEAR(ratio, family.limit_slope(), 1e-3) << family.name();
    } else {
      EXPECT_GT(ratio, 10.0) << family.name();
    }
  }
}

TEST(Phi, TagsRoundTrip) {
  for (const auto& family : all_phi_families()) {
    EXPECT_EQ(phi_family_from_tag(family.name()).kind(), family.kind());
  }
  EXPECT_THROW(phi_family_from_tag("renyi"), ConfigError);
}

TEST(Phi, ConjugateArgmaxIsSubgradientInverse) {
  for (const auto& family : all_phi_families()) {
    for (double slope : {-2.0, -0.5, 0.0, 0.3, 0.9}) {
      const Interval argmax = family.conjugate_argmax(slope);
      if (!std::isfinite(argmax.hi)) continue;
      const double t = 0.5 * (argmax.lo + argmax.hi);
      const double value = phi_eval(family, t).value() - slope * t;
      for (double probe = 0.0; probe <= 20.0; probe += 1e-3) {
        const ExtReal other = phi_eval(family, probe);
        if (other.is_finite()) EXPECT_LE(value, other.value() - slope * probe + 1e-9) << family.name();
      }
    }
  }
}

TEST(Divergence, IdenticalVectorsGiveZero) {
  const Eigen::Vector3d q(0.2, 0.0, 0.8);
  for (const auto& family : all_phi_families()) EXPECT_EQ(phi_divergence(family, q, q), ExtReal(0.0)) << family.name();
}

TEST(Divergence, KullbackLeiblerLn2) {
  const ExtReal d = phi_divergence(PhiFamily(PhiKind::kKullbackLeibler), Eigen::Vector2d(1.0, 0.0),
                                   Eigen::Vector2d(0.5, 0.5));
  EXPECT_NEAR(d.value(), 0.693147, 1e-6);
  EXPECT_NEAR(d.value(), std::log(2.0), 1e-15);
}

TEST(Divergence, VariationalIsL1) {
  const ExtReal d =
      phi_divergence(PhiFamily(PhiKind::kVariational), Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.5, 0.5));
  EXPECT_DOUBLE_EQ(d.value(), 1.0);
}

TEST(Divergence, ZeroBaseConventions) {
  const Eigen::Vector2d base(1.0, 0.0);
  const Eigen::Vector2d moved(0.75, 0.25);
  EXPECT_TRUE(phi_divergence(PhiFamily(PhiKind::kKullbackLeibler), moved, base).is_pos_inf());
  // 1 * Phi(0.75) + 0.25 * limit slope.
  EXPECT_DOUBLE_EQ(phi_divergence(PhiFamily(PhiKind::kVariational), moved, base).value(), 0.25 + 0.25);
}

TEST(Divergence, LengthMismatchThrows) {
  EXPECT_THROW(phi_divergence(PhiFamily(PhiKind::kKullbackLeibler), Eigen::VectorXd(Eigen::Vector2d(1, 0)),
                              Eigen::VectorXd(Eigen::Vector3d(1, 0, 0))),
               DimensionError);
}

TEST(Divergence, NonnegativeAndConvexOnRandomTriples) {
  SplitMix64 rng(29);
  for (const auto& family : all_phi_families()) {
    for (int trial = 0; trial < 200; ++trial) {
      const Eigen::VectorXd base = random_point(rng, 4);
      const Eigen::VectorXd q1 = random_point(rng, 4);
      const Eigen::VectorXd q2 = random_point(rng, 4);
      const double d1 = phi_divergence(family, q1, base).value();
      const double d2 = phi_divergence(family, q2, base).value();
      const double dm = phi_divergence(family, Eigen::VectorXd(0.5 * (q1 + q2)), base).value();
      EXPECT_GE(d1, 0.0);
      EXPECT_GT(d1, 0.0) << family.name();
      EXPECT_LE(dm, 0.5 * (d1 + d2) + 1e-10) << family.name();
    }
  }
}

TEST(Divergence, ContinuousAsEntryVanishes) {
  const Eigen::Vector2d base(0.4, 0.6);
  for (const auto& family : all_phi_families()) {
    const ExtReal at_zero = phi_divergence(family, Eigen::Vector2d(0.0, 1.0), base);
    const ExtReal near_zero = phi_divergence(family, Eigen::Vector2d(1e-9, 1.0 - 1e-9), base);
    if (at_zero.is_finite()) {
      // Hellinger has a square-root modulus at zero.
      EXPECT_NEAR(near_zero.value(), at_zero.value(), 1e-3) << family.name();
    } else {
      EXPECT_GT(near_zero.value(), 5.0) << family.name();
    }
  }
}

}  // namespace
}  // namespace rockrelax
