#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pucci/errors.hpp"
#include "pucci/experiments.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

pucci::ModelParams laplace() {
  pucci::ModelParams mp;
  mp.lambda = mp.Lambda = 1.0;
  mp.p = 2;
  return mp;
}

TEST(GridCounterexample, EightDirectionsKeepTheResidualAboveTheFloor) {
  const pucci::GridCounterexampleReport r = pucci::grid_counterexample(kPi / 8, 1.0 / 32, 3, 1.0, 1.0);
  EXPECT_TRUE(r.subsolution_holds);
  EXPECT_GE(r.min_residual, -5.0 / 32);
  EXPECT_GT(r.violation_margin, 0.0);
  EXPECT_NEAR(r.interior_max, 1.0, 1e-3);
}

TEST(GridCounterexample, AxisStencilMissesTheFloor) {
  const pucci::GridCounterexampleReport r = pucci::grid_counterexample(kPi / 8, 1.0 / 32, 1, 1.0, 1.0);
  EXPECT_FALSE(r.subsolution_holds);
  EXPECT_LT(r.min_residual, r.residual_floor);
}

TEST(Emp, PuncturedBoundBehavesOnACoarseGrid) {
  pucci::EmpConfig cfg;
  cfg.params = laplace();
  cfg.h = 1.0 / 16;
  const pucci::EmpReport r = pucci::emp_experiment(cfg);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_TRUE(r.all_hold);
  EXPECT_TRUE(r.slack_monotone);
  EXPECT_EQ(r.alpha, 0.0);
  EXPECT_EQ(r.naive_boundary_max, 2.0);
  for (std::size_t i = 1; i < r.rows.size(); ++i) EXPECT_LT(r.rows[i].slack, r.rows[i - 1].slack);
}

TEST(Emp, EmptyExceptionalSetIsThePlainMaximumPrinciple) {
  pucci::EmpConfig cfg;
  cfg.params = laplace();
  cfg.h = 1.0 / 16;
  cfg.puncture = false;
  cfg.f_const = -1.0;
  const pucci::EmpReport r = pucci::emp_experiment(cfg);
  EXPECT_FALSE(r.punctured);
  EXPECT_TRUE(r.all_hold);
  EXPECT_LE(r.interior_max, r.limit_bound);
}

TEST(Emp, ZeroOrderVariantWithLargeDrift) {
  pucci::EmpConfig cfg;
  cfg.params = laplace();
  cfg.params.b = 3.0;
  cfg.params.c = 1.0;
  cfg.h = 1.0 / 16;
  cfg.puncture = false;
  cfg.f_const = -1.0;
  const pucci::EmpReport r = pucci::emp_experiment(cfg);
  EXPECT_TRUE(r.all_hold);
}

TEST(Removability, GatedOutsideTheHypotheses) {
  pucci::RemovabilityConfig cfg;
  cfg.params = laplace();
  cfg.params.p = 1;
  EXPECT_THROW(pucci::removability_experiment(cfg), pucci::ParameterError);
}

TEST(Removability, ErrorDecreasesOnACoarseGrid) {
  pucci::RemovabilityConfig cfg;
  cfg.params = laplace();
  cfg.h = 1.0 / 32;
  cfg.r_in_seq = {0.4, 0.2, 0.1};
  const pucci::RemovabilityReport r = pucci::removability_experiment(cfg);
  EXPECT_EQ(r.alpha_star, 0.0);
  EXPECT_TRUE(r.decreasing);
  ASSERT_EQ(r.rows.size(), 3u);
  for (const auto& row : r.rows) EXPECT_TRUE(row.converged);
}

}  // namespace
