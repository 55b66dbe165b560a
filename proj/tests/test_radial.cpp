#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pucci/errors.hpp"
#include "pucci/operators.hpp"
#include "pucci/radial.hpp"

namespace {

using pucci::ModelParams;
using pucci::RadialProfile;

constexpr double kPi = std::numbers::pi;

ModelParams model(double lambda, double Lambda, int p, int n, double b = 0.0, double c = 0.0, double delta = 1.0,
                  double f = 0.0) {
  ModelParams m;
  m.lambda = lambda;
  m.Lambda = Lambda;
  m.p = p;
  m.n = n;
  m.b = b;
  m.c = c;
  m.delta = delta;
  m.f_minus_norm = f;
  return m;
}

TEST(Radial, AlphaStar) {
  EXPECT_DOUBLE_EQ(pucci::alpha_star(1.0, 1.0, 2), 0.0);
  EXPECT_DOUBLE_EQ(pucci::alpha_star(1.0, 1.0, 3), 1.0);
  EXPECT_DOUBLE_EQ(pucci::alpha_star(1.0, 2.0, 1), -1.0);
  EXPECT_DOUBLE_EQ(pucci::alpha_star(1.0, 2.0, 5), 1.0);
}

TEST(Radial, PowerSpectrumAtUnitRadius) {
  const double a = 0.7;
  const pucci::RadialSpectrum s = pucci::radial_hessian_spectrum(RadialProfile::power(a, 4), 1.0);
  EXPECT_NEAR(s.e_rad, a * (a + 1.0), 1e-15);
  EXPECT_NEAR(s.e_tan, -a, 1e-15);
  EXPECT_EQ(s.mult_tan, 3);
}

TEST(Radial, ProfileDerivativesMatchCentralDifferences) {
  const double eta = 1e-4;
  for (const RadialProfile& prof :
       {RadialProfile::power(0.5, 2), RadialProfile::power(1.3, 3), RadialProfile::log(5.0, 2),
        RadialProfile::sine_cap(kPi / 8.0, 2), RadialProfile::quadratic_barrier(0.75, 2.0, 2)}) {
    for (double r : {0.3, 0.9, 1.6, 1.75}) {
      if (prof.kind() == pucci::ProfileKind::sine_cap && std::abs(r - prof.kink_radius()) < 10 * eta) continue;
      const double d1 = (prof.value(r + eta) - prof.value(r - eta)) / (2 * eta);
      const double d2 = (prof.value(r + eta) - 2 * prof.value(r) + prof.value(r - eta)) / (eta * eta);
      EXPECT_NEAR(prof.first(r), d1, 1e-6 * std::max(1.0, std::abs(d1))) << pucci::to_string(prof.kind()) << " r=" << r;
      EXPECT_NEAR(prof.second(r), d2, 1e-6 * std::max(1.0, std::abs(d2))) << pucci::to_string(prof.kind()) << " r=" << r;
    }
  }
}

TEST(Radial, SineCapOuterSpectrum) {
  const double eps = kPi / 8.0;
  const RadialProfile prof = RadialProfile::sine_cap(eps, 2);
  for (double r : {kPi / 2 - eps / 4, kPi / 2, kPi / 2 + eps / 3}) {
    const pucci::RadialSpectrum s = pucci::radial_hessian_spectrum(prof, r);
    EXPECT_NEAR(s.e_rad, -std::sin(r), 1e-15);
    EXPECT_NEAR(s.e_tan, std::cos(r) / r, 1e-15);
    EXPECT_EQ(s.mult_tan, 1);
  }
  EXPECT_DOUBLE_EQ(prof.value(0.1), std::cos(eps / 2));
}

TEST(Radial, SineCapKinkIsAConvexCorner) {
  const pucci::KinkReport k = pucci::sine_cap_kink(kPi / 8.0);
  EXPECT_DOUBLE_EQ(k.radius, kPi / 2 - kPi / 16);
  EXPECT_NEAR(k.value_inner, k.value_outer, 1e-16);
  EXPECT_EQ(k.slope_inner, 0.0);
  EXPECT_NEAR(k.slope_jump(), std::sin(kPi / 16), 1e-15);
  EXPECT_THROW((void)RadialProfile::sine_cap(kPi / 8.0, 2).second(k.radius), pucci::ParameterError);
}

TEST(Radial, FundamentalSolutionsAreAnnihilated) {
  EXPECT_NEAR(pucci::fundamental_residual(model(1, 1, 3, 3), 2.0), 0.0, 1e-15);
  EXPECT_NEAR(pucci::fundamental_residual(model(1, 1, 2, 2), 0.4, 3.0), 0.0, 1e-14);
  const RadialProfile phi = RadialProfile::power(1.0, 3);
  const pucci::RadialSpectrum s = pucci::radial_hessian_spectrum(phi, 2.0);
  EXPECT_NEAR(pucci::pucci_plus_p(s.hessian(), pucci::Ellipticity(1, 1, 3)), 0.0, 1e-15);
}

TEST(Radial, SubcriticalExponentIsStrictlyNegative) {
  const double a = pucci::alpha_star(1.0, 1.5, 5) - 0.5;
  const RadialProfile prof = RadialProfile::power(a, 5);
  for (double r : {0.01, 0.5, 3.0}) EXPECT_LT(pucci::radial_operator(prof, pucci::Ellipticity(1.0, 1.5, 5), r), 0.0);
}

TEST(Radial, FundamentalResidualRequiresNoLowerOrderTerms) {
  EXPECT_THROW(pucci::fundamental_residual(model(1, 1, 2, 2, 1.0), 0.5), pucci::ParameterError);
}

TEST(Counterexample, ClosedFormAtPiOverEight) {
  const double eps = kPi / 8.0;
  const pucci::CounterexampleReport r = pucci::counterexample_check(eps, 1.0, 1.0, 1, 2, kPi / 2);
  EXPECT_NEAR(r.quantity, 0.0, 1e-15);
  EXPECT_TRUE(r.subsolution_holds);
  EXPECT_EQ(r.interior_max, 1.0);
  EXPECT_DOUBLE_EQ(r.boundary_max, std::cos(eps / 2));
  EXPECT_GE(r.violation_margin, 0.019);
  EXPECT_NEAR(r.threshold_ratio, 9.0 / 7.0, 1e-15);
  EXPECT_NEAR(r.b, 16.0 / (7.0 * kPi), 1e-15);
  EXPECT_NEAR(r.delta, 9.0 * kPi / 16.0, 1e-15);
}

TEST(Counterexample, SubsolutionAcrossTheAnnulus) {
  for (double eps : {0.05, kPi / 8.0, 0.5}) {
    const double lo = kPi / 2 - eps / 2, hi = kPi / 2 + eps / 2;
    for (int k = 0; k <= 1000; ++k) {
      const double r = lo + (hi - lo) * k / 1000.0;
      EXPECT_GE(pucci::counterexample_check(eps, 1.0, 1.0, 1, 2, r).quantity, -1e-12) << eps << " " << r;
    }
  }
}

TEST(Counterexample, ParameterErrors) {
  EXPECT_THROW(pucci::counterexample_check(kPi / 4.0, 1, 1, 1, 2, kPi / 2), pucci::ParameterError);
  EXPECT_THROW(pucci::counterexample_check(kPi / 8.0, 1, 1, 2, 2, kPi / 2), pucci::DimensionError);
  EXPECT_THROW(pucci::counterexample_check(kPi / 8.0, 1, 1, 1, 2, 0.5), pucci::ParameterError);
}

TEST(Barrier, ZeroGradientTermIsExact) {
  const ModelParams m = model(1.0, 2.0, 2, 2, 0.0, 0.0, 1.0, 3.0);
  for (double r : {0.0, 0.5, 1.0}) {
    const pucci::BarrierPoint bp = pucci::barrier_value_and_residual(m, r, 0.2);
    EXPECT_NEAR(bp.gamma, 3.0 / 4.0, 1e-15);
    EXPECT_NEAR(bp.residual, 0.0, 1e-14);
    EXPECT_NEAR(bp.value, 0.75 * (1.0 - r * r) + 0.2, 1e-15);
  }
}

TEST(Barrier, GradientTermVanishesOnlyOnTheBoundary) {
  const ModelParams m = model(1.0, 1.0, 2, 2, 1.0, 0.0, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(pucci::barrier_value_and_residual(m, 1.0, 0.0).gamma, 1.0);
  EXPECT_NEAR(pucci::barrier_value_and_residual(m, 1.0, 0.0).residual, 0.0, 1e-14);
  for (double r : {0.0, 0.3, 0.9}) EXPECT_LT(pucci::barrier_value_and_residual(m, r, 0.0).residual, 0.0);
  EXPECT_THROW(pucci::barrier_value_and_residual(model(1, 1, 2, 2, 2.0, 0, 1, 1), 0.5, 0.0), pucci::ParameterError);
}

TEST(MpConstant, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(pucci::mp_constant(model(1, 1, 2, 2, 0.0)).C, 0.25);
  EXPECT_DOUBLE_EQ(pucci::mp_constant(model(1, 1, 2, 2, 1.0)).C, 0.5);
  EXPECT_DOUBLE_EQ(pucci::mp_constant_c(model(1, 1, 1, 2, 2.0, 1.0), 1.0), 4.0);
  EXPECT_THROW(pucci::mp_constant(model(1, 1, 2, 2, 2.0)), pucci::ParameterError);
}

TEST(MpConstant, ZeroOrderTermMinimizesOverTheGrid) {
  const ModelParams m = model(1, 1, 1, 2, 2.0, 1.0);
  const pucci::MpConstant c = pucci::mp_constant(m);
  EXPECT_LE(c.C, pucci::mp_constant_c(m, 1.0));
  EXPECT_DOUBLE_EQ(c.C, pucci::mp_constant_c(m, c.eps_hat));
  // b = 0, c = 1, large eps_hat: (delta^2 + eps_hat) / (2 lambda p + eps_hat) -> 1
  EXPECT_NEAR(pucci::mp_constant_c(model(1, 1, 2, 2, 0.0, 1.0), 1e9), 1.0, 1e-8);
}

TEST(MpConstant, ZeroOrderBarrierIsASupersolution) {
  const ModelParams m = model(1, 1, 1, 2, 2.0, 1.0, 1.0, 1.0);
  for (double r : {0.0, 0.4, 1.0}) EXPECT_LE(pucci::barrier_c_value(m, 1.0, r, 0.0).residual, 1e-14) << r;
}

}  // namespace
