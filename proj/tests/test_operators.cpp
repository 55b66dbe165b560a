#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "pucci/errors.hpp"
#include "pucci/operators.hpp"
#include "pucci/random.hpp"

namespace {

using pucci::Ellipticity;
using pucci::Frame;
using pucci::SymMat;

double scale_of(const SymMat& x) { return std::max(1.0, x.max_abs()); }

TEST(Ellipticity, RejectsInvalidConstants) {
  EXPECT_THROW(Ellipticity(0.0, 1.0, 1), pucci::ParameterError);
  EXPECT_THROW(Ellipticity(2.0, 1.0, 1), pucci::ParameterError);
  EXPECT_THROW(Ellipticity(1.0, 1.0, 0), pucci::ParameterError);
  EXPECT_THROW(pucci::pucci_plus_p(SymMat::identity(2), Ellipticity(1.0, 1.0, 3)), pucci::DimensionError);
}

TEST(PucciP, HandComputedDiagonal) {
  const SymMat x = SymMat::diagonal({3.0, -1.0, 2.0});
  const Ellipticity ell(1.0, 2.0, 2);
  EXPECT_DOUBLE_EQ(pucci::pucci_plus_p(x, ell), 10.0);
  EXPECT_DOUBLE_EQ(pucci::pucci_minus_p(x, ell), 0.0);
  const Ellipticity one(1.0, 2.0, 1);
  EXPECT_DOUBLE_EQ(pucci::pucci_plus_p(x, one), 6.0);
  EXPECT_DOUBLE_EQ(pucci::pucci_minus_p(x, one), -2.0);
  // p = n is the classical pair
  const Ellipticity full(1.0, 2.0, 3);
  EXPECT_DOUBLE_EQ(pucci::pucci_plus_p(x, full), pucci::pucci_max_full(x, 1.0, 2.0));
  EXPECT_DOUBLE_EQ(pucci::pucci_minus_p(x, full), pucci::pucci_min_full(x, 1.0, 2.0));
}

TEST(PucciP, DualityUsesTheSameEigenRoutine) {
  pucci::Rng rng(21);
  for (int t = 0; t < 300; ++t) {
    const int n = 2 + t % 5;
    const SymMat x = pucci::random_symmetric(n, rng);
    const Ellipticity ell(0.5, 1.5, 1 + t % n);
    EXPECT_NEAR(pucci::pucci_minus_p(x, ell), -pucci::pucci_plus_p(-x, ell), 1e-12 * scale_of(x));
  }
}

TEST(PosNegParts, MatchSpectralFormula) {
  pucci::Rng rng(22);
  for (int t = 0; t < 200; ++t) {
    const SymMat x = pucci::random_symmetric(2 + t % 5, rng);
    const auto [xp, xm] = pucci::pos_neg_parts(x);
    const pucci::Spectrum s = pucci::eigen_sorted(x);
    std::vector<double> ep, em;
    for (double e : s.eigenvalues) {
      ep.push_back(std::max(e, 0.0));
      em.push_back(std::max(-e, 0.0));
    }
    EXPECT_LE((xp - SymMat::congruence(s.eigenvectors, ep)).max_abs(), 1e-12 * scale_of(x));
    EXPECT_LE((xm - SymMat::congruence(s.eigenvectors, em)).max_abs(), 1e-12 * scale_of(x));
    EXPECT_LE((xp - xm - x).max_abs(), 1e-12 * scale_of(x));
  }
}

TEST(Subspace, TraceOfRestrictionIsSumOfQuadraticForms) {
  pucci::Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 5;
    const int p = 1 + t % n;
    const SymMat x = pucci::random_symmetric(n, rng);
    const Frame w = pucci::random_frame(n, p, rng);
    double ref = 0.0;
    for (int j = 0; j < p; ++j) ref += x.quadratic_form(w.basis().column(j));
    EXPECT_NEAR(pucci::project_subspace(x, w).trace(), ref, 1e-10 * scale_of(x));
  }
}

TEST(PucciW, MaximizingFrameAttainsAndSampledFramesStayBelow) {
  pucci::Rng rng(24);
  for (int t = 0; t < 20; ++t) {
    const SymMat x = pucci::random_symmetric(4, rng);
    const Ellipticity ell(0.7, 1.9, 2);
    const double closed = pucci::pucci_plus_p(x, ell);
    EXPECT_NEAR(pucci::pucci_plus_W(x, pucci::maximizing_frame(x, 2), ell), closed, 1e-10 * scale_of(x));
    EXPECT_NEAR(pucci::pucci_minus_W(x, pucci::minimizing_frame(x, 2), ell), pucci::pucci_minus_p(x, ell),
                1e-10 * scale_of(x));
    const double sampled = pucci::grassmannian_sup_estimate(x, ell, 10000, 100 + t);
    EXPECT_LE(sampled, closed + 1e-9);
    EXPECT_GE(pucci::grassmannian_inf_estimate(x, ell, 10000, 100 + t), pucci::pucci_minus_p(x, ell) - 1e-9);
  }
}

TEST(PucciW, SamplingApproachesTheSupremumFromBelow) {
  const SymMat x = SymMat::diagonal({0.0, 0.0, 1.0});
  const Ellipticity ell(1.0, 1.0, 1);
  const double s = pucci::grassmannian_sup_estimate(x, ell, 100000, 5);
  EXPECT_LE(s, 1.0);
  EXPECT_GE(s, 1.0 - 1e-3);
}

TEST(PucciW, SupEstimateIsNonDecreasingInSamples) {
  pucci::Rng rng(25);
  const SymMat x = pucci::random_symmetric(5, rng);
  const Ellipticity ell(1.0, 3.0, 2);
  double prev = -INFINITY;
  for (std::size_t s : {1u, 10u, 100u, 1000u}) {
    const double v = pucci::grassmannian_sup_estimate(x, ell, s, 42);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(PucciW, DualsViaNegation) {
  pucci::Rng rng(26);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 5;
    const int p = 1 + t % n;
    const SymMat x = pucci::random_symmetric(n, rng);
    const Frame w = pucci::random_frame(n, p, rng);
    const Ellipticity ell(0.3, 1.2, p);
    EXPECT_NEAR(pucci::pucci_minus_W(x, w, ell), -pucci::pucci_plus_W(-x, w, ell), 1e-12 * scale_of(x));
  }
  const SymMat x = SymMat::diagonal({1.0, -2.0});
  const Ellipticity ell(1.0, 3.0, 1);
  EXPECT_DOUBLE_EQ(pucci::pucci_plus_W(x, Frame::coordinate(2, 0, 1), ell), 3.0);
  EXPECT_DOUBLE_EQ(pucci::pucci_minus_W(x, Frame::coordinate(2, 1, 1), ell), -6.0);
}

TEST(LinearFunctional, ThreeTraceExpressionsAgree) {
  pucci::Rng rng(27);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 5;
    const int p = 1 + t % n;
    const SymMat a = pucci::random_symmetric(n, rng);
    const SymMat x = pucci::random_symmetric(n, rng);
    const Frame w = pucci::random_frame(n, p, rng);
    const double l = pucci::linear_functional(a, w, x);
    const double s = scale_of(a) * scale_of(x);
    EXPECT_NEAR(l, pucci::trace_product(pucci::project_subspace(a, w), x), 1e-10 * s);
    EXPECT_NEAR(l, pucci::trace_product(a, pucci::project_subspace(x, w)), 1e-10 * s);
  }
}

TEST(LinearFunctional, SampledCoefficientsNeverExceedTheExtremalOperator) {
  pucci::Rng rng(28);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const int n = 3 + t % 3;
    const int p = 1 + t % n;
    const double lambda = 0.5, Lambda = 2.0;
    const SymMat x = pucci::random_symmetric(n, rng);
    const Frame w = pucci::random_frame(n, p, rng);
    const Ellipticity ell(lambda, Lambda, p);
    const double top = pucci::pucci_plus_W(x, w, ell);
    const double bottom = pucci::pucci_minus_W(x, w, ell);
    double best = -INFINITY;
    for (int s = 0; s < 500; ++s) {
      const Frame r = pucci::random_frame(p, p, rng);
      std::vector<double> d(p);
      for (double& v : d) v = lambda + (Lambda - lambda) * (unit(rng) < 0.5 ? 0.0 : 1.0) * unit(rng);
      const double l = pucci::linear_functional(SymMat::congruence(w.basis() * r.basis(), d), w, x);
      EXPECT_LE(l, top + 1e-8 * scale_of(x));
      EXPECT_GE(l, bottom - 1e-8 * scale_of(x));
      best = std::max(best, l);
    }
    EXPECT_LE(best, top + 1e-8 * scale_of(x));
    EXPECT_NEAR(pucci::linear_functional(pucci::extremal_coefficient(x, w, lambda, Lambda, true), w, x), top,
                1e-10 * scale_of(x));
    EXPECT_NEAR(pucci::linear_functional(pucci::extremal_coefficient(x, w, lambda, Lambda, false), w, x), bottom,
                1e-10 * scale_of(x));
  }
}

// Invariants over random inputs
class OperatorProperties : public ::testing::TestWithParam<int> {};

TEST_P(OperatorProperties, AlgebraicIdentitiesAndEllipticity) {
  const int n = GetParam();
  pucci::Rng rng(1000 + n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 400; ++t) {
    const int p = 1 + t % n;
    const double lambda = 0.2 + unit(rng), Lambda = lambda * (1.0 + 3.0 * unit(rng));
    const Ellipticity ell(lambda, Lambda, p);
    const SymMat x = pucci::random_symmetric(n, rng, 3.0);
    const SymMat y = pucci::random_symmetric(n, rng, 0.5);
    const SymMat pd = pucci::random_psd(n, rng);
    const double c = 5.0 * unit(rng);
    const double tol = 1e-9 * Lambda * (scale_of(x) + scale_of(y) + scale_of(pd)) * std::max(1.0, c);
    const double px = pucci::pucci_plus_p(x, ell), mx = pucci::pucci_minus_p(x, ell);
    const double py = pucci::pucci_plus_p(y, ell), my = pucci::pucci_minus_p(y, ell);
    const double pxy = pucci::pucci_plus_p(x + y, ell), mxy = pucci::pucci_minus_p(x + y, ell);
    EXPECT_NEAR(pucci::pucci_plus_p(c * x, ell), c * px, tol);
    EXPECT_LE(pxy, px + py + tol);
    EXPECT_LE(px + my, pxy + tol);
    EXPECT_LE(mx + my, mxy + tol);
    EXPECT_LE(mxy, px + my + tol);
    EXPECT_LE(mx, px + tol);
    const Ellipticity wide(lambda * unit(rng), Lambda * (1.0 + unit(rng)), p);
    EXPECT_LE(pucci::pucci_minus_p(x, wide), mx + tol);
    EXPECT_LE(px, pucci::pucci_plus_p(x, wide) + tol);
    EXPECT_GE(pucci::pucci_plus_p(x + pd, ell), px - tol);
    EXPECT_GE(pucci::pucci_minus_p(x + pd, ell), mx - tol);

    const Frame w = pucci::random_frame(n, p, rng);
    EXPECT_LE(pucci::pucci_plus_W(x + y, w, ell), pucci::pucci_plus_W(x, w, ell) + pucci::pucci_plus_W(y, w, ell) + tol);
    EXPECT_LE(pucci::pucci_plus_W(x, w, ell), px + tol);
    EXPECT_GE(pucci::pucci_minus_W(x, w, ell), mx - tol);
    EXPECT_GE(pucci::pucci_plus_W(x + pd, w, ell), pucci::pucci_plus_W(x, w, ell) - tol);
  }
}

INSTANTIATE_TEST_SUITE_P(Dimensions, OperatorProperties, ::testing::Values(2, 3, 4, 5, 6));

TEST(Inclusions, RandomFourByFour) {
  pucci::Rng rng(29);
  for (int t = 0; t < 3000; ++t) {
    const SymMat x = pucci::random_symmetric(4, rng);
    const int p = 1 + t % 3;
    const pucci::InclusionReport r = pucci::check_inclusions(x, 0.5, 2.0, p);
    EXPECT_LE(r.max_violation(), 1e-10) << "p=" << p;
  }
}

TEST(Inclusions, HandComputed) {
  // n = 2, p = 1: the order-p operators use (n/p) = 2 times the constants.
  const SymMat x = SymMat::diagonal({1.0, -3.0});
  const pucci::InclusionReport r = pucci::check_inclusions(x, 1.0, 2.0, 1);
  EXPECT_DOUBLE_EQ(r.pucci_max, 2.0 * 1.0 - 1.0 * 3.0);
  EXPECT_DOUBLE_EQ(r.pucci_min, 1.0 * 1.0 - 2.0 * 3.0);
  EXPECT_DOUBLE_EQ(r.upper_order_p, 4.0 * 1.0);
  EXPECT_DOUBLE_EQ(r.lower_order_p, -4.0 * 3.0);
  EXPECT_TRUE(r.holds(0.0));
}

TEST(Witness, NonUniformEllipticity) {
  const pucci::EllipticityWitness w = pucci::nonuniform_ellipticity_witness();
  EXPECT_EQ(w.gap, 0.0);
  EXPECT_EQ(w.trace_perturbation, 1.0);
  for (double t : {0.01, 0.5, 2.0, 100.0}) {
    const pucci::EllipticityWitness s = pucci::nonuniform_ellipticity_witness(t);
    EXPECT_EQ(s.gap, 0.0) << t;
    EXPECT_EQ(s.trace_perturbation, t);
  }
  EXPECT_THROW(pucci::nonuniform_ellipticity_witness(0.0), pucci::ParameterError);
}

TEST(SignResolution, SampledInfimumFollowsTheDualFormula) {
  // diag(-1, 2), p = 1, lambda = 1, Lambda = 2: the bottom eigenvalue is -1,
  // so lambda e^+ - Lambda e^- = -2 while Lambda e^+ - lambda e^- = -1.
  const SymMat x = SymMat::diagonal({-1.0, 2.0});
  const Ellipticity ell(1.0, 2.0, 1);
  const Frame inject = pucci::minimizing_frame(x, 1);
  const double sampled = pucci::grassmannian_inf_estimate(x, ell, 1000, 3, std::span<const Frame>(&inject, 1));
  EXPECT_DOUBLE_EQ(pucci::pucci_minus_p(x, ell), -2.0);
  EXPECT_NEAR(sampled, -2.0, 1e-12);
  EXPECT_GE(std::abs(-1.0 - sampled) - std::abs(-2.0 - sampled), 1e-6);
}

}  // namespace
