#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pucci/capacity.hpp"
#include "pucci/errors.hpp"
#include "pucci/random.hpp"

namespace {

using pucci::DiscreteMeasure;
using pucci::KernelParams;
using pucci::Point;
using pucci::SetSpec;

long double kernel_ld(long double r, long double alpha, long double d) {
  return alpha == 0.0L ? std::log(2.0L * d / r) : std::pow(r, -alpha);
}

long double potential_ld(const DiscreteMeasure& mu, const KernelParams& k, const Point& x) {
  long double s = 0.0L;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    long double r2 = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const long double dx = static_cast<long double>(x[i]) - mu.atoms[j][i];
      r2 += dx * dx;
    }
    s += mu.weights[j] * kernel_ld(std::sqrt(r2), k.alpha, k.d);
  }
  return s;
}

// w = Q^{-1} 1 / (1^T Q^{-1} 1) by Gaussian elimination with partial pivoting.
std::vector<long double> kkt_weights(const std::vector<double>& q, std::size_t n) {
  std::vector<long double> a(n * (n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * (n + 1) + j] = q[i * n + j];
    a[i * (n + 1) + n] = 1.0L;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r * (n + 1) + c]) > std::abs(a[piv * (n + 1) + c])) piv = r;
    for (std::size_t j = 0; j <= n; ++j) std::swap(a[c * (n + 1) + j], a[piv * (n + 1) + j]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const long double f = a[r * (n + 1) + c] / a[c * (n + 1) + c];
      for (std::size_t j = c; j <= n; ++j) a[r * (n + 1) + j] -= f * a[c * (n + 1) + j];
    }
  }
  std::vector<long double> w(n);
  long double total = 0.0L;
  for (std::size_t i = 0; i < n; ++i) total += w[i] = a[i * (n + 1) + n] / a[i * (n + 1) + i];
  for (long double& v : w) v /= total;
  return w;
}

TEST(Kernel, ValidatesParameters) {
  EXPECT_THROW((KernelParams{2.0, 1.0, 2}.validate()), pucci::ParameterError);
  EXPECT_THROW((KernelParams{-0.5, 1.0, 2}.validate()), pucci::ParameterError);
  EXPECT_THROW((KernelParams{0.0, 0.0, 2}.validate()), pucci::ParameterError);
  EXPECT_NO_THROW((KernelParams{1.9, 1.0, 2}.validate()));
}

TEST(Kernel, MatchesExtendedPrecision) {
  const KernelParams k{1.9, 1.0, 2};
  EXPECT_NEAR(pucci::kernel_of_distance(k, 0.5), static_cast<double>(kernel_ld(0.5L, 1.9L, 1.0L)), 1e-15);
  const KernelParams l{0.0, 1.5, 2};
  EXPECT_NEAR(pucci::kernel_of_distance(l, 0.25), static_cast<double>(kernel_ld(0.25L, 0.0L, 1.5L)), 1e-15);
  const Point x{0.0, 0.0}, y{0.3, 0.4};
  EXPECT_NEAR(pucci::kernel_value(k, x, y), std::pow(0.5, -1.9), 1e-15);
  EXPECT_THROW(pucci::kernel_value(k, x, x), pucci::BlowUpError);
}

TEST(Potential, InfiniteOnAtomsAndFiniteElsewhere) {
  const DiscreteMeasure mu = DiscreteMeasure::uniform({{0.0, 0.0}, {0.5, 0.0}});
  const KernelParams k{0.5, 1.0, 2};
  EXPECT_TRUE(pucci::potential(mu, k, Point{0.5, 0.0}).infinite);
  EXPECT_THROW(pucci::potential(mu, k, Point{0.5, 0.0}).require_finite(), pucci::BlowUpError);
  EXPECT_TRUE(pucci::potential(mu, k, Point{0.2, 0.1}).is_finite());
}

TEST(Potential, CircleCenterEqualsRadiusPower) {
  const double radius = 0.6;
  const KernelParams k{1.3, 1.0, 2};
  const pucci::Discretization disc = pucci::discretize(SetSpec::circle({0.0, 0.0}, radius, 64), k);
  const DiscreteMeasure mu = DiscreteMeasure::uniform(disc.atoms);
  EXPECT_NEAR(pucci::potential(mu, k, Point{0.0, 0.0}).value, std::pow(radius, -1.3), 1e-13);
}

TEST(Potential, DerivativesMatchExtendedPrecisionDifferences) {
  pucci::Rng rng(31);
  for (const KernelParams& k : {KernelParams{0.0, 1.0, 2}, KernelParams{0.8, 1.0, 3}, KernelParams{2.5, 2.0, 3}}) {
    std::vector<Point> atoms;
    for (int j = 0; j < 7; ++j) atoms.push_back(pucci::random_point_in_ball(k.n, 0.5, rng));
    const DiscreteMeasure mu = DiscreteMeasure::uniform(atoms);
    const Point x(k.n, 0.8);
    const pucci::PotentialDerivatives d = pucci::potential_derivatives(mu, k, x);
    const long double eta = 1e-5L;
    EXPECT_NEAR(d.value, static_cast<double>(potential_ld(mu, k, x)), 1e-13);
    for (int a = 0; a < k.n; ++a) {
      Point xp = x, xm = x;
      xp[a] += static_cast<double>(eta);
      xm[a] -= static_cast<double>(eta);
      const long double g = (potential_ld(mu, k, xp) - potential_ld(mu, k, xm)) / (2.0L * eta);
      EXPECT_NEAR(d.gradient[a], static_cast<double>(g), 1e-6);
      const long double h = (potential_ld(mu, k, xp) - 2.0L * potential_ld(mu, k, x) + potential_ld(mu, k, xm)) / (eta * eta);
      EXPECT_NEAR(d.hessian(a, a), static_cast<double>(h), 1e-4);
    }
  }
}

TEST(Measure, JsonRoundTripAndValidation) {
  const DiscreteMeasure mu = DiscreteMeasure::uniform({{0.0, 1.0}, {1.0, 0.0}, {0.25, 0.125}});
  const DiscreteMeasure back = pucci::measure_from_json(pucci::to_json(mu));
  EXPECT_EQ(back.atoms, mu.atoms);
  EXPECT_EQ(back.weights, mu.weights);
  DiscreteMeasure bad = mu;
  bad.weights[0] = 0.5;
  EXPECT_THROW(bad.validate(), pucci::InputError);
}

TEST(Discretize, PointUsesScaleOverResolution) {
  const KernelParams k{0.0, 1.0, 2};
  for (int N : {16, 64, 1024}) {
    const pucci::EquilibriumResult r = pucci::equilibrium_measure(SetSpec::point({0.0, 0.0}, N), k);
    EXPECT_NEAR(r.V_est, std::log(2.0 * N), 1e-12);
  }
}

TEST(Discretize, RejectsAtomsOutsideTheBall) {
  const KernelParams k{0.0, 1.0, 2};
  EXPECT_THROW(pucci::discretize(SetSpec::segment({-2.0, 0.0}, {0.0, 0.0}, 10), k), pucci::ParameterError);
}

TEST(Equilibrium, AgreesWithDenseKktSolve) {
  const KernelParams k{0.0, 1.0, 2};
  const SetSpec seg = SetSpec::segment({-1.0, 0.0}, {1.0, 0.0}, 50);
  const pucci::Discretization disc = pucci::discretize(seg, k);
  const std::vector<double> q = pucci::energy_matrix(disc, k);
  const std::vector<long double> w = kkt_weights(q, disc.atoms.size());
  for (long double v : w) ASSERT_GT(v, 0.0L);
  std::vector<double> wd(w.begin(), w.end());
  const double v_ref = pucci::discrete_energy(q, wd);

  pucci::EquilibriumOptions opts;
  opts.tol = 1e-12;
  opts.iterations = 500000;
  for (auto variant : {pucci::FrankWolfeVariant::pairwise, pucci::FrankWolfeVariant::classic}) {
    opts.variant = variant;
    const pucci::EquilibriumResult r = pucci::equilibrium_measure(seg, k, opts);
    EXPECT_NEAR(r.V_est, v_ref, 1e-9 * std::abs(v_ref));
    if (variant == pucci::FrankWolfeVariant::pairwise) {
      EXPECT_TRUE(r.converged);
      for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(r.measure.weights[i], static_cast<double>(w[i]), 1e-4);
    }
  }
}

TEST(Equilibrium, SegmentWeightsAreSymmetricAndHeavierAtTheEnds) {
  const KernelParams k{0.0, 1.0, 2};
  const pucci::EquilibriumResult r = pucci::equilibrium_measure(SetSpec::segment({-1.0, 0.0}, {1.0, 0.0}, 200), k);
  const auto& w = r.measure.weights;
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], w[w.size() - 1 - i], 1e-5);
  EXPECT_GT(w.front(), 2.0 * w[w.size() / 2]);
  double mass = 0.0;
  for (double v : w) mass += v;
  EXPECT_NEAR(mass, 1.0, 1e-14);
}

TEST(Equilibrium, EnergyHistoryIsNonIncreasing) {
  const KernelParams k{0.5, 1.0, 2};
  const pucci::EquilibriumResult r = pucci::equilibrium_measure(SetSpec::circle({0.0, 0.0}, 0.5, 64), k);
  for (std::size_t i = 1; i < r.energy_history.size(); ++i)
    EXPECT_LE(r.energy_history[i], r.energy_history[i - 1] * (1.0 + 1e-12));
}

TEST(Capacity, ValueConversionAndMonotonicityOverNestedSets) {
  EXPECT_DOUBLE_EQ(pucci::capacity_from_value(2.0, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(pucci::capacity_from_value(std::log(4.0), 0.0), 0.25);
  EXPECT_EQ(pucci::capacity_from_value(INFINITY, 0.0), 0.0);
  const KernelParams k{0.0, 1.0, 2};
  const double small = pucci::equilibrium_measure(SetSpec::segment({-0.5, 0.0}, {0.5, 0.0}, 128), k).V_est;
  const double large = pucci::equilibrium_measure(SetSpec::segment({-1.0, 0.0}, {1.0, 0.0}, 128), k).V_est;
  EXPECT_LE(pucci::capacity_from_value(small, 0.0), pucci::capacity_from_value(large, 0.0) + 1e-6);
}

TEST(RhoK, ClosedForms) {
  const pucci::RhoK a = pucci::rho_and_K(1.0, 1.0, 4, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(a.rho, 1.0);
  EXPECT_DOUBLE_EQ(a.K, 1.0);
  const pucci::RhoK b = pucci::rho_and_K(1.0, 1.0, 3, 1.0, 0.0);
  EXPECT_EQ(b.K, 0.0);
  EXPECT_TRUE(std::isinf(b.rho));
  EXPECT_THROW(pucci::rho_and_K(1.0, 1.0, 3, 1.0, 1.0), pucci::ParameterError);
  EXPECT_THROW(pucci::rho_and_K(1.0, 1.0, 3, 1.5, 0.0), pucci::ParameterError);
  // alpha = 0 uses the log kernel: K = b / rho
  const pucci::RhoK c = pucci::rho_and_K(1.0, 1.0, 3, 0.0, 2.0);
  EXPECT_DOUBLE_EQ(c.rho, 0.5);
  EXPECT_DOUBLE_EQ(c.K, 4.0);
}

TEST(Supersolution, SingleAtomCases) {
  pucci::ModelParams mp;
  mp.lambda = mp.Lambda = 1.0;
  mp.p = 3;
  mp.n = 3;
  const KernelParams k{1.0, 1.0, 3};
  const DiscreteMeasure dirac = DiscreteMeasure::uniform({{0.0, 0.0, 0.0}});
  for (double r : {0.1, 0.7, 2.0}) EXPECT_NEAR(pucci::potential_supersolution_residual(dirac, k, mp, Point{r, 0.0, 0.0}), 0.0, 1e-12);

  mp.p = 4;
  mp.n = 4;
  mp.b = 1.0;
  const KernelParams k4{1.0, 1.0, 4};
  const DiscreteMeasure d4 = DiscreteMeasure::uniform({{0.0, 0.0, 0.0, 0.0}});
  const double K = pucci::rho_and_K(1.0, 1.0, 4, 1.0, 1.0).K;
  EXPECT_NEAR(pucci::potential_supersolution_residual(d4, k4, mp, Point{0.0, 1.0, 0.0, 0.0}) + K, 0.0, 1e-14);
  for (double r : {0.2, 0.5, 3.0}) EXPECT_LE(pucci::potential_supersolution_residual(d4, k4, mp, Point{r, 0.0, 0.0, 0.0}), 1e-14);
}

TEST(UnionPotential, BelowOneAtTheReferencePointAndInfiniteOnAtoms) {
  const KernelParams k{0.0, 1.0, 2};
  std::vector<DiscreteMeasure> parts;
  for (int m = 0; m < 5; ++m) parts.push_back(DiscreteMeasure::uniform({{0.1 * m, 0.5}, {0.1 * m, -0.5}}));
  const Point x0{0.0, 0.0};
  const pucci::UnionPotential v(parts, k, x0);
  EXPECT_EQ(v.terms(), 5u);
  EXPECT_LT(v.value(x0).value, 1.0);
  EXPECT_TRUE(v.value(Point{0.2, 0.5}).infinite);
}

}  // namespace
