#include "pucci/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pucci/errors.hpp"
#include "pucci/random.hpp"

namespace pucci {

Ellipticity::Ellipticity(double lambda_, double Lambda_, int p_) : lambda(lambda_), Lambda(Lambda_), p(p_) {
  if (!(lambda > 0.0) || !(Lambda >= lambda) || !std::isfinite(Lambda))
    throw ParameterError("ellipticity constants must satisfy 0 < lambda <= Lambda");
  if (p < 1) throw ParameterError("order p must be >= 1");
}

namespace {

void require_order(int p, int n) {
  if (p > n) throw DimensionError("order p = " + std::to_string(p) + " exceeds dimension n = " + std::to_string(n));
}

void require_frame(const SymMat& x, const Frame& w, const Ellipticity& ell) {
  if (w.n() != x.n()) throw DimensionError("frame ambient dimension differs from matrix dimension");
  if (w.p() != ell.p) throw DimensionError("frame dimension differs from the order p");
}

}  // namespace

std::pair<SymMat, SymMat> pos_neg_parts(const SymMat& x) {
  const Spectrum s = eigen_sorted(x);
  std::vector<double> plus(s.n());
  std::vector<double> minus(s.n());
  for (int i = 0; i < s.n(); ++i) {
    plus[i] = std::max(s.eigenvalues[i], 0.0);
    minus[i] = std::max(-s.eigenvalues[i], 0.0);
  }
  return {SymMat::congruence(s.eigenvectors, plus), SymMat::congruence(s.eigenvectors, minus)};
}

SymMat project_subspace(const SymMat& x, const Frame& w) {
  if (w.n() != x.n()) throw DimensionError("frame ambient dimension differs from matrix dimension");
  // P X P = B (B^T X B) B^T
  const SymMat c = w.compress(x);
  const Matrix& b = w.basis();
  SymMat r(x.n());
  for (int i = 0; i < x.n(); ++i)
    for (int j = i; j < x.n(); ++j) {
      double s = 0.0;
      for (int a = 0; a < w.p(); ++a)
        for (int k = 0; k < w.p(); ++k) s += b(i, a) * c(a, k) * b(j, k);
      r.set(i, j, s);
    }
  return r;
}

double pucci_plus_p(const Spectrum& s, const Ellipticity& ell) {
  require_order(ell.p, s.n());
  double sum = 0.0;
  for (int i = s.n() - ell.p; i < s.n(); ++i) sum += upper_weight(s.eigenvalues[i], ell.lambda, ell.Lambda);
  return sum;
}

double pucci_plus_p(const SymMat& x, const Ellipticity& ell) {
  require_order(ell.p, x.n());
  return pucci_plus_p(eigen_sorted(x), ell);
}

double pucci_minus_p(const Spectrum& s, const Ellipticity& ell) {
  require_order(ell.p, s.n());
  double sum = 0.0;
  for (int i = 0; i < ell.p; ++i) sum += lower_weight(s.eigenvalues[i], ell.lambda, ell.Lambda);
  return sum;
}

double pucci_minus_p(const SymMat& x, const Ellipticity& ell) {
  require_order(ell.p, x.n());
  return pucci_minus_p(eigen_sorted(x), ell);
}

double pucci_max_full(const SymMat& x, double lambda, double Lambda) {
  return pucci_plus_p(x, Ellipticity(lambda, Lambda, x.n()));
}

double pucci_min_full(const SymMat& x, double lambda, double Lambda) {
  return pucci_minus_p(x, Ellipticity(lambda, Lambda, x.n()));
}

// The nonzero spectrum of X_W = B (B^T X B) B^T is the spectrum of the
// p x p compression B^T X B, so the traces of (X_W)^{+/-} are read from it.
double pucci_plus_W(const SymMat& x, const Frame& w, const Ellipticity& ell) {
  require_frame(x, w, ell);
  double sum = 0.0;
  for (double e : eigenvalues_sorted(w.compress(x))) sum += upper_weight(e, ell.lambda, ell.Lambda);
  return sum;
}

double pucci_minus_W(const SymMat& x, const Frame& w, const Ellipticity& ell) {
  require_frame(x, w, ell);
  double sum = 0.0;
  for (double e : eigenvalues_sorted(w.compress(x))) sum += lower_weight(e, ell.lambda, ell.Lambda);
  return sum;
}

double linear_functional(const SymMat& a, const Frame& w, const SymMat& x) {
  if (a.n() != x.n() || w.n() != x.n()) throw DimensionError("linear functional dimension mismatch");
  return trace_product(project_subspace(a, w), project_subspace(x, w));
}

Frame maximizing_frame(const SymMat& x, int p) {
  if (p < 1) throw DimensionError("order p must be >= 1");
  require_order(p, x.n());
  const Spectrum s = eigen_sorted(x);
  Matrix b(x.n(), p);
  for (int k = 0; k < p; ++k) b.set_column(k, s.eigenvectors.column(x.n() - p + k));
  return Frame(std::move(b));
}

Frame minimizing_frame(const SymMat& x, int p) {
  if (p < 1) throw DimensionError("order p must be >= 1");
  require_order(p, x.n());
  const Spectrum s = eigen_sorted(x);
  Matrix b(x.n(), p);
  for (int k = 0; k < p; ++k) b.set_column(k, s.eigenvectors.column(k));
  return Frame(std::move(b));
}

SymMat extremal_coefficient(const SymMat& x, const Frame& w, double lambda, double Lambda, bool maximize) {
  const Spectrum s = eigen_sorted(w.compress(x));
  // columns of B R span the eigenspaces of X_W inside W
  const Matrix br = w.basis() * s.eigenvectors;
  std::vector<double> weights(s.n());
  for (int k = 0; k < s.n(); ++k) {
    const bool nonnegative = s.eigenvalues[k] >= 0.0;
    weights[k] = (nonnegative == maximize) ? Lambda : lambda;
  }
  return SymMat::congruence(br, weights);
}

double grassmannian_sup_estimate(const SymMat& x, const Ellipticity& ell, std::size_t samples, std::uint64_t seed,
                                 std::span<const Frame> injected) {
  require_order(ell.p, x.n());
  double best = -std::numeric_limits<double>::infinity();
  for (const Frame& w : injected) best = std::max(best, pucci_plus_W(x, w, ell));
  Rng rng(seed);
  for (std::size_t k = 0; k < samples; ++k) best = std::max(best, pucci_plus_W(x, random_frame(x.n(), ell.p, rng), ell));
  return best;
}

double grassmannian_inf_estimate(const SymMat& x, const Ellipticity& ell, std::size_t samples, std::uint64_t seed,
                                 std::span<const Frame> injected) {
  require_order(ell.p, x.n());
  double best = std::numeric_limits<double>::infinity();
  for (const Frame& w : injected) best = std::min(best, pucci_minus_W(x, w, ell));
  Rng rng(seed);
  for (std::size_t k = 0; k < samples; ++k) best = std::min(best, pucci_minus_W(x, random_frame(x.n(), ell.p, rng), ell));
  return best;
}

double InclusionReport::max_violation() const {
  return std::max({lower_order_p - pucci_min, pucci_min - pucci_max, pucci_max - upper_order_p});
}

InclusionReport check_inclusions(const SymMat& x, double lambda, double Lambda, int p) {
  const int n = x.n();
  if (p < 1) throw ParameterError("order p must be >= 1");
  require_order(p, n);
  const Spectrum s = eigen_sorted(x);
  const double scale = static_cast<double>(n) / p;
  const Ellipticity scaled(scale * lambda, scale * Lambda, p);
  const Ellipticity full(lambda, Lambda, n);
  InclusionReport r;
  r.lower_order_p = pucci_minus_p(s, scaled);
  r.pucci_min = pucci_minus_p(s, full);
  r.pucci_max = pucci_plus_p(s, full);
  r.upper_order_p = pucci_plus_p(s, scaled);
  return r;
}

EllipticityWitness nonuniform_ellipticity_witness(double t) {
  if (!(t > 0.0)) throw ParameterError("witness scaling must be positive");
  EllipticityWitness w;
  w.x = SymMat::diagonal({std::max(1.0, t), 0.0});
  w.perturbation = SymMat::diagonal({0.0, t});
  w.gap = eigenvalues_sorted(w.x + w.perturbation)[1] - eigenvalues_sorted(w.x)[1];
  w.trace_perturbation = w.perturbation.trace();
  return w;
}

}  // namespace pucci
