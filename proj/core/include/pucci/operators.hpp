#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

#include "pucci/eigen.hpp"
#include "pucci/frame.hpp"
#include "pucci/symmat.hpp"

namespace pucci {

/// Absolute tolerance used throughout, scaled by max(1, ||X||).
inline constexpr double kTolerance = 1e-10;

inline double tolerance_scale(const SymMat& x) { return x.max_abs() > 1.0 ? x.max_abs() : 1.0; }

/// Ellipticity constants 0 < lambda <= Lambda and the order p >= 1.
struct Ellipticity {
  double lambda = 1.0;
  double Lambda = 1.0;
  int p = 1;

  Ellipticity() = default;
  /// Throws ParameterError unless 0 < lambda <= Lambda and p >= 1.
  Ellipticity(double lambda, double Lambda, int p);
};

/// Extremal weight applied to a single eigenvalue: Lambda e^+ - lambda e^-.
inline double upper_weight(double e, double lambda, double Lambda) {
  return e >= 0.0 ? Lambda * e : lambda * e;
}
/// lambda e^+ - Lambda e^-
inline double lower_weight(double e, double lambda, double Lambda) {
  return e >= 0.0 ? lambda * e : Lambda * e;
}

/// X = X^+ - X^-, X^+ X^- = 0, both positive semidefinite.
std::pair<SymMat, SymMat> pos_neg_parts(const SymMat& x);

/// P_W X P_W
SymMat project_subspace(const SymMat& x, const Frame& w);

/// Lambda * sum of the top p positive parts minus lambda * the negative parts.
/// Throws DimensionError if p > n.
double pucci_plus_p(const SymMat& x, const Ellipticity& ell);
double pucci_plus_p(const Spectrum& spectrum, const Ellipticity& ell);

/// lambda * sum of the bottom p positive parts minus Lambda * the negative
/// parts; equals -pucci_plus_p(-X).
double pucci_minus_p(const SymMat& x, const Ellipticity& ell);
double pucci_minus_p(const Spectrum& spectrum, const Ellipticity& ell);

/// Classical Pucci extremal operators (p = n).
double pucci_max_full(const SymMat& x, double lambda, double Lambda);
double pucci_min_full(const SymMat& x, double lambda, double Lambda);

/// Operators restricted to W: Lambda Tr((X_W)^+) - lambda Tr((X_W)^-), and
/// lambda Tr((X_W)^+) - Lambda Tr((X_W)^-) for the minimal one.
/// Requires W.p() == ell.p and W.n() == X.n().
double pucci_plus_W(const SymMat& x, const Frame& w, const Ellipticity& ell);
double pucci_minus_W(const SymMat& x, const Frame& w, const Ellipticity& ell);

/// Tr(A_W X_W)
double linear_functional(const SymMat& a, const Frame& w, const SymMat& x);

/// Eigenvectors of the p largest eigenvalues; ties resolved by the order of
/// eigen_sorted.
Frame maximizing_frame(const SymMat& x, int p);
/// Eigenvectors of the p smallest eigenvalues.
Frame minimizing_frame(const SymMat& x, int p);

/// Coefficient matrix attaining the supremum over lambda I_W <= A_W <= Lambda I_W
/// of L_{A|W} X: Lambda on the nonnegative eigenspace of X_W, lambda on the
/// negative one, zero off W. With `maximize == false` the roles of the two
/// constants are swapped, giving the infimum.
SymMat extremal_coefficient(const SymMat& x, const Frame& w, double lambda, double Lambda, bool maximize = true);

/// Maximum of pucci_plus_W over `samples` random frames drawn sequentially
/// from `seed`, plus any `injected` frames. Non-decreasing in `samples`.
double grassmannian_sup_estimate(const SymMat& x, const Ellipticity& ell, std::size_t samples,
                                 std::uint64_t seed, std::span<const Frame> injected = {});

/// Minimum of pucci_minus_W over sampled frames.
double grassmannian_inf_estimate(const SymMat& x, const Ellipticity& ell, std::size_t samples,
                                 std::uint64_t seed, std::span<const Frame> injected = {});

/// The chain P^-_{(n/p)l,(n/p)L|p} <= M^-_{l,L} <= M^+_{l,L} <= P^+_{(n/p)l,(n/p)L|p}.
struct InclusionReport {
  double lower_order_p = 0.0;
  double pucci_min = 0.0;
  double pucci_max = 0.0;
  double upper_order_p = 0.0;

  /// Largest amount by which any link of the chain fails (<= 0 if it holds).
  double max_violation() const;
  bool holds(double tol) const { return max_violation() <= tol; }
};

InclusionReport check_inclusions(const SymMat& x, double lambda, double Lambda, int p);

/// X = diag(max(1, t), 0), P = diag(0, t): e_2(X + P) - e_2(X) = 0 although
/// Tr(P) = t.
struct EllipticityWitness {
  SymMat x;
  SymMat perturbation;
  double gap = 0.0;
  double trace_perturbation = 0.0;
};

EllipticityWitness nonuniform_ellipticity_witness(double t = 1.0);

}  // namespace pucci
