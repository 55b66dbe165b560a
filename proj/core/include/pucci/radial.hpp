#pragma once

#include "pucci/operators.hpp"
#include "pucci/symmat.hpp"

namespace pucci {

/// Coefficients of P+(D^2 u) + b|Du| - cu = f on a ball of radius delta.
struct ModelParams {
  double lambda = 1.0;
  double Lambda = 1.0;
  int p = 1;
  double b = 0.0;
  double c = 0.0;
  double delta = 1.0;
  double f_minus_norm = 0.0;
  int n = 2;

  /// Throws ParameterError on any field outside its range, DimensionError if p > n.
  void validate() const;
  Ellipticity ellipticity() const { return Ellipticity(lambda, Lambda, p); }
  /// lambda p - b delta
  double stability_margin() const { return lambda * p - b * delta; }
};

enum class ProfileKind { power, log, sine_cap, quadratic_barrier };

const char* to_string(ProfileKind kind);

/// Radial function u(x) = g(|x|) from a fixed closed-form catalog:
///   power            g = r^{-alpha}
///   log              g = log(R / r)
///   sine_cap         g = cos(eps/2) for r <= pi/2 - eps/2, sin r beyond
///   quadratic_barrier g = offset - gamma r^2
class RadialProfile {
 public:
  static RadialProfile power(double alpha, int n);
  static RadialProfile log(double R, int n);
  static RadialProfile sine_cap(double eps, int n);
  static RadialProfile quadratic_barrier(double gamma, double offset, int n);

  ProfileKind kind() const { return kind_; }
  int n() const { return n_; }
  double parameter() const { return a_; }
  double offset() const { return offset_; }

  /// Gluing radius of sine_cap; NaN for other kinds.
  double kink_radius() const;

  /// Throws ParameterError for r outside the domain of g (r <= 0 except for
  /// the barrier, r >= R for log) and for r at the sine_cap kink.
  double value(double r) const;
  double first(double r) const;
  double second(double r) const;

 private:
  RadialProfile(ProfileKind kind, double a, double offset, int n) : kind_(kind), a_(a), offset_(offset), n_(n) {}
  void check_radius(double r, bool allow_kink) const;

  ProfileKind kind_;
  double a_;
  double offset_;
  int n_;
};

/// Eigenvalues of D^2 u at |x| = r: g'' once (radial direction) and g'/r with
/// multiplicity n - 1.
struct RadialSpectrum {
  double e_rad = 0.0;
  double e_tan = 0.0;
  int mult_tan = 0;

  SymMat hessian() const;
};

RadialSpectrum radial_hessian_spectrum(const RadialProfile& profile, double r);

/// P+_{lambda,Lambda|p}(D^2 u) at |x| = r.
double radial_operator(const RadialProfile& profile, const Ellipticity& ell, double r);

/// (lambda / Lambda)(p - 1) - 1
double alpha_star(double lambda, double Lambda, int p);

/// The profile annihilated by P+ for the given constants: r^{-alpha*} when
/// alpha* > 0 and log(R / r) when alpha* = 0. Throws ParameterError if alpha* < 0.
RadialProfile fundamental_profile(const ModelParams& params, double R = 1.0);

/// P+(D^2 Phi_{alpha*}) at radius r. Requires b = c = 0.
double fundamental_residual(const ModelParams& params, double r, double R = 1.0);

double counterexample_delta(double eps);
/// lambda p / (delta - eps)
double counterexample_b(double eps, double lambda, int p);

struct CounterexampleReport {
  double eps = 0.0;
  double r = 0.0;
  double delta = 0.0;
  double b = 0.0;
  /// P+(D^2 u) + b|Du| at r
  double quantity = 0.0;
  bool subsolution_holds = false;
  double interior_max = 1.0;
  double boundary_max = 0.0;
  double violation_margin = 0.0;
  /// b delta / (lambda p) = delta / (delta - eps)
  double threshold_ratio = 0.0;
};

/// Subsolution check of the sine_cap profile with b = counterexample_b at a
/// radius of the outer piece. Requires 0 < eps < pi/6, p < n and
/// r in [pi/2 - eps/2, pi/2 + eps/2].
CounterexampleReport counterexample_check(double eps, double lambda, double Lambda, int p, int n, double r);

/// One-sided limits of the sine_cap profile at its gluing radius.
struct KinkReport {
  double radius = 0.0;
  double value_inner = 0.0;
  double value_outer = 0.0;
  double slope_inner = 0.0;
  double slope_outer = 0.0;
  /// slope_outer - slope_inner; a nonnegative jump is a convex corner, which
  /// no smooth function touches from above.
  double slope_jump() const { return slope_outer - slope_inner; }
};

KinkReport sine_cap_kink(double eps);

struct BarrierPoint {
  double gamma = 0.0;
  double value = 0.0;
  /// P+(D^2 v) + b|Dv| (- c v) + ||f^-||
  double residual = 0.0;
};

/// v = gamma (delta^2 - r^2) + boundary_limsup with
/// gamma = ||f^-|| / (2 (lambda p - b delta)). Requires b delta < lambda p and
/// 0 <= r <= delta; c is ignored.
BarrierPoint barrier_value_and_residual(const ModelParams& params, double r, double boundary_limsup);

/// v = gamma (delta^2 + (2/c)(lambda p - b delta)^- + eps_hat - r^2) + boundary_limsup_plus
/// with gamma = ||f^-|| / (2 (lambda p - b delta)^+ + c eps_hat). Requires c > 0.
BarrierPoint barrier_c_value(const ModelParams& params, double eps_hat, double r, double boundary_limsup_plus);

/// C(eps_hat) for c > 0.
double mp_constant_c(const ModelParams& params, double eps_hat);

struct MpConstant {
  double C = 0.0;
  /// Minimizing eps_hat on the search grid; NaN when c = 0.
  double eps_hat = 0.0;
};

/// c = 0: delta^2 / (2 (lambda p - b delta)), ParameterError unless b delta < lambda p.
/// c > 0: minimum of mp_constant_c over a log grid of eps_hat in [1e-6, 1e6].
MpConstant mp_constant(const ModelParams& params);

}  // namespace pucci
