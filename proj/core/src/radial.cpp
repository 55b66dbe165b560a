#include "pucci/radial.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "pucci/errors.hpp"

namespace pucci {

namespace {

constexpr double kPi = std::numbers::pi;

void require_n(int n) {
  if (n < 1) throw DimensionError("dimension n must be >= 1");
}

void require_eps(double eps) {
  if (!(eps > 0.0) || !(eps < kPi / 6.0)) throw ParameterError("sine_cap requires 0 < eps < pi/6");
}

double pos(double x) { return x > 0.0 ? x : 0.0; }
double neg(double x) { return x < 0.0 ? -x : 0.0; }

}  // namespace

void ModelParams::validate() const {
  Ellipticity check(lambda, Lambda, p);
  (void)check;
  if (n < 1) throw DimensionError("dimension n must be >= 1");
  if (p > n) throw DimensionError("order p exceeds dimension n");
  if (!(b >= 0.0) || !std::isfinite(b)) throw ParameterError("b must be finite and >= 0");
  if (!(c >= 0.0) || !std::isfinite(c)) throw ParameterError("c must be finite and >= 0");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("delta must be finite and > 0");
  if (!(f_minus_norm >= 0.0) || !std::isfinite(f_minus_norm)) throw ParameterError("f_minus_norm must be finite and >= 0");
}

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::power: return "power";
    case ProfileKind::log: return "log";
    case ProfileKind::sine_cap: return "sine_cap";
    case ProfileKind::quadratic_barrier: return "quadratic_barrier";
  }
  return "unknown";
}

RadialProfile RadialProfile::power(double alpha, int n) {
  require_n(n);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("power profile requires alpha > 0");
  return RadialProfile(ProfileKind::power, alpha, 0.0, n);
}

RadialProfile RadialProfile::log(double R, int n) {
  require_n(n);
  if (!(R > 0.0) || !std::isfinite(R)) throw ParameterError("log profile requires R > 0");
  return RadialProfile(ProfileKind::log, R, 0.0, n);
}

RadialProfile RadialProfile::sine_cap(double eps, int n) {
  require_n(n);
  require_eps(eps);
  return RadialProfile(ProfileKind::sine_cap, eps, 0.0, n);
}

RadialProfile RadialProfile::quadratic_barrier(double gamma, double offset, int n) {
  require_n(n);
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ParameterError("barrier requires gamma >= 0");
  return RadialProfile(ProfileKind::quadratic_barrier, gamma, offset, n);
}

double RadialProfile::kink_radius() const {
  return kind_ == ProfileKind::sine_cap ? kPi / 2.0 - a_ / 2.0 : std::numeric_limits<double>::quiet_NaN();
}

void RadialProfile::check_radius(double r, bool allow_kink) const {
  if (!std::isfinite(r)) throw ParameterError("radius must be finite");
  if (kind_ == ProfileKind::quadratic_barrier) {
    if (r < 0.0) throw ParameterError("radius must be >= 0");
    return;
  }
  if (!(r > 0.0)) throw ParameterError("radial profile evaluated at r <= 0");
  if (kind_ == ProfileKind::log && !(r < a_)) throw ParameterError("log profile requires r < R");
  if (kind_ == ProfileKind::sine_cap && !allow_kink && r == kink_radius())
    throw ParameterError("sine_cap is not twice differentiable at its gluing radius");
}

double RadialProfile::value(double r) const {
  check_radius(r, true);
  switch (kind_) {
    case ProfileKind::power: return std::pow(r, -a_);
    case ProfileKind::log: return std::log(a_ / r);
    case ProfileKind::sine_cap: return r <= kink_radius() ? std::cos(a_ / 2.0) : std::sin(r);
    case ProfileKind::quadratic_barrier: return offset_ - a_ * r * r;
  }
  return 0.0;
}

double RadialProfile::first(double r) const {
  check_radius(r, false);
  switch (kind_) {
    case ProfileKind::power: return -a_ * std::pow(r, -a_ - 1.0);
    case ProfileKind::log: return -1.0 / r;
    case ProfileKind::sine_cap: return r < kink_radius() ? 0.0 : std::cos(r);
    case ProfileKind::quadratic_barrier: return -2.0 * a_ * r;
  }
  return 0.0;
}

double RadialProfile::second(double r) const {
  check_radius(r, false);
  switch (kind_) {
    case ProfileKind::power: return a_ * (a_ + 1.0) * std::pow(r, -a_ - 2.0);
    case ProfileKind::log: return 1.0 / (r * r);
    case ProfileKind::sine_cap: return r < kink_radius() ? 0.0 : -std::sin(r);
    case ProfileKind::quadratic_barrier: return -2.0 * a_;
  }
  return 0.0;
}

SymMat RadialSpectrum::hessian() const {
  std::vector<double> d(static_cast<std::size_t>(mult_tan) + 1, e_tan);
  d[0] = e_rad;
  return SymMat::diagonal(d);
}

RadialSpectrum radial_hessian_spectrum(const RadialProfile& profile, double r) {
  RadialSpectrum s;
  s.e_rad = profile.second(r);
  s.mult_tan = profile.n() - 1;
  // g'/r is -2 gamma in the limit r -> 0 for the barrier
  if (profile.kind() == ProfileKind::quadratic_barrier)
    s.e_tan = -2.0 * profile.parameter();
  else
    s.e_tan = profile.first(r) / r;
  return s;
}

double radial_operator(const RadialProfile& profile, const Ellipticity& ell, double r) {
  return pucci_plus_p(radial_hessian_spectrum(profile, r).hessian(), ell);
}

double alpha_star(double lambda, double Lambda, int p) { return lambda / Lambda * (p - 1) - 1.0; }

RadialProfile fundamental_profile(const ModelParams& params, double R) {
  params.validate();
  const double a = alpha_star(params.lambda, params.Lambda, params.p);
  if (a < 0.0) throw ParameterError("alpha* < 0: no positive fundamental solution");
  if (a == 0.0) return RadialProfile::log(R, params.n);
  return RadialProfile::power(a, params.n);
}

double fundamental_residual(const ModelParams& params, double r, double R) {
  if (params.b != 0.0 || params.c != 0.0) throw ParameterError("fundamental_residual requires b = c = 0");
  return radial_operator(fundamental_profile(params, R), params.ellipticity(), r);
}

double counterexample_delta(double eps) { return kPi / 2.0 + eps / 2.0; }

double counterexample_b(double eps, double lambda, int p) {
  return lambda * p / (counterexample_delta(eps) - eps);
}

CounterexampleReport counterexample_check(double eps, double lambda, double Lambda, int p, int n, double r) {
  require_eps(eps);
  const Ellipticity ell(lambda, Lambda, p);
  if (p >= n) throw DimensionError("the counterexample requires p < n");
  const double lo = kPi / 2.0 - eps / 2.0;
  const double hi = kPi / 2.0 + eps / 2.0;
  if (!(r >= lo && r <= hi)) throw ParameterError("radius outside the outer piece of the sine cap");

  CounterexampleReport rep;
  rep.eps = eps;
  rep.r = r;
  rep.delta = counterexample_delta(eps);
  rep.b = counterexample_b(eps, lambda, p);
  // outer piece u = sin r, closed at the kink from the right
  RadialSpectrum s;
  s.e_rad = -std::sin(r);
  s.e_tan = std::cos(r) / r;
  s.mult_tan = n - 1;
  rep.quantity = pucci_plus_p(s.hessian(), ell) + rep.b * std::abs(std::cos(r));
  rep.subsolution_holds = rep.quantity >= -1e-12;
  rep.interior_max = 1.0;
  rep.boundary_max = std::sin(rep.delta);
  rep.violation_margin = rep.interior_max - rep.boundary_max;
  rep.threshold_ratio = rep.b * rep.delta / (lambda * p);
  return rep;
}

KinkReport sine_cap_kink(double eps) {
  require_eps(eps);
  KinkReport k;
  k.radius = kPi / 2.0 - eps / 2.0;
  k.value_inner = std::cos(eps / 2.0);
  k.value_outer = std::sin(k.radius);
  k.slope_inner = 0.0;
  k.slope_outer = std::cos(k.radius);
  return k;
}

namespace {

void require_barrier_radius(const ModelParams& params, double r) {
  if (!(r >= 0.0 && r <= params.delta)) throw ParameterError("barrier radius must lie in [0, delta]");
}

double barrier_residual(const ModelParams& params, double gamma, double r) {
  const SymMat hess = radial_hessian_spectrum(RadialProfile::quadratic_barrier(gamma, 0.0, params.n), r).hessian();
  return pucci_plus_p(hess, params.ellipticity()) + params.b * 2.0 * gamma * r + params.f_minus_norm;
}

}  // namespace

BarrierPoint barrier_value_and_residual(const ModelParams& params, double r, double boundary_limsup) {
  params.validate();
  const double margin = params.stability_margin();
  if (!(margin > 0.0)) throw ParameterError("barrier requires b delta < lambda p");
  require_barrier_radius(params, r);
  BarrierPoint bp;
  bp.gamma = params.f_minus_norm / (2.0 * margin);
  bp.value = bp.gamma * (params.delta * params.delta - r * r) + boundary_limsup;
  bp.residual = barrier_residual(params, bp.gamma, r);
  return bp;
}

BarrierPoint barrier_c_value(const ModelParams& params, double eps_hat, double r, double boundary_limsup_plus) {
  params.validate();
  if (!(params.c > 0.0)) throw ParameterError("barrier_c_value requires c > 0");
  if (!(eps_hat > 0.0) || !std::isfinite(eps_hat)) throw ParameterError("eps_hat must be > 0");
  if (!(boundary_limsup_plus >= 0.0)) throw ParameterError("boundary term must be >= 0");
  require_barrier_radius(params, r);
  const double margin = params.stability_margin();
  BarrierPoint bp;
  bp.gamma = params.f_minus_norm / (2.0 * pos(margin) + params.c * eps_hat);
  const double lift = params.delta * params.delta + 2.0 / params.c * neg(margin) + eps_hat;
  bp.value = bp.gamma * (lift - r * r) + boundary_limsup_plus;
  bp.residual = barrier_residual(params, bp.gamma, r) - params.c * bp.value;
  return bp;
}

double mp_constant_c(const ModelParams& params, double eps_hat) {
  params.validate();
  if (!(params.c > 0.0)) throw ParameterError("mp_constant_c requires c > 0");
  if (!(eps_hat > 0.0) || !std::isfinite(eps_hat)) throw ParameterError("eps_hat must be > 0");
  const double margin = params.stability_margin();
  return (params.delta * params.delta + 2.0 / params.c * neg(margin) + eps_hat) /
         (2.0 * pos(margin) + params.c * eps_hat);
}

MpConstant mp_constant(const ModelParams& params) {
  params.validate();
  MpConstant out;
  if (params.c == 0.0) {
    const double margin = params.stability_margin();
    if (!(margin > 0.0)) throw ParameterError("mp_constant with c = 0 requires b delta < lambda p");
    out.C = params.delta * params.delta / (2.0 * margin);
    out.eps_hat = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  constexpr int kSteps = 120;
  out.C = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= kSteps; ++k) {
    const double eps_hat = std::pow(10.0, -6.0 + 12.0 * k / kSteps);
    const double value = mp_constant_c(params, eps_hat);
    if (value < out.C) {
      out.C = value;
      out.eps_hat = eps_hat;
    }
  }
  return out;
}

}  // namespace pucci
