#include "pucci/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pucci/errors.hpp"
#include "pucci/operators.hpp"

namespace pucci {

namespace {

double distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = x[i] - y[i];
    s += t * t;
  }
  return std::sqrt(s);
}

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void require_dim(std::span<const double> x, int n, const char* what) {
  if (static_cast<int>(x.size()) != n) throw DimensionError(std::string(what) + ": point dimension differs from kernel dimension");
}

// g, g', g'' of the kernel profile at r > 0
struct Profile {
  double g, g1, g2;
};

Profile kernel_profile(const KernelParams& k, double r) {
  if (k.alpha == 0.0) return {std::log(2.0 * k.d / r), -1.0 / r, 1.0 / (r * r)};
  const double a = k.alpha;
  const double ra = std::pow(r, -a);
  return {ra, -a * ra / r, a * (a + 1.0) * ra / (r * r)};
}

}  // namespace

void KernelParams::validate() const {
  if (n < 1) throw DimensionError("kernel dimension must be >= 1");
  if (!(alpha >= 0.0) || !(alpha < n)) throw ParameterError("Riesz exponent must satisfy 0 <= alpha < n");
  if (!(d > 0.0) || !std::isfinite(d)) throw ParameterError("kernel scale d must be > 0");
}

ExtendedReal ExtendedReal::plus_infinity() { return {std::numeric_limits<double>::infinity(), true}; }

double ExtendedReal::require_finite() const {
  if (infinite) throw BlowUpError("potential is +infinity at this point");
  return value;
}

double kernel_of_distance(const KernelParams& k, double r) {
  if (!(r > 0.0)) throw BlowUpError("kernel evaluated at zero distance");
  return kernel_profile(k, r).g;
}

double kernel_value(const KernelParams& k, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("kernel_value: point dimensions differ");
  return kernel_of_distance(k, distance(x, y));
}

void DiscreteMeasure::validate(double mass_tol) const {
  if (atoms.size() != weights.size()) throw InputError("measure: atoms and weights differ in length");
  if (atoms.empty()) throw InputError("measure: no atoms");
  const std::size_t n = atoms.front().size();
  if (n == 0) throw InputError("measure: zero-dimensional atom");
  double mass = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].size() != n) throw InputError("measure: atoms of different dimensions");
    for (double v : atoms[i])
      if (!std::isfinite(v)) throw InputError("measure: non-finite atom coordinate");
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) throw InputError("measure: negative or non-finite weight");
    mass += weights[i];
  }
  if (std::abs(mass - 1.0) > mass_tol) throw InputError("measure: total mass differs from 1");
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      if (atoms[i] == atoms[j]) throw InputError("measure: repeated atom");
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<Point> atoms) {
  DiscreteMeasure mu;
  const double w = atoms.empty() ? 0.0 : 1.0 / static_cast<double>(atoms.size());
  mu.weights.assign(atoms.size(), w);
  mu.atoms = std::move(atoms);
  return mu;
}

nlohmann::json to_json(const DiscreteMeasure& mu) {
  nlohmann::json j;
  j["atoms"] = mu.atoms;
  j["weights"] = mu.weights;
  return j;
}

DiscreteMeasure measure_from_json(const nlohmann::json& j) {
  DiscreteMeasure mu;
  try {
    mu.atoms = j.at("atoms").get<std::vector<Point>>();
    mu.weights = j.at("weights").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("measure JSON: ") + e.what());
  }
  // serialized weights carry 17 digits, so the mass may drift by a few ulps
  mu.validate(1e-12);
  return mu;
}

ExtendedReal potential(const DiscreteMeasure& mu, const KernelParams& k, std::span<const double> x) {
  require_dim(x, k.n, "potential");
  double s = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    if (mu.weights[j] == 0.0) continue;
    const double r = distance(x, mu.atoms[j]);
    if (r == 0.0) return ExtendedReal::plus_infinity();
    s += mu.weights[j] * kernel_profile(k, r).g;
  }
  return ExtendedReal::finite(s);
}

PotentialDerivatives potential_derivatives(const DiscreteMeasure& mu, const KernelParams& k, std::span<const double> x) {
  require_dim(x, k.n, "potential_derivatives");
  const int n = k.n;
  PotentialDerivatives out;
  out.gradient.assign(n, 0.0);
  out.hessian = SymMat(n);
  std::vector<double> u(n);
  for (std::size_t j = 0; j < mu.size(); ++j) {
    const double w = mu.weights[j];
    if (w == 0.0) continue;
    const double r = distance(x, mu.atoms[j]);
    if (r == 0.0) throw BlowUpError("potential derivatives requested on an atom");
    for (int i = 0; i < n; ++i) u[i] = (x[i] - mu.atoms[j][i]) / r;
    const Profile g = kernel_profile(k, r);
    const double tangential = g.g1 / r;
    out.value += w * g.g;
    for (int a = 0; a < n; ++a) {
      out.gradient[a] += w * g.g1 * u[a];
      for (int b = a; b < n; ++b) {
        const double uu = u[a] * u[b];
        out.hessian.add(a, b, w * (g.g2 * uu + tangential * ((a == b ? 1.0 : 0.0) - uu)));
      }
    }
  }
  return out;
}

const char* to_string(SetKind kind) {
  switch (kind) {
    case SetKind::point: return "point";
    case SetKind::point_cloud: return "point_cloud";
    case SetKind::segment: return "segment";
    case SetKind::circle: return "circle";
    case SetKind::cantor: return "cantor";
  }
  return "unknown";
}

SetSpec SetSpec::point(Point center, int resolution) {
  SetSpec s;
  s.kind = SetKind::point;
  s.points = {std::move(center)};
  s.resolution = resolution;
  return s;
}

SetSpec SetSpec::point_cloud(std::vector<Point> cloud, int resolution) {
  SetSpec s;
  s.kind = SetKind::point_cloud;
  s.points = std::move(cloud);
  s.resolution = resolution;
  return s;
}

SetSpec SetSpec::segment(Point a, Point b, int resolution) {
  SetSpec s;
  s.kind = SetKind::segment;
  s.points = {std::move(a), std::move(b)};
  s.resolution = resolution;
  return s;
}

SetSpec SetSpec::circle(Point center, double radius, int resolution) {
  SetSpec s;
  s.kind = SetKind::circle;
  s.points = {std::move(center)};
  s.radius = radius;
  s.resolution = resolution;
  return s;
}

SetSpec SetSpec::cantor(Point a, Point b, int level, int resolution) {
  SetSpec s;
  s.kind = SetKind::cantor;
  s.points = {std::move(a), std::move(b)};
  s.level = level;
  s.resolution = resolution;
  return s;
}

nlohmann::json SetSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  j["points"] = points;
  j["resolution"] = resolution;
  if (kind == SetKind::circle) j["radius"] = radius;
  if (kind == SetKind::cantor) j["level"] = level;
  return j;
}

namespace {

Point lerp(const Point& a, const Point& b, double t) {
  Point p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] + t * (b[i] - a[i]);
  return p;
}

std::vector<double> half_nearest_neighbour(const std::vector<Point>& atoms) {
  std::vector<double> h(atoms.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      const double r = distance(atoms[i], atoms[j]);
      h[i] = std::min(h[i], r);
      h[j] = std::min(h[j], r);
    }
  for (double& v : h) v *= 0.5;
  return h;
}

void require_points(const SetSpec& s, std::size_t count, int n) {
  if (s.points.size() != count) throw ParameterError(std::string(to_string(s.kind)) + ": wrong number of defining points");
  for (const Point& p : s.points)
    if (static_cast<int>(p.size()) != n) throw DimensionError("set point dimension differs from kernel dimension");
}

// endpoints of the 2^level intervals of the middle-thirds construction on [0, 1]
std::vector<double> cantor_endpoints(int level) {
  std::vector<std::pair<double, double>> intervals{{0.0, 1.0}};
  for (int l = 0; l < level; ++l) {
    std::vector<std::pair<double, double>> next;
    next.reserve(intervals.size() * 2);
    for (auto [a, b] : intervals) {
      const double third = (b - a) / 3.0;
      next.emplace_back(a, a + third);
      next.emplace_back(b - third, b);
    }
    intervals = std::move(next);
  }
  std::vector<double> t;
  t.reserve(intervals.size() * 2);
  for (auto [a, b] : intervals) {
    t.push_back(a);
    t.push_back(b);
  }
  return t;
}

}  // namespace

Discretization discretize(const SetSpec& set, const KernelParams& k) {
  k.validate();
  const int n = k.n;
  const int N = set.resolution;
  if (N < 1) throw ParameterError("set resolution must be >= 1");
  Discretization out;
  bool isolated = false;
  switch (set.kind) {
    case SetKind::point:
      require_points(set, 1, n);
      out.atoms = set.points;
      isolated = true;
      break;
    case SetKind::point_cloud:
      if (set.points.empty()) throw ParameterError("point_cloud: empty cloud");
      for (const Point& p : set.points)
        if (static_cast<int>(p.size()) != n) throw DimensionError("set point dimension differs from kernel dimension");
      out.atoms = set.points;
      isolated = true;
      break;
    case SetKind::segment:
      require_points(set, 2, n);
      if (N < 2) throw ParameterError("segment: resolution must be >= 2");
      if (set.points[0] == set.points[1]) throw ParameterError("segment: degenerate endpoints");
      for (int i = 0; i < N; ++i) out.atoms.push_back(lerp(set.points[0], set.points[1], static_cast<double>(i) / (N - 1)));
      break;
    case SetKind::circle: {
      require_points(set, 1, n);
      if (n < 2) throw DimensionError("circle: requires n >= 2");
      if (!(set.radius > 0.0)) throw ParameterError("circle: radius must be > 0");
      if (N < 2) throw ParameterError("circle: resolution must be >= 2");
      for (int i = 0; i < N; ++i) {
        const double t = 2.0 * std::numbers::pi * i / N;
        Point p = set.points[0];
        p[0] += set.radius * std::cos(t);
        p[1] += set.radius * std::sin(t);
        out.atoms.push_back(std::move(p));
      }
      break;
    }
    case SetKind::cantor: {
      require_points(set, 2, n);
      if (set.level < 0 || set.level > 20) throw ParameterError("cantor: level must lie in [0, 20]");
      if (N < 2) throw ParameterError("cantor: resolution must be >= 2");
      const std::vector<double> t = cantor_endpoints(set.level);
      const std::size_t count = t.size();
      if (static_cast<std::size_t>(N) > count) throw ParameterError("cantor: resolution exceeds the number of interval endpoints");
      for (int i = 0; i < N; ++i) {
        const std::size_t idx = static_cast<std::size_t>(std::llround(static_cast<double>(i) * (count - 1) / (N - 1)));
        out.atoms.push_back(lerp(set.points[0], set.points[1], t[idx]));
      }
      break;
    }
  }
  for (const Point& p : out.atoms)
    if (norm(p) > k.d) throw ParameterError("set leaves the ball of radius d");
  for (std::size_t i = 0; i < out.atoms.size(); ++i)
    for (std::size_t j = i + 1; j < out.atoms.size(); ++j)
      if (out.atoms[i] == out.atoms[j]) throw ParameterError("set has coincident atoms");

  if (isolated)
    out.self_scale.assign(out.atoms.size(), k.d / N);
  else
    out.self_scale = half_nearest_neighbour(out.atoms);
  return out;
}

std::vector<double> energy_matrix(const Discretization& disc, const KernelParams& k) {
  const std::size_t N = disc.atoms.size();
  std::vector<double> q(N * N);
  for (std::size_t i = 0; i < N; ++i) {
    q[i * N + i] = kernel_of_distance(k, disc.self_scale[i]);
    for (std::size_t j = i + 1; j < N; ++j) {
      const double v = kernel_value(k, disc.atoms[i], disc.atoms[j]);
      q[i * N + j] = v;
      q[j * N + i] = v;
    }
  }
  return q;
}

double discrete_energy(std::span<const double> q, std::span<const double> w) {
  const std::size_t N = w.size();
  double e = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < N; ++j) row += q[i * N + j] * w[j];
    e += w[i] * row;
  }
  return e;
}

namespace {

void multiply(std::span<const double> q, std::span<const double> w, std::vector<double>& out) {
  const std::size_t N = w.size();
  for (std::size_t i = 0; i < N; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < N; ++j) row += q[i * N + j] * w[j];
    out[i] = row;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

constexpr std::size_t kRefreshEvery = 100;

}  // namespace

EquilibriumResult equilibrium_measure(const SetSpec& set, const KernelParams& k, const EquilibriumOptions& opts) {
  const Discretization disc = discretize(set, k);
  const std::vector<double> q = energy_matrix(disc, k);
  const std::size_t N = disc.atoms.size();

  std::vector<double> w(N, 1.0 / static_cast<double>(N));
  std::vector<double> qw(N);
  multiply(q, w, qw);

  EquilibriumResult res;
  double energy = dot(w, qw);
  if (opts.record_history) res.energy_history.push_back(energy);

  for (std::size_t it = 0;; ++it) {
    // gradient of w^T Q w is 2 Q w; gaps are computed on Q w and doubled
    std::size_t s = 0;
    for (std::size_t i = 1; i < N; ++i)
      if (qw[i] < qw[s]) s = i;
    res.gap = 2.0 * (energy - qw[s]);
    res.iterations = it;
    if (res.gap <= opts.tol) {
      res.converged = true;
      break;
    }
    if (it == opts.iterations) break;

    double step = 0.0;
    if (opts.variant == FrankWolfeVariant::pairwise) {
      std::size_t a = s;
      for (std::size_t i = 0; i < N; ++i)
        if (w[i] > 0.0 && (a == s || qw[i] > qw[a])) a = i;
      if (a == s) break;
      const double slope = 2.0 * (qw[s] - qw[a]);
      const double curv = q[s * N + s] + q[a * N + a] - 2.0 * q[s * N + a];
      const double cap = w[a];
      step = curv > 0.0 ? std::min(-slope / (2.0 * curv), cap) : cap;
      if (!(step > 0.0)) break;
      w[s] += step;
      w[a] = step == cap ? 0.0 : w[a] - step;
      for (std::size_t i = 0; i < N; ++i) qw[i] += step * (q[i * N + s] - q[i * N + a]);
    } else {
      const double slope = 2.0 * (qw[s] - energy);
      const double curv = q[s * N + s] - 2.0 * qw[s] + energy;
      step = curv > 0.0 ? std::min(-slope / (2.0 * curv), 1.0) : 1.0;
      if (!(step > 0.0)) break;
      for (std::size_t i = 0; i < N; ++i) {
        w[i] *= 1.0 - step;
        qw[i] = (1.0 - step) * qw[i] + step * q[i * N + s];
      }
      w[s] += step;
    }
    if ((it + 1) % kRefreshEvery == 0) multiply(q, w, qw);
    energy = dot(w, qw);
    if (opts.record_history) res.energy_history.push_back(energy);
  }

  // renormalize away the rounding drift of the incremental updates
  double mass = 0.0;
  for (double v : w) mass += v;
  for (double& v : w) v /= mass;
  multiply(q, w, qw);
  res.V_est = dot(w, qw);
  res.measure.atoms = disc.atoms;
  res.measure.weights = std::move(w);
  return res;
}

double capacity_from_value(double V, double alpha) {
  if (std::isnan(V)) throw ParameterError("capacity of NaN equilibrium value");
  if (alpha == 0.0) return std::isinf(V) && V > 0.0 ? 0.0 : std::exp(-V);
  if (!(V > 0.0)) throw ParameterError("equilibrium value must be > 0 for alpha > 0");
  return std::isinf(V) ? 0.0 : 1.0 / V;
}

CapacityBracket capacity_over_family(std::span<const SetSpec> family, const KernelParams& k,
                                     const EquilibriumOptions& opts) {
  if (family.empty()) throw ParameterError("empty discretization family");
  CapacityBracket br{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const SetSpec& s : family) {
    const double cap = capacity_from_value(equilibrium_measure(s, k, opts).V_est, k.alpha);
    br.inner = std::min(br.inner, cap);
    br.outer = std::max(br.outer, cap);
  }
  return br;
}

RhoK rho_and_K(double lambda, double Lambda, int p, double alpha, double b) {
  Ellipticity check(lambda, Lambda, p);
  (void)check;
  if (!(alpha >= 0.0)) throw ParameterError("alpha must be >= 0");
  if (!(b >= 0.0) || !std::isfinite(b)) throw ParameterError("b must be finite and >= 0");
  const double numerator = lambda * (p - 1) - Lambda * (alpha + 1.0);
  if (b == 0.0) {
    if (numerator < 0.0) throw ParameterError("alpha exceeds alpha*");
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  const double rho = numerator / b;
  if (!(rho > 0.0)) throw ParameterError("b > 0 requires alpha < alpha* (rho <= 0)");
  const double weight = alpha == 0.0 ? 1.0 : alpha;
  return {rho, weight * b / std::pow(rho, alpha + 1.0)};
}

namespace {

double extremal_plus_gradient(const PotentialDerivatives& d, const ModelParams& params) {
  return pucci_plus_p(d.hessian, params.ellipticity()) + params.b * norm(d.gradient);
}

}  // namespace

double potential_supersolution_residual(const DiscreteMeasure& mu, const KernelParams& k, const ModelParams& params,
                                        std::span<const double> x) {
  k.validate();
  params.validate();
  if (params.n != k.n) throw DimensionError("model and kernel dimensions differ");
  const RhoK rk = rho_and_K(params.lambda, params.Lambda, params.p, k.alpha, params.b);
  return extremal_plus_gradient(potential_derivatives(mu, k, x), params) - rk.K;
}

UnionPotential::UnionPotential(std::vector<DiscreteMeasure> parts, KernelParams k, std::span<const double> x0)
    : parts_(std::move(parts)), k_(k) {
  k_.validate();
  if (parts_.empty()) throw ParameterError("union potential needs at least one term");
  double scale = 1.0;
  for (const DiscreteMeasure& mu : parts_) {
    scale *= 0.5;
    const double at_x0 = potential(mu, k_, x0).require_finite();
    coeff_.push_back(scale / std::max(at_x0, 1.0));
  }
}

ExtendedReal UnionPotential::value(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t m = 0; m < parts_.size(); ++m) {
    const ExtendedReal v = potential(parts_[m], k_, x);
    if (v.infinite) return v;
    s += coeff_[m] * v.value;
  }
  return ExtendedReal::finite(s);
}

PotentialDerivatives UnionPotential::derivatives(std::span<const double> x) const {
  PotentialDerivatives out;
  out.gradient.assign(k_.n, 0.0);
  out.hessian = SymMat(k_.n);
  for (std::size_t m = 0; m < parts_.size(); ++m) {
    const PotentialDerivatives d = potential_derivatives(parts_[m], k_, x);
    out.value += coeff_[m] * d.value;
    for (int i = 0; i < k_.n; ++i) out.gradient[i] += coeff_[m] * d.gradient[i];
    out.hessian += coeff_[m] * d.hessian;
  }
  return out;
}

double UnionPotential::supersolution_residual(const ModelParams& params, std::span<const double> x) const {
  params.validate();
  if (params.n != k_.n) throw DimensionError("model and kernel dimensions differ");
  const RhoK rk = rho_and_K(params.lambda, params.Lambda, params.p, k_.alpha, params.b);
  return extremal_plus_gradient(derivatives(x), params) - rk.K;
}

}  // namespace pucci
