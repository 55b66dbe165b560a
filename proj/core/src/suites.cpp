#include "pucci/suites.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "pucci/capacity.hpp"
#include "pucci/errors.hpp"
#include "pucci/experiments.hpp"
#include "pucci/json_io.hpp"
#include "pucci/operators.hpp"
#include "pucci/radial.hpp"
#include "pucci/random.hpp"
#include "pucci/solver.hpp"

namespace pucci {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json rows_of(const SymMat& x) {
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < x.n(); ++i) {
    std::vector<double> row(x.n());
    for (int k = 0; k < x.n(); ++k) row[k] = x(i, k);
    j.push_back(row);
  }
  return j;
}

// Largest scaled violation per property, with the offending matrix kept
// whenever the violation exceeds the tolerance.
class Violations {
 public:
  explicit Violations(double tol) : tol_(tol) {}

  void add(const std::string& name, double v, const SymMat& x) {
    auto it = worst_.find(name);
    if (it == worst_.end() || v > it->second || std::isnan(v)) {
      worst_[name] = std::isnan(v) ? kInf : v;
      if (!(v <= tol_)) offending_[name] = rows_of(x);
    }
  }

  bool pass() const {
    for (const auto& [k, v] : worst_)
      if (!(v <= tol_)) return false;
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    for (const auto& [k, v] : worst_) j[k] = {{"max_violation", v}, {"pass", v <= tol_}};
    for (const auto& [k, m] : offending_) j[k]["offending_matrix"] = m;
    return j;
  }

 private:
  double tol_;
  std::map<std::string, double> worst_;
  std::map<std::string, nlohmann::json> offending_;
};

std::vector<SymMat> load_matrices(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read input file " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("input file " + path + ": " + e.what());
  }
  std::vector<nlohmann::json> items;
  if (j.is_object() && j.contains("matrix")) items.push_back(j["matrix"]);
  else if (j.is_object() && j.contains("matrices")) items = j["matrices"].get<std::vector<nlohmann::json>>();
  else throw InputError("input file " + path + ": expected {\"matrix\": ...} or {\"matrices\": [...]}");
  std::vector<SymMat> out;
  for (const auto& m : items) {
    std::vector<std::vector<double>> rows;
    try {
      rows = m.get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception& e) {
      throw InputError("input file " + path + ": " + e.what());
    }
    for (const auto& r : rows)
      if (r.size() != rows.size()) throw InputError("input file " + path + ": matrix is not square");
    if (rows.empty()) throw InputError("input file " + path + ": empty matrix");
    out.push_back(SymMat::from_rows(rows));
  }
  return out;
}

double min_eigenvalue(const SymMat& x) { return eigenvalues_sorted(x).front(); }

double max_abs_dense(const Matrix& m) { return m.max_abs(); }

}  // namespace

SuiteResult run_ops_properties(const RunConfig& cfg) {
  const long long samples = cfg.integer("samples");
  const long long n_min = cfg.integer("n_min");
  const long long n_max = cfg.integer("n_max");
  const long long frames = cfg.integer("frames");
  const double tol = cfg.real("tol");
  if (samples < 1) throw InputError("samples must be >= 1");
  if (n_min < 1 || n_max < n_min || n_max > 16) throw InputError("dimensions must satisfy 1 <= n_min <= n_max <= 16");
  if (frames < 0) throw InputError("frames must be >= 0");
  std::vector<SymMat> injected;
  if (!cfg.text("input").empty()) injected = load_matrices(cfg.text("input"));

  Rng rng(cfg.seed());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * unit(rng); };
  auto pick = [&](long long a, long long b) { return static_cast<int>(a + static_cast<long long>(unit(rng) * (b - a + 1)) % (b - a + 1)); };

  Violations v(tol);
  const std::size_t total = static_cast<std::size_t>(samples) + injected.size();
  for (std::size_t s = 0; s < total; ++s) {
    const int n = s < injected.size() ? injected[s].n() : pick(n_min, n_max);
    const double lambda = uniform(0.2, 2.0);
    const double Lambda = lambda * uniform(1.0, 4.0);
    const int p = pick(1, n);
    const SymMat x = s < injected.size() ? injected[s] : random_symmetric(n, rng, std::exp(uniform(-2.0, 2.0)));
    const SymMat y = random_symmetric(n, rng, std::exp(uniform(-2.0, 2.0)));
    const SymMat pd = random_psd(n, rng, pick(0, n));
    const double c = uniform(0.0, 3.0);
    const Ellipticity ell(lambda, Lambda, p);
    const Ellipticity wide(lambda * uniform(0.25, 1.0), Lambda * uniform(1.0, 4.0), p);
    const Frame w = random_frame(n, p, rng);
    const double scale = std::max({1.0, x.max_abs(), y.max_abs(), pd.max_abs()}) * std::max(1.0, c) * Lambda;
    auto rel = [&](double d) { return d / scale; };

    // operators of order p
    const double pp_x = pucci_plus_p(x, ell), pm_x = pucci_minus_p(x, ell);
    const double pp_y = pucci_plus_p(y, ell), pm_y = pucci_minus_p(y, ell);
    const double pp_xy = pucci_plus_p(x + y, ell), pm_xy = pucci_minus_p(x + y, ell);
    v.add("duality", rel(std::abs(pm_x + pucci_plus_p(-x, ell))), x);
    v.add("homogeneity", rel(std::max(std::abs(pucci_plus_p(c * x, ell) - c * pp_x), std::abs(pucci_minus_p(c * x, ell) - c * pm_x))), x);
    v.add("subadditivity", rel(std::max(pp_x + pm_y - pp_xy, pp_xy - pp_x - pp_y)), x);
    v.add("superadditivity", rel(std::max(pm_x + pm_y - pm_xy, pm_xy - pp_x - pm_y)), x);
    v.add("interval_monotonicity",
          rel(std::max({pucci_minus_p(x, wide) - pm_x, pm_x - pp_x, pp_x - pucci_plus_p(x, wide)})), x);
    v.add("degenerate_ellipticity", rel(std::max(pp_x - pucci_plus_p(x + pd, ell), pm_x - pucci_minus_p(x + pd, ell))), x);

    // the same with W fixed
    const double wp_x = pucci_plus_W(x, w, ell), wm_x = pucci_minus_W(x, w, ell);
    const double wp_y = pucci_plus_W(y, w, ell), wm_y = pucci_minus_W(y, w, ell);
    const double wp_xy = pucci_plus_W(x + y, w, ell), wm_xy = pucci_minus_W(x + y, w, ell);
    v.add("duality_W", rel(std::abs(wm_x + pucci_plus_W(-x, w, ell))), x);
    v.add("homogeneity_W", rel(std::max(std::abs(pucci_plus_W(c * x, w, ell) - c * wp_x), std::abs(pucci_minus_W(c * x, w, ell) - c * wm_x))), x);
    v.add("subadditivity_W", rel(std::max(wp_x + wm_y - wp_xy, wp_xy - wp_x - wp_y)), x);
    v.add("superadditivity_W", rel(std::max(wm_x + wm_y - wm_xy, wm_xy - wp_x - wm_y)), x);
    v.add("interval_monotonicity_W",
          rel(std::max({pucci_minus_W(x, w, wide) - wm_x, wm_x - wp_x, wp_x - pucci_plus_W(x, w, wide)})), x);
    v.add("degenerate_ellipticity_W",
          rel(std::max(wp_x - pucci_plus_W(x + pd, w, ell), wm_x - pucci_minus_W(x + pd, w, ell))), x);
    v.add("restriction_bound", rel(std::max(wp_x - pp_x, pm_x - wm_x)), x);

    // positive and negative parts
    const auto [xp, xm] = pos_neg_parts(x);
    v.add("pos_neg_reconstruction", rel((xp - xm - x).max_abs()), x);
    v.add("pos_neg_orthogonality", rel(max_abs_dense(xp.to_dense() * xm.to_dense())), x);
    v.add("pos_neg_psd", rel(std::max(-min_eigenvalue(xp), -min_eigenvalue(xm))), x);

    // representation over the Grassmannian
    const Frame top = maximizing_frame(x, p);
    const Frame bottom = minimizing_frame(x, p);
    v.add("attainment", rel(std::max(std::abs(pucci_plus_W(x, top, ell) - pp_x), std::abs(pucci_minus_W(x, bottom, ell) - pm_x))), x);
    const std::uint64_t sub_seed = rng();
    v.add("sampled_frames_bound",
          rel(std::max(grassmannian_sup_estimate(x, ell, frames, sub_seed) - pp_x,
                       pm_x - grassmannian_inf_estimate(x, ell, frames, sub_seed))),
          x);

    // linear functionals with lambda I_W <= A_W <= Lambda I_W
    double functional = 0.0;
    for (int t = 0; t < 4; ++t) {
      const Frame r = random_frame(p, p, rng);
      std::vector<double> a(p);
      for (double& ai : a) ai = uniform(lambda, Lambda);
      const SymMat coeff = SymMat::congruence(w.basis() * r.basis(), a);
      const double l = linear_functional(coeff, w, x);
      functional = std::max({functional, l - wp_x, wm_x - l,
                             std::abs(l - trace_product(project_subspace(coeff, w), x)),
                             std::abs(l - trace_product(coeff, project_subspace(x, w)))});
    }
    functional = std::max({functional,
                           std::abs(linear_functional(extremal_coefficient(x, w, lambda, Lambda, true), w, x) - wp_x),
                           std::abs(linear_functional(extremal_coefficient(x, w, lambda, Lambda, false), w, x) - wm_x)});
    v.add("linear_functional", rel(functional), x);

    v.add("inclusions", rel(check_inclusions(x, lambda, Lambda, p).max_violation()), x);
  }

  // the witness of non-uniform ellipticity
  nlohmann::json witness = nlohmann::json::array();
  bool witness_ok = true;
  for (double t : {1.0, 0.5, 3.0}) {
    const EllipticityWitness e = nonuniform_ellipticity_witness(t);
    const Ellipticity one(1.0, 1.0, 1);
    const bool monotone = pucci_plus_p(e.x + e.perturbation, one) >= pucci_plus_p(e.x, one);
    witness_ok = witness_ok && e.gap == 0.0 && e.trace_perturbation == t && monotone;
    witness.push_back({{"t", t}, {"gap", e.gap}, {"trace", e.trace_perturbation}, {"monotone", monotone}});
  }

  // which formula the sampled infimum follows
  const SymMat probe = SymMat::diagonal({-1.0, 2.0});
  const Ellipticity pe(1.0, 2.0, 1);
  const Frame inject = minimizing_frame(probe, 1);
  const double sampled = grassmannian_inf_estimate(probe, pe, static_cast<std::size_t>(std::max<long long>(frames, 1)),
                                                   cfg.seed(), std::span<const Frame>(&inject, 1));
  const double dual_formula = pucci_minus_p(probe, pe);
  const double displayed = upper_weight(eigenvalues_sorted(probe)[0], 1.0, 2.0);
  const double margin = std::abs(displayed - sampled) - std::abs(dual_formula - sampled);

  SuiteResult res;
  res.report["samples"] = samples;
  res.report["injected"] = injected.size();
  res.report["properties"] = v.to_json();
  res.report["witness"] = witness;
  res.report["inf_sign_resolution"] = {{"sampled_inf", sampled},
                                       {"duality_formula", dual_formula},
                                       {"displayed_formula", displayed},
                                       {"margin", margin}};
  res.pass = v.pass() && witness_ok && margin >= 1e-6;
  return res;
}

namespace {

struct Triple {
  double lambda, Lambda;
  int p, n;
};

// (lambda, Lambda, p, n) with alpha* >= 0, including the logarithmic case
const std::vector<Triple>& fundamental_triples() {
  static const std::vector<Triple> t = {
      {1, 1, 2, 2},   {1, 1, 2, 3},   {1, 1, 3, 3},   {1, 2, 3, 3},   {1, 1, 4, 4},   {1, 1.5, 4, 4}, {1, 3, 4, 4},
      {2, 3, 4, 5},   {1, 1, 5, 5},   {1, 2, 5, 5},   {1, 4, 5, 5},   {0.5, 1, 5, 6}, {1, 1, 6, 6},   {1, 2.5, 6, 6},
      {1, 5, 6, 6},   {0.3, 0.3, 3, 5}, {1, 1.25, 3, 4}, {0.7, 1, 4, 6}, {2, 2, 2, 4}, {1, 1.1, 6, 6},
  };
  return t;
}

std::vector<double> log_radii(int count, double lo, double hi) {
  std::vector<double> r(count);
  for (int k = 0; k < count; ++k) r[k] = lo * std::pow(hi / lo, count == 1 ? 0.0 : static_cast<double>(k) / (count - 1));
  return r;
}

}  // namespace

SuiteResult run_radial_suite(const RunConfig& cfg) {
  const double tol = cfg.real("tol");
  const long long radii = cfg.integer("radii");
  const long long fradii = cfg.integer("fundamental_radii");
  const long long bradii = cfg.integer("barrier_radii");
  if (radii < 2 || fradii < 1 || bradii < 2) throw InputError("radius counts must be >= 2 (>= 1 for fundamental_radii)");
  std::vector<double> eps_list = cfg.real_list("eps_list");
  if (eps_list.empty()) {
    for (int k = 1; k <= 19; ++k) eps_list.push_back(k * (kPi / 6.0) / 20.0);
    eps_list.push_back(kPi / 8.0);
  }

  SuiteResult res;
  bool pass = true;

  // fundamental solutions
  nlohmann::json fund = nlohmann::json::array();
  constexpr double kR = 20.0;
  for (const Triple& t : fundamental_triples()) {
    ModelParams mp;
    mp.lambda = t.lambda;
    mp.Lambda = t.Lambda;
    mp.p = t.p;
    mp.n = t.n;
    const double a = alpha_star(t.lambda, t.Lambda, t.p);
    double worst = 0.0;
    for (double r : log_radii(static_cast<int>(fradii), 1e-2, 10.0))
      worst = std::max(worst, std::abs(fundamental_residual(mp, r, kR)) / std::pow(r, -a - 2.0));
    const bool ok = worst <= tol;
    pass = pass && ok;
    fund.push_back({{"lambda", t.lambda}, {"Lambda", t.Lambda}, {"p", t.p}, {"n", t.n}, {"alpha_star", a},
                    {"kind", a == 0.0 ? "log" : "power"}, {"max_scaled_residual", worst}, {"pass", ok}});
  }
  res.report["fundamental"] = fund;

  // subcritical exponents give strictly negative residuals
  nlohmann::json sub = nlohmann::json::array();
  for (const Triple& t : fundamental_triples()) {
    const double a = alpha_star(t.lambda, t.Lambda, t.p);
    if (a <= 0.5) continue;
    const RadialProfile prof = RadialProfile::power(a - 0.5, t.n);
    double worst = -kInf;
    for (double r : log_radii(static_cast<int>(fradii), 1e-2, 10.0))
      worst = std::max(worst, radial_operator(prof, Ellipticity(t.lambda, t.Lambda, t.p), r));
    const bool ok = worst < 0.0;
    pass = pass && ok;
    sub.push_back({{"lambda", t.lambda}, {"Lambda", t.Lambda}, {"p", t.p}, {"n", t.n}, {"alpha", a - 0.5},
                   {"max_residual", worst}, {"pass", ok}});
  }
  res.report["subcritical"] = sub;

  // the counterexample
  nlohmann::json cx = nlohmann::json::array();
  const std::vector<Triple> cx_params = {{1, 1, 1, 2}, {0.5, 2, 2, 3}};
  int evaluated = 0;
  for (double eps : eps_list) {
    for (const Triple& t : cx_params) {
      nlohmann::json row = {{"eps", eps}, {"lambda", t.lambda}, {"Lambda", t.Lambda}, {"p", t.p}, {"n", t.n}};
      try {
        const double lo = kPi / 2.0 - eps / 2.0;
        const double hi = kPi / 2.0 + eps / 2.0;
        double min_q = kInf;
        CounterexampleReport last;
        for (long long k = 0; k < radii; ++k) {
          const double r = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(radii - 1);
          last = counterexample_check(eps, t.lambda, t.Lambda, t.p, t.n, std::clamp(r, lo, hi));
          min_q = std::min(min_q, last.quantity);
        }
        const KinkReport kink = sine_cap_kink(eps);
        const bool ok = min_q >= -1e-12 && last.violation_margin > 0.0 && last.threshold_ratio > 1.0 &&
                        std::abs(kink.value_inner - kink.value_outer) <= 1e-15 && kink.slope_jump() >= 0.0;
        row["min_quantity"] = min_q;
        row["b"] = last.b;
        row["delta"] = last.delta;
        row["boundary_max"] = last.boundary_max;
        row["violation_margin"] = last.violation_margin;
        row["threshold_ratio"] = last.threshold_ratio;
        row["kink_value_gap"] = kink.value_outer - kink.value_inner;
        row["kink_slope_jump"] = kink.slope_jump();
        row["pass"] = ok;
        pass = pass && ok;
        ++evaluated;
      } catch (const ParameterError& e) {
        row["error"] = e.what();
      }
      cx.push_back(row);
    }
  }
  res.report["counterexample"] = cx;

  // barriers and maximum-principle constants
  struct BarrierCase {
    double lambda;
    int p;
    double b, c, delta, f;
    int n;
  };
  const std::vector<BarrierCase> cases = {
      {1, 2, 0, 0, 1, 1, 2},   {1, 2, 1, 0, 1, 2, 2},   {2, 3, 1.5, 0, 2, 0.7, 3}, {0.5, 1, 0.2, 0, 1.5, 3, 2},
      {1, 1, 0, 0, 1, 0, 2},   {1, 1, 2, 1, 1, 1, 2},   {1, 2, 0, 1, 1, 1, 2},     {0.5, 2, 3, 2, 2, 0.5, 3},
  };
  nlohmann::json bar = nlohmann::json::array();
  for (const BarrierCase& bc : cases) {
    ModelParams mp;
    mp.lambda = bc.lambda;
    mp.Lambda = bc.lambda * 2.0;
    mp.p = bc.p;
    mp.b = bc.b;
    mp.c = bc.c;
    mp.delta = bc.delta;
    mp.f_minus_norm = bc.f;
    mp.n = bc.n;
    const MpConstant C = mp_constant(mp);
    double worst = -kInf;
    double at_delta = 0.0;
    const double scale = std::max(1.0, bc.f);
    for (long long k = 0; k < bradii; ++k) {
      const double r = bc.delta * static_cast<double>(k) / static_cast<double>(bradii - 1);
      const BarrierPoint bp = bc.c > 0.0 ? barrier_c_value(mp, C.eps_hat, std::min(r, bc.delta), 0.0)
                                         : barrier_value_and_residual(mp, std::min(r, bc.delta), 0.0);
      worst = std::max(worst, bp.residual);
      if (k == bradii - 1) at_delta = bp.residual;
    }
    bool ok = worst <= 1e-12 * scale;
    if (bc.c == 0.0 && bc.b > 0.0) ok = ok && std::abs(at_delta) <= 1e-12 * scale;
    pass = pass && ok;
    bar.push_back({{"lambda", mp.lambda}, {"Lambda", mp.Lambda}, {"p", bc.p}, {"b", bc.b}, {"c", bc.c}, {"delta", bc.delta},
                   {"f_minus_norm", bc.f}, {"n", bc.n}, {"C", C.C}, {"eps_hat", C.eps_hat}, {"max_residual", worst},
                   {"residual_at_delta", at_delta}, {"pass", ok}});
  }
  res.report["barriers"] = bar;

  // b delta = lambda p with c = 0 must be refused
  ModelParams edge;
  edge.lambda = 1.0;
  edge.p = 2;
  edge.b = 2.0;
  edge.delta = 1.0;
  bool refused = false;
  try {
    (void)mp_constant(edge);
  } catch (const ParameterError&) {
    refused = true;
  }
  res.report["threshold_refused"] = refused;
  pass = pass && refused;
  res.report["evaluated_counterexample_cases"] = evaluated;
  res.pass = pass && evaluated > 0;
  return res;
}

namespace {

Point padded(std::initializer_list<double> head, int n) {
  Point p(n, 0.0);
  int i = 0;
  for (double v : head) {
    if (i < n) p[i] = v;
    ++i;
  }
  return p;
}

SetSpec make_set(const std::string& kind, int N, int n, double d, double radius, int level) {
  if (kind == "point") return SetSpec::point(padded({}, n), N);
  if (kind == "point_cloud") return SetSpec::point_cloud({padded({-0.5 * d}, n), padded({0.5 * d}, n)}, N);
  if (kind == "segment") return SetSpec::segment(padded({-d}, n), padded({d}, n), N);
  if (kind == "circle") return SetSpec::circle(padded({}, n), radius, N);
  if (kind == "cantor") return SetSpec::cantor(padded({-d}, n), padded({d}, n), level, N);
  throw InputError("unknown set '" + kind + "'");
}

FrankWolfeVariant parse_variant(const std::string& s) {
  if (s == "pairwise") return FrankWolfeVariant::pairwise;
  if (s == "classic") return FrankWolfeVariant::classic;
  throw InputError("variant must be pairwise or classic");
}

bool non_increasing(const std::vector<double>& h) {
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i] > h[i - 1] + 1e-12 * std::max(1.0, std::abs(h[i - 1]))) return false;
  return true;
}

}  // namespace

SuiteResult run_capacity_suite(const RunConfig& cfg) {
  KernelParams k{cfg.real("alpha"), cfg.real("d"), static_cast<int>(cfg.integer("n"))};
  k.validate();
  const std::string kind = cfg.text("set");
  std::string expect = cfg.text("expect");
  if (expect == "auto") expect = (kind == "point" || kind == "point_cloud") ? "diverge" : "converge";
  if (expect != "diverge" && expect != "converge") throw InputError("expect must be diverge, converge or auto");
  const std::vector<double>& resolutions = cfg.real_list("resolutions");
  if (resolutions.size() < 2) throw InputError("resolutions needs at least two entries");
  EquilibriumOptions opts;
  opts.iterations = static_cast<std::size_t>(std::max<long long>(0, cfg.integer("iterations")));
  opts.tol = cfg.real("fw_tol");
  opts.variant = parse_variant(cfg.text("variant"));

  SuiteResult res;
  nlohmann::json rows = nlohmann::json::array();
  std::vector<double> values;
  bool descent = true;
  bool converged = true;
  EquilibriumResult last;
  for (double rN : resolutions) {
    const int N = static_cast<int>(rN);
    if (N < 1 || static_cast<double>(N) != rN) throw InputError("resolutions must be positive integers");
    const SetSpec set = make_set(kind, N, k.n, k.d, cfg.real("radius"), static_cast<int>(cfg.integer("level")));
    last = equilibrium_measure(set, k, opts);
    const bool mono = non_increasing(last.energy_history);
    descent = descent && mono;
    converged = converged && last.converged;
    values.push_back(last.V_est);
    rows.push_back({{"resolution", N}, {"atoms", last.measure.size()}, {"V_est", last.V_est},
                    {"capacity", capacity_from_value(last.V_est, k.alpha)}, {"gap", last.gap},
                    {"iterations", last.iterations}, {"converged", last.converged}, {"energy_non_increasing", mono}});
  }
  bool signature = true;
  if (expect == "diverge") {
    for (std::size_t i = 1; i < values.size(); ++i) signature = signature && values[i] > values[i - 1];
  }
  const double a = values[values.size() - 2];
  const double b = values.back();
  const double rel_change = std::abs(b - a) / std::max(std::abs(b), 1e-300);
  if (expect == "converge") signature = rel_change < cfg.real("tol");

  res.report["set"] = kind;
  res.report["expect"] = expect;
  res.report["rows"] = rows;
  res.report["relative_change_last"] = rel_change;
  res.report["signature_holds"] = signature;
  res.report["energy_descent"] = descent;
  res.report["all_converged"] = converged;
  res.report["final_measure"] = to_json(last.measure);
  res.pass = signature && descent && converged;

  std::string csv;
  for (int i = 0; i < k.n; ++i) csv += "x" + std::to_string(i) + ",";
  csv += "weight\n";
  for (std::size_t j = 0; j < last.measure.size(); ++j) {
    for (double c : last.measure.atoms[j]) csv += format_double(c) + ",";
    csv += format_double(last.measure.weights[j]) + "\n";
  }
  res.csv = std::move(csv);
  return res;
}

SuiteResult run_potential_check(const RunConfig& cfg) {
  const int n = static_cast<int>(cfg.integer("n"));
  KernelParams k{cfg.real("alpha"), cfg.real("d"), n};
  k.validate();
  ModelParams mp;
  mp.lambda = cfg.real("lambda");
  mp.Lambda = cfg.real("Lambda");
  mp.p = static_cast<int>(cfg.integer("p"));
  mp.b = cfg.real("b");
  mp.n = n;
  mp.validate();
  const RhoK rk = rho_and_K(mp.lambda, mp.Lambda, mp.p, k.alpha, mp.b);
  const long long atoms = cfg.integer("atoms");
  const long long points = cfg.integer("points");
  const long long fd_points = cfg.integer("fd_points");
  if (atoms < 2 || points < 1 || fd_points < 0) throw InputError("atoms >= 2, points >= 1 and fd_points >= 0 required");
  const double tol = cfg.real("tol");

  const std::string kind = cfg.text("set");
  if (kind == "point" || kind == "point_cloud") throw InputError("potential-check needs a continuum set");
  const SetSpec set = make_set(kind, static_cast<int>(atoms), n, 0.9 * k.d, 0.5 * k.d, static_cast<int>(cfg.integer("level")));
  DiscreteMeasure mu;
  const std::string measure = cfg.text("measure");
  if (measure == "equilibrium") {
    EquilibriumOptions opts;
    opts.tol = 1e-10;
    opts.record_history = false;
    mu = equilibrium_measure(set, k, opts).measure;
  } else if (measure == "uniform") {
    mu = DiscreteMeasure::uniform(discretize(set, k).atoms);
  } else {
    throw InputError("measure must be equilibrium or uniform");
  }

  Rng rng(cfg.seed());
  auto nearest_atom = [&](const Point& x) {
    double best = kInf;
    for (const Point& a : mu.atoms) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += (x[i] - a[i]) * (x[i] - a[i]);
      best = std::min(best, std::sqrt(s));
    }
    return best;
  };

  double worst = -kInf;
  double worst_subadd = -kInf;
  for (long long q = 0; q < points; ++q) {
    Point x = random_point_in_ball(n, k.d, rng);
    while (nearest_atom(x) < 1e-9) x = random_point_in_ball(n, k.d, rng);
    worst = std::max(worst, potential_supersolution_residual(mu, k, mp, x));
    // P+ of the sum against the weighted sum of the per-atom values
    const PotentialDerivatives total = potential_derivatives(mu, k, x);
    double per_atom = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      DiscreteMeasure dirac;
      dirac.atoms = {mu.atoms[j]};
      dirac.weights = {1.0};
      per_atom += mu.weights[j] * pucci_plus_p(potential_derivatives(dirac, k, x).hessian, mp.ellipticity());
    }
    const double lhs = pucci_plus_p(total.hessian, mp.ellipticity());
    worst_subadd = std::max(worst_subadd, (lhs - per_atom) / std::max(1.0, std::abs(per_atom)));
  }

  // finite differences of the potential against the closed-form derivatives
  double worst_fd = 0.0;
  long long fd_done = 0;
  while (fd_done < fd_points) {
    const Point x = random_point_in_ball(n, k.d, rng);
    const double dist = nearest_atom(x);
    if (dist < 0.05 * k.d) continue;
    const double eta = 1e-3 * dist;
    const PotentialDerivatives d = potential_derivatives(mu, k, x);
    auto V = [&](const Point& y) { return potential(mu, k, y).require_finite(); };
    double err = 0.0;
    const double hscale = std::max(1.0, d.hessian.max_abs());
    for (int a = 0; a < n; ++a) {
      Point xp = x, xm = x;
      xp[a] += eta;
      xm[a] -= eta;
      const double g = (V(xp) - V(xm)) / (2.0 * eta);
      err = std::max(err, std::abs(g - d.gradient[a]) / std::max(1.0, std::abs(d.gradient[a])));
      for (int b = a; b < n; ++b) {
        Point pp = x, pm = x, mp2 = x, mm = x;
        pp[a] += eta;
        pp[b] += eta;
        pm[a] += eta;
        pm[b] -= eta;
        mp2[a] -= eta;
        mp2[b] += eta;
        mm[a] -= eta;
        mm[b] -= eta;
        const double hab = (V(pp) - V(pm) - V(mp2) + V(mm)) / (4.0 * eta * eta);
        err = std::max(err, std::abs(hab - d.hessian(a, b)) / hscale);
      }
    }
    worst_fd = std::max(worst_fd, err);
    ++fd_done;
  }

  SuiteResult res;
  const double bound = tol * (1.0 + rk.K);
  res.report["rho"] = rk.rho;
  res.report["K"] = rk.K;
  res.report["atoms"] = mu.size();
  res.report["points"] = points;
  res.report["max_residual"] = worst;
  res.report["allowed"] = bound;
  res.report["bound_holds"] = worst <= bound;
  res.report["max_subadditivity_violation"] = worst_subadd;
  res.report["max_fd_error"] = worst_fd;
  res.report["measure"] = to_json(mu);
  res.pass = worst <= bound && worst_subadd <= 1e-10 && worst_fd <= 1e-5;
  return res;
}

namespace {

ModelParams model_from(const RunConfig& cfg) {
  ModelParams mp;
  mp.lambda = cfg.real("lambda");
  mp.Lambda = cfg.real("Lambda");
  mp.p = static_cast<int>(cfg.integer("p"));
  mp.b = cfg.real("b");
  mp.c = cfg.real("c");
  mp.delta = cfg.real("delta");
  mp.n = 2;
  mp.validate();
  return mp;
}

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions o;
  o.tol = cfg.real("tol");
  const long long m = cfg.integer("max_iter");
  if (m < 1) throw InputError("max_iter must be >= 1");
  o.max_iter = static_cast<std::size_t>(m);
  return o;
}

int width_from(const RunConfig& cfg) {
  const long long w = cfg.integer("stencil_width");
  if (w < 1 || w > 8) throw InputError("stencil_width must lie in [1, 8]");
  return static_cast<int>(w);
}

}  // namespace

SuiteResult run_solve(const RunConfig& cfg) {
  SuiteResult res;
  const std::string mode = cfg.text("mode");
  const double h = cfg.real("h");
  const int width = width_from(cfg);
  if (mode == "counterexample") {
    if (cfg.integer("p") != 1) throw ParameterError("the counterexample runs with p = 1");
    const double eps = cfg.real("eps");
    const GridCounterexampleReport g = grid_counterexample(eps, h, width, cfg.real("lambda"), cfg.real("Lambda"));
    const CounterexampleReport c = counterexample_check(eps, cfg.real("lambda"), cfg.real("Lambda"), 1, 2, kPi / 2.0);
    res.report["grid"] = g.to_json();
    res.report["closed_form"] = {{"quantity_at_pi_over_2", c.quantity}, {"interior_max", c.interior_max},
                                 {"boundary_max", c.boundary_max}, {"violation_margin", c.violation_margin},
                                 {"threshold_ratio", c.threshold_ratio}, {"b", c.b}, {"delta", c.delta}};
    res.pass = g.subsolution_holds && g.violation_margin > 0.0 && c.violation_margin > 0.0 && c.threshold_ratio > 1.0;
    const RadialProfile prof = RadialProfile::sine_cap(eps, 2);
    const Grid2D grid(Domain::disk(g.delta), h, Stencil(width));
    res.csv = field_to_csv(grid, grid.sample([&](double x, double y) {
      const double r = std::hypot(x, y);
      return r > 0.0 ? prof.value(r) : std::cos(eps / 2.0);
    }));
    return res;
  }
  if (mode != "solve") throw InputError("mode must be solve or counterexample");

  const ModelParams mp = model_from(cfg);
  const Stencil stencil(width);
  const std::string dom = cfg.text("domain");
  Domain domain;
  if (dom == "disk") domain = Domain::disk(mp.delta);
  else if (dom == "annulus") domain = Domain::annulus(cfg.real("r_in"), mp.delta);
  else if (dom == "rectangle") {
    const double s = mp.delta / std::sqrt(2.0);
    domain = Domain::rectangle(-s, s, -s, s);
  } else {
    throw InputError("domain must be disk, annulus or rectangle");
  }
  const Grid2D grid(domain, h, stencil);

  const std::string bname = cfg.text("boundary");
  std::function<double(double, double)> g;
  if (bname == "zero") g = [](double, double) { return 0.0; };
  else if (bname == "quadratic") g = [](double x, double y) { return x * x - y * y; };
  else if (bname == "harmonic") g = [](double x, double y) { return x + x * x - y * y; };
  else if (bname == "sine_cap") {
    const RadialProfile prof = RadialProfile::sine_cap(cfg.real("eps"), 2);
    const double cap = std::cos(cfg.real("eps") / 2.0);
    g = [prof, cap](double x, double y) {
      const double r = std::hypot(x, y);
      return r > 0.0 ? prof.value(r) : cap;
    };
  } else {
    throw InputError("boundary must be zero, quadratic, harmonic or sine_cap");
  }
  const double fc = cfg.real("f_const");
  SolveOptions opts = solve_options(cfg);
  opts.allow_unstable = cfg.boolean("allow_unstable");
  const SolveReport rep = solve(grid, stencil, mp, grid.sample([fc](double, double) { return fc; }), grid.sample(g), opts);
  res.report["solve"] = rep.to_json();
  res.report["domain"] = domain.to_json();
  res.report["interior_nodes"] = grid.interior().size();
  res.report["boundary_nodes"] = grid.boundary().size();
  const bool bound_applies = std::isfinite(rep.mp_constant);
  res.report["bound_applies"] = bound_applies;
  res.pass = rep.converged && (!bound_applies || rep.bound_holds);
  res.csv = field_to_csv(grid, rep.u);
  return res;
}

SuiteResult run_emp(const RunConfig& cfg) {
  EmpConfig ec;
  ec.params = model_from(cfg);
  ec.h = cfg.real("h");
  ec.width = width_from(cfg);
  ec.f_const = cfg.real("f_const");
  ec.puncture = cfg.boolean("puncture");
  ec.spike = cfg.real("spike");
  ec.eps_seq = cfg.real_list("eps_list");
  ec.solve = solve_options(cfg);
  const EmpReport rep = emp_experiment(ec);
  SuiteResult res;
  res.report = rep.to_json();
  res.pass = rep.all_hold && rep.slack_monotone && rep.solve.converged;
  const Grid2D grid(Domain::disk(ec.params.delta), ec.h, Stencil(ec.width));
  res.csv = field_to_csv(grid, rep.solve.u);
  return res;
}

SuiteResult run_removability(const RunConfig& cfg) {
  RemovabilityConfig rc;
  rc.params = model_from(cfg);
  rc.h = cfg.real("h");
  rc.width = width_from(cfg);
  rc.f_const = cfg.real("f_const");
  rc.r_in_seq = cfg.real_list("r_in_list");
  rc.coarse_h = cfg.real("coarse_h");
  rc.inner_offset = cfg.real("inner_offset");
  rc.probe_radius = cfg.real("probe_radius");
  rc.probes = static_cast<int>(cfg.integer("probes"));
  rc.solve = solve_options(cfg);
  const RemovabilityReport rep = removability_experiment(rc);
  SuiteResult res;
  res.report = rep.to_json();
  res.pass = rep.decreasing && rep.final_within_ceiling;
  const Grid2D grid(Domain::disk(rc.params.delta), rc.h, Stencil(rc.width));
  res.csv = field_to_csv(grid, rep.disk.u);
  return res;
}

SuiteResult run_subcommand(const RunConfig& cfg) {
  const std::string& s = cfg.subcommand();
  if (s == "ops-properties") return run_ops_properties(cfg);
  if (s == "radial-suite") return run_radial_suite(cfg);
  if (s == "capacity-suite") return run_capacity_suite(cfg);
  if (s == "potential-check") return run_potential_check(cfg);
  if (s == "solve") return run_solve(cfg);
  if (s == "emp") return run_emp(cfg);
  if (s == "removability") return run_removability(cfg);
  throw InputError("unknown subcommand '" + s + "'");
}

nlohmann::json envelope(const RunConfig& cfg, const SuiteResult& result) {
  nlohmann::json j;
  j["subcommand"] = cfg.subcommand();
  j["config"] = cfg.to_json();
  j["pass"] = result.pass;
  j["report"] = result.report;
  return j;
}

}  // namespace pucci
