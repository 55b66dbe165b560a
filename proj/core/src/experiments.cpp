#include "pucci/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pucci/capacity.hpp"
#include "pucci/errors.hpp"

namespace pucci {

nlohmann::json GridCounterexampleReport::to_json() const {
  nlohmann::json j;
  j["eps"] = eps;
  j["h"] = h;
  j["stencil_width"] = width;
  j["delta"] = delta;
  j["b"] = b;
  j["angular_gap"] = angular_gap;
  j["min_residual"] = min_residual;
  j["residual_floor"] = residual_floor;
  j["subsolution_holds"] = subsolution_holds;
  j["interior_max"] = interior_max;
  j["boundary_max"] = boundary_max;
  j["violation_margin"] = violation_margin;
  j["interior_nodes"] = interior_nodes;
  return j;
}

GridCounterexampleReport grid_counterexample(double eps, double h, int width, double lambda, double Lambda,
                                             double floor_factor) {
  const RadialProfile profile = RadialProfile::sine_cap(eps, 2);
  GridCounterexampleReport rep;
  rep.eps = eps;
  rep.h = h;
  rep.width = width;
  rep.delta = counterexample_delta(eps);
  rep.b = counterexample_b(eps, lambda, 1);

  ModelParams params;
  params.lambda = lambda;
  params.Lambda = Lambda;
  params.p = 1;
  params.b = rep.b;
  params.delta = rep.delta;

  const Stencil stencil(width);
  const Grid2D grid(Domain::disk(rep.delta), h, stencil);
  rep.angular_gap = stencil.angular_gap();
  const double cap = std::cos(eps / 2.0);
  const GridField u = grid.sample([&](double x, double y) {
    const double r = std::hypot(x, y);
    return r > 0.0 ? profile.value(r) : cap;
  });
  const GridField zero(grid.size(), 0.0);
  const GridField s = scheme_residual(grid, stencil, params, u, zero);

  rep.min_residual = std::numeric_limits<double>::infinity();
  rep.interior_max = -std::numeric_limits<double>::infinity();
  rep.boundary_max = -std::numeric_limits<double>::infinity();
  for (std::size_t k : grid.interior()) {
    rep.min_residual = std::min(rep.min_residual, s[k]);
    rep.interior_max = std::max(rep.interior_max, u[k]);
  }
  for (std::size_t k : grid.boundary()) rep.boundary_max = std::max(rep.boundary_max, u[k]);
  rep.interior_nodes = grid.interior().size();
  rep.residual_floor = -floor_factor * h;
  rep.subsolution_holds = rep.min_residual >= rep.residual_floor;
  rep.violation_margin = rep.interior_max - rep.boundary_max;
  return rep;
}

nlohmann::json EmpReport::to_json() const {
  nlohmann::json j;
  j["punctured"] = punctured;
  if (punctured) {
    j["puncture"] = {puncture_x, puncture_y};
    j["spike"] = spike;
    j["alpha"] = alpha;
    j["spike_influence"] = spike_influence;
  }
  j["K"] = K;
  j["C"] = C;
  j["probe"] = {probe_x, probe_y};
  j["probe_value"] = probe_value;
  j["limit_bound"] = limit_bound;
  j["naive_boundary_max"] = naive_boundary_max;
  j["interior_max"] = interior_max;
  nlohmann::json rs = nlohmann::json::array();
  for (const EmpRow& r : rows)
    rs.push_back({{"eps", r.eps}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}, {"probe_bound", r.probe_bound},
                  {"slack", r.slack}});
  j["rows"] = rs;
  j["all_hold"] = all_hold;
  j["slack_monotone"] = slack_monotone;
  j["solve"] = solve.to_json();
  return j;
}

EmpReport emp_experiment(const EmpConfig& cfg) {
  const ModelParams& prm = cfg.params;
  prm.validate();
  if (prm.n != 2) throw DimensionError("the grid experiments are planar (n = 2)");
  if (cfg.eps_seq.empty()) throw ParameterError("eps_seq is empty");
  for (double e : cfg.eps_seq)
    if (!(e > 0.0)) throw ParameterError("eps values must be > 0");

  EmpReport rep;
  rep.punctured = cfg.puncture;
  KernelParams kernel;
  if (cfg.puncture) {
    rep.alpha = alpha_star(prm.lambda, prm.Lambda, prm.p);
    if (rep.alpha < 0.0) throw ParameterError("alpha* < 0: no potential blows up on a capacity-zero boundary set");
    rep.K = rho_and_K(prm.lambda, prm.Lambda, prm.p, rep.alpha, prm.b).K;
    kernel = KernelParams{rep.alpha, prm.delta, 2};
    kernel.validate();
  }

  const Stencil stencil(cfg.width);
  const Grid2D grid(Domain::disk(prm.delta), cfg.h, stencil);
  auto g = [](double x, double y) { return x * x - y * y; };
  GridField boundary = grid.sample(g);
  const GridField f = grid.sample([&](double, double) { return cfg.f_const; });

  std::size_t e_node = grid.size();
  if (cfg.puncture) {
    e_node = grid.nearest(0.0, prm.delta, NodeClass::boundary);
    rep.puncture_x = grid.x(e_node);
    rep.puncture_y = grid.y(e_node);
    rep.spike = cfg.spike;
    boundary[e_node] = cfg.spike;
  }

  rep.solve = solve(grid, stencil, prm, f, boundary, cfg.solve);
  if (!rep.solve.converged) throw BlowUpError("emp solve did not converge");
  const GridField& u = rep.solve.u;
  rep.interior_max = rep.solve.interior_max;

  if (cfg.puncture) {
    GridField plain = boundary;
    plain[e_node] = g(grid.x(e_node), grid.y(e_node));
    const SolveReport ref = solve(grid, stencil, prm, f, plain, cfg.solve, u);
    for (std::size_t k : grid.interior()) rep.spike_influence = std::max(rep.spike_influence, std::abs(u[k] - ref.u[k]));
  }

  ModelParams mp = prm;
  mp.f_minus_norm = std::max(0.0, -cfg.f_const);
  rep.C = mp_constant(mp).C;
  const bool positive_part = prm.c > 0.0;

  std::vector<double> v(grid.size(), 0.0);
  if (cfg.puncture)
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (k == e_node || grid.node_class(k) == NodeClass::outside) continue;
      v[k] = kernel_of_distance(kernel, std::hypot(grid.x(k) - rep.puncture_x, grid.y(k) - rep.puncture_y));
    }

  const std::size_t probe = grid.nearest(0.0, 0.0, NodeClass::interior);
  rep.probe_x = grid.x(probe);
  rep.probe_y = grid.y(probe);
  rep.probe_value = u[probe];

  double off_e = -std::numeric_limits<double>::infinity();
  rep.naive_boundary_max = -std::numeric_limits<double>::infinity();
  for (std::size_t k : grid.boundary()) {
    rep.naive_boundary_max = std::max(rep.naive_boundary_max, u[k]);
    if (k != e_node) off_e = std::max(off_e, u[k]);
  }
  const double solve_slack = rep.C * cfg.solve.tol;
  rep.limit_bound = (positive_part ? std::max(off_e, 0.0) : off_e) + rep.C * mp.f_minus_norm + solve_slack;

  rep.all_hold = true;
  for (double eps : cfg.eps_seq) {
    EmpRow row;
    row.eps = eps;
    row.lhs = -std::numeric_limits<double>::infinity();
    for (std::size_t k : grid.interior()) row.lhs = std::max(row.lhs, u[k] - eps * v[k]);
    double bmax = -std::numeric_limits<double>::infinity();
    for (std::size_t k : grid.boundary())
      if (k != e_node) bmax = std::max(bmax, u[k] - eps * v[k]);
    if (positive_part) bmax = std::max(bmax, 0.0);
    const double shifted = std::max(0.0, -(cfg.f_const - eps * rep.K));
    row.rhs = bmax + rep.C * shifted + solve_slack;
    row.holds = row.lhs <= row.rhs;
    row.probe_bound = row.rhs + eps * v[probe];
    row.slack = std::abs(row.probe_bound - rep.limit_bound);
    rep.all_hold = rep.all_hold && row.holds;
    rep.rows.push_back(row);
  }
  rep.slack_monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i].eps < rep.rows[i - 1].eps && rep.rows[i].slack > rep.rows[i - 1].slack) rep.slack_monotone = false;
  return rep;
}

nlohmann::json RemovabilityReport::to_json() const {
  nlohmann::json j;
  j["alpha_star"] = alpha_star;
  j["frozen_value"] = frozen_value;
  nlohmann::json rs = nlohmann::json::array();
  for (const RemovabilityRow& r : rows)
    rs.push_back({{"r_in", r.r_in}, {"probe_error", r.probe_error}, {"iterations", r.iterations}, {"converged", r.converged}});
  j["rows"] = rs;
  j["decreasing"] = decreasing;
  j["final_error"] = final_error;
  j["error_ceiling"] = error_ceiling;
  j["final_within_ceiling"] = final_within_ceiling;
  j["disk"] = disk.to_json();
  return j;
}

RemovabilityReport removability_experiment(const RemovabilityConfig& cfg) {
  const ModelParams& prm = cfg.params;
  prm.validate();
  if (prm.n != 2) throw DimensionError("the grid experiments are planar (n = 2)");
  RemovabilityReport rep;
  rep.alpha_star = alpha_star(prm.lambda, prm.Lambda, prm.p);
  if (rep.alpha_star < 0.0) throw ParameterError("alpha* < 0: point singularities are outside the removability hypotheses");
  if (cfg.r_in_seq.empty()) throw ParameterError("r_in sequence is empty");
  if (cfg.probes < 1) throw ParameterError("probe count must be >= 1");
  for (double r : cfg.r_in_seq)
    if (!(r > 0.0) || !(r < cfg.probe_radius)) throw ParameterError("inner radii must lie in (0, probe_radius)");
  if (!(cfg.probe_radius < prm.delta)) throw ParameterError("probe radius must be below delta");

  const Stencil stencil(cfg.width);
  auto g = [](double x, double y) { return x + x * x - y * y; };
  auto fc = [&](double, double) { return cfg.f_const; };

  const Grid2D disk(Domain::disk(prm.delta), cfg.h, stencil);
  rep.disk = solve(disk, stencil, prm, disk.sample(fc), disk.sample(g), cfg.solve);
  if (!rep.disk.converged) throw BlowUpError("disk solve did not converge");

  const double hc = cfg.coarse_h > 0.0 ? cfg.coarse_h : 2.0 * cfg.h;
  const Grid2D coarse(Domain::disk(prm.delta), hc, stencil);
  const SolveReport cs = solve(coarse, stencil, prm, coarse.sample(fc), coarse.sample(g), cfg.solve);
  if (!cs.converged) throw BlowUpError("coarse solve did not converge");
  rep.frozen_value = cs.u[coarse.nearest(0.0, 0.0, NodeClass::interior)] + cfg.inner_offset;

  std::vector<std::size_t> probes;
  for (int q = 0; q < cfg.probes; ++q) {
    const double t = 2.0 * std::numbers::pi * q / cfg.probes;
    probes.push_back(disk.nearest(cfg.probe_radius * std::cos(t), cfg.probe_radius * std::sin(t), NodeClass::interior));
  }

  for (double r_in : cfg.r_in_seq) {
    const Grid2D ann(Domain::annulus(r_in, prm.delta), cfg.h, stencil);
    if (ann.size() != disk.size()) throw DimensionError("annulus and disk lattices differ");
    const double split = 0.5 * (r_in + prm.delta);
    const GridField boundary = ann.sample([&](double x, double y) { return std::hypot(x, y) < split ? rep.frozen_value : g(x, y); });
    const SolveReport s = solve(ann, stencil, prm, ann.sample(fc), boundary, cfg.solve, rep.disk.u);
    RemovabilityRow row;
    row.r_in = r_in;
    row.iterations = s.iterations;
    row.converged = s.converged;
    for (std::size_t k : probes) {
      if (ann.node_class(k) != NodeClass::interior) throw ParameterError("probe node is not interior to the annulus");
      row.probe_error = std::max(row.probe_error, std::abs(s.u[k] - rep.disk.u[k]));
    }
    rep.rows.push_back(row);
  }
  rep.decreasing = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (!(rep.rows[i].probe_error < rep.rows[i - 1].probe_error)) rep.decreasing = false;
  rep.final_error = rep.rows.back().probe_error;
  rep.error_ceiling = 5.0 * cfg.h;
  rep.final_within_ceiling = rep.final_error <= rep.error_ceiling;
  for (const RemovabilityRow& r : rep.rows) rep.final_within_ceiling = rep.final_within_ceiling && r.converged;
  return rep;
}

}  // namespace pucci
