#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "pucci/grid.hpp"
#include "pucci/radial.hpp"
#include "pucci/solver.hpp"

namespace pucci {

/// The sine-cap profile sampled on a disk of radius counterexample_delta(eps)
/// with p = 1, b = counterexample_b and the discrete operator applied at
/// every interior node.
struct GridCounterexampleReport {
  double eps = 0.0;
  double h = 0.0;
  int width = 0;
  double delta = 0.0;
  double b = 0.0;
  double angular_gap = 0.0;
  /// min over interior nodes of S_h[u]
  double min_residual = 0.0;
  double residual_floor = 0.0;
  bool subsolution_holds = false;
  double interior_max = 0.0;
  double boundary_max = 0.0;
  double violation_margin = 0.0;
  std::size_t interior_nodes = 0;

  nlohmann::json to_json() const;
};

/// Subsolution holds when min_residual >= -floor_factor * h.
GridCounterexampleReport grid_counterexample(double eps, double h, int width, double lambda, double Lambda,
                                             double floor_factor = 5.0);

struct EmpConfig {
  ModelParams params;  // n = 2; delta is the disk radius
  double h = 1.0 / 32.0;
  int width = 1;
  double f_const = 0.0;
  /// Puncture the boundary at the node nearest to (0, delta); otherwise E is empty.
  bool puncture = true;
  /// Boundary value carried by the punctured node.
  double spike = 2.0;
  std::vector<double> eps_seq{1.0, 0.1, 0.01};
  SolveOptions solve;
};

struct EmpRow {
  double eps = 0.0;
  /// max over interior nodes of w = u - eps v
  double lhs = 0.0;
  /// max over boundary nodes off E of w (its positive part when c > 0)
  /// + C ||(f - eps K)^-|| + C tol
  double rhs = 0.0;
  bool holds = false;
  /// rhs + eps v(x0): the bound on u at the probe x0 implied by this eps
  double probe_bound = 0.0;
  /// |probe_bound - limit_bound|
  double slack = 0.0;
};

struct EmpReport {
  bool punctured = false;
  double puncture_x = 0.0, puncture_y = 0.0;
  double spike = 0.0;
  double alpha = 0.0;
  double K = 0.0;
  double C = 0.0;
  double probe_x = 0.0, probe_y = 0.0;
  double probe_value = 0.0;
  /// max over boundary nodes off E of u (or u^+) + C ||f^-|| + C tol
  double limit_bound = 0.0;
  /// max over all boundary nodes, E included
  double naive_boundary_max = 0.0;
  /// max over interior nodes of |u - u without the spike|
  double spike_influence = 0.0;
  double interior_max = 0.0;
  std::vector<EmpRow> rows;
  bool all_hold = false;
  /// slack non-increasing along eps_seq when eps_seq is decreasing
  bool slack_monotone = false;
  SolveReport solve;

  nlohmann::json to_json() const;
};

/// Solves on a disk whose boundary carries `spike` at one node E, forms
/// w_eps = u - eps v with v the log potential of a unit mass at E (so
/// w_eps = -inf on E) and checks the maximum principle for w_eps ignoring E.
/// A nonempty E requires alpha* >= 0 and b admissible for the kernel with
/// alpha = alpha*; ParameterError otherwise.
EmpReport emp_experiment(const EmpConfig& cfg);

struct RemovabilityConfig {
  ModelParams params;  // n = 2; delta is the outer radius
  double h = 1.0 / 32.0;
  int width = 1;
  double f_const = 0.0;
  std::vector<double> r_in_seq{0.2, 0.1, 0.05, 0.025};
  /// Spacing of the coarse disk solve whose value at the origin freezes the
  /// inner data; <= 0 means 2 h.
  double coarse_h = 0.0;
  /// Added to the frozen inner value.
  double inner_offset = 0.0;
  double probe_radius = 0.5;
  int probes = 8;
  SolveOptions solve;
};

struct RemovabilityRow {
  double r_in = 0.0;
  double probe_error = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct RemovabilityReport {
  double alpha_star = 0.0;
  double frozen_value = 0.0;
  std::vector<RemovabilityRow> rows;
  bool decreasing = false;
  double final_error = 0.0;
  double error_ceiling = 0.0;  // 5 h
  bool final_within_ceiling = false;
  SolveReport disk;

  nlohmann::json to_json() const;
};

/// Boundary data x + x^2 - y^2 on the outer circle. Throws ParameterError if
/// alpha* < 0, where a point is not known to be removable.
RemovabilityReport removability_experiment(const RemovabilityConfig& cfg);

}  // namespace pucci
