#pragma once

#include <cstddef>

#include <nlohmann/json.hpp>

#include "pucci/grid.hpp"
#include "pucci/operators.hpp"
#include "pucci/radial.hpp"

namespace pucci {

/// (u(x + v h) - 2 u(x) + u(x - v h)) / (|v| h)^2. Throws ParameterError if
/// either endpoint is outside the domain.
double directional_second_diff(const Grid2D& grid, const GridField& u, std::size_t node, const Arm& v);

/// p = 1: max over lines of Lambda (D_v u)^+ - lambda (D_v u)^-.
/// p = 2: max over orthogonal line pairs of the sum of the same weights.
/// Requires an interior node; throws DimensionError for p outside {1, 2}.
double discrete_pucci_plus(const Grid2D& grid, const GridField& u, std::size_t node, const Ellipticity& ell,
                           const Stencil& stencil);

/// max over signed arms of max(0, (u(x + v h) - u(x)) / (|v| h)).
double discrete_gradient_norm(const Grid2D& grid, const GridField& u, std::size_t node, const Stencil& stencil);

/// S_h[u](x) = P_h u + b G_h u - c u(x)
double discrete_operator(const Grid2D& grid, const GridField& u, std::size_t node, const ModelParams& params,
                         const Stencil& stencil);

struct SolveOptions {
  double tol = 1e-9;
  std::size_t max_iter = 2000000;
  /// 0 reads PUCCI_THREADS, where 0 or unset means hardware concurrency.
  int threads = 0;
  /// Permit c = 0 with b delta >= lambda p.
  bool allow_unstable = false;
};

/// Number of worker threads for a request, honouring PUCCI_THREADS.
int resolve_thread_count(int requested);

struct SolveReport {
  GridField u;
  double residual_inf_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool diverged = false;
  double tau = 0.0;
  double interior_max = 0.0;
  double boundary_max = 0.0;
  double f_minus_norm = 0.0;
  /// C of the bound; NaN when no bound applies (c = 0, b delta >= lambda p)
  double mp_constant = 0.0;
  /// boundary_max (its positive part when c > 0) + C ||f^-||
  double mp_bound_rhs = 0.0;
  /// interior_max <= mp_bound_rhs + C tol
  bool bound_holds = false;

  /// All scalar fields; the field itself is written separately.
  nlohmann::json to_json() const;
};

/// Steady state of u <- u + tau (S_h[u] - f) with
/// tau = h^2 / (2 Lambda p + b h + c h^2), which keeps the update monotone.
/// Boundary nodes hold `boundary` throughout; `f` is read at interior nodes.
/// `initial` (optional, may be empty) seeds the interior values. The result
/// is bit-identical for every thread count.
SolveReport solve(const Grid2D& grid, const Stencil& stencil, const ModelParams& params, const GridField& f,
                  const GridField& boundary, const SolveOptions& opts = {}, const GridField& initial = {});

/// S_h[u] - f at interior nodes, 0 elsewhere.
GridField scheme_residual(const Grid2D& grid, const Stencil& stencil, const ModelParams& params, const GridField& u,
                          const GridField& f);

}  // namespace pucci
