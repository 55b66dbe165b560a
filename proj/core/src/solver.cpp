#include "pucci/solver.hpp"

#include <algorithm>
#include <barrier>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "pucci/errors.hpp"

namespace pucci {

namespace {

void require_node_in_domain(const Grid2D& grid, std::ptrdiff_t k) {
  if (k < 0 || static_cast<std::size_t>(k) >= grid.size() || grid.node_class(static_cast<std::size_t>(k)) == NodeClass::outside)
    throw ParameterError("stencil arm leaves the domain");
}

void require_fits(const Grid2D& grid, const Stencil& stencil) {
  if (stencil.width() > grid.stencil_width()) throw DimensionError("stencil is wider than the one the grid was built for");
}

void require_interior(const Grid2D& grid, std::size_t node) {
  if (node >= grid.size() || grid.node_class(node) != NodeClass::interior)
    throw ParameterError("scheme evaluated off the interior");
}

void require_planar(const ModelParams& params) {
  params.validate();
  if (params.n != 2) throw DimensionError("the grid solver is planar (n = 2)");
  if (params.p != 1 && params.p != 2) throw DimensionError("the grid solver supports p in {1, 2}");
}

// Flat offsets and scale factors of a stencil on a fixed grid, so the inner
// loop touches only arrays.
struct Kernel {
  std::vector<std::ptrdiff_t> line_offset;
  std::vector<double> line_scale;  // 1 / (|v| h)^2
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::ptrdiff_t> arm_offset;
  std::vector<double> arm_scale;  // 1 / (|v| h)
  double lambda, Lambda, b, c;
  int p;

  Kernel(const Grid2D& grid, const Stencil& stencil, const ModelParams& params)
      : pairs(stencil.orthogonal_pairs()), lambda(params.lambda), Lambda(params.Lambda), b(params.b), c(params.c),
        p(params.p) {
    const double h = grid.h();
    for (const Arm& v : stencil.directions()) {
      line_offset.push_back(grid.offset(v));
      const double l = v.length() * h;
      line_scale.push_back(1.0 / (l * l));
    }
    for (const Arm& v : stencil.arms()) {
      arm_offset.push_back(grid.offset(v));
      arm_scale.push_back(1.0 / (v.length() * h));
    }
  }

  double pucci(const double* u, std::size_t k, double* work) const {
    const double centre = 2.0 * u[k];
    const std::size_t lines = line_offset.size();
    for (std::size_t d = 0; d < lines; ++d) {
      const double second = (u[k + line_offset[d]] - centre + u[k - line_offset[d]]) * line_scale[d];
      work[d] = upper_weight(second, lambda, Lambda);
    }
    double best = -std::numeric_limits<double>::infinity();
    if (p == 1) {
      for (std::size_t d = 0; d < lines; ++d) best = std::max(best, work[d]);
    } else {
      for (auto [i, j] : pairs) best = std::max(best, work[i] + work[j]);
    }
    return best;
  }

  double gradient(const double* u, std::size_t k) const {
    double best = 0.0;
    for (std::size_t a = 0; a < arm_offset.size(); ++a) best = std::max(best, (u[k + arm_offset[a]] - u[k]) * arm_scale[a]);
    return best;
  }

  double apply(const double* u, std::size_t k, double* work) const {
    double s = pucci(u, k, work);
    if (b != 0.0) s += b * gradient(u, k);
    if (c != 0.0) s -= c * u[k];
    return s;
  }
};

constexpr double kDivergence = 1e12;

}  // namespace

double directional_second_diff(const Grid2D& grid, const GridField& u, std::size_t node, const Arm& v) {
  if (u.size() != grid.size()) throw DimensionError("field size differs from grid size");
  require_node_in_domain(grid, static_cast<std::ptrdiff_t>(node));
  const std::ptrdiff_t off = grid.offset(v);
  const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(node);
  // offsets wrap across rows, so check the lattice coordinates as well
  const int i = static_cast<int>(node % grid.nx());
  const int j = static_cast<int>(node / grid.nx());
  for (int s : {-1, 1}) {
    const int ii = i + s * v.dx;
    const int jj = j + s * v.dy;
    if (ii < 0 || jj < 0 || ii >= grid.nx() || jj >= grid.ny()) throw ParameterError("stencil arm leaves the domain");
    require_node_in_domain(grid, k + s * off);
  }
  const double l = v.length() * grid.h();
  return (u[node + off] - 2.0 * u[node] + u[node - off]) / (l * l);
}

double discrete_pucci_plus(const Grid2D& grid, const GridField& u, std::size_t node, const Ellipticity& ell,
                           const Stencil& stencil) {
  if (ell.p != 1 && ell.p != 2) throw DimensionError("the grid solver supports p in {1, 2}");
  if (u.size() != grid.size()) throw DimensionError("field size differs from grid size");
  require_interior(grid, node);
  ModelParams params;
  params.lambda = ell.lambda;
  params.Lambda = ell.Lambda;
  params.p = ell.p;
  require_fits(grid, stencil);
  const Kernel kern(grid, stencil, params);
  std::vector<double> work(stencil.directions().size());
  return kern.pucci(u.data(), node, work.data());
}

double discrete_gradient_norm(const Grid2D& grid, const GridField& u, std::size_t node, const Stencil& stencil) {
  if (u.size() != grid.size()) throw DimensionError("field size differs from grid size");
  require_interior(grid, node);
  require_fits(grid, stencil);
  const Kernel kern(grid, stencil, ModelParams{});
  return kern.gradient(u.data(), node);
}

double discrete_operator(const Grid2D& grid, const GridField& u, std::size_t node, const ModelParams& params,
                         const Stencil& stencil) {
  require_planar(params);
  if (u.size() != grid.size()) throw DimensionError("field size differs from grid size");
  require_interior(grid, node);
  require_fits(grid, stencil);
  const Kernel kern(grid, stencil, params);
  std::vector<double> work(stencil.directions().size());
  return kern.apply(u.data(), node, work.data());
}

GridField scheme_residual(const Grid2D& grid, const Stencil& stencil, const ModelParams& params, const GridField& u,
                          const GridField& f) {
  require_planar(params);
  if (u.size() != grid.size() || f.size() != grid.size()) throw DimensionError("field size differs from grid size");
  require_fits(grid, stencil);
  const Kernel kern(grid, stencil, params);
  std::vector<double> work(stencil.directions().size());
  GridField r(grid.size(), 0.0);
  for (std::size_t k : grid.interior()) r[k] = kern.apply(u.data(), k, work.data()) - f[k];
  return r;
}

int resolve_thread_count(int requested) {
  int t = requested;
  if (t <= 0) {
    t = 0;
    if (const char* env = std::getenv("PUCCI_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 0) throw InputError(std::string("PUCCI_THREADS must be a non-negative integer, got '") + env + "'");
      t = static_cast<int>(std::min(v, 256L));
    }
    if (t == 0) t = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  return std::max(1, t);
}

nlohmann::json SolveReport::to_json() const {
  nlohmann::json j;
  j["residual_inf_norm"] = residual_inf_norm;
  j["iterations"] = iterations;
  j["converged"] = converged;
  j["diverged"] = diverged;
  j["tau"] = tau;
  j["interior_max"] = interior_max;
  j["boundary_max"] = boundary_max;
  j["f_minus_norm"] = f_minus_norm;
  j["mp_constant"] = mp_constant;
  j["mp_bound_rhs"] = mp_bound_rhs;
  j["bound_holds"] = bound_holds;
  return j;
}

SolveReport solve(const Grid2D& grid, const Stencil& stencil, const ModelParams& params, const GridField& f,
                  const GridField& boundary, const SolveOptions& opts, const GridField& initial) {
  require_planar(params);
  if (f.size() != grid.size() || boundary.size() != grid.size()) throw DimensionError("field size differs from grid size");
  if (!initial.empty() && initial.size() != grid.size()) throw DimensionError("initial field size differs from grid size");
  if (!(opts.tol > 0.0)) throw ParameterError("solver tolerance must be > 0");
  const bool stable = params.c > 0.0 || params.stability_margin() > 0.0;
  if (!stable && !opts.allow_unstable) throw ParameterError("c = 0 requires b delta < lambda p unless the unstable regime is requested");
  if (grid.domain().r_out > params.delta * (1.0 + 1e-12)) throw ParameterError("domain must lie in the ball of radius delta");
  for (std::size_t k : grid.boundary())
    if (!std::isfinite(boundary[k])) throw InputError("non-finite boundary value");
  for (std::size_t k : grid.interior())
    if (!std::isfinite(f[k])) throw InputError("non-finite right-hand side");

  require_fits(grid, stencil);
  const Kernel kern(grid, stencil, params);
  const double h = grid.h();
  SolveReport rep;
  rep.tau = h * h / (2.0 * params.Lambda * params.p + params.b * h + params.c * h * h);

  std::vector<double> a(grid.size(), 0.0);
  for (std::size_t k : grid.boundary()) a[k] = boundary[k];
  if (!initial.empty())
    for (std::size_t k : grid.interior()) a[k] = initial[k];
  std::vector<double> b = a;

  const std::vector<std::size_t>& nodes = grid.interior();
  const int threads = std::min<int>(resolve_thread_count(opts.threads), std::max<std::size_t>(1, nodes.size() / 256));
  std::vector<double> local(threads, 0.0);

  double* cur = a.data();
  double* next = b.data();
  bool stop = nodes.empty();
  std::size_t iter = 0;
  const double tau = rep.tau;

  auto sweep = [&](int t) {
    const std::size_t lo = nodes.size() * t / threads;
    const std::size_t hi = nodes.size() * (t + 1) / threads;
    std::vector<double> work(stencil.directions().size());
    double worst = 0.0;
    for (std::size_t q = lo; q < hi; ++q) {
      const std::size_t k = nodes[q];
      const double r = kern.apply(cur, k, work.data()) - f[k];
      // NaN must survive the maximum so divergence is caught
      if (std::isnan(r) || std::abs(r) > worst) worst = std::abs(r);
      next[k] = cur[k] + tau * r;
    }
    local[t] = worst;
  };

  auto finish = [&]() noexcept {
    double worst = 0.0;
    for (double v : local)
      if (std::isnan(v) || v > worst) worst = v;
    rep.residual_inf_norm = worst;
    if (worst <= opts.tol) {
      rep.converged = true;
      stop = true;
      return;
    }
    if (!(worst < kDivergence)) {
      rep.diverged = true;
      stop = true;
      return;
    }
    if (iter == opts.max_iter) {
      stop = true;
      return;
    }
    std::swap(cur, next);
    ++iter;
  };

  if (!stop) {
    if (threads == 1) {
      while (!stop) {
        sweep(0);
        finish();
      }
    } else {
      std::barrier sync(threads, finish);
      std::vector<std::jthread> pool;
      for (int t = 1; t < threads; ++t)
        pool.emplace_back([&, t] {
          while (!stop) {
            sweep(t);
            sync.arrive_and_wait();
          }
        });
      while (!stop) {
        sweep(0);
        sync.arrive_and_wait();
      }
    }
  } else {
    rep.converged = true;
  }
  rep.iterations = iter;
  rep.u.assign(cur, cur + grid.size());

  rep.interior_max = -std::numeric_limits<double>::infinity();
  rep.boundary_max = -std::numeric_limits<double>::infinity();
  for (std::size_t k : grid.interior()) {
    rep.interior_max = std::max(rep.interior_max, rep.u[k]);
    rep.f_minus_norm = std::max(rep.f_minus_norm, -f[k]);
  }
  for (std::size_t k : grid.boundary()) rep.boundary_max = std::max(rep.boundary_max, rep.u[k]);

  if (stable) {
    ModelParams mp = params;
    mp.f_minus_norm = rep.f_minus_norm;
    rep.mp_constant = mp_constant(mp).C;
    const double base = params.c > 0.0 ? std::max(rep.boundary_max, 0.0) : rep.boundary_max;
    rep.mp_bound_rhs = base + rep.mp_constant * rep.f_minus_norm;
    rep.bound_holds = rep.converged && rep.interior_max <= rep.mp_bound_rhs + rep.mp_constant * opts.tol + 1e-12;
  } else {
    rep.mp_constant = std::numeric_limits<double>::quiet_NaN();
    rep.mp_bound_rhs = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

}  // namespace pucci
