#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "pucci/radial.hpp"
#include "pucci/symmat.hpp"

namespace pucci {

using Point = std::vector<double>;

/// Riesz kernel |x|^{-alpha} for 0 < alpha < n, log(2d / |x|) for alpha = 0.
struct KernelParams {
  double alpha = 0.0;
  double d = 1.0;
  int n = 2;

  /// Throws ParameterError unless 0 <= alpha < n and d > 0.
  void validate() const;
};

/// A real number or +infinity, the latter marking evaluation on the singular
/// set of a potential.
struct ExtendedReal {
  double value = 0.0;
  bool infinite = false;

  static ExtendedReal finite(double v) { return {v, false}; }
  static ExtendedReal plus_infinity();
  bool is_finite() const { return !infinite; }
  /// Throws BlowUpError if infinite.
  double require_finite() const;
};

/// Kernel as a function of the distance r > 0.
double kernel_of_distance(const KernelParams& k, double r);

/// Phi(x - y). Throws BlowUpError if x == y.
double kernel_value(const KernelParams& k, std::span<const double> x, std::span<const double> y);

/// Probability measure with finitely many distinct atoms.
struct DiscreteMeasure {
  std::vector<Point> atoms;
  std::vector<double> weights;

  int dim() const { return atoms.empty() ? 0 : static_cast<int>(atoms.front().size()); }
  std::size_t size() const { return atoms.size(); }

  /// Throws InputError on mismatched lengths or dimensions, negative weights,
  /// total mass off 1 by more than `mass_tol`, or repeated atoms.
  void validate(double mass_tol = 1e-12) const;

  static DiscreteMeasure uniform(std::vector<Point> atoms);
};

/// {"atoms": [[...], ...], "weights": [...]}
nlohmann::json to_json(const DiscreteMeasure& mu);
/// Inverse of to_json; validates the result.
DiscreteMeasure measure_from_json(const nlohmann::json& j);

/// sum_j w_j Phi(x - y_j); infinite when x is an atom of positive weight.
ExtendedReal potential(const DiscreteMeasure& mu, const KernelParams& k, std::span<const double> x);

struct PotentialDerivatives {
  double value = 0.0;
  std::vector<double> gradient;
  SymMat hessian;
};

/// Closed-form value, gradient and Hessian of the potential. Each atom
/// contributes g'' u u^T + (g'/r)(I - u u^T) with u = (x - y)/r.
/// Throws BlowUpError when x is an atom of positive weight.
PotentialDerivatives potential_derivatives(const DiscreteMeasure& mu, const KernelParams& k, std::span<const double> x);

enum class SetKind { point, point_cloud, segment, circle, cantor };

const char* to_string(SetKind kind);

/// Compact set generator together with its atom count.
///   point        points = {center}
///   point_cloud  points = the cloud
///   segment      points = {a, b}
///   circle       points = {center}, radius
///   cantor       points = {a, b}, level: middle-thirds Cantor set of the
///                segment, interval endpoints subsampled to `resolution`
struct SetSpec {
  SetKind kind = SetKind::point;
  std::vector<Point> points;
  double radius = 0.0;
  int level = 0;
  int resolution = 1;

  static SetSpec point(Point center, int resolution);
  static SetSpec point_cloud(std::vector<Point> cloud, int resolution);
  static SetSpec segment(Point a, Point b, int resolution);
  static SetSpec circle(Point center, double radius, int resolution);
  static SetSpec cantor(Point a, Point b, int level, int resolution);

  nlohmann::json to_json() const;
};

/// Atoms of a set and the self-interaction scale h_i of each atom: half the
/// nearest-neighbour distance on continua, d / resolution on isolated points.
struct Discretization {
  std::vector<Point> atoms;
  std::vector<double> self_scale;
};

/// Throws ParameterError if the set description is malformed or an atom leaves the
/// closed ball of radius k.d.
Discretization discretize(const SetSpec& set, const KernelParams& k);

/// Q_ij = Phi(y_i - y_j) off the diagonal, Q_ii = Phi(h_i).
std::vector<double> energy_matrix(const Discretization& disc, const KernelParams& k);

/// w^T Q w
double discrete_energy(std::span<const double> q, std::span<const double> w);

enum class FrankWolfeVariant { pairwise, classic };

struct EquilibriumOptions {
  std::size_t iterations = 100000;
  double tol = 1e-9;
  FrankWolfeVariant variant = FrankWolfeVariant::pairwise;
  bool record_history = true;
};

struct EquilibriumResult {
  DiscreteMeasure measure;
  double V_est = 0.0;
  /// max_i (grad E . w - grad E_i) at exit
  double gap = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> energy_history;
};

/// Frank-Wolfe minimization of the discrete energy over the probability
/// simplex with exact line search, starting from uniform weights.
EquilibriumResult equilibrium_measure(const SetSpec& set, const KernelParams& k, const EquilibriumOptions& opts = {});

/// 1/V for alpha > 0, exp(-V) for alpha = 0; 0 for V = +inf.
/// Throws ParameterError for V <= 0 when alpha > 0.
double capacity_from_value(double V, double alpha);

struct CapacityBracket {
  double inner = 0.0;
  double outer = 0.0;
};

/// Smallest and largest discrete capacity over a family of discretizations.
CapacityBracket capacity_over_family(std::span<const SetSpec> family, const KernelParams& k,
                                     const EquilibriumOptions& opts = {});

struct RhoK {
  /// +inf when b = 0
  double rho = 0.0;
  double K = 0.0;
};

/// rho = (lambda (p - 1) - Lambda (alpha + 1)) / b and
/// K = (alpha + [alpha == 0]) b / rho^{alpha + 1}. Requires alpha < alpha*
/// when b > 0 and alpha <= alpha* when b = 0; ParameterError otherwise.
RhoK rho_and_K(double lambda, double Lambda, int p, double alpha, double b);

/// P+(D^2 V) + b |DV| - K at x for the potential V of mu. The parameters must
/// be admissible for rho_and_K and params.n must equal k.n.
double potential_supersolution_residual(const DiscreteMeasure& mu, const KernelParams& k, const ModelParams& params,
                                        std::span<const double> x);

/// v = sum_{m=1}^{M} c_m 2^{-m} omega_m with c_m = 1 / max(omega_m(x0), 1),
/// where omega_m is the potential of the m-th measure. v(x0) < 1 and v is
/// infinite on every atom of positive weight.
class UnionPotential {
 public:
  UnionPotential(std::vector<DiscreteMeasure> parts, KernelParams k, std::span<const double> x0);

  std::size_t terms() const { return parts_.size(); }
  std::span<const double> coefficients() const { return coeff_; }

  ExtendedReal value(std::span<const double> x) const;
  PotentialDerivatives derivatives(std::span<const double> x) const;

  /// P+(D^2 v) + b|Dv| - K
  double supersolution_residual(const ModelParams& params, std::span<const double> x) const;

 private:
  std::vector<DiscreteMeasure> parts_;
  KernelParams k_;
  std::vector<double> coeff_;
};

}  // namespace pucci
