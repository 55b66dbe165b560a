#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace pucci {

enum class NodeClass : std::uint8_t { outside = 0, interior = 1, boundary = 2 };

/// Closed planar region: disk(r_out), annulus(r_in, r_out) or rectangle.
struct Domain {
  enum class Kind { disk, annulus, rectangle };

  Kind kind = Kind::disk;
  double r_in = 0.0;
  double r_out = 1.0;
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;

  static Domain disk(double radius);
  static Domain annulus(double r_in, double r_out);
  static Domain rectangle(double x0, double x1, double y0, double y1);

  /// Membership with a relative slack of 1e-12 so lattice points on the
  /// boundary curve count as inside.
  bool contains(double x, double y) const;

  nlohmann::json to_json() const;
};

/// Lattice direction v = (dx, dy) with gcd(|dx|, |dy|) = 1.
struct Arm {
  int dx = 0;
  int dy = 0;

  double length() const;
  bool operator==(const Arm&) const = default;
};

/// All primitive lattice vectors of Euclidean length <= m, closed under
/// negation and under rotation by a right angle.
class Stencil {
 public:
  /// Throws ParameterError for m < 1.
  explicit Stencil(int width);

  int width() const { return width_; }
  /// Signed arms, each direction present with both signs.
  const std::vector<Arm>& arms() const { return arms_; }
  /// One representative per line, sorted by angle in [0, pi).
  const std::vector<Arm>& directions() const { return directions_; }
  /// Index pairs into directions() of mutually orthogonal lines.
  const std::vector<std::pair<int, int>>& orthogonal_pairs() const { return pairs_; }

  /// Largest angle between consecutive lines, in radians.
  double angular_gap() const;
  /// max(|dx|, |dy|) over the arms.
  int reach() const;

 private:
  int width_;
  std::vector<Arm> arms_;
  std::vector<Arm> directions_;
  std::vector<std::pair<int, int>> pairs_;
};

/// Grid field over all nodes of the bounding box, row-major in (j, i).
using GridField = std::vector<double>;

/// Nodes (i h, j h) of the lattice through the origin that lie in the closed
/// domain. A node is interior when x +- v h lies in the domain for every arm,
/// boundary otherwise.
class Grid2D {
 public:
  Grid2D(Domain domain, double h, const Stencil& stencil);

  const Domain& domain() const { return domain_; }
  double h() const { return h_; }
  /// Width of the stencil the node classes were computed for; narrower
  /// stencils are valid on the same grid.
  int stencil_width() const { return stencil_width_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
  double x(std::size_t k) const { return (static_cast<int>(k % nx_) + i0_) * h_; }
  double y(std::size_t k) const { return (static_cast<int>(k / nx_) + j0_) * h_; }
  /// Signed flat-index displacement of arm v.
  std::ptrdiff_t offset(const Arm& v) const { return static_cast<std::ptrdiff_t>(v.dy) * nx_ + v.dx; }

  /// Node nearest to (x, y) among nodes of the given class; throws
  /// ParameterError if there is none.
  std::size_t nearest(double x, double y, NodeClass cls) const;

  NodeClass node_class(std::size_t k) const { return mask_[k]; }
  const std::vector<NodeClass>& mask() const { return mask_; }
  const std::vector<std::size_t>& interior() const { return interior_; }
  const std::vector<std::size_t>& boundary() const { return boundary_; }

  /// Field with f(x, y) at interior and boundary nodes, 0 outside.
  GridField sample(const std::function<double(double, double)>& f) const;

 private:
  Domain domain_;
  double h_;
  int stencil_width_;
  int i0_ = 0, j0_ = 0;
  int nx_ = 0, ny_ = 0;
  std::vector<NodeClass> mask_;
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> boundary_;
};

/// x, y, value, mask for every node in the domain.
std::string field_to_csv(const Grid2D& grid, const GridField& u);

}  // namespace pucci
