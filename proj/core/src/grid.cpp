#include "pucci/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "pucci/errors.hpp"
#include "pucci/json_io.hpp"

namespace pucci {

Domain Domain::disk(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ParameterError("disk radius must be > 0");
  Domain d;
  d.kind = Kind::disk;
  d.r_out = radius;
  return d;
}

Domain Domain::annulus(double r_in, double r_out) {
  if (!(r_in > 0.0) || !(r_out > r_in) || !std::isfinite(r_out)) throw ParameterError("annulus requires 0 < r_in < r_out");
  Domain d;
  d.kind = Kind::annulus;
  d.r_in = r_in;
  d.r_out = r_out;
  return d;
}

Domain Domain::rectangle(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0) || !(y1 > y0) || !std::isfinite(x0 + x1 + y0 + y1)) throw ParameterError("rectangle requires x0 < x1 and y0 < y1");
  Domain d;
  d.kind = Kind::rectangle;
  d.x0 = x0;
  d.x1 = x1;
  d.y0 = y0;
  d.y1 = y1;
  d.r_out = std::max({std::hypot(x0, y0), std::hypot(x0, y1), std::hypot(x1, y0), std::hypot(x1, y1)});
  return d;
}

bool Domain::contains(double x, double y) const {
  constexpr double slack = 1e-12;
  switch (kind) {
    case Kind::disk: return std::hypot(x, y) <= r_out * (1.0 + slack);
    case Kind::annulus: {
      const double r = std::hypot(x, y);
      return r <= r_out * (1.0 + slack) && r >= r_in * (1.0 - slack);
    }
    case Kind::rectangle: {
      const double s = slack * std::max(1.0, r_out);
      return x >= x0 - s && x <= x1 + s && y >= y0 - s && y <= y1 + s;
    }
  }
  return false;
}

nlohmann::json Domain::to_json() const {
  nlohmann::json j;
  switch (kind) {
    case Kind::disk:
      j["kind"] = "disk";
      j["radius"] = r_out;
      break;
    case Kind::annulus:
      j["kind"] = "annulus";
      j["r_in"] = r_in;
      j["r_out"] = r_out;
      break;
    case Kind::rectangle:
      j["kind"] = "rectangle";
      j["x0"] = x0;
      j["x1"] = x1;
      j["y0"] = y0;
      j["y1"] = y1;
      break;
  }
  return j;
}

double Arm::length() const { return std::hypot(static_cast<double>(dx), static_cast<double>(dy)); }

Stencil::Stencil(int width) : width_(width) {
  if (width < 1) throw ParameterError("stencil width must be >= 1");
  for (int dy = 0; dy <= width; ++dy)
    for (int dx = -width; dx <= width; ++dx) {
      if (dy == 0 && dx <= 0) continue;
      if (dx * dx + dy * dy > width * width) continue;
      if (std::gcd(std::abs(dx), dy) != 1) continue;
      directions_.push_back({dx, dy});
    }
  auto angle = [](const Arm& a) { return std::atan2(static_cast<double>(a.dy), static_cast<double>(a.dx)); };
  std::sort(directions_.begin(), directions_.end(), [&](const Arm& a, const Arm& b) { return angle(a) < angle(b); });
  for (const Arm& d : directions_) {
    arms_.push_back(d);
    arms_.push_back({-d.dx, -d.dy});
  }
  for (int i = 0; i < static_cast<int>(directions_.size()); ++i) {
    const Arm& d = directions_[i];
    if (!(angle(d) < std::numbers::pi / 2.0)) continue;
    const Arm perp{-d.dy, d.dx};
    for (int j = 0; j < static_cast<int>(directions_.size()); ++j)
      if (directions_[j] == perp) pairs_.emplace_back(i, j);
  }
}

double Stencil::angular_gap() const {
  double gap = 0.0;
  auto angle = [](const Arm& a) { return std::atan2(static_cast<double>(a.dy), static_cast<double>(a.dx)); };
  for (std::size_t k = 0; k < directions_.size(); ++k) {
    const double a = angle(directions_[k]);
    const double b = k + 1 < directions_.size() ? angle(directions_[k + 1]) : angle(directions_[0]) + std::numbers::pi;
    gap = std::max(gap, b - a);
  }
  return gap;
}

int Stencil::reach() const {
  int r = 0;
  for (const Arm& a : arms_) r = std::max({r, std::abs(a.dx), std::abs(a.dy)});
  return r;
}

Grid2D::Grid2D(Domain domain, double h, const Stencil& stencil)
    : domain_(domain), h_(h), stencil_width_(stencil.width()) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("grid spacing must be > 0");
  double xlo, xhi, ylo, yhi;
  if (domain_.kind == Domain::Kind::rectangle) {
    xlo = domain_.x0;
    xhi = domain_.x1;
    ylo = domain_.y0;
    yhi = domain_.y1;
  } else {
    xlo = ylo = -domain_.r_out;
    xhi = yhi = domain_.r_out;
  }
  const double cells = std::max({std::abs(xlo), std::abs(xhi), std::abs(ylo), std::abs(yhi)}) / h;
  if (cells > 1e5) throw ParameterError("grid too fine");
  auto lo = [&](double v) { return static_cast<int>(std::ceil(v / h - 1e-9)); };
  auto hi = [&](double v) { return static_cast<int>(std::floor(v / h + 1e-9)); };
  i0_ = lo(xlo);
  j0_ = lo(ylo);
  nx_ = hi(xhi) - i0_ + 1;
  ny_ = hi(yhi) - j0_ + 1;
  if (nx_ < 1 || ny_ < 1) throw ParameterError("grid has no nodes");

  std::vector<char> inside(size());
  for (std::size_t k = 0; k < size(); ++k) inside[k] = domain_.contains(x(k), y(k));

  mask_.assign(size(), NodeClass::outside);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      const std::size_t k = index(i, j);
      if (!inside[k]) continue;
      bool full = true;
      for (const Arm& a : stencil.arms()) {
        const int ii = i + a.dx;
        const int jj = j + a.dy;
        if (ii < 0 || jj < 0 || ii >= nx_ || jj >= ny_ || !inside[index(ii, jj)]) {
          full = false;
          break;
        }
      }
      mask_[k] = full ? NodeClass::interior : NodeClass::boundary;
      (full ? interior_ : boundary_).push_back(k);
    }
}

std::size_t Grid2D::nearest(double px, double py, NodeClass cls) const {
  std::size_t best = size();
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < size(); ++k) {
    if (mask_[k] != cls) continue;
    const double d = std::hypot(x(k) - px, y(k) - py);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  if (best == size()) throw ParameterError("no grid node of the requested class");
  return best;
}

GridField Grid2D::sample(const std::function<double(double, double)>& f) const {
  GridField u(size(), 0.0);
  for (std::size_t k = 0; k < size(); ++k)
    if (mask_[k] != NodeClass::outside) u[k] = f(x(k), y(k));
  return u;
}

std::string field_to_csv(const Grid2D& grid, const GridField& u) {
  if (u.size() != grid.size()) throw DimensionError("field size differs from grid size");
  std::string out = "x,y,value,mask\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const NodeClass c = grid.node_class(k);
    if (c == NodeClass::outside) continue;
    out += format_double(grid.x(k));
    out += ',';
    out += format_double(grid.y(k));
    out += ',';
    out += format_double(u[k]);
    out += ',';
    out += c == NodeClass::interior ? "interior" : "boundary";
    out += '\n';
  }
  return out;
}

}  // namespace pucci
