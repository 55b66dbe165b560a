#include "pucci/frame.hpp"

#include <algorithm>
#include <cmath>

#include "pucci/errors.hpp"

namespace pucci {

Frame::Frame(Matrix basis, double tol) : basis_(std::move(basis)) {
  if (p() < 1 || p() > n()) throw DimensionError("frame dimension p must satisfy 1 <= p <= n");
  if (!(orthonormality_defect() <= tol)) throw InputError("frame columns are not orthonormal");
}

Frame Frame::coordinate(int n, int first, int p) {
  if (first < 0 || p < 1 || first + p > n) throw DimensionError("coordinate frame out of range");
  Matrix b(n, p);
  for (int k = 0; k < p; ++k) b(first + k, k) = 1.0;
  return Frame(std::move(b));
}

SymMat Frame::projector() const {
  SymMat proj(n());
  for (int i = 0; i < n(); ++i)
    for (int j = i; j < n(); ++j) {
      double s = 0.0;
      for (int k = 0; k < p(); ++k) s += basis_(i, k) * basis_(j, k);
      proj.set(i, j, s);
    }
  return proj;
}

SymMat Frame::compress(const SymMat& x) const {
  if (x.n() != n()) throw DimensionError("frame and matrix dimensions differ");
  // X B first, then B^T (X B)
  Matrix xb(n(), p());
  for (int i = 0; i < n(); ++i)
    for (int k = 0; k < p(); ++k) {
      double s = 0.0;
      for (int j = 0; j < n(); ++j) s += x(i, j) * basis_(j, k);
      xb(i, k) = s;
    }
  SymMat c(p());
  for (int a = 0; a < p(); ++a)
    for (int b = a; b < p(); ++b) {
      double s = 0.0;
      for (int i = 0; i < n(); ++i) s += basis_(i, a) * xb(i, b);
      c.set(a, b, s);
    }
  return c;
}

double Frame::orthonormality_defect() const {
  double worst = 0.0;
  for (int a = 0; a < p(); ++a)
    for (int b = a; b < p(); ++b) {
      double s = 0.0;
      for (int i = 0; i < n(); ++i) s += basis_(i, a) * basis_(i, b);
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace pucci
