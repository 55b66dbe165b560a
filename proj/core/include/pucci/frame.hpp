#pragma once

#include "pucci/symmat.hpp"

namespace pucci {

/// Orthonormal basis of a p-dimensional subspace W of R^n, stored as the
/// n x p matrix B with B^T B = I_p. The projector onto W is B B^T.
class Frame {
 public:
  /// Throws DimensionError for p = 0 or p > n, InputError if the columns
  /// are not orthonormal within `tol`.
  explicit Frame(Matrix basis, double tol = 1e-12);

  /// span(E^{first}, ..., E^{first+p-1}) in R^n.
  static Frame coordinate(int n, int first, int p);

  int n() const { return basis_.rows(); }
  int p() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

  /// B B^T
  SymMat projector() const;

  /// B^T X B, the p x p matrix of the quadratic form X restricted to W.
  SymMat compress(const SymMat& x) const;

  /// max |B^T B - I|
  double orthonormality_defect() const;

 private:
  Matrix basis_;
};

}  // namespace pucci
