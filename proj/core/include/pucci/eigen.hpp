#pragma once

#include <vector>

#include "pucci/symmat.hpp"

namespace pucci {

/// Ascending eigenvalues e_1 <= ... <= e_n with the orthogonal matrix whose
/// column i is the eigenvector of eigenvalues[i].
struct Spectrum {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;

  int n() const { return static_cast<int>(eigenvalues.size()); }
};

/// Cyclic Jacobi diagonalization with a fixed sweep order, so results are
/// bit-reproducible for a given input. Intended for n <= 16.
///
/// Throws InputError on non-finite entries.
Spectrum eigen_sorted(const SymMat& x);

/// Eigenvalues only (same routine).
std::vector<double> eigenvalues_sorted(const SymMat& x);

}  // namespace pucci
