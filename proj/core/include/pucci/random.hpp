#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pucci/frame.hpp"
#include "pucci/symmat.hpp"

namespace pucci {

using Rng = std::mt19937_64;

/// Symmetric matrix with i.i.d. N(0, scale^2) upper-triangle entries.
SymMat random_symmetric(int n, Rng& rng, double scale = 1.0);

/// G G^T / k for a Gaussian n x k matrix G (rank min(n, k)).
SymMat random_psd(int n, Rng& rng, int rank = -1);

/// Gaussian n x p matrix orthonormalized by modified Gram-Schmidt with one
/// re-orthogonalization pass; the resulting subspace is uniformly
/// distributed on the Grassmannian.
Frame random_frame(int n, int p, Rng& rng);

/// Modified Gram-Schmidt with re-orthogonalization applied to the columns of
/// `a`. Throws InputError if the columns are numerically dependent.
Matrix orthonormalize(Matrix a);

/// Uniform point in the open ball of radius r in R^n.
std::vector<double> random_point_in_ball(int n, double r, Rng& rng);

}  // namespace pucci
