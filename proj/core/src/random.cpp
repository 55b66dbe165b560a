#include "pucci/random.hpp"

#include <cmath>

#include "pucci/errors.hpp"

namespace pucci {

SymMat random_symmetric(int n, Rng& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  SymMat x(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) x.set(i, j, normal(rng));
  return x;
}

SymMat random_psd(int n, Rng& rng, int rank) {
  if (rank < 0) rank = n;
  if (rank == 0) return SymMat(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, rank);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < rank; ++k) g(i, k) = normal(rng);
  std::vector<double> ones(g.cols(), 1.0 / g.cols());
  return SymMat::congruence(g, ones);
}

Matrix orthonormalize(Matrix a) {
  const int n = a.rows();
  const int p = a.cols();
  for (int k = 0; k < p; ++k) {
    double original = 0.0;
    for (int i = 0; i < n; ++i) original += a(i, k) * a(i, k);
    original = std::sqrt(original);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < k; ++j) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += a(i, j) * a(i, k);
        for (int i = 0; i < n; ++i) a(i, k) -= dot * a(i, j);
      }
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += a(i, k) * a(i, k);
    norm = std::sqrt(norm);
    if (!(norm > 1e-10 * original) || norm == 0.0) throw InputError("orthonormalize: dependent columns");
    for (int i = 0; i < n; ++i) a(i, k) /= norm;
  }
  return a;
}

Frame random_frame(int n, int p, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    Matrix g(n, p);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < p; ++k) g(i, k) = normal(rng);
    try {
      return Frame(orthonormalize(std::move(g)));
    } catch (const InputError&) {
      // probability zero for Gaussian input; draw again
    }
  }
}

std::vector<double> random_point_in_ball(int n, double r, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> x(n);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : x) {
      v = normal(rng);
      norm += v * v;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  const double radius = r * std::pow(uniform(rng), 1.0 / n);
  for (double& v : x) v *= radius / norm;
  return x;
}

}  // namespace pucci
