#include "pucci/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pucci/errors.hpp"

namespace pucci {

namespace {

constexpr int kMaxSweeps = 100;

// Classic cyclic Jacobi on a dense copy. After a few sweeps, off-diagonal
// entries negligible against both diagonal entries are zeroed directly.
void jacobi_diagonalize(Matrix& a, Matrix& v) {
  const int n = a.rows();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::abs(a(p, q));
    if (off == 0.0) return;

    const double threshold = sweep < 3 ? 0.2 * off / (n * n) : 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        if (std::abs(apq) <= threshold) continue;

        const double h = a(q, q) - a(p, p);
        double t;
        if (std::abs(h) + g == std::abs(h)) {
          t = apq / h;
        } else {
          const double theta = 0.5 * h / apq;
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          const double new_rp = arp - s * (arq + tau * arp);
          const double new_rq = arq + s * (arp - tau * arq);
          a(r, p) = new_rp;
          a(p, r) = new_rp;
          a(r, q) = new_rq;
          a(q, r) = new_rq;
        }
        for (int r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
}

}  // namespace

Spectrum eigen_sorted(const SymMat& x) {
  if (!x.all_finite()) throw InputError("eigen_sorted: non-finite matrix entries");
  const int n = x.n();
  Matrix a = x.to_dense();
  Matrix v = Matrix::identity(n);
  jacobi_diagonalize(a, v);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  // stable: equal eigenvalues keep the column order of the Jacobi basis
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    s.eigenvalues[k] = a(order[k], order[k]);
    for (int r = 0; r < n; ++r) s.eigenvectors(r, k) = v(r, order[k]);
  }
  return s;
}

std::vector<double> eigenvalues_sorted(const SymMat& x) { return eigen_sorted(x).eigenvalues; }

}  // namespace pucci
