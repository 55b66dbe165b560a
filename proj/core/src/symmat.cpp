#include "pucci/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pucci/errors.hpp"

namespace pucci {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> Matrix::column(int j) const {
  std::vector<double> c(rows_);
  for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void Matrix::set_column(int j, std::span<const double> values) {
  if (static_cast<int>(values.size()) != rows_) throw DimensionError("column length mismatch");
  for (int i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (cols_ != other.rows_) throw DimensionError("matrix product dimension mismatch");
  Matrix r(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      for (int j = 0; j < other.cols_; ++j) r(i, j) += a * other(k, j);
    }
  return r;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

SymMat::SymMat(int n) : n_(n) {
  if (n < 1) throw DimensionError("symmetric matrix dimension must be >= 1");
  data_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
}

SymMat SymMat::identity(int n) {
  SymMat m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMat SymMat::diagonal(std::span<const double> d) {
  SymMat m(static_cast<int>(d.size()));
  for (int i = 0; i < m.n(); ++i) m.set(i, i, d[i]);
  return m;
}

SymMat SymMat::diagonal(std::initializer_list<double> d) {
  return diagonal(std::span<const double>(d.begin(), d.size()));
}

SymMat SymMat::from_dense(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) throw DimensionError("matrix is not square");
  const int n = a.rows();
  const double scale = std::max(1.0, a.max_abs());
  SymMat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double x = a(i, j);
      const double y = a(j, i);
      if (!std::isfinite(x) || !std::isfinite(y)) throw InputError("matrix has non-finite entries");
      if (std::abs(x - y) > tol * scale)
        throw InputError("matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      m.set(i, j, 0.5 * (x + y));
    }
  return m;
}

SymMat SymMat::from_rows(const std::vector<std::vector<double>>& rows, double tol) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw DimensionError("empty matrix");
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) throw DimensionError("matrix is not square");
    for (int j = 0; j < n; ++j) a(i, j) = rows[i][j];
  }
  return from_dense(a, tol);
}

SymMat SymMat::congruence(const Matrix& b, std::span<const double> d) {
  if (static_cast<int>(d.size()) != b.cols()) throw DimensionError("congruence: diagonal length mismatch");
  SymMat m(b.rows());
  for (int i = 0; i < b.rows(); ++i)
    for (int j = i; j < b.rows(); ++j) {
      double s = 0.0;
      for (int k = 0; k < b.cols(); ++k) s += b(i, k) * d[k] * b(j, k);
      m.set(i, j, s);
    }
  return m;
}

Matrix SymMat::to_dense() const {
  Matrix a(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) a(i, j) = (*this)(i, j);
  return a;
}

double SymMat::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SymMat::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool SymMat::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double SymMat::quadratic_form(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != n_) throw DimensionError("quadratic form: vector length mismatch");
  double s = 0.0;
  for (int i = 0; i < n_; ++i) {
    s += (*this)(i, i) * v[i] * v[i];
    for (int j = i + 1; j < n_; ++j) s += 2.0 * (*this)(i, j) * v[i] * v[j];
  }
  return s;
}

SymMat& SymMat::operator+=(const SymMat& o) {
  if (o.n_ != n_) throw DimensionError("sum of matrices with different dimensions");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

SymMat& SymMat::operator-=(const SymMat& o) {
  if (o.n_ != n_) throw DimensionError("difference of matrices with different dimensions");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

SymMat& SymMat::operator*=(double c) {
  for (double& v : data_) v *= c;
  return *this;
}

SymMat SymMat::operator-() const {
  SymMat r = *this;
  for (double& v : r.data_) v = -v;
  return r;
}

double trace_product(const SymMat& a, const SymMat& b) {
  if (a.n() != b.n()) throw DimensionError("trace product dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < a.n(); ++i) {
    s += a(i, i) * b(i, i);
    for (int j = i + 1; j < a.n(); ++j) s += 2.0 * a(i, j) * b(i, j);
  }
  return s;
}

}  // namespace pucci
