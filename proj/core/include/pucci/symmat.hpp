#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace pucci {

/// Dense row-major real matrix. Used for eigenvector bases and frames.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::vector<double> column(int j) const;
  void set_column(int j, std::span<const double> values);

  Matrix transpose() const;
  Matrix operator*(const Matrix& other) const;

  /// max |a_ij|
  double max_abs() const;

  std::span<const double> data() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Symmetric n x n matrix with packed upper-triangle storage, so symmetry
/// holds by construction.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(int n);

  static SymMat zero(int n) { return SymMat(n); }
  static SymMat identity(int n);
  static SymMat diagonal(std::span<const double> d);
  static SymMat diagonal(std::initializer_list<double> d);

  /// Builds from a dense matrix; throws InputError if it is not symmetric
  /// within `tol * max(1, max|a_ij|)` or has non-finite entries.
  static SymMat from_dense(const Matrix& a, double tol = 1e-12);

  /// Rows given as nested lists; same checks as from_dense.
  static SymMat from_rows(const std::vector<std::vector<double>>& rows, double tol = 1e-12);

  /// B D B^T for a square or rectangular B (n x k) and diagonal D (length k).
  static SymMat congruence(const Matrix& b, std::span<const double> d);

  int n() const { return n_; }

  double operator()(int i, int j) const { return data_[index(i, j)]; }
  void set(int i, int j, double v) { data_[index(i, j)] = v; }
  void add(int i, int j, double v) { data_[index(i, j)] += v; }

  Matrix to_dense() const;

  double trace() const;
  double max_abs() const;
  bool all_finite() const;

  /// Quadratic form v^T X v.
  double quadratic_form(std::span<const double> v) const;

  SymMat& operator+=(const SymMat& o);
  SymMat& operator-=(const SymMat& o);
  SymMat& operator*=(double c);

  friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
  friend SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
  friend SymMat operator*(double c, SymMat a) { return a *= c; }
  friend SymMat operator*(SymMat a, double c) { return a *= c; }
  SymMat operator-() const;

  std::span<const double> packed() const { return data_; }

 private:
  std::size_t index(int i, int j) const {
    if (i > j) std::swap(i, j);
    // row-major upper triangle: row i starts after sum_{k<i} (n-k) entries
    return static_cast<std::size_t>(i * n_ - i * (i - 1) / 2 + (j - i));
  }

  int n_ = 0;
  std::vector<double> data_;
};

/// Trace of the product of two symmetric matrices.
double trace_product(const SymMat& a, const SymMat& b);

}  // namespace pucci
