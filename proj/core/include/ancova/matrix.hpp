#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace ancova {

/// Dense real vector. Constructors taking data reject NaN/Inf entries.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n) : entries_(n, 0.0) {}
  Vector(std::initializer_list<double> values);
  explicit Vector(std::vector<double> values);

  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  double& operator[](std::size_t i) { return entries_[i]; }
  const std::vector<double>& entries() const { return entries_; }

  double dot(const Vector& other) const;
  double norm_inf() const;
  double sum() const;

  Vector operator+(const Vector& other) const;
  Vector operator-(const Vector& other) const;
  Vector scaled(double factor) const;

 private:
  std::vector<double> entries_;
};

/// Dense real matrix, row-major. Constructors taking data reject NaN/Inf.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  /// a x a matrix of all ones (J_a).
  static Matrix ones(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  const std::vector<double>& entries() const { return entries_; }
  const double* row_data(std::size_t i) const { return entries_.data() + i * cols_; }

  Matrix transpose() const;
  Matrix operator*(const Matrix& other) const;
  Vector operator*(const Vector& v) const;
  Matrix operator+(const Matrix& other) const;
  Matrix operator-(const Matrix& other) const;
  Matrix scaled(double factor) const;

  double trace() const;
  /// Largest absolute entry.
  double norm_inf() const;
  double max_abs_diff(const Matrix& other) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

/// Solves A X = B for symmetric positive definite A via Cholesky.
/// Throws InvalidArgument if A is not square or not symmetric within
/// 1e-10 relative, SingularMatrix when a pivot falls below
/// 1e-12 * max diagonal magnitude.
Matrix solve_spd(const Matrix& a, const Matrix& b);

/// Moore-Penrose pseudoinverse, defined for every finite matrix.
Matrix pseudoinverse(const Matrix& a);

/// Kronecker product; block (i,j) of the result is a(i,j) * B.
Matrix kronecker(const Matrix& a, const Matrix& b);

}  // namespace ancova
