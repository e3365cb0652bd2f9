#include "ancova/matrix.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "ancova/errors.hpp"

namespace ancova {

namespace {

void require_finite(const std::vector<double>& values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw InvalidArgument(std::string(what) + " contains a non-finite entry");
    }
  }
}

}  // namespace

Vector::Vector(std::initializer_list<double> values) : entries_(values) {
  require_finite(entries_, "Vector");
}

Vector::Vector(std::vector<double> values) : entries_(std::move(values)) {
  require_finite(entries_, "Vector");
}

double Vector::dot(const Vector& other) const {
  if (other.size() != size()) throw InvalidArgument("dot: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < size(); ++i) acc += entries_[i] * other[i];
  return acc;
}

double Vector::norm_inf() const {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::fabs(v));
  return m;
}

double Vector::sum() const {
  double acc = 0.0;
  for (double v : entries_) acc += v;
  return acc;
}

Vector Vector::operator+(const Vector& other) const {
  if (other.size() != size()) throw InvalidArgument("vector add: size mismatch");
  Vector out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = entries_[i] + other[i];
  return out;
}

Vector Vector::operator-(const Vector& other) const {
  if (other.size() != size()) throw InvalidArgument("vector sub: size mismatch");
  Vector out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = entries_[i] - other[i];
  return out;
}

Vector Vector::scaled(double factor) const {
  Vector out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = entries_[i] * factor;
  return out;
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw InvalidArgument("Matrix: entry count does not match rows*cols");
  }
  require_finite(entries_, "Matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidArgument("Matrix: ragged initializer");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
  require_finite(entries_, "Matrix");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::ones(std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (double& v : m.entries_) v = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (cols_ != other.rows_) throw InvalidArgument("matmul: shape mismatch");
  Matrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      const double* brow = other.row_data(k);
      double* orow = &out.entries_[i * other.cols_];
      for (std::size_t j = 0; j < other.cols_; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

Vector Matrix::operator*(const Vector& v) const {
  if (cols_ != v.size()) throw InvalidArgument("matvec: shape mismatch");
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* row = row_data(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw InvalidArgument("matrix add: shape mismatch");
  Matrix out(rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.entries_[i] = entries_[i] + other.entries_[i];
  return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw InvalidArgument("matrix sub: shape mismatch");
  Matrix out(rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.entries_[i] = entries_[i] - other.entries_[i];
  return out;
}

Matrix Matrix::scaled(double factor) const {
  Matrix out(rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.entries_[i] = entries_[i] * factor;
  return out;
}

double Matrix::trace() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) acc += (*this)(i, i);
  return acc;
}

double Matrix::norm_inf() const {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::fabs(v));
  return m;
}

double Matrix::max_abs_diff(const Matrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw InvalidArgument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    m = std::max(m, std::fabs(entries_[i] - other.entries_[i]));
  return m;
}

Matrix solve_spd(const Matrix& a, const Matrix& b) {
  if (!a.square()) throw InvalidArgument("solve_spd: A must be square");
  if (b.rows() != a.rows()) throw InvalidArgument("solve_spd: B row mismatch");

  const std::size_t n = a.rows();
  double max_abs = a.norm_inf();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::fabs(a(i, j) - a(j, i)) > 1e-10 * (1.0 + max_abs)) {
        throw InvalidArgument("solve_spd: A is not symmetric");
      }
    }
  }

  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::fabs(a(i, i)));
  const double pivot_floor = 1e-12 * max_diag;

  // Lower Cholesky factor, in place.
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > pivot_floor)) {
      throw SingularMatrix("solve_spd: pivot " + std::to_string(diag) +
                           " below threshold at column " + std::to_string(j));
    }
    const double root = std::sqrt(diag);
    l(j, j) = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = a(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
      l(i, j) = acc / root;
    }
  }

  // Forward then backward substitution, one right-hand side at a time.
  Matrix x(n, b.cols());
  std::vector<double> y(n);
  for (std::size_t col = 0; col < b.cols(); ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = b(i, col);
      for (std::size_t k = 0; k < i; ++k) acc -= l(i, k) * y[k];
      y[i] = acc / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double acc = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) acc -= l(k, ii) * x(k, col);
      x(ii, col) = acc / l(ii, ii);
    }
  }
  return x;
}

Matrix pseudoinverse(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return Matrix(a.cols(), a.rows());

  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff =
      std::max(a.rows(), a.cols()) * std::numeric_limits<double>::epsilon() *
      (sv.size() > 0 ? sv(0) : 0.0);

  Eigen::VectorXd inv_sv(sv.size());
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    inv_sv(k) = sv(k) > cutoff ? 1.0 / sv(k) : 0.0;

  Eigen::MatrixXd pinv = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();

  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = pinv(i, j);
  return out;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      for (std::size_t p = 0; p < b.rows(); ++p) {
        for (std::size_t q = 0; q < b.cols(); ++q) {
          out(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
      }
    }
  }
  return out;
}

}  // namespace ancova
