#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace dpca {

using Vector = std::vector<double>;

double dot(const Vector& a, const Vector& b);
double squared_norm(const Vector& v);
double norm(const Vector& v);

/// Dense real matrix with row-major storage. Sized for the small dimensions
/// this library targets (d up to a few hundred); no sparsity, no views.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);  // zero-filled
  Matrix(std::size_t rows, std::size_t cols, Vector entries);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vector& diag);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  /// Outer product a b^T.
  static Matrix outer(const Vector& a, const Vector& b);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  const Vector& entries() const { return entries_; }

  Matrix transpose() const;
  double trace() const;
  double max_abs() const;
  double frobenius_norm() const;

  Vector col(std::size_t j) const;
  void set_col(std::size_t j, const Vector& v);
  /// Copy of the leading k columns.
  Matrix leading_columns(std::size_t k) const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double s);
  friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
  friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
  friend Matrix operator*(Matrix lhs, double s) { return lhs *= s; }
  friend Matrix operator*(double s, Matrix rhs) { return rhs *= s; }

  Matrix operator*(const Matrix& rhs) const;
  Vector operator*(const Vector& v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector entries_;
};

double max_abs_diff(const Matrix& a, const Matrix& b);

/// Largest |A(i,j) - A(j,i)|.
double asymmetry(const Matrix& a);

/// (A + A^T) / 2.
Matrix symmetrized(const Matrix& a);

/// Spectral factorization of a symmetric matrix: A = V diag(lambda) V^T with
/// eigenvalues sorted non-increasing and orthonormal eigenvector columns.
/// Each eigenvector is normalized so its largest-magnitude entry is positive
/// (ties broken by lowest index), which keeps golden values stable.
struct EigenDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Cyclic Jacobi eigensolver. Throws NotSymmetricError if
/// max|A - A^T| > 1e-10 * (1 + max|A|), NoConvergenceError if the
/// off-diagonal Frobenius norm has not dropped below 1e-12 * (1 + ||A||_F)
/// after 100 sweeps.
EigenDecomposition sym_eig(const Matrix& a);

/// Factor of a symmetric PSD matrix: factor * factor^T = A.
/// lower_triangular is false when a zero pivot forced the spectral fallback.
struct CholeskyResult {
  Matrix factor;
  bool lower_triangular = true;
};

/// Cholesky factorization with PSD tolerance: a pivot below -1e-8 * tr(A)
/// throws NotPsdError; a pivot that is merely tiny routes the whole matrix
/// through the eigendecomposition square root instead.
CholeskyResult cholesky(const Matrix& a);

/// Symmetric PSD square root via sym_eig; eigenvalues above -1e-8 * tr(A)
/// are clamped to zero, anything below throws NotPsdError.
Matrix psd_sqrt(const Matrix& a);

/// Q = U U^T for U with orthonormal columns (max|U^T U - I| <= 1e-8,
/// otherwise NotOrthonormalError).
Matrix projector(const Matrix& u);

}  // namespace dpca
