#include "dpca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dpca/errors.hpp"

namespace dpca {

namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kPsdTol = 1e-8;
constexpr double kJacobiTol = 1e-12;
constexpr int kJacobiMaxSweeps = 100;

void require(bool cond, const std::string& msg) {
  if (!cond) throw DimensionMismatchError(msg);
}

}  // namespace

double dot(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), "dot: vector sizes differ");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double squared_norm(const Vector& v) { return std::inner_product(v.begin(), v.end(), v.begin(), 0.0); }

double norm(const Vector& v) { return std::sqrt(squared_norm(v)); }

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, Vector entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  require(entries_.size() == rows_ * cols_, "Matrix: entry count does not match shape");
  for (double x : entries_) {
    if (!std::isfinite(x)) throw Error("Matrix: non-finite entry");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vector& diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    require(row.size() == c, "from_rows: ragged rows");
    std::size_t j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

Matrix Matrix::outer(const Vector& a, const Vector& b) {
  Matrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : entries_) m = std::max(m, std::abs(x));
  return m;
}

double Matrix::frobenius_norm() const { return std::sqrt(squared_norm(entries_)); }

Vector Matrix::col(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::set_col(std::size_t j, const Vector& v) {
  require(v.size() == rows_, "set_col: length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::leading_columns(std::size_t k) const {
  require(k <= cols_, "leading_columns: k exceeds column count");
  Matrix m(rows_, k);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < k; ++j) m(i, j) = (*this)(i, j);
  return m;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "matrix +: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "matrix -: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : entries_) x *= s;
  return *this;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  require(cols_ == rhs.rows_, "matrix *: inner dimensions differ");
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

Vector Matrix::operator*(const Vector& v) const {
  require(cols_ == v.size(), "matrix * vector: dimension mismatch");
  Vector out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

double asymmetry(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - a(j, i)));
  return m;
}

Matrix symmetrized(const Matrix& a) {
  Matrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

namespace {

void check_symmetric(const Matrix& a, const char* who) {
  if (!a.is_square()) throw DimensionMismatchError(std::string(who) + ": matrix is not square");
  if (asymmetry(a) > kSymmetryTol * (1.0 + a.max_abs()))
    throw NotSymmetricError(std::string(who) + ": matrix is not symmetric within tolerance");
}

double off_diag_frobenius(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// Canonical sign: the largest-magnitude entry of each column is positive,
// ties broken by lowest index.
void fix_column_signs(Matrix& v) {
  for (std::size_t j = 0; j < v.cols(); ++j) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < v.rows(); ++i) {
      const double mag = std::abs(v(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (v(arg, j) < 0.0)
      for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
  }
}

}  // namespace

EigenDecomposition sym_eig(const Matrix& a) {
  check_symmetric(a, "sym_eig");
  const std::size_t n = a.rows();
  Matrix w = symmetrized(a);
  Matrix v = Matrix::identity(n);

  const double stop = kJacobiTol * (1.0 + w.frobenius_norm());
  bool converged = off_diag_frobenius(w) <= stop;
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (apq == 0.0) continue;
        // Rotation angle chosen to annihilate w(p, q).
        const double tau = (w(q, q) - w(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double wip = w(i, p);
          const double wiq = w(i, q);
          w(i, p) = c * wip - s * wiq;
          w(i, q) = s * wip + c * wiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double wpi = w(p, i);
          const double wqi = w(q, i);
          w(p, i) = c * wpi - s * wqi;
          w(q, i) = s * wpi + c * wqi;
        }
        w(p, q) = 0.0;
        w(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
    converged = off_diag_frobenius(w) <= stop;
  }
  if (!converged) throw NoConvergenceError("sym_eig: Jacobi sweep budget exhausted");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return w(i, i) > w(j, j); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = w(order[j], order[j]);
    out.eigenvectors.set_col(j, v.col(order[j]));
  }
  fix_column_signs(out.eigenvectors);
  return out;
}

namespace {

// Spectral factor B = V sqrt(clamped Lambda); B B^T = A.
Matrix spectral_factor(const Matrix& a, double tr) {
  EigenDecomposition eig = sym_eig(a);
  const std::size_t n = a.rows();
  Matrix b = eig.eigenvectors;
  for (std::size_t j = 0; j < n; ++j) {
    const double lambda = eig.eigenvalues[j];
    if (lambda < -kPsdTol * tr)
      throw NotPsdError("cholesky: matrix has an eigenvalue below the PSD tolerance");
    const double root = std::sqrt(std::max(lambda, 0.0));
    for (std::size_t i = 0; i < n; ++i) b(i, j) *= root;
  }
  return b;
}

}  // namespace

CholeskyResult cholesky(const Matrix& a) {
  check_symmetric(a, "cholesky");
  const Matrix w = symmetrized(a);
  const std::size_t n = w.rows();
  const double tr = w.trace();
  if (tr < 0.0) throw NotPsdError("cholesky: negative trace");
  const double neg_tol = kPsdTol * tr;
  const double zero_tol = 1e-12 * (1.0 + tr);

  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = w(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d < -neg_tol) throw NotPsdError("cholesky: pivot below PSD tolerance");
    if (d <= zero_tol) {
      // Singular within tolerance: fall back to the spectral square root.
      return {spectral_factor(w, tr), false};
    }
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = w(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return {std::move(l), true};
}

Matrix psd_sqrt(const Matrix& a) {
  check_symmetric(a, "psd_sqrt");
  const Matrix w = symmetrized(a);
  const double tr = w.trace();
  if (tr < 0.0) throw NotPsdError("psd_sqrt: negative trace");
  EigenDecomposition eig = sym_eig(w);
  const std::size_t n = w.rows();
  Matrix scaled = eig.eigenvectors;
  for (std::size_t j = 0; j < n; ++j) {
    const double lambda = eig.eigenvalues[j];
    if (lambda < -kPsdTol * tr)
      throw NotPsdError("psd_sqrt: matrix has an eigenvalue below the PSD tolerance");
    const double root = std::sqrt(std::max(lambda, 0.0));
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= root;
  }
  return symmetrized(scaled * eig.eigenvectors.transpose());
}

Matrix projector(const Matrix& u) {
  if (u.rows() < u.cols()) throw DimensionMismatchError("projector: more columns than rows");
  const Matrix gram = u.transpose() * u;
  if (max_abs_diff(gram, Matrix::identity(u.cols())) > 1e-8)
    throw NotOrthonormalError("projector: columns are not orthonormal");
  return symmetrized(u * u.transpose());
}

}  // namespace dpca
