#include "dpca/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dpca/errors.hpp"

namespace dpca {

std::uint64_t NormalRng::next_u64() {
  // SplitMix64: a Weyl counter pushed through a mixing hash.
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double NormalRng::next_uniform() {
  // 53 random bits mapped to (0, 1]; never zero, so log() below is safe.
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double NormalRng::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

SampleBatch sample(const MomentDistribution& dist, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw Error("sample: m must be at least 1");
  const std::size_t d = dist.dimension();
  const Matrix factor = cholesky(dist.covariance).factor;

  NormalRng rng(seed);
  SampleBatch batch;
  batch.points.reserve(m);
  batch.source_label = dist.label;
  batch.seed = seed;
  Vector z(d);
  for (std::size_t s = 0; s < m; ++s) {
    for (double& x : z) x = rng.next_normal();
    Vector point = factor * z;
    for (std::size_t j = 0; j < d; ++j) point[j] += dist.mean[j];
    batch.points.push_back(std::move(point));
  }
  return batch;
}

DpcaModel monte_carlo_pca(const DistributionDataset& ds, std::size_t m_per_dist,
                          std::uint64_t seed, std::size_t k, bool center) {
  std::vector<Vector> pooled;
  pooled.reserve(ds.size() * m_per_dist);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    SampleBatch batch = sample(ds[i], m_per_dist, seed + i);
    for (auto& p : batch.points) pooled.push_back(std::move(p));
  }
  return pointwise_fit(pooled, k, center);
}

namespace {

// sym_eig stops at an off-diagonal threshold that is absolute for small
// matrices, so a Gram matrix with tiny norm has to be normalized first or its
// spectrum comes back as noise. Eigenvalues scale linearly.
EigenDecomposition gram_spectrum(Matrix gram) {
  const double scale = gram.max_abs();
  if (scale == 0.0) return sym_eig(gram);
  for (std::size_t i = 0; i < gram.rows(); ++i)
    for (std::size_t j = 0; j < gram.cols(); ++j) gram(i, j) /= scale;
  EigenDecomposition eig = sym_eig(gram);
  for (double& value : eig.eigenvalues) value *= scale;
  return eig;
}

double column_norm(const Matrix& m, std::size_t j) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) sum += m(i, j) * m(i, j);
  return std::sqrt(sum);
}

}  // namespace

Vector principal_angles(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatchError("principal_angles: shapes differ");
  if (a.cols() == 0 || a.cols() > a.rows())
    throw DimensionMismatchError("principal_angles: column count out of range");
  const Matrix eye = Matrix::identity(a.cols());
  if (max_abs_diff(a.transpose() * a, eye) > 1e-8)
    throw NotOrthonormalError("principal_angles: first argument is not orthonormal");
  if (max_abs_diff(b.transpose() * b, eye) > 1e-8)
    throw NotOrthonormalError("principal_angles: second argument is not orthonormal");

  const std::size_t k = a.cols();
  const Matrix m = a.transpose() * b;

  // Cosines: singular values of A^T B via its Gram spectrum. Descending
  // eigenvalues give descending cosines, so angles come out ascending.
  const EigenDecomposition cos_eig = gram_spectrum(symmetrized(m.transpose() * m));

  // Sines: singular values of the residual (I - A A^T) B = B - A (A^T B).
  // acos loses half the digits when sigma is near 1; asin of the residual
  // keeps tiny angles accurate to machine precision.
  const Matrix residual = b - a * m;
  const EigenDecomposition sin_eig =
      gram_spectrum(symmetrized(residual.transpose() * residual));

  // A Gram eigenvalue near the solver's threshold carries only absolute
  // accuracy; the norm of (matrix * eigenvector) recovers the singular value
  // with relative accuracy, which acos/asin need at the ends of the range.
  const Matrix cos_images = m * cos_eig.eigenvectors;
  const Matrix sin_images = residual * sin_eig.eigenvectors;

  Vector angles(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double cosine = std::min(column_norm(cos_images, j), 1.0);
    // sin eigenvalues are descending too: the smallest sine pairs with the
    // largest cosine
    const double sine = std::min(column_norm(sin_images, k - 1 - j), 1.0);
    const double radians = cosine * cosine > 0.5 ? std::asin(sine) : std::acos(cosine);
    angles[j] = radians * 180.0 / std::numbers::pi;
  }
  return angles;
}

}  // namespace dpca
