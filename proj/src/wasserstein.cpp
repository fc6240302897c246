#include "dpca/wasserstein.hpp"

#include <cmath>

#include "dpca/errors.hpp"

namespace dpca {

namespace {

void check_projection(const MomentDistribution& dist, const Matrix& q, const char* who) {
  if (!q.is_square() || q.rows() != dist.dimension())
    throw DimensionMismatchError(std::string(who) + ": projection shape does not match distribution");
  if (asymmetry(q) > 1e-8)
    throw NotProjectionError(std::string(who) + ": matrix is not symmetric");
  if (max_abs_diff(q * q, q) > 1e-8)
    throw NotProjectionError(std::string(who) + ": matrix is not idempotent");
}

double clamp_tiny_negative(double value, double scale) {
  if (value < 0.0 && value >= -1e-10 * (1.0 + scale)) return 0.0;
  return value;
}

}  // namespace

MomentDistribution pushforward(const MomentDistribution& dist, const Matrix& q) {
  if (q.cols() != dist.dimension())
    throw DimensionMismatchError("pushforward: matrix shape does not match distribution");
  return {q * dist.mean, q * dist.covariance * q.transpose(), dist.label};
}

double w2_projection(const MomentDistribution& dist, const Matrix& q) {
  check_projection(dist, q, "w2_projection");
  const Vector qmu = q * dist.mean;
  double mean_term = 0.0;
  for (std::size_t i = 0; i < dist.mean.size(); ++i) {
    const double diff = dist.mean[i] - qmu[i];
    mean_term += diff * diff;
  }
  // tr((I - Q) Sigma) without forming the product.
  double cov_term = dist.covariance.trace();
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) cov_term -= q(i, j) * dist.covariance(j, i);
  return clamp_tiny_negative(mean_term + cov_term, dist.covariance.trace());
}

double w2_gaussian(const MomentDistribution& a, const MomentDistribution& b) {
  if (a.dimension() != b.dimension())
    throw DimensionMismatchError("w2_gaussian: distributions have different dimensions");
  double mean_term = 0.0;
  for (std::size_t i = 0; i < a.mean.size(); ++i) {
    const double diff = a.mean[i] - b.mean[i];
    mean_term += diff * diff;
  }
  // Symmetrized Bures form: the inner matrix sqrt(Sigma_b) Sigma_a sqrt(Sigma_b)
  // stays symmetric PSD, so psd_sqrt applies cleanly.
  const Matrix root_b = psd_sqrt(b.covariance);
  const Matrix inner = symmetrized(root_b * a.covariance * root_b);
  const Matrix cross = psd_sqrt(inner);
  const double bures = a.covariance.trace() + b.covariance.trace() - 2.0 * cross.trace();
  const double scale = a.covariance.trace() + b.covariance.trace();
  return clamp_tiny_negative(mean_term + clamp_tiny_negative(bures, scale), scale);
}

std::pair<double, double> w2_translation_check(const MomentDistribution& dist, const Matrix& q) {
  check_projection(dist, q, "w2_translation_check");
  const double left = w2_gaussian(dist, pushforward(dist, q));

  MomentDistribution zero_mean = dist;
  for (double& x : zero_mean.mean) x = 0.0;
  const Vector qmu = q * dist.mean;
  double mean_term = 0.0;
  for (std::size_t i = 0; i < dist.mean.size(); ++i) {
    const double diff = dist.mean[i] - qmu[i];
    mean_term += diff * diff;
  }
  const double right = mean_term + w2_gaussian(zero_mean, pushforward(zero_mean, q));
  return {left, right};
}

}  // namespace dpca
