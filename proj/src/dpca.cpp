#include "dpca/dpca.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "dpca/errors.hpp"
#include "dpca/wasserstein.hpp"

namespace dpca {

namespace {

constexpr double kEigengapTol = 1e-10;

void check_component_matrix(const DistributionDataset& ds, const Matrix& u, const char* who) {
  if (u.rows() != ds.dimension())
    throw DimensionMismatchError(std::string(who) + ": component rows do not match data dimension");
  if (u.cols() == 0 || u.cols() > u.rows())
    throw DimensionMismatchError(std::string(who) + ": component count out of range");
  if (max_abs_diff(u.transpose() * u, Matrix::identity(u.cols())) > 1e-8)
    throw NotOrthonormalError(std::string(who) + ": columns are not orthonormal");
}

DpcaModel model_from_second_moment(const Matrix& s, std::size_t k, CenteringInfo centering) {
  const std::size_t d = s.rows();
  EigenDecomposition eig = sym_eig(s);

  DpcaModel model;
  model.components = eig.eigenvectors.leading_columns(k);
  model.eigenvalues.assign(eig.eigenvalues.begin(), eig.eigenvalues.begin() + k);
  model.total_variance = s.trace();
  model.centering = std::move(centering);
  model.dimension = d;
  model.n_components = k;
  model.eigengap_warning =
      k < d && (eig.eigenvalues[k - 1] - eig.eigenvalues[k]) <= kEigengapTol * model.total_variance;
  return model;
}

}  // namespace

Matrix second_moment_matrix(const DistributionDataset& ds) {
  const std::size_t d = ds.dimension();
  Matrix s(d, d);
  for (const auto& dist : ds.distributions()) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        s(i, j) += dist.mean[i] * dist.mean[j] + dist.covariance(i, j);
  }
  return s;
}

DpcaModel fit(const DistributionDataset& ds, std::size_t k, bool center_means) {
  const std::size_t d = ds.dimension();
  if (k < 1 || k > d)
    throw InvalidKError("fit: k must be between 1 and the data dimension " + std::to_string(d));
  if (center_means) {
    auto [centered, info] = center(ds);
    return model_from_second_moment(second_moment_matrix(centered), k, std::move(info));
  }
  return model_from_second_moment(second_moment_matrix(ds), k,
                                  CenteringInfo{Vector(d, 0.0), false});
}

DpcaModel pointwise_fit(const std::vector<Vector>& points, std::size_t k, bool center_means) {
  if (points.empty()) throw DegenerateDatasetError("pointwise_fit: empty point set");
  const std::size_t d = points.front().size();
  if (d == 0) throw DimensionMismatchError("pointwise_fit: empty point");
  for (const auto& p : points)
    if (p.size() != d) throw DimensionMismatchError("pointwise_fit: points have mixed dimensions");
  if (k < 1 || k > d)
    throw InvalidKError("pointwise_fit: k must be between 1 and the data dimension " +
                        std::to_string(d));

  Vector offset(d, 0.0);
  if (center_means) {
    for (const auto& p : points)
      for (std::size_t j = 0; j < d; ++j) offset[j] += p[j];
    for (double& x : offset) x /= static_cast<double>(points.size());
  }

  Matrix s(d, d);
  for (const auto& p : points) {
    for (std::size_t i = 0; i < d; ++i) {
      const double xi = p[i] - offset[i];
      for (std::size_t j = 0; j < d; ++j) s(i, j) += xi * (p[j] - offset[j]);
    }
  }
  return model_from_second_moment(s, k, CenteringInfo{std::move(offset), center_means});
}

ProjectedDistribution project(const DpcaModel& model, const MomentDistribution& dist) {
  if (dist.dimension() != model.dimension)
    throw DimensionMismatchError("project: distribution dimension does not match model");
  Vector shifted = dist.mean;
  if (model.centering.applied)
    for (std::size_t j = 0; j < shifted.size(); ++j) shifted[j] -= model.centering.offset[j];
  const Matrix ut = model.components.transpose();
  return {ut * shifted, ut * dist.covariance * model.components, dist.label};
}

MomentDistribution reconstruct(const DpcaModel& model, const ProjectedDistribution& proj) {
  if (proj.mean.size() != model.n_components || proj.covariance.rows() != model.n_components ||
      proj.covariance.cols() != model.n_components)
    throw DimensionMismatchError("reconstruct: projected dimension does not match model");
  Vector mean = model.components * proj.mean;
  if (model.centering.applied)
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += model.centering.offset[j];
  return {std::move(mean), model.components * proj.covariance * model.components.transpose(),
          proj.label};
}

double expected_projected_variance(const DistributionDataset& ds, const Matrix& u) {
  check_component_matrix(ds, u, "expected_projected_variance");
  const Matrix s = second_moment_matrix(ds);
  return (u.transpose() * s * u).trace();
}

double reconstruction_error(const DistributionDataset& ds, const Matrix& u) {
  check_component_matrix(ds, u, "reconstruction_error");
  const Matrix q = projector(u);
  double total = 0.0;
  for (const auto& dist : ds.distributions()) total += w2_projection(dist, q);
  return total;
}

Vector explained_variance_ratio(const DpcaModel& model) {
  if (!(model.total_variance > 0.0))
    throw DegenerateDatasetError("explained_variance_ratio: total variance is not positive");
  Vector ratios(model.eigenvalues.size());
  for (std::size_t j = 0; j < ratios.size(); ++j)
    ratios[j] = model.eigenvalues[j] / model.total_variance;
  return ratios;
}

}  // namespace dpca
