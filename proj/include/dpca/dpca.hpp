#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dpca/linalg.hpp"
#include "dpca/model.hpp"

namespace dpca {

/// Fitted principal components of a distribution dataset.
struct DpcaModel {
  Matrix components;      // d x k, orthonormal columns, column j = component j
  Vector eigenvalues;     // k values, non-increasing
  double total_variance = 0.0;  // tr(S)
  CenteringInfo centering;
  std::size_t dimension = 0;
  std::size_t n_components = 0;
  /// True when the eigengap at the cut is below 1e-10 * tr(S): the fitted
  /// subspace is then not unique.
  bool eigengap_warning = false;
};

/// Image of a distribution in component coordinates.
struct ProjectedDistribution {
  Vector mean;        // k entries: U^T (mu - offset)
  Matrix covariance;  // k x k: U^T Sigma U
  std::string label;
};

/// S = sum_i (mu_i mu_i^T + Sigma_i). The raw sum, not the average; principal
/// components are invariant to the scaling and this matches how the total
/// variance is reported.
Matrix second_moment_matrix(const DistributionDataset& ds);

/// Principal components of a distribution dataset: the leading k eigenvectors
/// of the second-moment matrix, computed after centering the means unless
/// center is false.
DpcaModel fit(const DistributionDataset& ds, std::size_t k, bool center = true);

/// Classical PCA on a point dataset, packaged in the same model shape.
/// Equals fit on the dataset with all covariances zero.
DpcaModel pointwise_fit(const std::vector<Vector>& points, std::size_t k, bool center = true);

/// Projects a distribution onto the model's components, applying the model's
/// stored centering offset first.
ProjectedDistribution project(const DpcaModel& model, const MomentDistribution& dist);

/// Maps component coordinates back to the data space: mean U z + offset,
/// covariance U C U^T. These are the moments of the pushforward Q x.
MomentDistribution reconstruct(const DpcaModel& model, const ProjectedDistribution& proj);

/// tr(U^T S U): the expected variance of the dataset projected onto the
/// columns of U. U must have orthonormal columns.
double expected_projected_variance(const DistributionDataset& ds, const Matrix& u);

/// Total squared 2-Wasserstein error of projecting every distribution onto
/// span(U), evaluated per distribution through the projection formula
/// ||mu - Q mu||^2 + tr((I - Q) Sigma). Equals tr(S) - tr(U^T S U).
double reconstruction_error(const DistributionDataset& ds, const Matrix& u);

/// Per-component eigenvalue divided by tr(S). Throws DegenerateDatasetError
/// when the total variance is not positive.
Vector explained_variance_ratio(const DpcaModel& model);

}  // namespace dpca
