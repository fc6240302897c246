#include "dpca/model.hpp"

#include <cmath>
#include <string>

#include "dpca/errors.hpp"

namespace dpca {

namespace {

std::string describe(const MomentDistribution& dist, std::string_view context) {
  if (!context.empty()) return std::string(context);
  if (!dist.label.empty()) return "'" + dist.label + "'";
  return "distribution";
}

}  // namespace

MomentDistribution validate(MomentDistribution dist, std::string_view context) {
  const std::string who = describe(dist, context);
  const std::size_t d = dist.mean.size();
  if (d == 0) throw DimensionMismatchError(who + ": empty mean vector");
  for (double x : dist.mean) {
    if (!std::isfinite(x)) throw Error(who + ": non-finite mean entry");
  }
  if (dist.covariance.rows() != d || dist.covariance.cols() != d)
    throw DimensionMismatchError(who + ": covariance shape does not match mean dimension");
  if (asymmetry(dist.covariance) > 1e-10 * (1.0 + dist.covariance.max_abs()))
    throw NotSymmetricError(who + ": covariance is not symmetric within tolerance");
  dist.covariance = symmetrized(dist.covariance);

  const double tr = dist.covariance.trace();
  if (tr < 0.0) throw NotPsdError(who + ": covariance has negative trace");
  const EigenDecomposition eig = sym_eig(dist.covariance);
  if (eig.eigenvalues.back() < -1e-8 * tr)
    throw NotPsdError(who + ": covariance is not positive semidefinite");
  return dist;
}

DistributionDataset DistributionDataset::create(std::vector<MomentDistribution> distributions) {
  if (distributions.empty()) throw DegenerateDatasetError("dataset: must not be empty");
  const std::size_t d = distributions.front().mean.size();
  for (std::size_t i = 0; i < distributions.size(); ++i) {
    const std::string context = distributions[i].label.empty()
                                    ? "distribution #" + std::to_string(i)
                                    : "distribution #" + std::to_string(i) + " ('" +
                                          distributions[i].label + "')";
    distributions[i] = validate(std::move(distributions[i]), context);
    if (distributions[i].mean.size() != d)
      throw DimensionMismatchError(context + ": dimension differs from the rest of the dataset");
  }
  return DistributionDataset(std::move(distributions), d);
}

std::pair<DistributionDataset, CenteringInfo> center(const DistributionDataset& ds) {
  const std::size_t d = ds.dimension();
  Vector offset(d, 0.0);
  for (const auto& dist : ds.distributions())
    for (std::size_t j = 0; j < d; ++j) offset[j] += dist.mean[j];
  for (double& x : offset) x /= static_cast<double>(ds.size());

  std::vector<MomentDistribution> shifted = ds.distributions();
  for (auto& dist : shifted)
    for (std::size_t j = 0; j < d; ++j) dist.mean[j] -= offset[j];
  return {DistributionDataset::create(std::move(shifted)), CenteringInfo{std::move(offset), true}};
}

}  // namespace dpca
