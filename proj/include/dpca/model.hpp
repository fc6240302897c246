#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dpca/linalg.hpp"

namespace dpca {

/// A random variable summarized by its first two moments.
struct MomentDistribution {
  Vector mean;
  Matrix covariance;
  std::string label;  // optional; empty means unnamed

  std::size_t dimension() const { return mean.size(); }
};

/// Records the offset subtracted from every mean, so a fitted model can apply
/// the same shift to new data.
struct CenteringInfo {
  Vector offset;
  bool applied = false;
};

/// Checks the MomentDistribution invariants: mean and covariance dimensions
/// agree, covariance symmetric within 1e-10 * (1 + max|entry|) and PSD within
/// -1e-8 * tr. Asymmetry inside the tolerance is repaired as (S + S^T) / 2;
/// anything larger is rejected rather than silently fixed. `context` names the
/// distribution in error messages (falls back to the label).
MomentDistribution validate(MomentDistribution dist, std::string_view context = {});

/// Ordered, validated collection of distributions sharing one dimension.
class DistributionDataset {
 public:
  /// Validates every member and the common-dimension invariant.
  static DistributionDataset create(std::vector<MomentDistribution> distributions);

  const std::vector<MomentDistribution>& distributions() const { return distributions_; }
  const MomentDistribution& operator[](std::size_t i) const { return distributions_[i]; }
  std::size_t size() const { return distributions_.size(); }
  std::size_t dimension() const { return dimension_; }

 private:
  DistributionDataset(std::vector<MomentDistribution> distributions, std::size_t dimension)
      : distributions_(std::move(distributions)), dimension_(dimension) {}

  std::vector<MomentDistribution> distributions_;
  std::size_t dimension_ = 0;
};

/// Subtracts the mean of means from every mean; covariances are untouched
/// (translation leaves second central moments alone).
std::pair<DistributionDataset, CenteringInfo> center(const DistributionDataset& ds);

}  // namespace dpca
