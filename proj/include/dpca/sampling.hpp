#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpca/dpca.hpp"
#include "dpca/linalg.hpp"
#include "dpca/model.hpp"

namespace dpca {

/// Points drawn from one distribution, tagged with its label and the seed
/// that produced them.
struct SampleBatch {
  std::vector<Vector> points;
  std::string source_label;
  std::uint64_t seed = 0;
};

/// Deterministic standard-normal stream: a SplitMix64 counter generator fed
/// through the Box-Muller transform. Reproducible for a given seed within one
/// build; bit-exactness across platforms or languages is not a contract.
class NormalRng {
 public:
  explicit NormalRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  /// Uniform draw in (0, 1].
  double next_uniform();
  double next_normal();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// m draws of mu + B z with B B^T = Sigma (Cholesky, or the spectral factor
/// for singular covariances) and z standard normal. Same (dist, m, seed) give
/// bit-identical batches within one build.
SampleBatch sample(const MomentDistribution& dist, std::size_t m, std::uint64_t seed);

/// The Monte-Carlo oracle: pools m_per_dist samples from each distribution
/// (per-distribution seed = seed + index) and runs pointwise PCA on the pool.
/// Converges to fit(ds, k, center) as m_per_dist grows.
DpcaModel monte_carlo_pca(const DistributionDataset& ds, std::size_t m_per_dist,
                          std::uint64_t seed, std::size_t k, bool center = true);

/// Principal angles between the column spans of two orthonormal d x k
/// matrices, in degrees, sorted ascending. Invariant to column signs and to
/// rotations within either subspace; the right comparison for fitted
/// components, where raw entries are only defined up to those symmetries.
Vector principal_angles(const Matrix& a, const Matrix& b);

}  // namespace dpca
