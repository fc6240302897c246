#pragma once

#include <utility>

#include "dpca/linalg.hpp"
#include "dpca/model.hpp"

namespace dpca {

/// Moments of Q x for x with moments (mu, Sigma): (Q mu, Q Sigma Q).
MomentDistribution pushforward(const MomentDistribution& dist, const Matrix& q);

/// Squared 2-Wasserstein distance between x and its image under a projection
/// matrix Q: ||mu - Q mu||^2 + tr((I - Q) Sigma). Q must be symmetric and
/// idempotent within 1e-8 (NotProjectionError otherwise). Tiny negative
/// results from cancellation are clamped to zero.
double w2_projection(const MomentDistribution& dist, const Matrix& q);

/// Squared 2-Wasserstein distance between two Gaussians:
/// ||mu_a - mu_b||^2 + tr(Sigma_a + Sigma_b - 2 sqrt(sqrt(Sigma_b) Sigma_a sqrt(Sigma_b))).
/// Serves as the independent oracle for w2_projection.
double w2_gaussian(const MomentDistribution& a, const MomentDistribution& b);

/// Both sides of the translation decomposition of W2^2(x, Qx):
/// left  = w2_gaussian(x, Qx),
/// right = ||mu - Q mu||^2 + w2_gaussian(x - mu, Q(x - mu)).
/// Exists for verification; the two must agree.
std::pair<double, double> w2_translation_check(const MomentDistribution& dist, const Matrix& q);

}  // namespace dpca
