#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gsrnls/patch.hpp"

namespace gsrnls {

/// Normalised exponential weights w_j = exp(-d_j/h) / sum_k exp(-d_k/h)
/// for non-negative dissimilarities d. The entry with the smallest
/// dissimilarity always gets the largest weight; d_0 = 0 guarantees a
/// non-zero normaliser.
Eigen::VectorXd nlm_weights_from_distances(const std::vector<double>& d,
                                           double h);

/// Non-local-means weights for a patch group. The block-matching distance
/// of member j is converted to a per-pixel dissimilarity with the expected
/// noise contribution removed, e_j = max(d_j/b - 2*sigma^2, 0) where b is
/// the pixel count of a patch, then passed through the exponential kernel
/// above. Without the noise compensation the kernel underflows for every
/// non-anchor member at realistic noise levels and the reference collapses
/// to the anchor's own noisy code.
Eigen::VectorXd nlm_weights(const PatchGroup& group, double h, double sigma);

/// Reference coefficients: beta = sum_j w_j * coeffs.col(j), replicated
/// across all m columns. Throws DimensionError on size mismatch.
Eigen::MatrixXd group_reference(const Eigen::MatrixXd& coeffs,
                                const Eigen::VectorXd& weights);

/// Spread of the residual coefficients: population standard deviation of
/// the entries of (coeffs - reference).
double residual_delta(const Eigen::MatrixXd& coeffs,
                      const Eigen::MatrixXd& reference);

/// Regularisation weight lambda = c * 2*sqrt(2) * sigma^2 / (delta + eps).
double lambda_for_group(double delta, double c, double sigma, double eps);

/// Soft-thresholds the residual against the reference:
///   out = sign(g - beta) * max(|g - beta| - lambda/2, 0) + beta
/// elementwise. This is the exact minimiser of
/// (g - alpha)^2 + lambda*|alpha - beta| per element.
Eigen::MatrixXd shrink(const Eigen::MatrixXd& coeffs,
                       const Eigen::MatrixXd& reference, double lambda);

/// One full group update: PCA basis, encode, non-local reference (zero
/// matrix when use_reference is false), per-row lambda from the
/// noise-compensated residual spread, shrink, decode. Returns the denoised
/// pixel estimates, same shape as group.data.
Eigen::MatrixXd denoise_group(const PatchGroup& group, double c, double eps,
                              double h, double sigma, bool use_reference);

} // namespace gsrnls
