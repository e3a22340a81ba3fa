#pragma once

#include <Eigen/Dense>

namespace gsrnls {

/// Orthonormal PCA basis learned from a group of vectorised patches and the
/// coefficients of the (uncentered) patches in that basis.
struct PcaBasis {
  /// n x n orthonormal dictionary; column j is the eigenvector of the
  /// mean-centered covariance with the j-th largest eigenvalue.
  Eigen::MatrixXd dictionary;
  /// Eigenvalues in descending order.
  Eigen::VectorXd eigenvalues;
};

/// Learns the PCA dictionary of a patch group. Columns of `data` are
/// observations. The covariance is (1/m) * sum_j (z_j - mean)(z_j - mean)^T.
/// Eigenvectors are sorted by descending eigenvalue; each has its sign fixed
/// so that the entry of largest magnitude (lowest index on ties) is
/// non-negative.
PcaBasis pca_basis(const Eigen::MatrixXd& data);

/// Coefficients of the raw (uncentered) columns: A = D^T * Z.
Eigen::MatrixXd pca_encode(const PcaBasis& basis, const Eigen::MatrixXd& data);

/// Reconstruction Z = D * A.
Eigen::MatrixXd pca_decode(const PcaBasis& basis,
                           const Eigen::MatrixXd& coeffs);

} // namespace gsrnls
