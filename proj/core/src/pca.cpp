#include "gsrnls/pca.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "gsrnls/errors.hpp"

namespace gsrnls {

PcaBasis pca_basis(const Eigen::MatrixXd& data) {
  const Eigen::Index n = data.rows();
  const Eigen::Index m = data.cols();
  if (n < 1 || m < 1) {
    throw DimensionError("pca_basis: empty data matrix");
  }
  const Eigen::VectorXd mean = data.rowwise().mean();
  const Eigen::MatrixXd centered = data.colwise() - mean;
  const Eigen::MatrixXd cov =
      (centered * centered.transpose()) / static_cast<double>(m);

  // SelfAdjointEigenSolver returns eigenvalues in ascending order with
  // orthonormal eigenvectors (it completes degenerate/zero eigenspaces
  // deterministically).
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error("pca_basis: eigendecomposition failed");
  }

  PcaBasis basis;
  basis.dictionary.resize(n, n);
  basis.eigenvalues.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k; // descending eigenvalue order
    basis.eigenvalues[k] = solver.eigenvalues()[src];
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    // Sign convention: the entry of largest magnitude (lowest index on
    // ties) must be non-negative.
    Eigen::Index imax = 0;
    double best = std::abs(v[0]);
    for (Eigen::Index i = 1; i < n; ++i) {
      const double a = std::abs(v[i]);
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (v[imax] < 0.0) {
      v = -v;
    }
    basis.dictionary.col(k) = v;
  }
  return basis;
}

Eigen::MatrixXd pca_encode(const PcaBasis& basis, const Eigen::MatrixXd& data) {
  if (data.rows() != basis.dictionary.rows()) {
    throw DimensionError("pca_encode: row count mismatch");
  }
  return basis.dictionary.transpose() * data;
}

Eigen::MatrixXd pca_decode(const PcaBasis& basis,
                           const Eigen::MatrixXd& coeffs) {
  if (coeffs.rows() != basis.dictionary.cols()) {
    throw DimensionError("pca_decode: row count mismatch");
  }
  return basis.dictionary * coeffs;
}

} // namespace gsrnls
