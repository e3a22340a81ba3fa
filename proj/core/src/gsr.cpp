#include "gsrnls/gsr.hpp"

#include <cmath>

#include "gsrnls/errors.hpp"
#include "gsrnls/pca.hpp"

namespace gsrnls {

Eigen::VectorXd nlm_weights_from_distances(const std::vector<double>& d,
                                           double h) {
  if (h <= 0.0) {
    throw ParamError("nlm_weights: h must be positive");
  }
  if (d.empty()) {
    throw DimensionError("nlm_weights: empty distance list");
  }
  Eigen::VectorXd w(static_cast<Eigen::Index>(d.size()));
  double total = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double raw = std::exp(-d[j] / h);
    w[static_cast<Eigen::Index>(j)] = raw;
    total += raw;
  }
  return w / total;
}

Eigen::VectorXd nlm_weights(const PatchGroup& group, double h, double sigma) {
  const double b = static_cast<double>(group.data.rows());
  std::vector<double> dissim(group.distances.size());
  for (std::size_t j = 0; j < group.distances.size(); ++j) {
    dissim[j] = std::max(group.distances[j] / b - 2.0 * sigma * sigma, 0.0);
  }
  return nlm_weights_from_distances(dissim, h);
}

Eigen::MatrixXd group_reference(const Eigen::MatrixXd& coeffs,
                                const Eigen::VectorXd& weights) {
  if (weights.size() != coeffs.cols()) {
    throw DimensionError("group_reference: weight count mismatch");
  }
  const Eigen::VectorXd beta = coeffs * weights;
  return beta.replicate(1, coeffs.cols());
}

double residual_delta(const Eigen::MatrixXd& coeffs,
                      const Eigen::MatrixXd& reference) {
  if (coeffs.rows() != reference.rows() ||
      coeffs.cols() != reference.cols()) {
    throw DimensionError("residual_delta: shape mismatch");
  }
  const Eigen::MatrixXd r = coeffs - reference;
  const double n = static_cast<double>(r.size());
  const double mean = r.sum() / n;
  const double var = (r.array() - mean).square().sum() / n;
  return std::sqrt(var);
}

double lambda_for_group(double delta, double c, double sigma, double eps) {
  if (eps <= 0.0) {
    throw ParamError("lambda_for_group: eps must be positive");
  }
  return c * 2.0 * std::sqrt(2.0) * sigma * sigma / (delta + eps);
}

Eigen::MatrixXd shrink(const Eigen::MatrixXd& coeffs,
                       const Eigen::MatrixXd& reference, double lambda) {
  if (coeffs.rows() != reference.rows() ||
      coeffs.cols() != reference.cols()) {
    throw DimensionError("shrink: shape mismatch");
  }
  if (lambda < 0.0) {
    throw ParamError("shrink: lambda must be non-negative");
  }
  const double t = lambda / 2.0;
  Eigen::MatrixXd out(coeffs.rows(), coeffs.cols());
  for (Eigen::Index j = 0; j < coeffs.cols(); ++j) {
    for (Eigen::Index i = 0; i < coeffs.rows(); ++i) {
      // g - sign(r)*t rather than soft(r) + beta: algebraically equal on the
      // unclipped branch, and exact (no beta round-trip) when t == 0.
      const double r = coeffs(i, j) - reference(i, j);
      if (std::abs(r) <= t) {
        out(i, j) = reference(i, j);
      } else {
        out(i, j) = coeffs(i, j) - std::copysign(t, r);
      }
    }
  }
  return out;
}

Eigen::MatrixXd denoise_group(const PatchGroup& group, double c, double eps,
                              double h, double sigma, bool use_reference) {
  const PcaBasis basis = pca_basis(group.data);
  const Eigen::MatrixXd coeffs = pca_encode(basis, group.data);
  Eigen::MatrixXd reference;
  if (use_reference) {
    const Eigen::VectorXd w = nlm_weights(group, h, sigma);
    reference = group_reference(coeffs, w);
  } else {
    reference = Eigen::MatrixXd::Zero(coeffs.rows(), coeffs.cols());
  }
  // Threshold row by row: each dictionary atom gets a spread estimate with
  // the noise floor subtracted, so noise-dominated rows see a large lambda
  // while structured rows are kept. A single group-wide spread flattens that
  // contrast and under-thresholds the noise rows. The spread is the second
  // moment about zero — the residual model is zero-mean, and centering on
  // the empirical row mean would misread a strong uniform row as noise.
  const Eigen::Index b = coeffs.rows();
  const Eigen::Index m = coeffs.cols();
  const Eigen::MatrixXd resid = coeffs - reference;
  Eigen::MatrixXd shrunk(b, m);
  for (Eigen::Index i = 0; i < b; ++i) {
    const double mom = resid.row(i).squaredNorm() / static_cast<double>(m);
    const double delta = std::sqrt(std::max(mom - sigma * sigma, 0.0));
    const double t = lambda_for_group(delta, c, sigma, eps) / 2.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double r = resid(i, j);
      if (std::abs(r) <= t) {
        shrunk(i, j) = reference(i, j);
      } else {
        shrunk(i, j) = coeffs(i, j) - std::copysign(t, r);
      }
    }
  }
  return pca_decode(basis, shrunk);
}

} // namespace gsrnls
