#pragma once

#include <string>
#include <vector>

#include "gsrnls/image.hpp"
#include "gsrnls/params.hpp"

namespace gsrnls {

/// Zero-located generalized Gaussian fit f(x) = p/(2 s Gamma(1/p)) *
/// exp(-(|x|/s)^p) with the shape p fixed and the scale s estimated by
/// maximum likelihood: s = (p * mean(|x|^p))^(1/p).
struct DistributionFit {
  std::string name;          ///< "gaussian", "laplacian", "hyper_laplacian"
  double shape = 2.0;        ///< exponent p
  double scale = 1.0;        ///< MLE scale s
  double log_likelihood = 0; ///< total log-likelihood of the sample
};

/// Histogram of a sample plus the fitted densities evaluated at each bin
/// centre.
struct ResidualHistogram {
  std::vector<double> bin_centers;
  std::vector<double> empirical; ///< normalised to integrate to 1
  std::vector<double> gaussian;
  std::vector<double> laplacian;
  std::vector<double> hyper_laplacian;
};

/// Group-coefficient residual samples. For every anchor of the grid: build
/// the group from the noisy image, learn its PCA basis, encode the noisy
/// group (A) and the co-located clean patches with the same basis (B), and
/// emit every entry of A - B. Throws DimensionError on shape mismatch.
std::vector<double> coefficient_residuals(const GrayImage& clean,
                                          const GrayImage& noisy,
                                          const DenoiseParams& params);

/// Log-density of the zero-located generalized Gaussian at x.
double generalized_gaussian_log_pdf(double x, double shape, double scale);

/// Fits the zero-located generalized Gaussian with shape `p` to the sample.
/// Throws ParamError when the sample has fewer than 100 entries or a
/// degenerate (zero) scale.
DistributionFit fit_generalized_gaussian(const std::vector<double>& sample,
                                         double p, const std::string& name);

DistributionFit fit_gaussian(const std::vector<double>& sample);
DistributionFit fit_laplacian(const std::vector<double>& sample);

/// Tries p in {0.1, 0.2, ..., 0.9} and keeps the best log-likelihood.
DistributionFit fit_hyper_laplacian(const std::vector<double>& sample);

/// All three fits, in the order gaussian, laplacian, hyper_laplacian.
std::vector<DistributionFit> fit_distributions(
    const std::vector<double>& sample);

/// Builds a `bins`-bin histogram spanning [min, max] of the sample,
/// together with the three fitted densities at the bin centres.
/// Throws ParamError for bins < 2.
ResidualHistogram residual_histogram(const std::vector<double>& sample,
                                     int bins);

/// Writes the histogram as CSV with header
/// bin_center,empirical,gaussian,laplacian,hyper_laplacian.
/// With log_domain the four density columns hold log10 of the density
/// ("-inf" where the density is 0). Values use %.17g so they round-trip
/// exactly.
void write_histogram_csv(const ResidualHistogram& hist,
                         const std::string& path, bool log_domain = false);

} // namespace gsrnls
