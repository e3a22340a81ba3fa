#include "gsrnls/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <Eigen/Dense>

#include "gsrnls/errors.hpp"
#include "gsrnls/patch.hpp"
#include "gsrnls/pca.hpp"

namespace gsrnls {

namespace {

constexpr std::size_t kMinSamples = 100;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Eigen::MatrixXd colocated_patches(const GrayImage& img,
                                  const std::vector<PatchPos>& members,
                                  int side) {
  Eigen::MatrixXd out(side * side, static_cast<Eigen::Index>(members.size()));
  for (std::size_t j = 0; j < members.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) =
        extract_patch(img, members[j], side);
  }
  return out;
}

} // namespace

std::vector<double> coefficient_residuals(const GrayImage& clean,
                                          const GrayImage& noisy,
                                          const DenoiseParams& params) {
  if (!clean.same_size(noisy)) {
    throw DimensionError("coefficient_residuals: image dimensions differ");
  }
  const std::vector<PatchPos> anchors = anchor_grid(
      noisy.height, noisy.width, params.patch_side, params.stride);
  std::vector<double> samples;
  samples.reserve(anchors.size() * params.patch_side * params.patch_side *
                  params.group_size);
  for (const PatchPos& anchor : anchors) {
    const PatchGroup group = block_match(
        noisy, anchor, params.patch_side, params.group_size, params.window);
    const PcaBasis basis = pca_basis(group.data);
    const Eigen::MatrixXd noisy_codes = pca_encode(basis, group.data);
    const Eigen::MatrixXd clean_codes = pca_encode(
        basis, colocated_patches(clean, group.members, group.side));
    const Eigen::MatrixXd residual = noisy_codes - clean_codes;
    samples.insert(samples.end(), residual.data(),
                   residual.data() + residual.size());
  }
  return samples;
}

double generalized_gaussian_log_pdf(double x, double shape, double scale) {
  // log f = log(p) - log(2 s Gamma(1/p)) - (|x|/s)^p
  return std::log(shape) - std::log(2.0 * scale) - std::lgamma(1.0 / shape) -
         std::pow(std::abs(x) / scale, shape);
}

DistributionFit fit_generalized_gaussian(const std::vector<double>& sample,
                                         double p, const std::string& name) {
  if (sample.size() < kMinSamples) {
    throw ParamError("distribution fit needs at least 100 samples");
  }
  double mean_pow = 0.0;
  for (double x : sample) {
    mean_pow += std::pow(std::abs(x), p);
  }
  mean_pow /= static_cast<double>(sample.size());
  if (mean_pow == 0.0) {
    throw ParamError("distribution fit: degenerate all-zero sample");
  }
  DistributionFit fit;
  fit.name = name;
  fit.shape = p;
  fit.scale = std::pow(p * mean_pow, 1.0 / p);
  // log L = n*(log p - log(2 s Gamma(1/p))) - sum (|x|/s)^p, and the MLE
  // scale makes the last sum equal n/p exactly.
  const double n = static_cast<double>(sample.size());
  fit.log_likelihood = n * (std::log(p) - std::log(2.0 * fit.scale) -
                            std::lgamma(1.0 / p)) -
                       n / p;
  return fit;
}

DistributionFit fit_gaussian(const std::vector<double>& sample) {
  return fit_generalized_gaussian(sample, 2.0, "gaussian");
}

DistributionFit fit_laplacian(const std::vector<double>& sample) {
  return fit_generalized_gaussian(sample, 1.0, "laplacian");
}

DistributionFit fit_hyper_laplacian(const std::vector<double>& sample) {
  DistributionFit best;
  best.log_likelihood = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 9; ++i) {
    const double p = 0.1 * i;
    const DistributionFit fit =
        fit_generalized_gaussian(sample, p, "hyper_laplacian");
    if (fit.log_likelihood > best.log_likelihood) {
      best = fit;
    }
  }
  return best;
}

std::vector<DistributionFit> fit_distributions(
    const std::vector<double>& sample) {
  return {fit_gaussian(sample), fit_laplacian(sample),
          fit_hyper_laplacian(sample)};
}

ResidualHistogram residual_histogram(const std::vector<double>& sample,
                                     int bins) {
  if (bins < 2) {
    throw ParamError("residual_histogram: need at least 2 bins");
  }
  if (sample.size() < kMinSamples) {
    throw ParamError("residual_histogram: need at least 100 samples");
  }
  const auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (lo == hi) {
    throw ParamError("residual_histogram: degenerate constant sample");
  }
  const double width = (hi - lo) / bins;

  const std::vector<DistributionFit> fits = fit_distributions(sample);

  ResidualHistogram hist;
  hist.bin_centers.resize(bins);
  hist.empirical.assign(bins, 0.0);
  hist.gaussian.resize(bins);
  hist.laplacian.resize(bins);
  hist.hyper_laplacian.resize(bins);
  for (double x : sample) {
    int b = static_cast<int>((x - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    hist.empirical[b] += 1.0;
  }
  const double norm = static_cast<double>(sample.size()) * width;
  for (int b = 0; b < bins; ++b) {
    hist.empirical[b] /= norm;
    const double x = lo + (b + 0.5) * width;
    hist.bin_centers[b] = x;
    hist.gaussian[b] =
        std::exp(generalized_gaussian_log_pdf(x, fits[0].shape, fits[0].scale));
    hist.laplacian[b] =
        std::exp(generalized_gaussian_log_pdf(x, fits[1].shape, fits[1].scale));
    hist.hyper_laplacian[b] =
        std::exp(generalized_gaussian_log_pdf(x, fits[2].shape, fits[2].scale));
  }
  return hist;
}

void write_histogram_csv(const ResidualHistogram& hist,
                         const std::string& path, bool log_domain) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << "bin_center,empirical,gaussian,laplacian,hyper_laplacian\n";
  const auto cell = [log_domain](double v) {
    return fmt17(log_domain ? std::log10(v) : v);
  };
  for (std::size_t b = 0; b < hist.bin_centers.size(); ++b) {
    out << fmt17(hist.bin_centers[b]) << ',' << cell(hist.empirical[b]) << ','
        << cell(hist.gaussian[b]) << ',' << cell(hist.laplacian[b]) << ','
        << cell(hist.hyper_laplacian[b]) << '\n';
  }
  out.flush();
  if (!out) {
    throw IoError("write failed for " + path);
  }
}

} // namespace gsrnls
