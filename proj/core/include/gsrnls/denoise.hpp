#pragma once

#include <functional>
#include <vector>

#include "gsrnls/image.hpp"
#include "gsrnls/params.hpp"

namespace gsrnls {

/// Per-iteration progress record.
struct IterationStat {
  int iteration = 0;       ///< 1-based
  double sigma = 0.0;      ///< noise level used in this iteration
  double rel_change = 0.0; ///< ||y_k - y_{k-1}|| / ||y_{k-1}||
};

struct DenoiseResult {
  GrayImage image;
  std::vector<IterationStat> iterations;
};

using ProgressFn = std::function<void(const IterationStat&)>;

/// Runs the full iterative non-local denoiser on `noisy`.
/// `progress` (optional) is invoked after every iteration.
DenoiseResult denoise(const GrayImage& noisy, const DenoiseParams& params,
                      const ProgressFn& progress = nullptr);

/// One pass over the anchor grid at noise level `sigma`: group, transform,
/// shrink, aggregate. Exposed for testing; denoise() drives this in a loop.
GrayImage denoise_pass(const GrayImage& working, const DenoiseParams& params,
                       double sigma);

/// Feedback step z_k = prev_estimate + gamma * (noisy - prev_input),
/// pixelwise. Throws DimensionError on any shape mismatch.
GrayImage iterate_regularize(const GrayImage& prev_estimate,
                             const GrayImage& noisy,
                             const GrayImage& prev_input, double gamma);

/// Re-estimated noise level eta * sqrt(max(sigma_noise^2 - MSE(noisy,
/// prev_estimate), 0)). With prev_estimate == noisy this degenerates to
/// eta * sigma_noise, which is what the driver runs its first pass at.
double update_sigma(double sigma_noise, const GrayImage& noisy,
                    const GrayImage& prev_estimate, double eta);

/// Relative L2 change ||a - b|| / ||b|| over all pixels.
double relative_change(const GrayImage& a, const GrayImage& b);

} // namespace gsrnls
