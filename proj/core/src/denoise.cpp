#include "gsrnls/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gsrnls/errors.hpp"
#include "gsrnls/gsr.hpp"
#include "gsrnls/parallel.hpp"
#include "gsrnls/patch.hpp"

namespace gsrnls {

GrayImage iterate_regularize(const GrayImage& prev_estimate,
                             const GrayImage& noisy,
                             const GrayImage& prev_input, double gamma) {
  if (!prev_estimate.same_size(noisy) || !prev_estimate.same_size(prev_input)) {
    throw DimensionError("iterate_regularize: image dimensions differ");
  }
  GrayImage out(prev_estimate.width, prev_estimate.height);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    out.pixels[i] = prev_estimate.pixels[i] +
                    gamma * (noisy.pixels[i] - prev_input.pixels[i]);
  }
  return out;
}

double update_sigma(double sigma_noise, const GrayImage& noisy,
                    const GrayImage& prev_estimate, double eta) {
  if (eta < 0.0 || !std::isfinite(eta)) {
    throw ParamError("update_sigma: eta must be non-negative");
  }
  const double removed = mse(noisy, prev_estimate);
  return eta * std::sqrt(std::max(sigma_noise * sigma_noise - removed, 0.0));
}

double relative_change(const GrayImage& a, const GrayImage& b) {
  if (!a.same_size(b)) {
    throw DimensionError("relative_change: image dimensions differ");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = a.pixels[i] - b.pixels[i];
    num += d * d;
    den += b.pixels[i] * b.pixels[i];
  }
  if (den == 0.0) {
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::sqrt(num / den);
}

GrayImage denoise_pass(const GrayImage& working, const DenoiseParams& params,
                       double sigma) {
  const std::vector<PatchPos> anchors = anchor_grid(
      working.height, working.width, params.patch_side, params.stride);
  GrayImage sum(working.width, working.height, 0.0);
  GrayImage count(working.width, working.height, 0.0);

  const int threads = resolve_threads(params.threads);
  // Groups are denoised in parallel chunk by chunk, then folded into the
  // accumulators sequentially in anchor order, so the result does not
  // depend on the thread count.
  constexpr int kChunk = 512;
  std::vector<std::pair<PatchGroup, Eigen::MatrixXd>> results;
  for (std::size_t start = 0; start < anchors.size(); start += kChunk) {
    const int n =
        static_cast<int>(std::min<std::size_t>(kChunk, anchors.size() - start));
    results.assign(n, {});
    parallel_for(n, threads, [&](int i) {
      PatchGroup group =
          block_match(working, anchors[start + i], params.patch_side,
                      params.group_size, params.window);
      Eigen::MatrixXd est = denoise_group(group, params.c, params.eps,
                                          params.h, sigma,
                                          params.use_reference);
      results[i] = {std::move(group), std::move(est)};
    });
    for (int i = 0; i < n; ++i) {
      aggregate_group(results[i].first, results[i].second, sum, count);
    }
  }
  return normalize_aggregate(sum, count);
}

DenoiseResult denoise(const GrayImage& noisy, const DenoiseParams& params,
                      const ProgressFn& progress) {
  validate(params);
  if (noisy.width < params.patch_side || noisy.height < params.patch_side) {
    throw DimensionError("denoise: image smaller than one patch");
  }

  DenoiseResult result;
  GrayImage estimate = noisy;   // y_{k-1}
  GrayImage prev_input = noisy; // z_{k-1}

  for (int k = 1; k <= params.max_iters; ++k) {
    // eta mixes part of the original noisy signal back into the working
    // image; gamma scales the re-estimated noise level. At k = 1 the
    // estimate equals the noisy input, so the schedule starts at
    // gamma * sigma — a deliberately gentle first pass that the later
    // iterations sharpen as the removed-noise estimate grows.
    const GrayImage input =
        iterate_regularize(estimate, noisy, prev_input, params.eta);
    const double sigma_k =
        update_sigma(params.sigma, noisy, estimate, params.gamma);
    GrayImage next = denoise_pass(input, params, sigma_k);
    const double rc = relative_change(next, estimate);

    prev_input = input;
    estimate = std::move(next);

    IterationStat stat{k, sigma_k, rc};
    result.iterations.push_back(stat);
    if (progress) {
      progress(stat);
    }
    if (rc < params.tau) {
      break;
    }
  }
  result.image = std::move(estimate);
  return result;
}

} // namespace gsrnls
