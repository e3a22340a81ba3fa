#pragma once

#include <cstdint>

namespace gsrnls {

/// Denoiser configuration. Defaults are filled in per noise level by
/// params_for_sigma(); individual fields can be overridden afterwards.
struct DenoiseParams {
  double sigma = 0.0;   ///< noise standard deviation (pixel scale 0..255)
  int patch_side = 7;   ///< square patch edge length
  int group_size = 60;  ///< patches per group (m)
  int window = 25;      ///< search window edge length
  int stride = 4;       ///< anchor grid step
  double c = 0.7;       ///< regularisation strength
  double eps = 0.2;     ///< stabiliser added to delta
  double eta = 0.2;     ///< iterative regularisation feedback
  double gamma = 0.5;   ///< noise re-estimation factor
  double h = 45.0;      ///< non-local weight decay
  double tau = 8e-4;    ///< relative-change stopping threshold
  int max_iters = 12;   ///< iteration cap
  bool use_reference = true; ///< false = plain group-sparse coding
  int threads = 0;      ///< 0 = use all hardware threads
};

/// Parameter bands tuned per noise level. Throws ParamError for
/// sigma <= 0 or sigma > 100.
DenoiseParams params_for_sigma(double sigma);

/// Validates ranges (positive sides/groups/strides, window >= side, ...).
/// Throws ParamError with a message naming the offending field.
void validate(const DenoiseParams& p);

} // namespace gsrnls
