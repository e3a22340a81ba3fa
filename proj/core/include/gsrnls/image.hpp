#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace gsrnls {

/// Grayscale image with real-valued pixels stored row-major.
///
/// Pixels live in the nominal range [0, 255] but are not clamped while the
/// image is in memory; quantization happens only when a file is written.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels; // size == width * height

  GrayImage() = default;
  GrayImage(int w, int h, double fill = 0.0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int row, int col) {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
  double at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }

  std::size_t size() const { return pixels.size(); }
  bool same_size(const GrayImage& other) const {
    return width == other.width && height == other.height;
  }
};

/// Parameters of a synthetic white-Gaussian-noise realization.
struct NoiseSpec {
  double sigma = 0.0; // standard deviation, pixel-intensity units
  std::uint64_t seed = 0;
};

/// Adds i.i.d. Gaussian noise to every pixel.
///
/// The generator is mt19937_64 seeded with spec.seed, turned into normal
/// deviates with the Box-Muller transform (cosine branch, two 53-bit
/// uniforms per pixel). The same (image, sigma, seed) triple reproduces the
/// output bit-exactly. The result is not clamped.
GrayImage add_gaussian_noise(const GrayImage& img, const NoiseSpec& spec);

/// Mean squared pixel difference. Throws DimensionError on shape mismatch.
double mse(const GrayImage& a, const GrayImage& b);

/// Peak signal-to-noise ratio in dB: 10*log10(255^2 / MSE).
/// Returns +infinity when the images are identical.
double psnr(const GrayImage& reference, const GrayImage& test);

} // namespace gsrnls
