#include "gsrnls/image.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "gsrnls/errors.hpp"

namespace gsrnls {

namespace {

// Deterministic standard-normal stream: mt19937_64 words mapped to 53-bit
// uniforms, combined with the cosine branch of the Box-Muller transform.
// std::normal_distribution is implementation-defined, so it cannot be used
// where bit-exact reproducibility across platforms is part of the contract.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : gen_(seed) {}

  double next() {
    // u1 in (0, 1] so the log is finite; u2 in [0, 1).
    const double u1 = ((gen_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = (gen_() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

} // namespace

GrayImage add_gaussian_noise(const GrayImage& img, const NoiseSpec& spec) {
  if (spec.sigma < 0) {
    throw ParamError("add_gaussian_noise: sigma must be non-negative");
  }
  GrayImage out = img;
  if (spec.sigma == 0.0) {
    return out;
  }
  NormalStream stream(spec.seed);
  for (double& p : out.pixels) {
    p += spec.sigma * stream.next();
  }
  return out;
}

double mse(const GrayImage& a, const GrayImage& b) {
  if (!a.same_size(b)) {
    throw DimensionError("mse: image dimensions differ");
  }
  if (a.size() == 0) {
    throw DimensionError("mse: empty image");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = a.pixels[i] - b.pixels[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.pixels.size());
}

double psnr(const GrayImage& reference, const GrayImage& test) {
  const double err = mse(reference, test);
  if (err == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(255.0 * 255.0 / err);
}

} // namespace gsrnls
