#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "gsrnls/denoise.hpp"
#include "gsrnls/errors.hpp"
#include "gsrnls/image.hpp"
#include "gsrnls/image_io.hpp"
#include "gsrnls/params.hpp"

using namespace gsrnls;

namespace {

// Piecewise-smooth synthetic scene: flat regions, a gradient and an edge,
// which gives block matching some real structure to work with.
GrayImage synthetic_scene(int w, int h) {
  GrayImage img(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double v = 60.0;
      if (c > w / 2) {
        v = 180.0;
      }
      if (r > h * 2 / 3) {
        v = 40.0 + 120.0 * c / w;
      }
      img.at(r, c) = v;
    }
  }
  return img;
}

} // namespace

TEST_CASE("parameter schedule matches the tuned bands") {
  const DenoiseParams p50 = params_for_sigma(50.0);
  CHECK(p50.patch_side == 7);
  CHECK(p50.c == 0.7);
  CHECK(p50.eta == 0.1);
  CHECK(p50.gamma == 0.5);
  CHECK(p50.group_size == 80);
  CHECK(p50.h == 115.0);
  CHECK(p50.tau == 0.001);
  CHECK(p50.window == 25);
  CHECK(p50.eps == 0.2);

  const DenoiseParams p75 = params_for_sigma(75.0);
  CHECK(p75.patch_side == 8);
  CHECK(p75.c == 0.7);
  CHECK(p75.group_size == 90);
  CHECK(p75.h == 160.0);
  CHECK(p75.tau == 0.0005);

  const DenoiseParams p20 = params_for_sigma(20.0);
  CHECK(p20.patch_side == 6);
  CHECK(p20.c == 0.7);
  CHECK(p20.eta == 0.2);
  CHECK(p20.gamma == 0.6);
  CHECK(p20.group_size == 60);
  CHECK(p20.h == 45.0);
  CHECK(p20.tau == 0.0008);

  const DenoiseParams p90 = params_for_sigma(90.0);
  CHECK(p90.patch_side == 9);
  CHECK(p90.c == 1.0);
  CHECK(p90.group_size == 100);
}

TEST_CASE("parameter schedule rejects out-of-range sigma") {
  CHECK_THROWS_AS(params_for_sigma(0.0), ParamError);
  CHECK_THROWS_AS(params_for_sigma(-5.0), ParamError);
  CHECK_THROWS_AS(params_for_sigma(100.5), ParamError);
}

TEST_CASE("validate names the offending field") {
  DenoiseParams p = params_for_sigma(30.0);
  p.window = 2;
  try {
    validate(p);
    FAIL("expected ParamError");
  } catch (const ParamError& e) {
    CHECK(std::string(e.what()).find("window") != std::string::npos);
  }
}

TEST_CASE("iterate_regularize with gamma 0 returns the previous estimate") {
  const GrayImage est = synthetic_scene(16, 16);
  GrayImage noisy = est;
  noisy.pixels[5] += 40.0;
  const GrayImage out = iterate_regularize(est, noisy, noisy, 0.0);
  CHECK(out.pixels == est.pixels);
}

TEST_CASE("iterate_regularize with z_prev == z returns the previous estimate") {
  const GrayImage est = synthetic_scene(16, 16);
  const GrayImage noisy = add_gaussian_noise(est, {20.0, 1});
  const GrayImage out = iterate_regularize(est, noisy, noisy, 1.0);
  CHECK(out.pixels == est.pixels);
}

TEST_CASE("iterate_regularize mixes pixels as documented") {
  GrayImage est(1, 1, 100.0);
  GrayImage noisy(1, 1, 120.0);
  GrayImage prev(1, 1, 110.0);
  const GrayImage out = iterate_regularize(est, noisy, prev, 0.5);
  CHECK(out.pixels[0] == doctest::Approx(105.0).epsilon(1e-15));
}

TEST_CASE("iterate_regularize rejects shape mismatches") {
  const GrayImage a(4, 4, 0.0);
  const GrayImage b(4, 5, 0.0);
  CHECK_THROWS_AS(iterate_regularize(a, b, a, 0.5), DimensionError);
}

TEST_CASE("update_sigma degenerates to eta*sigma when nothing was removed") {
  const GrayImage img = synthetic_scene(8, 8);
  CHECK(update_sigma(50.0, img, img, 0.1) ==
        doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("update_sigma clamps at zero") {
  GrayImage a(4, 1, 0.0);
  GrayImage b(4, 1, 100.0); // mse 10000 > sigma^2
  CHECK(update_sigma(50.0, a, b, 0.1) == 0.0);
}

TEST_CASE("update_sigma reproduces a hand-computed value") {
  GrayImage a(4, 1, 0.0);
  GrayImage b(4, 1, std::sqrt(1500.0));
  CHECK(update_sigma(50.0, a, b, 0.1) ==
        doctest::Approx(0.1 * std::sqrt(2500.0 - 1500.0)).epsilon(1e-12));
}

TEST_CASE("update_sigma is monotone and never negative or NaN") {
  GrayImage a(16, 16, 0.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double level : {0.0, 10.0, 30.0, 49.0, 60.0}) {
    GrayImage b(16, 16, level);
    const double s = update_sigma(50.0, a, b, 0.2);
    CHECK(std::isfinite(s));
    CHECK(s >= 0.0);
    CHECK(s <= prev);
    prev = s;
  }
}

TEST_CASE("relative_change matches a direct ratio") {
  GrayImage a(2, 1, 0.0), b(2, 1, 0.0);
  a.pixels = {3.0, 4.0};
  b.pixels = {1.0, 2.0};
  // ||a-b|| = sqrt(4+4); ||b|| = sqrt(5)
  CHECK(relative_change(a, b) ==
        doctest::Approx(std::sqrt(8.0 / 5.0)).epsilon(1e-15));
  CHECK(relative_change(b, b) == 0.0);
}

TEST_CASE("denoising terminates and reports consistent iteration stats") {
  const GrayImage clean = synthetic_scene(48, 48);
  const GrayImage noisy = add_gaussian_noise(clean, {30.0, 5});
  DenoiseParams params = params_for_sigma(30.0);
  params.threads = 1;
  const DenoiseResult result = denoise(noisy, params);
  REQUIRE(!result.iterations.empty());
  CHECK(result.iterations.size() <=
        static_cast<std::size_t>(params.max_iters));
  // First pass runs at the damped level gamma * sigma.
  CHECK(result.iterations.front().sigma ==
        doctest::Approx(params.gamma * 30.0).epsilon(1e-12));
  const IterationStat& last = result.iterations.back();
  const bool stopped_by_tau = last.rel_change < params.tau;
  const bool hit_cap = result.iterations.size() ==
                       static_cast<std::size_t>(params.max_iters);
  CHECK((stopped_by_tau || hit_cap));
  for (double p : result.image.pixels) {
    CHECK(std::isfinite(p));
  }
}

TEST_CASE("denoising actually removes noise on a structured scene") {
  const GrayImage clean = synthetic_scene(64, 64);
  const GrayImage noisy = add_gaussian_noise(clean, {25.0, 9});
  DenoiseParams params = params_for_sigma(25.0);
  params.threads = 0; // all cores
  const DenoiseResult result = denoise(noisy, params);
  CHECK(psnr(clean, result.image) > psnr(clean, noisy) + 3.0);
}

TEST_CASE("gamma 0 with huge tau equals one aggregated pass") {
  const GrayImage clean = synthetic_scene(32, 32);
  const GrayImage noisy = add_gaussian_noise(clean, {20.0, 6});
  DenoiseParams params = params_for_sigma(20.0);
  params.gamma = 0.0;
  params.tau = 1e9;
  params.threads = 1;
  const DenoiseResult result = denoise(noisy, params);
  CHECK(result.iterations.size() == 1);
  // gamma 0 collapses the noise schedule to 0 for every pass.
  const GrayImage direct = denoise_pass(noisy, params, 0.0);
  CHECK(result.image.pixels == direct.pixels);
}

TEST_CASE("near-clean input passes through almost unchanged") {
  const GrayImage input = synthetic_scene(48, 48);
  DenoiseParams params = params_for_sigma(1.0);
  params.threads = 0;
  const DenoiseResult result = denoise(input, params);
  CHECK(psnr(input, result.image) >= 40.0);
}

TEST_CASE("thread count does not change the output") {
  const GrayImage clean = synthetic_scene(40, 40);
  const GrayImage noisy = add_gaussian_noise(clean, {30.0, 7});
  DenoiseParams params = params_for_sigma(30.0);
  params.threads = 1;
  const DenoiseResult st = denoise(noisy, params);
  params.threads = 4;
  const DenoiseResult mt = denoise(noisy, params);
  CHECK(st.image.pixels == mt.image.pixels);
  REQUIRE(st.iterations.size() == mt.iterations.size());
  for (std::size_t i = 0; i < st.iterations.size(); ++i) {
    CHECK(st.iterations[i].sigma == mt.iterations[i].sigma);
    CHECK(st.iterations[i].rel_change == mt.iterations[i].rel_change);
  }
}

TEST_CASE("denoise rejects images smaller than a patch") {
  DenoiseParams params = params_for_sigma(30.0);
  const GrayImage tiny(3, 3, 0.0);
  CHECK_THROWS_AS(denoise(tiny, params), DimensionError);
}

TEST_CASE("progress callback sees every iteration") {
  const GrayImage clean = synthetic_scene(32, 32);
  const GrayImage noisy = add_gaussian_noise(clean, {15.0, 8});
  DenoiseParams params = params_for_sigma(15.0);
  params.threads = 1;
  int calls = 0;
  const DenoiseResult result =
      denoise(noisy, params, [&](const IterationStat& s) {
        ++calls;
        CHECK(s.iteration == calls);
      });
  CHECK(calls == static_cast<int>(result.iterations.size()));
}
