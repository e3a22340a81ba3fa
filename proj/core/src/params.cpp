#include "gsrnls/params.hpp"

#include <string>

#include "gsrnls/errors.hpp"

namespace gsrnls {

DenoiseParams params_for_sigma(double sigma) {
  if (!(sigma > 0.0) || sigma > 100.0) {
    throw ParamError("sigma must lie in (0, 100]");
  }
  DenoiseParams p;
  p.sigma = sigma;
  p.window = 25;
  p.eps = 0.2;
  p.stride = 4;
  p.max_iters = 12;

  if (sigma <= 20.0) {
    p.patch_side = 6;
  } else if (sigma <= 50.0) {
    p.patch_side = 7;
  } else if (sigma <= 75.0) {
    p.patch_side = 8;
  } else {
    p.patch_side = 9;
  }

  struct Band {
    double c, eta, gamma;
    int m;
    double h, tau;
  };
  Band band;
  if (sigma <= 10.0) {
    band = {0.8, 0.2, 0.5, 60, 45.0, 0.0003};
  } else if (sigma <= 20.0) {
    band = {0.7, 0.2, 0.6, 60, 45.0, 0.0008};
  } else if (sigma <= 30.0) {
    band = {0.6, 0.1, 0.6, 60, 60.0, 0.002};
  } else if (sigma <= 40.0) {
    band = {0.7, 0.1, 0.5, 70, 80.0, 0.002};
  } else if (sigma <= 50.0) {
    band = {0.7, 0.1, 0.5, 80, 115.0, 0.001};
  } else if (sigma <= 75.0) {
    band = {0.7, 0.1, 0.5, 90, 160.0, 0.0005};
  } else {
    band = {1.0, 0.1, 0.5, 100, 160.0, 0.0005};
  }
  p.c = band.c;
  p.eta = band.eta;
  p.gamma = band.gamma;
  p.group_size = band.m;
  p.h = band.h;
  p.tau = band.tau;
  return p;
}

void validate(const DenoiseParams& p) {
  const auto fail = [](const std::string& field) {
    throw ParamError("invalid parameter: " + field);
  };
  if (!(p.sigma > 0.0)) fail("sigma");
  if (p.patch_side < 1) fail("patch_side");
  if (p.group_size < 1) fail("group_size");
  if (p.window < p.patch_side) fail("window");
  if (p.stride < 1) fail("stride");
  if (!(p.c > 0.0)) fail("c");
  if (!(p.eps > 0.0)) fail("eps");
  if (!(p.eta > 0.0) || p.eta > 1.0) fail("eta");
  if (p.gamma < 0.0 || p.gamma > 1.0) fail("gamma");
  if (!(p.h > 0.0)) fail("h");
  if (!(p.tau > 0.0)) fail("tau");
  if (p.max_iters < 1) fail("max_iters");
  if (p.threads < 0) fail("threads");
}

} // namespace gsrnls
