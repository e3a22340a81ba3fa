// gsrnls — grayscale image denoiser built on non-local group sparsity.
//
// Subcommands: denoise, add-noise, psnr, residual-hist, bench.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsrnls/analysis.hpp"
#include "gsrnls/bench.hpp"
#include "gsrnls/config.hpp"
#include "gsrnls/denoise.hpp"
#include "gsrnls/errors.hpp"
#include "gsrnls/image.hpp"
#include "gsrnls/image_io.hpp"
#include "gsrnls/params.hpp"

namespace fs = std::filesystem;
using namespace gsrnls;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Applies a key=value config map onto params. Unknown keys are hard errors:
// a typo in a tuning file must never be silently ignored.
void apply_config(DenoiseParams& params,
                  const std::map<std::string, std::string>& cfg) {
  for (const auto& [key, value] : cfg) {
    const auto as_double = [&]() {
      char* end = nullptr;
      const double v = std::strtod(value.c_str(), &end);
      if (end == value.c_str() || *end != '\0') {
        throw ParamError("config: key '" + key + "' has non-numeric value '" +
                         value + "'");
      }
      return v;
    };
    const auto as_int = [&]() {
      const double v = as_double();
      const int i = static_cast<int>(v);
      if (static_cast<double>(i) != v) {
        throw ParamError("config: key '" + key + "' must be an integer");
      }
      return i;
    };
    if (key == "sigma") params.sigma = as_double();
    else if (key == "patch_side") params.patch_side = as_int();
    else if (key == "group_size") params.group_size = as_int();
    else if (key == "window") params.window = as_int();
    else if (key == "stride") params.stride = as_int();
    else if (key == "c") params.c = as_double();
    else if (key == "eps") params.eps = as_double();
    else if (key == "eta") params.eta = as_double();
    else if (key == "gamma") params.gamma = as_double();
    else if (key == "h") params.h = as_double();
    else if (key == "tau") params.tau = as_double();
    else if (key == "max_iters") params.max_iters = as_int();
    else if (key == "threads") params.threads = as_int();
    else if (key == "mode") {
      if (value == "gsr") params.use_reference = true;
      else if (value == "gsc") params.use_reference = false;
      else throw ParamError("config: mode must be 'gsr' or 'gsc'");
    } else {
      throw ParamError("config: unknown key '" + key + "'");
    }
  }
}

void write_report_csv(const std::vector<IterationStat>& stats,
                      const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << "iteration,sigma,rel_change\n";
  for (const IterationStat& s : stats) {
    out << s.iteration << ',' << fmt17(s.sigma) << ',' << fmt17(s.rel_change)
        << '\n';
  }
  if (!out.flush()) {
    throw IoError("write failed for " + path);
  }
}

struct DenoiseArgs {
  std::string input, output, mode = "gsr", config, report, clean;
  double sigma = 0.0;
  int stride = -1, threads = -1, max_iters = -1;
};

int run_denoise(const DenoiseArgs& a) {
  DenoiseParams params = params_for_sigma(a.sigma);
  if (!a.config.empty()) {
    apply_config(params, parse_config(a.config));
  }
  // Explicit flags take precedence over the config file.
  if (a.stride > 0) params.stride = a.stride;
  if (a.threads >= 0) params.threads = a.threads;
  if (a.max_iters > 0) params.max_iters = a.max_iters;
  if (a.mode == "gsr") params.use_reference = true;
  else if (a.mode == "gsc") params.use_reference = false;
  else throw ParamError("--mode must be 'gsr' or 'gsc'");

  const GrayImage noisy = read_image(a.input);
  const auto t0 = std::chrono::steady_clock::now();
  const DenoiseResult result = denoise(noisy, params);
  const auto t1 = std::chrono::steady_clock::now();
  write_image(result.image, a.output);
  if (!a.report.empty()) {
    write_report_csv(result.iterations, a.report);
  }

  const double wall = std::chrono::duration<double>(t1 - t0).count();
  std::cout << "iterations " << result.iterations.size() << "  rel_change "
            << fmt17(result.iterations.back().rel_change) << "  time_s "
            << fmt17(wall);
  if (!a.clean.empty()) {
    std::cout << "  psnr_db " << fmt17(psnr(read_image(a.clean),
                                            result.image));
  }
  std::cout << "\n";
  return 0;
}

struct AddNoiseArgs {
  std::string input, output;
  double sigma = 0.0;
  std::uint64_t seed = 1;
};

int run_add_noise(const AddNoiseArgs& a) {
  const GrayImage img = read_image(a.input);
  const GrayImage noisy = add_gaussian_noise(img, {a.sigma, a.seed});
  // Empirical std of the generated noise before file quantization.
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const double d = noisy.pixels[i] - img.pixels[i];
    sum += d;
    sum_sq += d * d;
  }
  const double n = static_cast<double>(img.pixels.size());
  const double mean = n > 0 ? sum / n : 0.0;
  const double std_dev = n > 0 ? std::sqrt(std::max(sum_sq / n - mean * mean, 0.0)) : 0.0;
  write_image(noisy, a.output);
  std::cout << "wrote " << a.output << "\n";
  std::cout << "noise_std " << fmt17(std_dev) << "\n";
  return 0;
}

int run_psnr(const std::string& a, const std::string& b) {
  const double v = psnr(read_image(a), read_image(b));
  if (std::isinf(v)) {
    std::cout << "inf\n";
  } else {
    std::cout << fmt17(v) << "\n";
  }
  return 0;
}

struct HistArgs {
  std::string clean, output;
  double sigma = 30.0;
  std::uint64_t seed = 1;
  int bins = 100;
  bool log_domain = false;
};

int run_residual_hist(const HistArgs& a) {
  if (a.bins < 2) {
    throw ParamError("--bins must be at least 2");
  }
  const GrayImage clean = read_image(a.clean);
  const GrayImage noisy = add_gaussian_noise(clean, {a.sigma, a.seed});
  const DenoiseParams params = params_for_sigma(a.sigma);
  const std::vector<double> samples =
      coefficient_residuals(clean, noisy, params);
  const std::vector<DistributionFit> fits = fit_distributions(samples);
  const ResidualHistogram hist = residual_histogram(samples, a.bins);
  write_histogram_csv(hist, a.output, a.log_domain);

  const DistributionFit* best = &fits[0];
  for (const DistributionFit& f : fits) {
    std::cout << f.name << " log_likelihood " << fmt17(f.log_likelihood)
              << "  scale " << fmt17(f.scale) << "  shape " << fmt17(f.shape)
              << "\n";
    if (f.log_likelihood > best->log_likelihood) {
      best = &f;
    }
  }
  std::cout << "winner " << best->name << "\n";
  return 0;
}

struct BenchArgs {
  std::string images_dir, output;
  std::vector<double> sigmas = {50.0};
  std::vector<std::string> methods = {"gsr"};
  std::uint64_t seed = 1;
  int stride = 4, threads = 0;
  bool zero_time = false;
};

int run_bench_cmd(const BenchArgs& a) {
  std::vector<std::pair<std::string, GrayImage>> images;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.images_dir)) {
    if (!entry.is_regular_file()) {
      continue;
    }
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm" || ext == ".png") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    images.emplace_back(f.stem().string(), read_image(f.string()));
  }
  if (images.empty()) {
    throw ParamError("no .pgm/.png images found in " + a.images_dir);
  }

  BenchOptions opt;
  opt.sigmas = a.sigmas;
  opt.methods = a.methods;
  opt.seed = a.seed;
  opt.stride = a.stride;
  opt.threads = a.threads;
  opt.zero_time = a.zero_time;

  const BenchReport report = run_bench(images, opt);
  write_bench_csv(report.rows, a.output, opt.zero_time);

  std::cout << "rows " << report.rows.size() << "  mean_psnr_db "
            << fmt17(report.mean_psnr_db) << "  mean_time_s "
            << fmt17(report.mean_time_s) << "\n";
  for (const std::string& f : report.failures) {
    std::cerr << "failed: " << f << "\n";
  }
  return report.failures.empty() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-local group-sparsity image denoiser"};
  app.require_subcommand(1);

  DenoiseArgs da;
  CLI::App* denoise_cmd =
      app.add_subcommand("denoise", "Denoise a grayscale image");
  denoise_cmd->add_option("--input", da.input, "Noisy input image (PGM/PNG)")
      ->required();
  denoise_cmd->add_option("--output", da.output, "Denoised output image")
      ->required();
  denoise_cmd->add_option("--sigma", da.sigma, "Noise standard deviation")
      ->required();
  denoise_cmd->add_option("--mode", da.mode,
                          "gsr (non-local reference) or gsc (zero reference)");
  denoise_cmd->add_option("--config", da.config, "key=value parameter file");
  denoise_cmd->add_option("--stride", da.stride, "Anchor grid step");
  denoise_cmd->add_option("--threads", da.threads,
                          "Worker threads (0 = all cores)");
  denoise_cmd->add_option("--max-iters", da.max_iters, "Iteration cap");
  denoise_cmd->add_option("--report", da.report, "Per-iteration CSV path");
  denoise_cmd->add_option("--clean", da.clean,
                          "Clean image for PSNR reporting");

  AddNoiseArgs na;
  CLI::App* noise_cmd =
      app.add_subcommand("add-noise", "Add seeded Gaussian noise");
  noise_cmd->add_option("--input", na.input, "Input image")->required();
  noise_cmd->add_option("--output", na.output, "Output image")->required();
  noise_cmd->add_option("--sigma", na.sigma, "Noise standard deviation")
      ->required();
  noise_cmd->add_option("--seed", na.seed, "RNG seed");

  std::string psnr_a, psnr_b;
  CLI::App* psnr_cmd =
      app.add_subcommand("psnr", "Peak signal-to-noise ratio of two images");
  psnr_cmd->add_option("a", psnr_a, "Reference image")->required();
  psnr_cmd->add_option("b", psnr_b, "Test image")->required();

  HistArgs ha;
  CLI::App* hist_cmd = app.add_subcommand(
      "residual-hist", "Group-coefficient residual distribution study");
  hist_cmd->add_option("--clean", ha.clean, "Clean image")->required();
  hist_cmd->add_option("--output", ha.output, "Histogram CSV path")
      ->required();
  hist_cmd->add_option("--sigma", ha.sigma, "Noise standard deviation");
  hist_cmd->add_option("--seed", ha.seed, "RNG seed");
  hist_cmd->add_option("--bins", ha.bins, "Histogram bin count");
  hist_cmd->add_flag("--log", ha.log_domain,
                     "Write log10 densities instead of linear");

  BenchArgs ba;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "PSNR/timing benchmark over an image dir");
  bench_cmd->add_option("--images", ba.images_dir, "Directory of clean images")
      ->required();
  bench_cmd->add_option("--output", ba.output, "Benchmark CSV path")
      ->required();
  bench_cmd->add_option("--sigmas", ba.sigmas, "Noise levels")
      ->delimiter(',');
  bench_cmd->add_option("--methods", ba.methods, "gsr and/or gsc")
      ->delimiter(',');
  bench_cmd->add_option("--seed", ba.seed, "Base RNG seed");
  bench_cmd->add_option("--stride", ba.stride, "Anchor grid step");
  bench_cmd->add_option("--threads", ba.threads,
                        "Worker threads (0 = all cores)");
  bench_cmd->add_flag("--zero-time", ba.zero_time,
                      "Write 0 in the time_s column (reproducible CSVs)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (denoise_cmd->parsed()) return run_denoise(da);
    if (noise_cmd->parsed()) return run_add_noise(na);
    if (psnr_cmd->parsed()) return run_psnr(psnr_a, psnr_b);
    if (hist_cmd->parsed()) return run_residual_hist(ha);
    if (bench_cmd->parsed()) return run_bench_cmd(ba);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
