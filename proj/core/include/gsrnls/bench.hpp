#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gsrnls/image.hpp"
#include "gsrnls/params.hpp"

namespace gsrnls {

struct BenchRow {
  std::string image;
  double sigma = 0.0;
  std::string method; ///< "gsr" or "gsc"
  double psnr_db = 0.0;
  double time_s = 0.0;
  int iterations = 0;
};

struct BenchOptions {
  std::vector<double> sigmas = {50.0};
  std::vector<std::string> methods = {"gsr"};
  std::uint64_t seed = 1;
  int stride = 4;
  int threads = 0;
  /// When true, the volatile time_s column is written as 0 so two runs of
  /// the same configuration produce byte-identical CSVs.
  bool zero_time = false;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<std::string> failures; ///< one message per failed case
  double mean_psnr_db = 0.0;
  double mean_time_s = 0.0;
};

/// Runs every (image, sigma, method) combination in deterministic order
/// (images outer, then sigmas, then methods). Noise for each case is
/// seeded from (seed, image name, sigma) via FNV-1a, so a case sees the
/// same noisy input no matter which other cases run. A failing case is
/// recorded in `failures` and the remaining cases still run.
BenchReport run_bench(
    const std::vector<std::pair<std::string, GrayImage>>& images,
    const BenchOptions& options);

/// Mixes a benchmark case into a noise seed (FNV-1a over the image name,
/// the sigma value's %.17g text, and the base seed).
std::uint64_t case_seed(std::uint64_t base, const std::string& image_name,
                        double sigma);

/// Writes rows as CSV with header
/// image,sigma,method,psnr_db,time_s,iterations. Numeric values use %.17g.
void write_bench_csv(const std::vector<BenchRow>& rows,
                     const std::string& path, bool zero_time);

/// Parses a CSV produced by write_bench_csv back into rows.
std::vector<BenchRow> read_bench_csv(const std::string& path);

} // namespace gsrnls
