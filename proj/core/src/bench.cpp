#include "gsrnls/bench.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gsrnls/denoise.hpp"
#include "gsrnls/errors.hpp"

namespace gsrnls {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace

std::uint64_t case_seed(std::uint64_t base, const std::string& image_name,
                        double sigma) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(h, &base, sizeof(base));
  h = fnv1a(h, image_name.data(), image_name.size());
  const std::string s = fmt17(sigma);
  h = fnv1a(h, s.data(), s.size());
  return h;
}

BenchReport run_bench(
    const std::vector<std::pair<std::string, GrayImage>>& images,
    const BenchOptions& options) {
  BenchReport report;
  for (const auto& [name, clean] : images) {
    for (double sigma : options.sigmas) {
      const GrayImage noisy =
          add_gaussian_noise(clean, {sigma, case_seed(options.seed, name,
                                                      sigma)});
      for (const std::string& method : options.methods) {
        if (method != "gsr" && method != "gsc") {
          report.failures.push_back(name + ": unknown method '" + method +
                                    "'");
          continue;
        }
        try {
          DenoiseParams params = params_for_sigma(sigma);
          params.stride = options.stride;
          params.threads = options.threads;
          params.use_reference = method == "gsr";

          const auto t0 = std::chrono::steady_clock::now();
          const DenoiseResult result = denoise(noisy, params);
          const auto t1 = std::chrono::steady_clock::now();

          BenchRow row;
          row.image = name;
          row.sigma = sigma;
          row.method = method;
          row.psnr_db = psnr(clean, result.image);
          row.time_s = std::chrono::duration<double>(t1 - t0).count();
          row.iterations = static_cast<int>(result.iterations.size());
          report.rows.push_back(row);
        } catch (const Error& e) {
          report.failures.push_back(name + " sigma=" + fmt17(sigma) + " " +
                                    method + ": " + e.what());
        }
      }
    }
  }
  if (!report.rows.empty()) {
    double psnr_acc = 0.0;
    double time_acc = 0.0;
    for (const BenchRow& row : report.rows) {
      psnr_acc += row.psnr_db;
      time_acc += row.time_s;
    }
    report.mean_psnr_db = psnr_acc / static_cast<double>(report.rows.size());
    report.mean_time_s = time_acc / static_cast<double>(report.rows.size());
  }
  return report;
}

void write_bench_csv(const std::vector<BenchRow>& rows,
                     const std::string& path, bool zero_time) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << "image,sigma,method,psnr_db,time_s,iterations\n";
  for (const BenchRow& row : rows) {
    out << row.image << ',' << fmt17(row.sigma) << ',' << row.method << ','
        << fmt17(row.psnr_db) << ','
        << fmt17(zero_time ? 0.0 : row.time_s) << ',' << row.iterations
        << '\n';
  }
  out.flush();
  if (!out) {
    throw IoError("write failed for " + path);
  }
}

std::vector<BenchRow> read_bench_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line) ||
      line != "image,sigma,method,psnr_db,time_s,iterations") {
    throw FormatError("bad benchmark CSV header in " + path);
  }
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::istringstream ss(line);
    std::string field;
    BenchRow row;
    if (!std::getline(ss, row.image, ',')) {
      throw FormatError("bad benchmark CSV row in " + path);
    }
    const auto num = [&](double& dst) {
      if (!std::getline(ss, field, ',')) {
        throw FormatError("bad benchmark CSV row in " + path);
      }
      dst = std::strtod(field.c_str(), nullptr);
    };
    num(row.sigma);
    if (!std::getline(ss, row.method, ',')) {
      throw FormatError("bad benchmark CSV row in " + path);
    }
    num(row.psnr_db);
    num(row.time_s);
    if (!std::getline(ss, field)) {
      throw FormatError("bad benchmark CSV row in " + path);
    }
    row.iterations = std::atoi(field.c_str());
    rows.push_back(row);
  }
  return rows;
}

} // namespace gsrnls
