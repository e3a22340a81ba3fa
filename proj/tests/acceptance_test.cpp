// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.
//
// Usage: acceptance_test <gsrnls-binary> <data-dir>
//
// All end-to-end runs use the documented noise seed 1. The absolute PSNR
// gates (criteria 1-2) require data/house.pgm; when it is absent they fail
// with a diagnostic and the relative checks (3-4) run on the bundled
// camera256.pgm instead, with the substitution printed.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gsrnls/bench.hpp"
#include "gsrnls/denoise.hpp"
#include "gsrnls/errors.hpp"
#include "gsrnls/gsr.hpp"
#include "gsrnls/image.hpp"
#include "gsrnls/image_io.hpp"
#include "gsrnls/params.hpp"
#include "gsrnls/patch.hpp"
#include "gsrnls/pca.hpp"

using namespace gsrnls;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kNoiseSeed = 1;

std::string g_binary;
fs::path g_data_dir;
int g_failures = 0;

void report(int idx, bool ok, const std::string& detail) {
  std::printf("%s  %2d  %s\n", ok ? "PASS" : "FAIL", idx, detail.c_str());
  std::fflush(stdout);
  if (!ok) {
    ++g_failures;
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = g_binary + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  RunResult r;
  if (!pipe) {
    return r;
  }
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) {
    r.out.append(buf, n);
  }
  const int status = pclose(pipe);
  if (WIFEXITED(status)) {
    r.code = WEXITSTATUS(status);
  }
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("gsrnls_acceptance_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

GrayImage random_int_image(int w, int h, std::uint64_t seed, int max_val) {
  GrayImage img(w, h);
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> dist(0, max_val);
  for (double& p : img.pixels) {
    p = static_cast<double>(dist(gen));
  }
  return img;
}

/// Loads the benchmark image: house.pgm/house.png from the data dir if
/// present, otherwise the bundled camera256.pgm as a clearly-marked
/// substitute.
struct BenchImage {
  GrayImage image;
  std::string name;
  bool is_house = false;
};

BenchImage load_bench_image() {
  for (const char* name : {"house.pgm", "house.png"}) {
    const fs::path p = g_data_dir / name;
    if (fs::exists(p)) {
      return {read_image(p.string()), "house", true};
    }
  }
  const fs::path fallback = g_data_dir / "camera256.pgm";
  return {read_image(fallback.string()), "camera256 (SUBSTITUTE)", false};
}

// Round and clamp to the 8-bit grid, as writing the noisy image to PGM
// does; end-to-end runs always go through that serialization.
GrayImage quantized(GrayImage img) {
  for (double& v : img.pixels) {
    v = std::round(std::min(std::max(v, 0.0), 255.0));
  }
  return img;
}

double denoise_psnr(const GrayImage& clean, const GrayImage& noisy,
                    double sigma, bool use_reference, int threads,
                    double* wall_s = nullptr, int* iters = nullptr) {
  DenoiseParams params = params_for_sigma(sigma);
  params.use_reference = use_reference;
  params.threads = threads;
  const auto t0 = std::chrono::steady_clock::now();
  const DenoiseResult result = denoise(noisy, params);
  const auto t1 = std::chrono::steady_clock::now();
  if (wall_s) {
    *wall_s = std::chrono::duration<double>(t1 - t0).count();
  }
  if (iters) {
    *iters = static_cast<int>(result.iterations.size());
  }
  return psnr(clean, result.image);
}

// --- criteria 1-3: end-to-end PSNR gates ---------------------------------

void criteria_psnr() {
  const BenchImage bench = load_bench_image();
  const GrayImage& clean = bench.image;

  const GrayImage noisy50 =
      quantized(add_gaussian_noise(clean, {50.0, kNoiseSeed}));
  const double psnr50 = denoise_psnr(clean, noisy50, 50.0, true, 0);
  if (bench.is_house) {
    report(1, psnr50 >= 29.85,
           "house sigma 50 PSNR " + fmt(psnr50) + " dB (gate 29.85)");
  } else {
    report(1, false,
           "house.pgm missing from " + g_data_dir.string() +
               "; absolute gate not evaluated (" + bench.name +
               " sigma 50 reaches " + fmt(psnr50) +
               " dB; supply data/house.pgm to run the real check)");
  }

  const GrayImage noisy75 =
      quantized(add_gaussian_noise(clean, {75.0, kNoiseSeed}));
  const double psnr75 = denoise_psnr(clean, noisy75, 75.0, true, 0);
  if (bench.is_house) {
    report(2, psnr75 >= 27.9,
           "house sigma 75 PSNR " + fmt(psnr75) + " dB (gate 27.9)");
  } else {
    report(2, false,
           "house.pgm missing; absolute gate not evaluated (" + bench.name +
               " sigma 75 reaches " + fmt(psnr75) + " dB)");
  }

  const double psnr50_gsc = denoise_psnr(clean, noisy50, 50.0, false, 0);
  const double margin = psnr50 - psnr50_gsc;
  report(3, margin >= 0.3,
         bench.name + " sigma 50: non-local reference beats zero reference"
         " by " + fmt(margin) + " dB (gsr " + fmt(psnr50) + ", gsc " +
         fmt(psnr50_gsc) + ", gate 0.3)");
}

// --- criterion 4: residual distribution ----------------------------------

void criterion_distribution() {
  const BenchImage bench = load_bench_image();
  TempDir tmp;
  const std::string clean_path = tmp.file("clean.pgm");
  write_image(bench.image, clean_path);
  const std::string csv = tmp.file("hist.csv");

  const RunResult r = run_cli("residual-hist --clean " + clean_path +
                              " --output " + csv + " --sigma 30 --seed " +
                              std::to_string(kNoiseSeed) + " --bins 100");
  if (r.code != 0) {
    report(4, false, "residual-hist exited " + std::to_string(r.code));
    return;
  }
  const auto value_after = [&](const std::string& key) {
    const std::size_t pos = r.out.find(key);
    return pos == std::string::npos
               ? std::nan("")
               : std::strtod(r.out.c_str() + pos + key.size(), nullptr);
  };
  const double ll_gauss = value_after("gaussian log_likelihood ");
  const double ll_lap = value_after("laplacian log_likelihood ");

  // Squared log10-density error of each fitted column against the
  // empirical column, over bins where all three are positive.
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line); // header
  double err_gauss = 0.0, err_lap = 0.0;
  int used = 0;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string cell;
    double v[5] = {0, 0, 0, 0, 0};
    for (double& x : v) {
      if (!std::getline(ss, cell, ',')) {
        break;
      }
      x = std::strtod(cell.c_str(), nullptr);
    }
    if (v[1] > 0.0 && v[2] > 0.0 && v[3] > 0.0) {
      const double le = std::log10(v[1]);
      err_gauss += (std::log10(v[2]) - le) * (std::log10(v[2]) - le);
      err_lap += (std::log10(v[3]) - le) * (std::log10(v[3]) - le);
      ++used;
    }
  }
  const bool ok = std::isfinite(ll_gauss) && std::isfinite(ll_lap) &&
                  ll_lap > ll_gauss && used > 10 && err_lap < err_gauss;
  report(4, ok,
         bench.name + " sigma 30 residuals: laplacian ll " + fmt(ll_lap) +
             " vs gaussian " + fmt(ll_gauss) + "; csv log-error " +
             fmt(err_lap) + " vs " + fmt(err_gauss) + " over " +
             std::to_string(used) + " bins" +
             (bench.is_house ? "" : " [house.pgm missing, ran on substitute]"));
}

// --- criterion 5: shrinkage against a grid oracle ------------------------

void criterion_shrink() {
  std::mt19937_64 gen(1005);
  std::uniform_real_distribution<double> u_val(-10.0, 10.0);
  std::uniform_real_distribution<double> u_lam(1e-3, 10.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double g = u_val(gen);
    const double beta = u_val(gen);
    const double lambda = u_lam(gen);

    Eigen::MatrixXd gm(1, 1), bm(1, 1);
    gm(0, 0) = g;
    bm(0, 0) = beta;
    const double alpha = shrink(gm, bm, lambda)(0, 0);

    const double lo = std::min(g, beta) - lambda - 1.0;
    const double hi = std::max(g, beta) + lambda + 1.0;
    const auto objective = [&](double a) {
      return (g - a) * (g - a) + lambda * std::abs(a - beta);
    };
    double best_a = lo;
    double best_v = objective(lo);
    const long steps = static_cast<long>((hi - lo) / 1e-4);
    for (long i = 1; i <= steps; ++i) {
      const double a = lo + 1e-4 * static_cast<double>(i);
      const double v = objective(a);
      if (v < best_v) {
        best_v = v;
        best_a = a;
      }
    }
    worst = std::max(worst, std::abs(alpha - best_a));
  }
  report(5, worst <= 1e-4,
         "shrink matches the grid oracle on 1000 triples (worst gap " +
             fmt(worst) + ", tolerance 1e-4)");
}

// --- criterion 6: transform properties -----------------------------------

void criterion_transform() {
  std::mt19937_64 gen(1006);
  std::uniform_int_distribution<int> side_dist(4, 9);
  std::uniform_real_distribution<double> pix(0.0, 255.0);
  double worst_ortho = 0.0, worst_recon = 0.0, worst_norm = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int side = side_dist(gen);
    const int b = side * side;
    std::uniform_int_distribution<int> m_dist(std::max(2, b / 2), b + 60);
    const int m = m_dist(gen);
    Eigen::MatrixXd z(b, m);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < b; ++i) {
        z(i, j) = pix(gen);
      }
    }
    const PcaBasis basis = pca_basis(z);
    const Eigen::MatrixXd& d = basis.dictionary;
    const double ortho =
        (d.transpose() * d - Eigen::MatrixXd::Identity(b, b))
            .cwiseAbs()
            .maxCoeff();
    const Eigen::MatrixXd a = pca_encode(basis, z);
    const double recon = (pca_decode(basis, a) - z).cwiseAbs().maxCoeff() /
                         std::max(1.0, z.cwiseAbs().maxCoeff());
    const double norm_gap = std::abs(a.norm() - z.norm()) /
                            std::max(1.0, z.norm());
    worst_ortho = std::max(worst_ortho, ortho);
    worst_recon = std::max(worst_recon, recon);
    worst_norm = std::max(worst_norm, norm_gap);
  }
  const bool ok =
      worst_ortho < 1e-10 && worst_recon < 1e-8 && worst_norm < 1e-8;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "1000 random groups: orthonormality %.2e, reconstruction "
                "%.2e, norm preservation %.2e",
                worst_ortho, worst_recon, worst_norm);
  report(6, ok, detail);
}

// --- criterion 7: aggregate is the inverse of extract ---------------------

void criterion_aggregate() {
  std::mt19937_64 gen(1007);
  std::uniform_int_distribution<int> dim(12, 30);
  std::uniform_int_distribution<int> side_dist(2, 6);
  int checked = 0;
  bool ok = true;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    const int w = dim(gen);
    const int h = dim(gen);
    const int side = std::min({side_dist(gen), w, h});
    const GrayImage img = random_int_image(w, h, 2000 + trial, 255);
    for (int stride = 1; stride <= side && ok; ++stride) {
      GrayImage sum(w, h, 0.0);
      GrayImage count(w, h, 0.0);
      for (const PatchPos& pos : anchor_grid(h, w, side, stride)) {
        PatchGroup group;
        group.side = side;
        group.members = {pos};
        group.distances = {0.0};
        group.data = extract_patch(img, pos, side);
        aggregate_group(group, group.data, sum, count);
      }
      const GrayImage back = normalize_aggregate(sum, count);
      ok = back.pixels == img.pixels;
      ++checked;
    }
  }
  report(7, ok,
         "aggregate(extract(img)) bit-exact over " + std::to_string(checked) +
             " image/stride combinations");
}

// --- criterion 8: block matching against brute force ----------------------

void criterion_block_match() {
  std::mt19937_64 gen(1008);
  const int side = 4, m = 4, window = 9, size = 16;
  bool ok = true;
  int anchors_checked = 0;
  for (int trial = 0; trial < 50 && ok; ++trial) {
    // Tiny value alphabet so distance ties are common and the tie-break
    // order is genuinely exercised.
    const GrayImage img = random_int_image(size, size, 3000 + trial, 2);
    std::uniform_int_distribution<int> pos_dist(0, size - side);
    for (int a = 0; a < 6 && ok; ++a) {
      const PatchPos anchor{pos_dist(gen), pos_dist(gen)};
      const PatchGroup got = block_match(img, anchor, side, m, window);

      const Eigen::VectorXd ref = extract_patch(img, anchor, side);
      const int lo_r = std::max(0, anchor.row - (window - 1) / 2);
      const int hi_r = std::min(size - side, anchor.row + window / 2);
      const int lo_c = std::max(0, anchor.col - (window - 1) / 2);
      const int hi_c = std::min(size - side, anchor.col + window / 2);
      std::vector<std::pair<double, PatchPos>> cand;
      for (int r = lo_r; r <= hi_r; ++r) {
        for (int c = lo_c; c <= hi_c; ++c) {
          if (r == anchor.row && c == anchor.col) {
            continue;
          }
          const double d =
              (extract_patch(img, {r, c}, side) - ref).squaredNorm();
          cand.emplace_back(d, PatchPos{r, c});
        }
      }
      std::stable_sort(cand.begin(), cand.end(),
                       [](const auto& x, const auto& y) {
                         return x.first < y.first;
                       });
      std::vector<PatchPos> expected = {anchor};
      for (int j = 0; j + 1 < m; ++j) {
        expected.push_back(cand[static_cast<std::size_t>(j)].second);
      }
      ok = got.members == expected;
      ++anchors_checked;
    }
  }
  report(8, ok,
         "block_match equals the exhaustive oracle on " +
             std::to_string(anchors_checked) + " anchors (ties included)");
}

// --- criterion 9: determinism ---------------------------------------------

void criterion_determinism() {
  TempDir tmp;
  const fs::path dir = tmp.path / "imgs";
  fs::create_directories(dir);
  write_image(random_int_image(48, 48, 4001, 255),
              (dir / "alpha.pgm").string());
  write_image(random_int_image(48, 48, 4002, 255),
              (dir / "beta.pgm").string());
  const std::string csv_a = tmp.file("a.csv");
  const std::string csv_b = tmp.file("b.csv");
  const std::string common = "bench --images " + dir.string() +
                             " --sigmas 15,25 --stride 6 --seed 11 "
                             "--zero-time --output ";
  const RunResult ra = run_cli(common + csv_a);
  const RunResult rb = run_cli(common + csv_b);
  const bool csv_ok =
      ra.code == 0 && rb.code == 0 && slurp(csv_a) == slurp(csv_b);

  const GrayImage clean = random_int_image(64, 64, 4003, 255);
  const GrayImage noisy = add_gaussian_noise(clean, {25.0, kNoiseSeed});
  DenoiseParams params = params_for_sigma(25.0);
  params.threads = 1;
  const DenoiseResult st = denoise(noisy, params);
  params.threads = 4;
  const DenoiseResult mt = denoise(noisy, params);
  const bool thread_ok = st.image.pixels == mt.image.pixels;

  report(9, csv_ok && thread_ok,
         std::string("bench reruns byte-identical: ") +
             (csv_ok ? "yes" : "NO") +
             "; single- vs multi-thread denoise value-identical: " +
             (thread_ok ? "yes" : "NO"));
}

// --- criterion 10: timing sanity ------------------------------------------

void criterion_timing() {
  const BenchImage bench = load_bench_image();
  const GrayImage noisy =
      quantized(add_gaussian_noise(bench.image, {50.0, kNoiseSeed}));
  double wall = 0.0;
  int iters = 0;
  denoise_psnr(bench.image, noisy, 50.0, true, 1, &wall, &iters);
  report(10, wall < 120.0,
         "256x256 sigma 50 single-threaded stride 4: " + fmt(wall) +
             " s over " + std::to_string(iters) + " iterations (gate 120 s)");
}

} // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance_test <gsrnls-binary> <data-dir>\n");
    return 2;
  }
  g_binary = argv[1];
  g_data_dir = argv[2];

  std::printf("acceptance suite (noise seed %llu)\n",
              static_cast<unsigned long long>(kNoiseSeed));
  try {
    criteria_psnr();
    criterion_distribution();
    criterion_shrink();
    criterion_transform();
    criterion_aggregate();
    criterion_block_match();
    criterion_determinism();
    criterion_timing();
  } catch (const std::exception& e) {
    std::printf("FAIL  --  suite aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
