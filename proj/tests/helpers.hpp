#pragma once

// Shared test utilities: brute-force DFT oracle, compensated summation,
// band averaging, temp dirs, and a tiny subprocess runner for CLI tests.

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "lpplspec/lpplspec.hpp"

namespace testutil {

// O(N^2) textbook DFT: the correctness oracle for the transform-backed
// spectra (only sensible for N <= 512).
inline std::vector<std::complex<double>> naive_dft(
    const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * M_PI * static_cast<double>(k) *
                         static_cast<double>(t) / static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

inline double kahan_sum(const std::vector<double>& v) {
  double s = 0.0, c = 0.0;
  for (double x : v) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

// Log-spaced band edges over bin indices [1, hi]; returns index pairs
// (inclusive) covering the range.
inline std::vector<std::pair<std::size_t, std::size_t>> log_bands(
    std::size_t hi, std::size_t count) {
  std::vector<std::pair<std::size_t, std::size_t>> bands;
  double lo = 1.0;
  const double r = std::pow(static_cast<double>(hi), 1.0 / count);
  std::size_t h = 1;
  for (std::size_t b = 0; b < count && h <= hi; ++b) {
    lo *= r;
    std::size_t k = std::min<std::size_t>(
        hi, static_cast<std::size_t>(std::ceil(lo)));
    if (k < h) k = h;
    bands.emplace_back(h, k);
    h = k + 1;
  }
  if (!bands.empty()) bands.back().second = hi;
  return bands;
}

// Mean of a spectrum's PSD over an inclusive bin range.
inline double band_mean_psd(const lpplspec::Spectrum& s, std::size_t h,
                            std::size_t k) {
  double acc = 0.0;
  for (std::size_t i = h; i <= k; ++i) acc += s.psd(i);
  return acc / static_cast<double>(k - h + 1);
}

// Fresh scratch directory under the system temp dir.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path();
    static std::mt19937_64 eng{std::random_device{}()};
    path_ = base / ("lpplspec-test-" + tag + "-" + std::to_string(eng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::string s((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
  return s;
}

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr interleaved
};

// Runs the CLI binary with the given argument string via the shell.
inline CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CLI_BIN_PATH) + " " + args + " 2>&1";
  CliResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return res;
  std::array<char, 4096> buf;
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe))
    res.output.append(buf.data(), got);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
  return res;
}

inline double mse(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

// Fig.-style bubble trajectory used across estimator/de-noising tests:
// A=10, B=0.008, T=26000, m=0.7, C=0.4, omega=2*pi, phi=pi, n=25000.
inline lpplspec::LpplParams bubble_params() {
  lpplspec::LpplParams p;
  p.A = 10.0;
  p.B = 0.008;
  p.C = 0.4;
  p.m = 0.7;
  p.omega = 2.0 * M_PI;
  p.phi = M_PI;
  p.T = 26000.0;
  p.n = 25000;
  return p;
}

// Pure log-periodic oscillation whose band bounds the tests probe:
// A=1, B=1, C=-1, m=0, omega=3*pi, n=25000, T = n/(1-e^{-11*pi/omega}),
// phi = -omega*ln(T-n).
inline lpplspec::LpplParams oscillation_params() {
  lpplspec::LpplParams p;
  p.A = 1.0;
  p.B = 1.0;
  p.C = -1.0;
  p.m = 0.0;
  p.omega = 3.0 * M_PI;
  p.n = 25000;
  p.T = static_cast<double>(p.n) / (1.0 - std::exp(-11.0 * M_PI / p.omega));
  p.phi = -p.omega * std::log(p.T - static_cast<double>(p.n));
  return p;
}

}  // namespace testutil
