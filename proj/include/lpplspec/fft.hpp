#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "lpplspec/errors.hpp"

namespace lpplspec {
namespace detail {

// FFTW's planner is not thread-safe; plan creation/destruction is serialized.
// Plan execution is safe concurrently.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace detail

// Forward real DFT: X_k = sum_t x[t] e^{-2*pi*i*k*t/N}, k = 0..N/2.
// Unnormalized, matching the textbook sum; callers apply their own scaling.
inline std::vector<std::complex<double>> real_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 2) throw DataError("real_dft: need at least 2 samples");
  std::vector<double> in(x);
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

// Inverse of real_dft including the 1/N normalization, so
// real_idft(real_dft(x), x.size()) == x up to rounding.
inline std::vector<double> real_idft(const std::vector<std::complex<double>>& half,
                                     std::size_t n) {
  if (n < 2) throw DataError("real_idft: need at least 2 samples");
  if (half.size() != n / 2 + 1)
    throw DataError("real_idft: spectrum length does not match n");
  std::vector<std::complex<double>> in(half);  // c2r destroys its input
  std::vector<double> out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                reinterpret_cast<fftw_complex*>(in.data()),
                                out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= inv;
  return out;
}

}  // namespace lpplspec
