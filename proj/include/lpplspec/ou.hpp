#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "lpplspec/errors.hpp"
#include "lpplspec/rng.hpp"
#include "lpplspec/timeseries.hpp"

namespace lpplspec {

// Ornstein-Uhlenbeck noise parameters.  tau = +infinity marks the Wiener
// limit (no mean reversion); sigma is the diffusion constant per sqrt(step).
struct OuParams {
  double tau = 1.0;
  double sigma = 0.0;

  bool wiener_limit() const { return std::isinf(tau); }

  void validate() const {
    if (!(tau > 0.0)) throw DataError("OuParams: need tau > 0 (or infinite)");
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
      throw DataError("OuParams: need sigma >= 0");
  }
};

namespace detail {

// One simulation pass given a fixed nu(0).
inline LogSeries ou_run(const OuParams& p, std::size_t n, double nu0,
                        GaussianRng& rng) {
  LogSeries out;
  out.values.resize(n);
  out.values[0] = nu0;
  if (n == 1) return out;
  if (p.wiener_limit()) {
    // Wiener limit: independent Normal(0, sigma^2) increments.
    for (std::size_t t = 1; t < n; ++t)
      out.values[t] = out.values[t - 1] + p.sigma * rng.gaussian();
    return out;
  }
  const double a = std::exp(-1.0 / p.tau);
  const double incr_sd =
      std::sqrt(p.sigma * p.sigma * p.tau / 2.0 * (1.0 - a * a));
  for (std::size_t t = 1; t < n; ++t)
    out.values[t] = out.values[t - 1] * a + incr_sd * rng.gaussian();
  return out;
}

}  // namespace detail

// nu(t+1) = nu(t) e^{-1/tau} + sqrt((sigma^2 tau / 2)(1 - e^{-2/tau})) u_t.
// stationary_init draws nu(0) ~ Normal(0, sigma^2 tau / 2); otherwise
// nu(0) = 0.  The Wiener limit always starts at 0 (no stationary law exists).
inline LogSeries ou_simulate(const OuParams& p, std::size_t n, Seed seed,
                             bool stationary_init = true) {
  p.validate();
  if (n < 1) throw DataError("ou_simulate: need n >= 1");
  GaussianRng rng(seed);
  double nu0 = 0.0;
  if (stationary_init && !p.wiener_limit())
    nu0 = std::sqrt(p.sigma * p.sigma * p.tau / 2.0) * rng.gaussian();
  return detail::ou_run(p, n, nu0, rng);
}

// Same recurrence from a caller-supplied nu(0); sigma = 0 gives the exact
// noiseless decay nu(t) = nu0 e^{-t/tau}.
inline LogSeries ou_simulate_from(const OuParams& p, std::size_t n, double nu0,
                                  Seed seed) {
  p.validate();
  if (n < 1) throw DataError("ou_simulate_from: need n >= 1");
  GaussianRng rng(seed);
  return detail::ou_run(p, n, nu0, rng);
}

// Discrete-time OU power spectrum, f in [0, 1/2] cycles/step:
//   S(f) = (sigma^2 tau / 2) (1 - a^2) / (1 - 2 a cos(2 pi f) + a^2).
inline double ou_psd_discrete(const OuParams& p, double f) {
  p.validate();
  if (p.wiener_limit())
    throw DataError("ou_psd_discrete: tau is infinite, use the Wiener limit");
  if (!(f >= 0.0) || !(f <= 0.5))
    throw DataError("ou_psd_discrete: f must be in [0, 1/2]");
  const double a = std::exp(-1.0 / p.tau);
  const double c = std::cos(2.0 * 3.14159265358979323846 * f);
  return (p.sigma * p.sigma * p.tau / 2.0) * (1.0 - a * a) /
         (1.0 - 2.0 * a * c + a * a);
}

// Continuous-time OU power spectrum T(f) = sigma^2 tau^2 / (1 + 4 pi^2 tau^2 f^2),
// a first-order low-pass filter with cut-off f_c = 1/(2 pi tau).
inline double ou_psd_continuous(const OuParams& p, double f) {
  p.validate();
  if (p.wiener_limit())
    throw DataError("ou_psd_continuous: tau is infinite, use the Wiener limit");
  if (!(f >= 0.0) || !(f <= 0.5))
    throw DataError("ou_psd_continuous: f must be in [0, 1/2]");
  const double two_pi_tau_f = 2.0 * 3.14159265358979323846 * p.tau * f;
  return p.sigma * p.sigma * p.tau * p.tau / (1.0 + two_pi_tau_f * two_pi_tau_f);
}

// Wiener-limit spectrum S_inf(f) = sigma^2 / (2 (1 - cos 2 pi f)) for f > 0;
// the f = 0 value is the separate limit sigma^2.
inline double ou_psd_wiener_limit(double sigma2, double f) {
  if (!(sigma2 >= 0.0)) throw DataError("ou_psd_wiener_limit: need sigma2 >= 0");
  if (!(f >= 0.0) || !(f <= 0.5))
    throw DataError("ou_psd_wiener_limit: f must be in [0, 1/2]");
  if (f == 0.0) return sigma2;
  return sigma2 / (2.0 * (1.0 - std::cos(2.0 * 3.14159265358979323846 * f)));
}

}  // namespace lpplspec
