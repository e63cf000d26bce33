#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpplspec/errors.hpp"
#include "lpplspec/fft.hpp"
#include "lpplspec/spectra.hpp"
#include "lpplspec/timeseries.hpp"

namespace lpplspec {

// Frequency-domain filter on the reflected grid: one gain per bin in [0,1].
// Linear by construction once built; the DC bin is always preserved (the
// level of log-prices carries the trend under inspection).
struct FilterSpec {
  enum class Kind { wiener, cutoff };
  Kind kind = Kind::cutoff;
  std::vector<double> gains;        // length N/2 + 1
  std::size_t cutoff_index = 0;     // cutoff kind only
  std::size_t analysis_length = 0;  // N = 2(n-1) of the target series
};

// Per-frequency signal-to-noise ratio R(f_i) = signal_power/noise_power.
// The DC entry is computed but unreliable: it is dominated by the series
// level, hence the flag.
struct SnrCurve {
  std::vector<double> values;
  bool dc_unreliable = true;
};

namespace detail {

inline void require_same_grid(const Spectrum& a, const Spectrum& b,
                              const char* what) {
  if (a.bins() != b.bins() || a.analysis_length != b.analysis_length)
    throw DataError(std::string(what) + ": spectra on different grids");
}

}  // namespace detail

inline SnrCurve snr(const Spectrum& signal_power, const Spectrum& noise_power) {
  detail::require_same_grid(signal_power, noise_power, "snr");
  SnrCurve out;
  out.values.resize(signal_power.bins());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (i >= 1 && !(noise_power.power[i] > 0.0))
      throw DataError("snr: noise power must be positive for f > 0");
    out.values[i] = noise_power.power[i] > 0.0
                        ? signal_power.power[i] / noise_power.power[i]
                        : 0.0;
  }
  return out;
}

// |L_hat|^2 = max(P - S_hat, 0): the only observable estimate of the
// deterministic signal power given the measured P and a noise estimate.
inline Spectrum estimate_signal_power(const Spectrum& P, const Spectrum& S_hat) {
  detail::require_same_grid(P, S_hat, "estimate_signal_power");
  Spectrum out = P;
  for (std::size_t i = 0; i < out.bins(); ++i) {
    out.power[i] = std::max(P.power[i] - S_hat.power[i], 0.0);
    out.amplitude[i] = std::sqrt(out.power[i]);
  }
  return out;
}

// Wiener gains K_i = 1/(1 + 1/R_i) with R_i from estimate_signal_power:
// K_i = sig_i/(sig_i + S_i).  Zero estimated signal gives K_i = 0; zero
// estimated noise keeps the bin (K_i = 1).  DC is always kept.
inline FilterSpec wiener_spec(const Spectrum& P, const Spectrum& S_hat) {
  detail::require_same_grid(P, S_hat, "wiener_spec");
  FilterSpec spec;
  spec.kind = FilterSpec::Kind::wiener;
  spec.analysis_length = P.analysis_length;
  spec.gains.resize(P.bins());
  spec.gains[0] = 1.0;
  for (std::size_t i = 1; i < P.bins(); ++i) {
    const double noise = S_hat.power[i];
    if (!(noise > 0.0)) {
      spec.gains[i] = 1.0;
      continue;
    }
    const double sig = std::max(P.power[i] - noise, 0.0);
    spec.gains[i] = sig / (sig + noise);
  }
  return spec;
}

// Low-pass bin surgery: keep bins i < cutoff_index, zero the rest.
// cutoff_index = N/2 + 1 keeps everything (identity).
inline FilterSpec cutoff_spec(std::size_t cutoff_index, std::size_t N) {
  const std::size_t bins = N / 2 + 1;
  if (cutoff_index < 1 || cutoff_index > bins)
    throw DataError("cutoff_spec: cutoff index out of range");
  FilterSpec spec;
  spec.kind = FilterSpec::Kind::cutoff;
  spec.analysis_length = N;
  spec.cutoff_index = cutoff_index;
  spec.gains.assign(bins, 0.0);
  for (std::size_t i = 0; i < cutoff_index; ++i) spec.gains[i] = 1.0;
  return spec;
}

// Reflect, transform, scale each bin by its gain, invert, read the original
// samples back off the periodized sequence.
inline LogSeries apply_filter(const FilterSpec& spec, const LogSeries& p) {
  const std::size_t n = p.size();
  if (n < 2) throw DataError("apply_filter: need n >= 2");
  const std::size_t N = 2 * (n - 1);
  if (spec.analysis_length != N || spec.gains.size() != N / 2 + 1)
    throw DataError("apply_filter: filter grid does not match series");
  for (double g : spec.gains)
    if (!(g >= 0.0) || !(g <= 1.0))
      throw DataError("apply_filter: gains must lie in [0,1]");
  const LogSeries refl = reflect(p);
  auto bins = real_dft(refl.values);
  for (std::size_t i = 0; i < bins.size(); ++i) bins[i] *= spec.gains[i];
  const auto back = real_idft(bins, N);
  LogSeries out;
  out.values.resize(n);
  // reflect() places p(t) at index n-1-t.
  for (std::size_t t = 0; t < n; ++t) out.values[t] = back[n - 1 - t];
  return out;
}

inline LogSeries wiener_filter(const LogSeries& p, const Spectrum& S_hat) {
  const Spectrum P = power_spectrum(p);
  return apply_filter(wiener_spec(P, S_hat), p);
}

struct CutoffResult {
  std::size_t index = 0;
  bool found = false;  // false: no bin fell below the threshold (Nyquist used)
};

// Smallest i >= 1 where the estimated signal power drops below the noise:
// max(P-S,0) < S, i.e. P < 2S.
inline CutoffResult find_cutoff(const Spectrum& P, const Spectrum& S_hat) {
  detail::require_same_grid(P, S_hat, "find_cutoff");
  for (std::size_t i = 1; i < P.bins(); ++i) {
    if (P.power[i] < 2.0 * S_hat.power[i]) return {i, true};
  }
  return {P.bins() - 1, false};
}

inline LogSeries cutoff_filter(const LogSeries& p, std::size_t f_tilde) {
  if (p.size() < 2) throw DataError("cutoff_filter: need n >= 2");
  const std::size_t N = 2 * (p.size() - 1);
  return apply_filter(cutoff_spec(f_tilde, N), p);
}

inline void to_json(nlohmann::json& j, const FilterSpec& s) {
  j = nlohmann::json::object();
  j["kind"] = s.kind == FilterSpec::Kind::wiener ? "wiener" : "cutoff";
  if (s.kind == FilterSpec::Kind::cutoff) j["cutoff_index"] = s.cutoff_index;
  j["analysis_length"] = s.analysis_length;
  j["gains"] = s.gains;
}

}  // namespace lpplspec
