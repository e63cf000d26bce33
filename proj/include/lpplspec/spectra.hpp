#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "lpplspec/errors.hpp"
#include "lpplspec/fft.hpp"
#include "lpplspec/format.hpp"
#include "lpplspec/timeseries.hpp"

namespace lpplspec {

// Half spectrum on the grid f_i = i/N, i = 0..N/2.
//
// amplitude[i] = |sum_t x[t] e^{-2 pi i f_i t}| / N, power = amplitude^2.
// With this normalization a constant series c has DC amplitude |c|, and
// Parseval reads sum_t x[t]^2 = N * sum over the full (mirrored) grid of
// amplitude^2.  psd(i) = N * power[i] is the periodogram density that
// estimates the theoretical noise spectra (ou_psd_*) directly.
struct Spectrum {
  std::vector<double> freqs;
  std::vector<double> amplitude;
  std::vector<double> power;
  std::size_t analysis_length = 0;  // N: length of the transformed series

  std::size_t bins() const { return freqs.size(); }
  double psd(std::size_t i) const {
    return power[i] * static_cast<double>(analysis_length);
  }
};

// Even periodization: (p(n-1), ..., p(1), p(0), p(1), ..., p(n-2)),
// period N = 2(n-1).  Removes the boundary step so the DFT is real.
inline LogSeries reflect(const LogSeries& x) {
  const std::size_t n = x.size();
  if (n < 2) throw DataError("reflect: need n >= 2");
  LogSeries out;
  out.values.resize(2 * (n - 1));
  for (std::size_t j = 0; j < n; ++j) out.values[j] = x.values[n - 1 - j];
  for (std::size_t t = 1; t + 1 < n; ++t) out.values[n - 1 + t] = x.values[t];
  return out;
}

// DFT amplitude spectrum.  With reflect_first the input is periodized before
// the transform (the convention used throughout estimation and de-noising);
// without it the raw series is transformed as-is (diagnostics only).
inline Spectrum amplitude_spectrum(const LogSeries& x, bool reflect_first) {
  const LogSeries& series = x;
  LogSeries reflected;
  const std::vector<double>* data = &series.values;
  if (reflect_first) {
    reflected = reflect(x);
    data = &reflected.values;
  }
  if (data->size() < 2) throw DataError("amplitude_spectrum: need n >= 2");
  const std::size_t N = data->size();
  const auto dft = real_dft(*data);
  Spectrum s;
  s.analysis_length = N;
  s.freqs.resize(dft.size());
  s.amplitude.resize(dft.size());
  s.power.resize(dft.size());
  const double inv_n = 1.0 / static_cast<double>(N);
  for (std::size_t i = 0; i < dft.size(); ++i) {
    s.freqs[i] = static_cast<double>(i) * inv_n;
    s.amplitude[i] = std::abs(dft[i]) * inv_n;
    s.power[i] = s.amplitude[i] * s.amplitude[i];
  }
  return s;
}

// |P|^2 of the reflected series: the observed power used by the estimators
// and the de-noising filters.
inline Spectrum power_spectrum(const LogSeries& x) {
  return amplitude_spectrum(x, true);
}

// Theoretical spectrum sampled on the same grid as a length-N analysis.
// `psd` is a density in periodogram scale (like ou_psd_*); the stored power
// is psd/N so the object is directly comparable with measured spectra.
inline Spectrum spectrum_from_psd(std::size_t N,
                                  const std::function<double(double)>& psd) {
  if (N < 2) throw DataError("spectrum_from_psd: need N >= 2");
  Spectrum s;
  s.analysis_length = N;
  const std::size_t bins = N / 2 + 1;
  s.freqs.resize(bins);
  s.amplitude.resize(bins);
  s.power.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    s.freqs[i] = static_cast<double>(i) / static_cast<double>(N);
    const double p = psd(s.freqs[i]) / static_cast<double>(N);
    if (!(p >= 0.0))
      throw DataError("spectrum_from_psd: negative spectral density");
    s.power[i] = p;
    s.amplitude[i] = std::sqrt(p);
  }
  return s;
}

inline void write_csv(const Spectrum& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "freq,amplitude,power\n";
  for (std::size_t i = 0; i < s.bins(); ++i)
    out << format_double(s.freqs[i]) << ',' << format_double(s.amplitude[i])
        << ',' << format_double(s.power[i]) << '\n';
}

}  // namespace lpplspec
