#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include <json.hpp>

#include "lpplspec/errors.hpp"
#include "lpplspec/timeseries.hpp"

namespace lpplspec {

// Log-periodic power law:
//   l(t) = A - B (T-t)^m (1 + C cos(omega ln(T-t) + phi)),  0 <= t < T.
// m = 0 is permitted only for the pure-log-periodic special case; B = 0
// degenerates to the constant A.
struct LpplParams {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double m = 1.0;
  double omega = 0.0;
  double phi = 0.0;
  double T = 0.0;
  std::size_t n = 2;

  bool pure_log_periodic() const { return m == 0.0; }

  void validate() const {
    if (!(std::isfinite(A) && std::isfinite(B) && std::isfinite(C) &&
          std::isfinite(m) && std::isfinite(omega) && std::isfinite(phi) &&
          std::isfinite(T)))
      throw DataError("LpplParams: non-finite parameter");
    if (B < 0.0) throw DataError("LpplParams: B must be >= 0");
    if (m < 0.0 || m > 1.0) throw DataError("LpplParams: m must be in [0,1]");
    if (n < 2) throw DataError("LpplParams: n must be >= 2");
    if (!(T > static_cast<double>(n) - 1.0))
      throw DataError("LpplParams: need T > n-1");
  }
};

// Frequency band occupied by the log-periodic oscillation, cycles/step.
struct FmBand {
  double f_min = 0.0;
  double f_max = 0.0;
  bool clipped = false;  // true when the upper bound exceeded Nyquist
};

inline double lppl_eval(const LpplParams& p, double t) {
  if (!(t >= 0.0) || !(t < p.T))
    throw DataError("lppl_eval: t must satisfy 0 <= t < T");
  const double u = p.T - t;
  const double pw = p.m == 0.0 ? 1.0 : std::pow(u, p.m);
  return p.A - p.B * pw * (1.0 + p.C * std::cos(p.omega * std::log(u) + p.phi));
}

inline LogSeries lppl_series(const LpplParams& p) {
  p.validate();
  LogSeries out;
  out.values.reserve(p.n);
  for (std::size_t t = 0; t < p.n; ++t)
    out.values.push_back(lppl_eval(p, static_cast<double>(t)));
  return out;
}

// Power law renormalized so that l_m(0) = 0 and the integral over [0,T] is
// 1/2:  A = (1+1/m)/(2T), B = A/T^m, C = 0.  A is recomputed as B*T^m so the
// t = 0 cancellation is exact in floating point (at most 1 ulp from the
// closed form).
inline LpplParams normalized_power_law(double m, double T) {
  if (!(m > 0.0) || m > 1.0)
    throw DataError("normalized_power_law: need 0 < m <= 1");
  if (!(T > 0.0)) throw DataError("normalized_power_law: need T > 0");
  LpplParams p;
  p.m = m;
  p.T = T;
  const double pw = std::pow(T, m);
  const double a = (1.0 + 1.0 / m) / (2.0 * T);
  p.B = a / pw;
  p.A = p.B * pw;
  p.C = 0.0;
  p.omega = 0.0;
  p.phi = 0.0;
  const double horizon = std::floor(T);
  p.n = horizon >= 2.0 ? static_cast<std::size_t>(horizon) : 2;
  return p;
}

// The oscillation cos(omega ln(T-t) + phi) sweeps instantaneous frequency
// omega/(2 pi (T-t)): lowest at t = 0, highest at t = n.  Clipped at Nyquist.
inline FmBand fm_band(const LpplParams& p) {
  if (!(p.omega > 0.0)) throw DataError("fm_band: need omega > 0");
  if (!(p.T > static_cast<double>(p.n))) throw DataError("fm_band: need T > n");
  const double two_pi = 2.0 * 3.14159265358979323846;
  FmBand band;
  band.f_min = p.omega / (two_pi * p.T);
  band.f_max = p.omega / (two_pi * (p.T - static_cast<double>(p.n)));
  if (band.f_max > 0.5) {
    band.f_max = 0.5;
    band.clipped = true;
  }
  if (!(band.f_min < band.f_max))
    throw DegenerateError("fm_band: empty band after Nyquist clipping");
  return band;
}

inline void to_json(nlohmann::json& j, const LpplParams& p) {
  j = nlohmann::json{{"A", p.A},         {"B", p.B},   {"C", p.C},
                     {"m", p.m},         {"omega", p.omega},
                     {"phi", p.phi},     {"T", p.T},   {"n", p.n}};
}

inline void from_json(const nlohmann::json& j, LpplParams& p) {
  j.at("A").get_to(p.A);
  j.at("B").get_to(p.B);
  j.at("C").get_to(p.C);
  j.at("m").get_to(p.m);
  j.at("omega").get_to(p.omega);
  j.at("phi").get_to(p.phi);
  j.at("T").get_to(p.T);
  j.at("n").get_to(p.n);
}

}  // namespace lpplspec
