#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lpplspec/errors.hpp"
#include "lpplspec/spectra.hpp"
#include "lpplspec/timeseries.hpp"

namespace lpplspec {

// Outcome of a noise-parameter estimate.  tau may be a finite number, the
// Wiener assumption (infinite), or "none" when the AR(1) statistics admit no
// finite estimate -- a first-class result, not an error.
enum class TauKind { finite, infinite, none };

struct NoiseEstimate {
  std::string method;  // "mle" or "pessimistic"
  TauKind tau_kind = TauKind::none;
  double tau_hat = 0.0;  // meaningful only when tau_kind == finite
  double sigma2_hat = 0.0;

  // Diagnostics.
  bool detrended = false;
  LinearTrend trend;
  bool has_nu0 = false;
  double nu0_hat = 0.0;
  double a_hat = 0.0;            // AR(1) coefficient (mle)
  long binding_band = -1;        // index of the band attaining the min (pessimistic)
  std::size_t bands_used = 0;    // number of bands inspected (pessimistic)
};

// Cumulative-difference statistics used to reconstruct nu(0):
// alpha_0 = 0, alpha_t = sum of the first t differences.
struct AlphaSums {
  double A_x = 0.0;   // sum_{i=1}^{n-1} alpha_{i-1}
  double A_y = 0.0;   // sum_{i=1}^{n-1} alpha_i
  double A_xy = 0.0;  // sum alpha_i * alpha_{i-1}
  double A_xx = 0.0;  // sum alpha_{i-1}^2
};

// Geometric frequency bands (h, k): h_0 = 1, k_j = h_{j+1} = ceil((1+alpha)h_j)
// with strict progress, clipped at N/2.  Adjacent bands share an endpoint;
// the DC bin is excluded.
struct BandScheme {
  double alpha = 1.0;
  std::vector<std::pair<std::size_t, std::size_t>> bands;

  static BandScheme build(double alpha, std::size_t half_bins) {
    if (!(alpha > 0.0)) throw DataError("BandScheme: need alpha > 0");
    if (half_bins < 2) throw DataError("BandScheme: need at least 2 bins");
    BandScheme s;
    s.alpha = alpha;
    std::size_t h = 1;
    while (h < half_bins) {
      double grown = std::ceil((1.0 + alpha) * static_cast<double>(h));
      std::size_t k = static_cast<std::size_t>(grown);
      if (k <= h) k = h + 1;
      if (k > half_bins) k = half_bins;
      s.bands.emplace_back(h, k);
      h = k;
    }
    return s;
  }
};

// AR(1) maximum likelihood on observed noise levels nu(0..n-1):
//   a = S_xy/S_xx, tau = 1/ln(S_xx/S_xy),
//   c^2 = (S_yy - 2a S_xy + a^2 S_xx)/(n-1),  sigma^2 = 2 c^2/(tau (1-a^2)).
// S_xy <= 0 or S_xy >= S_xx means the fitted coefficient leaves (0,1):
// no finite estimate.
inline NoiseEstimate mle_from_levels(const LogSeries& nu) {
  const std::size_t n = nu.size();
  if (n < 3) throw DataError("mle_from_levels: need n >= 3");
  double s_xx = 0.0, s_xy = 0.0, s_yy = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double x = nu.values[i - 1];
    const double y = nu.values[i];
    s_xx += x * x;
    s_xy += x * y;
    s_yy += y * y;
  }
  NoiseEstimate est;
  est.method = "mle";
  if (!(s_xy > 0.0) || !(s_xy < s_xx)) {
    est.tau_kind = TauKind::none;
    est.sigma2_hat = 0.0;
    return est;
  }
  const double a = s_xy / s_xx;
  const double tau = 1.0 / std::log(s_xx / s_xy);
  const double c2 =
      (s_yy - 2.0 * a * s_xy + a * a * s_xx) / static_cast<double>(n - 1);
  est.tau_kind = TauKind::finite;
  est.tau_hat = tau;
  est.a_hat = a;
  est.sigma2_hat = 2.0 * c2 / (tau * (1.0 - a * a));
  return est;
}

// Least-squares reconstruction of nu(0) from first differences alone.  The
// levels enter the AR(1) normal equations only through nu(0) + alpha_t, and
// solving for nu(0) gives the closed form below.
inline double reconstruct_nu0(const std::vector<double>& diffs,
                              AlphaSums* sums_out = nullptr) {
  const std::size_t m = diffs.size();  // m = n - 1 differences
  if (m < 2) throw DataError("reconstruct_nu0: need at least 2 differences");
  AlphaSums s;
  double alpha_prev = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    const double alpha_i = alpha_prev + diffs[i - 1];
    s.A_x += alpha_prev;
    s.A_y += alpha_i;
    s.A_xy += alpha_i * alpha_prev;
    s.A_xx += alpha_prev * alpha_prev;
    alpha_prev = alpha_i;
  }
  if (sums_out) *sums_out = s;
  const double count = static_cast<double>(m);
  const double den =
      count * s.A_xy - count * s.A_xx + s.A_x * s.A_x - s.A_y * s.A_x;
  const double num = s.A_y * s.A_xx - s.A_x * s.A_xy;
  const double scale = std::abs(count * s.A_xy) + std::abs(count * s.A_xx) +
                       s.A_x * s.A_x + std::abs(s.A_y * s.A_x);
  if (std::abs(den) < 1e-12 * std::max(scale, 1e-300))
    throw DegenerateError("reconstruct_nu0: denominator vanishes");
  return num / den;
}

// Full price pipeline: linear detrend, first differences as noise
// differences, nu(0) reconstruction, levels, AR(1) maximum likelihood.
inline NoiseEstimate mle_from_prices(const LogSeries& p) {
  if (p.size() < 4) throw DataError("mle_from_prices: need n >= 4");
  auto [resid, trend] = linear_detrend(p);
  // An exactly linear series leaves only rounding residue (which grows with
  // n through the accumulated trend); estimating noise from it is
  // meaningless.
  double scale = 0.0, rmax = 0.0;
  for (double v : p.values) scale = std::max(scale, std::abs(v));
  for (double v : resid.values) rmax = std::max(rmax, std::abs(v));
  if (rmax <= 1e-12 * static_cast<double>(p.size()) * scale)
    throw DegenerateError(
        "mle_from_prices: residuals at rounding level (exact linear trend)");
  std::vector<double> diffs(resid.size() - 1);
  for (std::size_t i = 0; i + 1 < resid.size(); ++i)
    diffs[i] = resid.values[i + 1] - resid.values[i];
  const double nu0 = reconstruct_nu0(diffs);
  LogSeries levels;
  levels.values.resize(resid.size());
  double alpha = 0.0;
  levels.values[0] = nu0;
  for (std::size_t i = 1; i < resid.size(); ++i) {
    alpha += diffs[i - 1];
    levels.values[i] = nu0 + alpha;
  }
  NoiseEstimate est = mle_from_levels(levels);
  est.detrended = true;
  est.trend = trend;
  est.has_nu0 = true;
  est.nu0_hat = nu0;
  return est;
}

// Pessimistic (Wiener-assumption) bound:
//   sigma^2 <= 2 sum_{i=h}^{k} psd_i / sum_{i=h}^{k} 1/(1 - cos 2 pi f_i)
// per band, minimized over the scheme.  Both sums run backward from f_k to
// f_h: the terms grow by orders of magnitude toward low f, and adding the
// small ones first keeps them from being truncated.
inline NoiseEstimate pessimistic_sigma(const Spectrum& P,
                                       const BandScheme& scheme) {
  if (scheme.bands.empty()) throw DataError("pessimistic_sigma: empty band set");
  if (P.bins() < 3) throw DataError("pessimistic_sigma: spectrum too short");
  const double two_pi = 2.0 * 3.14159265358979323846;
  NoiseEstimate est;
  est.method = "pessimistic";
  est.tau_kind = TauKind::infinite;
  est.bands_used = scheme.bands.size();
  double best = std::numeric_limits<double>::infinity();
  long best_band = -1;
  for (std::size_t b = 0; b < scheme.bands.size(); ++b) {
    const auto [h, k] = scheme.bands[b];
    if (h < 1 || k >= P.bins() || h > k)
      throw DataError("pessimistic_sigma: band outside spectrum grid");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = k + 1; i-- > h;) {
      num += P.psd(i);
      den += 1.0 / (1.0 - std::cos(two_pi * P.freqs[i]));
    }
    const double bound = 2.0 * num / den;
    if (bound < best) {
      best = bound;
      best_band = static_cast<long>(b);
    }
  }
  est.sigma2_hat = best;
  est.binding_band = best_band;
  return est;
}

inline const char* tau_kind_name(TauKind k) {
  switch (k) {
    case TauKind::finite: return "finite";
    case TauKind::infinite: return "infinite";
    default: return "none";
  }
}

inline void to_json(nlohmann::json& j, const NoiseEstimate& e) {
  j = nlohmann::json::object();
  j["method"] = e.method;
  if (e.tau_kind == TauKind::finite)
    j["tau_hat"] = e.tau_hat;
  else
    j["tau_hat"] = tau_kind_name(e.tau_kind);
  j["sigma2_hat"] = e.sigma2_hat;
  nlohmann::json d = nlohmann::json::object();
  d["detrended"] = e.detrended;
  if (e.detrended) {
    d["trend_intercept"] = e.trend.intercept;
    d["trend_slope"] = e.trend.slope;
  }
  if (e.has_nu0) d["nu0_hat"] = e.nu0_hat;
  if (e.method == "mle" && e.tau_kind == TauKind::finite) d["a_hat"] = e.a_hat;
  if (e.method == "pessimistic") {
    d["binding_band"] = e.binding_band;
    d["bands_used"] = e.bands_used;
  }
  j["diagnostics"] = d;
}

}  // namespace lpplspec
