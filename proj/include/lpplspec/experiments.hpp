#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpplspec/denoise.hpp"
#include "lpplspec/errors.hpp"
#include "lpplspec/estimators.hpp"
#include "lpplspec/lppl.hpp"
#include "lpplspec/ou.hpp"
#include "lpplspec/rng.hpp"
#include "lpplspec/spectra.hpp"
#include "lpplspec/timeseries.hpp"

namespace lpplspec {

// ---------------------------------------------------------------------------
// Synthetic stand-in generators.  Historical price files are not bundled;
// these produce series with the same qualitative structure for tests and
// demos.  Dates are synthetic consecutive calendar days from 2000-01-03.

namespace detail {

inline bool leap_year(int y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline int days_in_month(int y, int m) {
  static const int d[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && leap_year(y)) return 29;
  return d[m - 1];
}

inline std::string synthetic_date(std::size_t index) {
  int y = 2000, m = 1, d = 3;
  std::size_t left = index;
  while (left > 0) {
    const std::size_t room =
        static_cast<std::size_t>(days_in_month(y, m) - d);
    if (left <= room) {
      d += static_cast<int>(left);
      left = 0;
    } else {
      left -= room + 1;
      d = 1;
      if (++m > 12) {
        m = 1;
        ++y;
      }
    }
  }
  std::ostringstream os;
  os << std::setfill('0') << std::setw(4) << y << '-' << std::setw(2) << m
     << '-' << std::setw(2) << d;
  return os.str();
}

inline PriceSeries prices_from_log(const LogSeries& logp) {
  PriceSeries out;
  out.dates.reserve(logp.size());
  out.closes.reserve(logp.size());
  for (std::size_t t = 0; t < logp.size(); ++t) {
    out.dates.push_back(synthetic_date(t));
    out.closes.push_back(std::exp(logp.values[t]));
  }
  return out;
}

}  // namespace detail

// Exponential price trend plus Wiener noise in the log:
//   log p(t) = log_p0 + drift * t + nu(t),  nu = Wiener(sigma).
inline PriceSeries make_exp_wiener_prices(std::size_t n, double log_p0,
                                          double drift, double sigma,
                                          Seed seed) {
  if (n < 2) throw DataError("make_exp_wiener_prices: need n >= 2");
  OuParams noise;
  noise.tau = std::numeric_limits<double>::infinity();
  noise.sigma = sigma;
  LogSeries nu = ou_simulate(noise, n, seed);
  LogSeries logp;
  logp.values.resize(n);
  for (std::size_t t = 0; t < n; ++t)
    logp.values[t] = log_p0 + drift * static_cast<double>(t) + nu.values[t];
  return detail::prices_from_log(logp);
}

// Bubble trajectory plus mean-reverting noise in the log.
inline PriceSeries make_lppl_ou_prices(const LpplParams& lppl,
                                       const OuParams& noise, Seed seed,
                                       bool stationary_init = true) {
  LogSeries ell = lppl_series(lppl);
  LogSeries nu = ou_simulate(noise, lppl.n, seed, stationary_init);
  LogSeries logp;
  logp.values.resize(lppl.n);
  for (std::size_t t = 0; t < lppl.n; ++t)
    logp.values[t] = ell.values[t] + nu.values[t];
  return detail::prices_from_log(logp);
}

// ---------------------------------------------------------------------------
// Experiment configuration (JSON file driven).

struct ExperimentConfig {
  std::string name = "experiment";
  std::string kind;  // "tau-sweep" | "pessimistic-demo" | "standin"
  std::size_t replicates = 1;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::size_t n = 0;
  double alpha = 1.0;
  std::vector<double> sweep;  // tau values (tau-sweep)
  OuParams ou;
  bool has_ou = false;
  LpplParams lppl;
  bool has_lppl = false;
  std::string outputs = ".";
  // stand-in generation
  std::string standin_kind;  // "exp-wiener" | "lppl-ou"
  double log_p0 = 0.0;
  double drift = 0.0;
};

inline ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    cfg.kind = j.at("kind").get<std::string>();
    if (j.contains("name")) cfg.name = j.at("name").get<std::string>();
    if (j.contains("replicates"))
      cfg.replicates = j.at("replicates").get<std::size_t>();
    if (j.contains("seed")) {
      cfg.seed = j.at("seed").get<std::uint64_t>();
      cfg.has_seed = true;
    }
    if (j.contains("n")) cfg.n = j.at("n").get<std::size_t>();
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("sweep")) cfg.sweep = j.at("sweep").get<std::vector<double>>();
    if (j.contains("outputs")) cfg.outputs = j.at("outputs").get<std::string>();
    if (j.contains("ou")) {
      const auto& o = j.at("ou");
      if (o.contains("tau")) {
        if (o.at("tau").is_string()) {
          if (o.at("tau").get<std::string>() != "infinite")
            throw DataError("config: ou.tau must be a number or \"infinite\"");
          cfg.ou.tau = std::numeric_limits<double>::infinity();
        } else {
          cfg.ou.tau = o.at("tau").get<double>();
        }
      }
      cfg.ou.sigma = o.at("sigma").get<double>();
      cfg.has_ou = true;
    }
    if (j.contains("lppl")) {
      cfg.lppl = j.at("lppl").get<LpplParams>();
      cfg.has_lppl = true;
    }
    if (j.contains("standin")) {
      const auto& s = j.at("standin");
      cfg.standin_kind = s.at("kind").get<std::string>();
      if (s.contains("log_p0")) cfg.log_p0 = s.at("log_p0").get<double>();
      if (s.contains("drift")) cfg.drift = s.at("drift").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  if (cfg.replicates < 1) throw DataError("config: replicates must be >= 1");
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return parse_experiment_config(j);
}

// ---------------------------------------------------------------------------
// Relaxation-time sweep: simulate pure OU, estimate via the price pipeline,
// aggregate medians/IQRs per tau.

struct TauSweepRow {
  double tau = 0.0;
  double median_tau_hat = 0.0;
  double iqr_tau_hat = 0.0;
  std::size_t nonfinite = 0;
  std::size_t replicates = 0;
};

namespace detail {

// Linear-interpolation quantile on a sorted copy (same rule as common
// numerics libraries).
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= v.size()) return v.back();
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

}  // namespace detail

inline std::vector<TauSweepRow> run_tau_sweep(const ExperimentConfig& cfg) {
  if (cfg.kind != "tau-sweep") throw DataError("run_tau_sweep: wrong config kind");
  if (cfg.sweep.empty()) throw DataError("run_tau_sweep: empty sweep");
  if (!cfg.has_ou) throw DataError("run_tau_sweep: missing ou block");
  if (!cfg.has_seed) throw DataError("run_tau_sweep: missing seed");
  if (cfg.n < 4) throw DataError("run_tau_sweep: need n >= 4");
  std::vector<TauSweepRow> rows;
  for (std::size_t ti = 0; ti < cfg.sweep.size(); ++ti) {
    OuParams p = cfg.ou;
    p.tau = cfg.sweep[ti];
    p.validate();
    std::vector<double> finite;
    std::size_t nonfinite = 0;
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
      const Seed s{mix_seed(cfg.seed, ti * cfg.replicates + r)};
      const LogSeries nu = ou_simulate(p, cfg.n, s);
      const NoiseEstimate est = mle_from_prices(nu);
      if (est.tau_kind == TauKind::finite)
        finite.push_back(est.tau_hat);
      else
        ++nonfinite;
    }
    std::sort(finite.begin(), finite.end());
    TauSweepRow row;
    row.tau = p.tau;
    row.median_tau_hat = detail::quantile(finite, 0.5);
    row.iqr_tau_hat =
        detail::quantile(finite, 0.75) - detail::quantile(finite, 0.25);
    row.nonfinite = nonfinite;
    row.replicates = cfg.replicates;
    rows.push_back(row);
  }
  return rows;
}

inline void write_tau_sweep_csv(const std::vector<TauSweepRow>& rows,
                                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "tau,median_tau_hat,iqr_tau_hat,nonfinite,replicates\n";
  for (const auto& r : rows)
    out << format_double(r.tau) << ',' << format_double(r.median_tau_hat)
        << ',' << format_double(r.iqr_tau_hat) << ',' << r.nonfinite << ','
        << r.replicates << '\n';
}

// ---------------------------------------------------------------------------
// Pessimistic-estimation demo: trajectory + noise, per-replicate bound,
// spectra files for plotting.

struct PessimisticDemoResult {
  std::vector<double> sigma2_hats;
  double mean_sigma2_hat = 0.0;
  Spectrum signal;       // |L| of the noiseless trajectory
  Spectrum price;        // |P| of the first replicate
  Spectrum noise;        // theoretical S_tau on the grid
  Spectrum pessimistic;  // S_inf at the mean estimate
};

inline PessimisticDemoResult run_pessimistic_demo(const ExperimentConfig& cfg) {
  if (cfg.kind != "pessimistic-demo")
    throw DataError("run_pessimistic_demo: wrong config kind");
  if (!cfg.has_ou || !cfg.has_lppl)
    throw DataError("run_pessimistic_demo: missing lppl or ou block");
  if (!cfg.has_seed) throw DataError("run_pessimistic_demo: missing seed");
  cfg.ou.validate();
  const LogSeries ell = lppl_series(cfg.lppl);
  const std::size_t N = 2 * (ell.size() - 1);
  const BandScheme scheme = BandScheme::build(cfg.alpha, N / 2);
  PessimisticDemoResult res;
  res.signal = power_spectrum(ell);
  for (std::size_t r = 0; r < cfg.replicates; ++r) {
    const Seed s{mix_seed(cfg.seed, r)};
    const LogSeries nu = ou_simulate(cfg.ou, ell.size(), s);
    LogSeries price;
    price.values.resize(ell.size());
    for (std::size_t t = 0; t < ell.size(); ++t)
      price.values[t] = ell.values[t] + nu.values[t];
    const Spectrum P = power_spectrum(price);
    if (r == 0) res.price = P;
    res.sigma2_hats.push_back(pessimistic_sigma(P, scheme).sigma2_hat);
  }
  double sum = 0.0;
  for (double v : res.sigma2_hats) sum += v;
  res.mean_sigma2_hat = sum / static_cast<double>(res.sigma2_hats.size());
  const OuParams ou = cfg.ou;
  if (ou.wiener_limit()) {
    res.noise = spectrum_from_psd(N, [&](double f) {
      return ou_psd_wiener_limit(ou.sigma * ou.sigma, f);
    });
  } else {
    res.noise =
        spectrum_from_psd(N, [&](double f) { return ou_psd_discrete(ou, f); });
  }
  const double est = res.mean_sigma2_hat;
  res.pessimistic = spectrum_from_psd(
      N, [&](double f) { return ou_psd_wiener_limit(est, f); });
  return res;
}

inline void write_pessimistic_demo(const PessimisticDemoResult& res,
                                   const std::string& dir) {
  write_csv(res.signal, dir + "/signal_spectrum.csv");
  write_csv(res.price, dir + "/price_spectrum.csv");
  write_csv(res.noise, dir + "/noise_spectrum.csv");
  write_csv(res.pessimistic, dir + "/pessimistic_spectrum.csv");
  nlohmann::json j;
  j["mean_sigma2_hat"] = res.mean_sigma2_hat;
  j["sigma2_hats"] = res.sigma2_hats;
  std::ofstream out(dir + "/estimate.json");
  if (!out) throw DataError("cannot write '" + dir + "/estimate.json'");
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// End-to-end bubble analysis: log -> reflected spectrum -> both estimators
// -> cutoff frequency -> low-pass filtered series -> report.

struct AnalyzeOptions {
  double alpha = 1.0;        // band growth for the pessimistic estimator
  double closeness = 0.25;   // proximity threshold for the agreement flag
  std::string out_dir;       // when set, report/spectrum/filtered are written
};

struct AnalysisReport {
  std::size_t n = 0;
  NoiseEstimate mle;
  bool mle_degenerate = false;  // pipeline could not produce an MLE at all
  NoiseEstimate pessimistic;
  std::size_t cutoff_index = 0;
  bool cutoff_found = false;
  double proximity = std::numeric_limits<double>::infinity();
  bool estimates_close = false;
  double closeness_threshold = 0.25;
  double alpha = 1.0;
  std::string spectrum_file;
  std::string filtered_file;
  std::string report_file;
};

inline void to_json(nlohmann::json& j, const AnalysisReport& r) {
  j = nlohmann::json::object();
  j["n"] = r.n;
  if (r.mle_degenerate)
    j["mle"] = "degenerate";
  else
    j["mle"] = r.mle;
  j["pessimistic"] = r.pessimistic;
  j["cutoff_index"] = r.cutoff_index;
  j["cutoff_found"] = r.cutoff_found;
  if (std::isfinite(r.proximity)) j["proximity"] = r.proximity;
  else j["proximity"] = "undefined";
  j["estimates_close"] = r.estimates_close;
  j["closeness_threshold"] = r.closeness_threshold;
  j["alpha"] = r.alpha;
  // The paper's reading of agreement: close estimates mean the data shows
  // little evidence of mean reversion.
  j["mean_reversion"] = r.estimates_close ? "weak" : "undetermined";
  if (!r.spectrum_file.empty()) {
    j["files"] = {{"spectrum", r.spectrum_file},
                  {"filtered", r.filtered_file},
                  {"report", r.report_file}};
  }
}

inline AnalysisReport analyze_bubble(const PriceSeries& prices,
                                     const AnalyzeOptions& options) {
  if (prices.size() < 32) throw DataError("analyze_bubble: need n >= 32");
  const LogSeries logp = to_log_series(prices);
  const std::size_t N = 2 * (logp.size() - 1);
  const Spectrum P = power_spectrum(logp);

  AnalysisReport rep;
  rep.n = logp.size();
  rep.alpha = options.alpha;
  rep.closeness_threshold = options.closeness;

  try {
    rep.mle = mle_from_prices(logp);
  } catch (const DegenerateError&) {
    rep.mle_degenerate = true;  // e.g. constant prices: zero residual diffs
    rep.mle.method = "mle";
    rep.mle.tau_kind = TauKind::none;
  }
  const BandScheme scheme = BandScheme::build(options.alpha, N / 2);
  rep.pessimistic = pessimistic_sigma(P, scheme);

  // Noise spectrum for the cutoff search: the MLE fit when it exists,
  // otherwise the pessimistic Wiener-limit bound.
  Spectrum S_hat;
  if (!rep.mle_degenerate && rep.mle.tau_kind == TauKind::finite) {
    OuParams fit;
    fit.tau = rep.mle.tau_hat;
    fit.sigma = std::sqrt(std::max(rep.mle.sigma2_hat, 0.0));
    S_hat =
        spectrum_from_psd(N, [&](double f) { return ou_psd_discrete(fit, f); });
  } else {
    const double s2 = rep.pessimistic.sigma2_hat;
    S_hat = spectrum_from_psd(
        N, [&](double f) { return ou_psd_wiener_limit(s2, f); });
  }
  const CutoffResult cut = find_cutoff(P, S_hat);
  rep.cutoff_index = cut.index;
  rep.cutoff_found = cut.found;

  if (!rep.mle_degenerate && rep.mle.tau_kind != TauKind::none &&
      rep.pessimistic.sigma2_hat > 0.0) {
    rep.proximity = std::abs(rep.mle.sigma2_hat - rep.pessimistic.sigma2_hat) /
                    rep.pessimistic.sigma2_hat;
    rep.estimates_close = rep.proximity <= options.closeness;
  }

  if (!options.out_dir.empty()) {
    rep.spectrum_file = options.out_dir + "/spectrum.csv";
    rep.filtered_file = options.out_dir + "/filtered.csv";
    rep.report_file = options.out_dir + "/report.json";
    write_csv(P, rep.spectrum_file);
    const LogSeries filtered = cutoff_filter(logp, rep.cutoff_index);
    write_csv(filtered, rep.filtered_file);
    nlohmann::json j = rep;
    std::ofstream out(rep.report_file);
    if (!out) throw DataError("cannot write '" + rep.report_file + "'");
    out << j.dump(2) << '\n';
  }
  return rep;
}

}  // namespace lpplspec
