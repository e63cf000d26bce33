// Command-line surface for the library: simulation, spectra, estimation,
// de-noising, experiments, and the end-to-end analysis pipeline.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical degeneracy.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lpplspec/lpplspec.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDegenerate = 3;

// Thrown for degeneracies surfaced at the CLI layer (distinct from library
// DegenerateError only in where it originates).
struct CliDegenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_tau_flag(const std::string& s) {
  if (s == "infinite" || s == "inf")
    return std::numeric_limits<double>::infinity();
  return lpplspec::parse_double(s, "--tau");
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw lpplspec::DataError("cannot create directory '" + dir + "'");
}

// Every run logs its resolved configuration: to stdout always, and to
// run.json inside the output directory when one exists.
void log_config(const json& cfg, const std::string& out_dir) {
  std::cout << "resolved config: " << cfg.dump() << '\n';
  if (!out_dir.empty()) {
    std::ofstream f(out_dir + "/run.json");
    if (!f) throw lpplspec::DataError("cannot write '" + out_dir + "/run.json'");
    f << cfg.dump(2) << '\n';
  }
}

json tau_to_json(double tau) {
  if (std::isinf(tau)) return "infinite";
  return tau;
}

// Accepts either a price CSV (date,close) or a plain value CSV (t,value);
// prices are converted to their natural log.
lpplspec::LogSeries load_log_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lpplspec::DataError("cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  in.close();
  header = lpplspec::detail::strip_cr(header);
  if (header == "date,close")
    return lpplspec::to_log_series(lpplspec::load_csv(path));
  if (header == "t,value") return lpplspec::load_values_csv(path);
  throw lpplspec::DataError(path +
                            ":1: unrecognized header '" + header +
                            "' (expected 'date,close' or 't,value')");
}

// ---------------------------------------------------------------------------

int cmd_simulate_ou(const std::string& tau_text, double sigma, std::size_t n,
                    std::uint64_t seed, const std::string& out) {
  lpplspec::OuParams p;
  p.tau = parse_tau_flag(tau_text);
  p.sigma = sigma;
  ensure_dir(out);
  json cfg = {{"command", "simulate-ou"}, {"tau", tau_to_json(p.tau)},
              {"sigma", sigma},           {"n", n},
              {"seed", seed},             {"out", out}};
  log_config(cfg, out);
  const lpplspec::LogSeries nu = lpplspec::ou_simulate(p, n, {seed});
  lpplspec::write_csv(nu, out + "/series.csv");
  std::cout << "wrote " << out << "/series.csv (" << n << " values)\n";
  return kExitOk;
}

int cmd_simulate_lppl(const lpplspec::LpplParams& p, const std::string& out) {
  ensure_dir(out);
  json cfg = {{"command", "simulate-lppl"}, {"params", p}, {"out", out}};
  log_config(cfg, out);
  const lpplspec::LogSeries ell = lpplspec::lppl_series(p);
  lpplspec::write_csv(ell, out + "/series.csv");
  std::cout << "wrote " << out << "/series.csv (" << p.n << " values)\n";
  return kExitOk;
}

int cmd_spectrum(const std::string& input, const std::string& out) {
  const lpplspec::LogSeries x = load_log_input(input);
  ensure_dir(out);
  json cfg = {{"command", "spectrum"}, {"input", input}, {"out", out}};
  log_config(cfg, out);
  const lpplspec::Spectrum s = lpplspec::power_spectrum(x);
  lpplspec::write_csv(s, out + "/spectrum.csv");
  std::cout << "wrote " << out << "/spectrum.csv (" << s.bins() << " bins)\n";
  return kExitOk;
}

int cmd_estimate(const std::string& input, const std::string& method,
                 double alpha, bool allow_nonfinite, const std::string& out) {
  const lpplspec::LogSeries x = load_log_input(input);
  json cfg = {{"command", "estimate"},
              {"input", input},
              {"method", method},
              {"alpha", alpha},
              {"allow_nonfinite", allow_nonfinite}};
  if (!out.empty()) {
    ensure_dir(out);
    cfg["out"] = out;
  }
  log_config(cfg, out);

  lpplspec::NoiseEstimate est;
  if (method == "mle") {
    est = lpplspec::mle_from_prices(x);
  } else {
    const lpplspec::Spectrum P = lpplspec::power_spectrum(x);
    const std::size_t N = 2 * (x.size() - 1);
    est = lpplspec::pessimistic_sigma(
        P, lpplspec::BandScheme::build(alpha, N / 2));
  }
  json report;
  report["estimate"] = est;
  report["config"] = cfg;
  std::cout << report.dump(2) << '\n';
  if (!out.empty()) {
    std::ofstream f(out + "/report.json");
    if (!f) throw lpplspec::DataError("cannot write '" + out + "/report.json'");
    f << report.dump(2) << '\n';
  }
  if (method == "mle" && est.tau_kind == lpplspec::TauKind::none &&
      !allow_nonfinite)
    throw CliDegenerate(
        "no finite maximum-likelihood estimate (rerun with --allow-nonfinite "
        "to accept this outcome)");
  return kExitOk;
}

int cmd_denoise(const std::string& input, const std::string& method,
                const std::optional<std::string>& tau_text,
                const std::optional<double>& sigma,
                const std::optional<std::size_t>& cutoff_index, double alpha,
                const std::string& out) {
  const lpplspec::LogSeries x = load_log_input(input);
  const std::size_t N = 2 * (x.size() - 1);
  ensure_dir(out);
  json cfg = {{"command", "denoise"}, {"input", input},
              {"method", method},     {"alpha", alpha},
              {"out", out}};
  if (tau_text) cfg["tau"] = tau_to_json(parse_tau_flag(*tau_text));
  if (sigma) cfg["sigma"] = *sigma;
  if (cutoff_index) cfg["cutoff_index"] = *cutoff_index;
  log_config(cfg, out);

  if (tau_text.has_value() != sigma.has_value())
    throw lpplspec::DataError("--tau and --sigma must be given together");

  // Noise spectrum: theoretical when (tau, sigma) are supplied, otherwise
  // fitted from the data (maximum likelihood, falling back to the
  // pessimistic bound when no finite fit exists).
  lpplspec::Spectrum S_hat;
  std::string noise_source;
  if (tau_text) {
    lpplspec::OuParams p;
    p.tau = parse_tau_flag(*tau_text);
    p.sigma = *sigma;
    p.validate();
    if (p.wiener_limit()) {
      S_hat = lpplspec::spectrum_from_psd(N, [&](double f) {
        return lpplspec::ou_psd_wiener_limit(p.sigma * p.sigma, f);
      });
    } else {
      S_hat = lpplspec::spectrum_from_psd(
          N, [&](double f) { return lpplspec::ou_psd_discrete(p, f); });
    }
    noise_source = "theoretical";
  } else {
    lpplspec::NoiseEstimate est;
    bool use_mle = false;
    try {
      est = lpplspec::mle_from_prices(x);
      use_mle = est.tau_kind == lpplspec::TauKind::finite;
    } catch (const lpplspec::DegenerateError&) {
      use_mle = false;
    }
    if (use_mle) {
      lpplspec::OuParams p;
      p.tau = est.tau_hat;
      p.sigma = std::sqrt(std::max(est.sigma2_hat, 0.0));
      S_hat = lpplspec::spectrum_from_psd(
          N, [&](double f) { return lpplspec::ou_psd_discrete(p, f); });
      noise_source = "mle";
    } else {
      const lpplspec::Spectrum P = lpplspec::power_spectrum(x);
      const lpplspec::NoiseEstimate pess = lpplspec::pessimistic_sigma(
          P, lpplspec::BandScheme::build(alpha, N / 2));
      S_hat = lpplspec::spectrum_from_psd(N, [&](double f) {
        return lpplspec::ou_psd_wiener_limit(pess.sigma2_hat, f);
      });
      noise_source = "pessimistic";
    }
  }

  const lpplspec::Spectrum P = lpplspec::power_spectrum(x);
  lpplspec::FilterSpec spec;
  if (method == "wiener") {
    spec = lpplspec::wiener_spec(P, S_hat);
  } else {
    std::size_t idx;
    if (cutoff_index) {
      idx = *cutoff_index;
    } else {
      idx = lpplspec::find_cutoff(P, S_hat).index;
    }
    spec = lpplspec::cutoff_spec(idx, N);
  }
  const lpplspec::LogSeries filtered = lpplspec::apply_filter(spec, x);
  lpplspec::write_csv(filtered, out + "/filtered.csv");
  json fj = spec;
  fj["noise_source"] = noise_source;
  fj["config"] = cfg;
  std::ofstream f(out + "/filter.json");
  if (!f) throw lpplspec::DataError("cannot write '" + out + "/filter.json'");
  f << fj.dump(2) << '\n';
  std::cout << "wrote " << out << "/filtered.csv and " << out
            << "/filter.json\n";
  return kExitOk;
}

int cmd_experiment(const std::string& config_path,
                   const std::optional<std::uint64_t>& seed,
                   const std::optional<std::size_t>& n,
                   const std::optional<double>& alpha,
                   const std::optional<std::size_t>& replicates,
                   const std::optional<std::string>& out) {
  lpplspec::ExperimentConfig cfg = lpplspec::load_experiment_config(config_path);
  // Flags override the config file.
  if (seed) {
    cfg.seed = *seed;
    cfg.has_seed = true;
  }
  if (n) cfg.n = *n;
  if (alpha) cfg.alpha = *alpha;
  if (replicates) cfg.replicates = *replicates;
  if (out) cfg.outputs = *out;
  if (!cfg.has_seed)
    throw lpplspec::DataError(
        "experiment: no seed (set \"seed\" in the config or pass --seed)");
  ensure_dir(cfg.outputs);

  json resolved = {{"command", "experiment"}, {"config_file", config_path},
                   {"kind", cfg.kind},        {"name", cfg.name},
                   {"replicates", cfg.replicates},
                   {"seed", cfg.seed},        {"alpha", cfg.alpha},
                   {"outputs", cfg.outputs}};
  if (cfg.n > 0) resolved["n"] = cfg.n;
  log_config(resolved, cfg.outputs);

  if (cfg.kind == "tau-sweep") {
    const auto rows = lpplspec::run_tau_sweep(cfg);
    lpplspec::write_tau_sweep_csv(rows, cfg.outputs + "/table.csv");
    std::cout << "wrote " << cfg.outputs << "/table.csv (" << rows.size()
              << " rows)\n";
  } else if (cfg.kind == "pessimistic-demo") {
    const auto res = lpplspec::run_pessimistic_demo(cfg);
    lpplspec::write_pessimistic_demo(res, cfg.outputs);
    std::cout << "mean sigma2_hat = "
              << lpplspec::format_double(res.mean_sigma2_hat) << '\n';
  } else if (cfg.kind == "standin") {
    lpplspec::PriceSeries prices;
    if (cfg.standin_kind == "exp-wiener") {
      if (!cfg.has_ou) throw lpplspec::DataError("standin: missing ou block");
      prices = lpplspec::make_exp_wiener_prices(cfg.n, cfg.log_p0, cfg.drift,
                                                cfg.ou.sigma, {cfg.seed});
    } else if (cfg.standin_kind == "lppl-ou") {
      if (!cfg.has_ou || !cfg.has_lppl)
        throw lpplspec::DataError("standin: missing lppl or ou block");
      prices = lpplspec::make_lppl_ou_prices(cfg.lppl, cfg.ou, {cfg.seed});
    } else {
      throw lpplspec::DataError("standin: unknown kind '" + cfg.standin_kind +
                                "'");
    }
    lpplspec::write_csv(prices, cfg.outputs + "/prices.csv");
    std::cout << "wrote " << cfg.outputs << "/prices.csv (" << prices.size()
              << " rows)\n";
  } else {
    throw lpplspec::DataError("experiment: unknown kind '" + cfg.kind + "'");
  }
  return kExitOk;
}

int cmd_analyze(const std::string& input, double alpha, double closeness,
                const std::string& out) {
  const lpplspec::PriceSeries prices = lpplspec::load_csv(input);
  ensure_dir(out);
  json cfg = {{"command", "analyze"},
              {"input", input},
              {"alpha", alpha},
              {"closeness", closeness},
              {"out", out}};
  log_config(cfg, out);
  lpplspec::AnalyzeOptions opt;
  opt.alpha = alpha;
  opt.closeness = closeness;
  opt.out_dir = out;
  const lpplspec::AnalysisReport rep = lpplspec::analyze_bubble(prices, opt);
  json j = rep;
  j["config"] = cfg;
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Frequency-domain analysis of log-periodic power-law price series "
      "under mean-reverting noise"};
  app.require_subcommand(1);

  // --- simulate-ou -------------------------------------------------------
  auto* sim_ou = app.add_subcommand(
      "simulate-ou", "Simulate Ornstein-Uhlenbeck noise (tau may be "
                     "'infinite' for the Wiener limit)");
  std::string ou_tau;
  double ou_sigma = 0.0;
  std::size_t ou_n = 0;
  std::uint64_t ou_seed = 0;
  std::string ou_out;
  sim_ou->add_option("--tau", ou_tau, "relaxation time (number or 'infinite')")
      ->required();
  sim_ou->add_option("--sigma", ou_sigma, "noise scale sigma")->required();
  sim_ou->add_option("--n", ou_n, "series length")->required();
  sim_ou->add_option("--seed", ou_seed, "RNG seed (mandatory)")->required();
  sim_ou->add_option("--out", ou_out, "output directory")->required();

  // --- simulate-lppl -----------------------------------------------------
  auto* sim_lppl = app.add_subcommand(
      "simulate-lppl", "Evaluate a log-periodic power-law trajectory");
  lpplspec::LpplParams lp;
  std::string lppl_out;
  sim_lppl->add_option("--A", lp.A, "level at the critical time")->required();
  sim_lppl->add_option("--B", lp.B, "power-law amplitude (>= 0)")->required();
  sim_lppl->add_option("--C", lp.C, "oscillation amplitude");
  sim_lppl->add_option("--m", lp.m, "power-law exponent in [0, 1]")
      ->required();
  sim_lppl->add_option("--omega", lp.omega, "log-periodic angular frequency");
  sim_lppl->add_option("--phi", lp.phi, "oscillation phase");
  sim_lppl->add_option("--T", lp.T, "critical time (> n - 1)")->required();
  sim_lppl->add_option("--n", lp.n, "series length")->required();
  sim_lppl->add_option("--out", lppl_out, "output directory")->required();

  // --- spectrum ----------------------------------------------------------
  auto* spec_cmd = app.add_subcommand(
      "spectrum", "Reflected amplitude/power spectrum of a series");
  std::string spec_input, spec_out;
  spec_cmd->add_option("--input", spec_input,
                       "CSV file (date,close or t,value)")
      ->required();
  spec_cmd->add_option("--out", spec_out, "output directory")->required();

  // --- estimate ----------------------------------------------------------
  auto* est_cmd =
      app.add_subcommand("estimate", "Estimate noise parameters from a series");
  std::string est_input, est_method, est_out;
  double est_alpha = 1.0;
  bool est_allow_nonfinite = false;
  est_cmd->add_option("--input", est_input, "CSV file (date,close or t,value)")
      ->required();
  est_cmd->add_option("--method", est_method, "estimator")
      ->required()
      ->check(CLI::IsMember({"mle", "pessimistic"}));
  est_cmd->add_option("--alpha", est_alpha,
                      "band growth factor (pessimistic)");
  est_cmd->add_flag("--allow-nonfinite", est_allow_nonfinite,
                    "exit 0 even when no finite MLE exists");
  est_cmd->add_option("--out", est_out, "output directory (optional)");

  // --- denoise -----------------------------------------------------------
  auto* den_cmd = app.add_subcommand("denoise", "Filter a series");
  std::string den_input, den_method, den_out;
  std::optional<std::string> den_tau;
  std::optional<double> den_sigma;
  std::optional<std::size_t> den_cutoff;
  double den_alpha = 1.0;
  den_cmd->add_option("--input", den_input, "CSV file (date,close or t,value)")
      ->required();
  den_cmd->add_option("--method", den_method, "filter kind")
      ->required()
      ->check(CLI::IsMember({"wiener", "cutoff"}));
  den_cmd->add_option("--tau", den_tau,
                      "noise relaxation time (number or 'infinite'); "
                      "with --sigma, uses the theoretical noise spectrum");
  den_cmd->add_option("--sigma", den_sigma, "noise scale sigma");
  den_cmd->add_option("--cutoff-index", den_cutoff,
                      "fixed cutoff bin (cutoff method only)");
  den_cmd->add_option("--alpha", den_alpha,
                      "band growth factor for the pessimistic fallback");
  den_cmd->add_option("--out", den_out, "output directory")->required();

  // --- experiment --------------------------------------------------------
  auto* exp_cmd =
      app.add_subcommand("experiment", "Run a config-driven experiment");
  std::string exp_config;
  std::optional<std::uint64_t> exp_seed;
  std::optional<std::size_t> exp_n, exp_replicates;
  std::optional<double> exp_alpha;
  std::optional<std::string> exp_out;
  exp_cmd->add_option("--config", exp_config, "experiment JSON config")
      ->required();
  exp_cmd->add_option("--seed", exp_seed, "RNG seed (overrides config)");
  exp_cmd->add_option("--n", exp_n, "series length (overrides config)");
  exp_cmd->add_option("--alpha", exp_alpha,
                      "band growth factor (overrides config)");
  exp_cmd->add_option("--replicates", exp_replicates,
                      "replicate count (overrides config)");
  exp_cmd->add_option("--out", exp_out, "output directory (overrides config)");

  // --- analyze -----------------------------------------------------------
  auto* ana_cmd = app.add_subcommand(
      "analyze", "Full pipeline: spectrum, both noise estimates, cutoff "
                 "filter, report");
  std::string ana_input, ana_out;
  double ana_alpha = 1.0, ana_closeness = 0.25;
  ana_cmd->add_option("--input", ana_input, "price CSV (date,close)")
      ->required();
  ana_cmd->add_option("--alpha", ana_alpha, "band growth factor");
  ana_cmd->add_option("--closeness", ana_closeness,
                      "relative proximity below which the two noise "
                      "estimates count as close");
  ana_cmd->add_option("--out", ana_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // help text, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sim_ou->parsed())
      return cmd_simulate_ou(ou_tau, ou_sigma, ou_n, ou_seed, ou_out);
    if (sim_lppl->parsed()) return cmd_simulate_lppl(lp, lppl_out);
    if (spec_cmd->parsed()) return cmd_spectrum(spec_input, spec_out);
    if (est_cmd->parsed())
      return cmd_estimate(est_input, est_method, est_alpha,
                          est_allow_nonfinite, est_out);
    if (den_cmd->parsed())
      return cmd_denoise(den_input, den_method, den_tau, den_sigma, den_cutoff,
                         den_alpha, den_out);
    if (exp_cmd->parsed())
      return cmd_experiment(exp_config, exp_seed, exp_n, exp_alpha,
                            exp_replicates, exp_out);
    if (ana_cmd->parsed())
      return cmd_analyze(ana_input, ana_alpha, ana_closeness, ana_out);
  } catch (const CliDegenerate& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const lpplspec::DegenerateError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const lpplspec::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
