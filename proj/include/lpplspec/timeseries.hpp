#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "lpplspec/errors.hpp"
#include "lpplspec/format.hpp"

namespace lpplspec {

// Daily closing prices keyed by ISO date.  Time is the row index; calendar
// gaps (weekends, holidays) carry no meaning here.
struct PriceSeries {
  std::vector<std::string> dates;
  std::vector<double> closes;

  std::size_t size() const { return dates.size(); }
};

// Uniformly sampled real sequence: log-prices or noise values, t = 0..n-1.
struct LogSeries {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

struct LinearTrend {
  double intercept = 0.0;
  double slope = 0.0;
};

namespace detail {

inline bool valid_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (s[i] < '0' || s[i] > '9') return false;
  const int month = (s[5] - '0') * 10 + (s[6] - '0');
  const int day = (s[8] - '0') * 10 + (s[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace detail

// Reads `date,close` CSV.  Rows are sorted by date; duplicate dates and
// non-positive closes are errors (reported with their line number).
inline PriceSeries load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  if (detail::strip_cr(line) != "date,close")
    throw DataError(path + ":1: expected header 'date,close'");

  std::vector<std::pair<std::string, double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const std::string where = path + ":" + std::to_string(lineno);
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw DataError(where + ": expected exactly two fields");
    const std::string date = line.substr(0, comma);
    if (!detail::valid_iso_date(date))
      throw DataError(where + ": bad date '" + date + "' (want YYYY-MM-DD)");
    double close = 0.0;
    try {
      close = parse_double(line.substr(comma + 1), "close");
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    if (!std::isfinite(close) || close <= 0.0)
      throw DataError(where + ": close must be positive, got " +
                      line.substr(comma + 1));
    rows.emplace_back(date, close);
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].first == rows[i - 1].first)
      throw DataError(path + ": duplicate date '" + rows[i].first + "'");

  PriceSeries out;
  out.dates.reserve(rows.size());
  out.closes.reserve(rows.size());
  for (auto& r : rows) {
    out.dates.push_back(std::move(r.first));
    out.closes.push_back(r.second);
  }
  return out;
}

inline void write_csv(const PriceSeries& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "date,close\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    out << p.dates[i] << ',' << format_double(p.closes[i]) << '\n';
}

// Value series CSV (`t,value`): simulated noise, log-prices, filtered output.
inline void write_csv(const LogSeries& x, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "t,value\n";
  for (std::size_t t = 0; t < x.size(); ++t)
    out << t << ',' << format_double(x.values[t]) << '\n';
}

inline LogSeries load_values_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  if (detail::strip_cr(line) != "t,value")
    throw DataError(path + ":1: expected header 't,value'");
  LogSeries out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const std::string where = path + ":" + std::to_string(lineno);
    if (comma == std::string::npos)
      throw DataError(where + ": expected exactly two fields");
    double v = 0.0;
    try {
      v = parse_double(line.substr(comma + 1), "value");
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    if (!std::isfinite(v)) throw DataError(where + ": non-finite value");
    out.values.push_back(v);
  }
  return out;
}

inline LogSeries to_log_series(const PriceSeries& p) {
  LogSeries out;
  out.values.reserve(p.size());
  for (double c : p.closes) {
    if (c <= 0.0) throw DataError("to_log_series: non-positive close");
    out.values.push_back(std::log(c));
  }
  return out;
}

// Ordinary least squares of x against t = 0..n-1; returns the residual and
// the fitted line.
inline std::pair<LogSeries, LinearTrend> linear_detrend(const LogSeries& x) {
  const std::size_t n = x.size();
  if (n < 2) throw DataError("linear_detrend: need at least 2 samples");
  const double nn = static_cast<double>(n);
  const double t_mean = (nn - 1.0) / 2.0;
  double x_mean = 0.0;
  for (double v : x.values) x_mean += v;
  x_mean /= nn;
  double sxt = 0.0;
  double stt = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double dt = static_cast<double>(t) - t_mean;
    sxt += dt * (x.values[t] - x_mean);
    stt += dt * dt;
  }
  LinearTrend trend;
  trend.slope = sxt / stt;
  trend.intercept = x_mean - trend.slope * t_mean;
  LogSeries resid;
  resid.values.resize(n);
  for (std::size_t t = 0; t < n; ++t)
    resid.values[t] =
        x.values[t] - (trend.intercept + trend.slope * static_cast<double>(t));
  return {std::move(resid), trend};
}

}  // namespace lpplspec
