#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "lpplspec/lpplspec.hpp"

using namespace lpplspec;

namespace {

// Tanh-sinh quadrature of f over [a, b]; handles endpoint derivative
// singularities like (T - t)^m near t = T.
template <typename F>
double tanh_sinh(F f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double h = 0.004;
  double acc = 0.0;
  for (double u = -4.0; u <= 4.0; u += h) {
    const double s = M_PI_2 * std::sinh(u);
    const double w = M_PI_2 * std::cosh(u) / std::pow(std::cosh(s), 2);
    const double t = mid + half * std::tanh(s);
    if (t <= a || t >= b) continue;
    acc += w * f(t);
  }
  return acc * half * h;
}

}  // namespace

TEST_CASE("linear special case evaluates exactly") {
  LpplParams p;
  p.A = 10.0;
  p.B = 0.01;
  p.C = 0.0;
  p.m = 1.0;
  p.T = 100.0;
  p.n = 50;
  REQUIRE(lppl_eval(p, 0.0) == Catch::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("B = 0 degenerates to a constant") {
  LpplParams p;
  p.A = 3.5;
  p.B = 0.0;
  p.C = 0.2;
  p.m = 0.5;
  p.omega = 1.0;
  p.T = 100.0;
  p.n = 20;
  const LogSeries s = lppl_series(p);
  for (double v : s.values) REQUIRE(v == 3.5);
}

TEST_CASE("bubble trajectory matches a high-precision oracle") {
  // Endpoints evaluated independently with 40-digit arithmetic.
  const LpplParams p = testutil::bubble_params();
  REQUIRE(lppl_eval(p, 0.0) ==
          Catch::Approx(2.1349974944967965931).epsilon(1e-12));
  REQUIRE(lppl_eval(p, 24999.0) ==
          Catch::Approx(9.3308350543822344141).epsilon(1e-12));
}

TEST_CASE("series equals pointwise evaluation") {
  const LpplParams p = testutil::bubble_params();
  LpplParams q = p;
  q.n = 200;
  const LogSeries s = lppl_series(q);
  REQUIRE(s.size() == 200);
  for (std::size_t t = 0; t < s.size(); ++t)
    REQUIRE(s.values[t] == lppl_eval(q, static_cast<double>(t)));
}

TEST_CASE("three-point linear series is collinear") {
  LpplParams p;
  p.A = 1.0;
  p.B = 0.1;
  p.C = 0.0;
  p.m = 1.0;
  p.T = 10.0;
  p.n = 3;
  const LogSeries s = lppl_series(p);
  REQUIRE(s.values[2] - 2.0 * s.values[1] + s.values[0] ==
          Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("affine case has vanishing second differences") {
  LpplParams p;
  p.A = 5.0;
  p.B = 0.03;
  p.C = 0.0;
  p.m = 1.0;
  p.T = 500.0;
  p.n = 100;
  const LogSeries s = lppl_series(p);
  for (std::size_t t = 2; t < s.size(); ++t) {
    const double d2 = s.values[t] - 2.0 * s.values[t - 1] + s.values[t - 2];
    REQUIRE(std::abs(d2) < 1e-12 * std::abs(s.values[t]));
  }
}

TEST_CASE("sub-linear exponents grow super-exponentially toward T") {
  LpplParams p;
  p.A = 5.0;
  p.B = 0.03;
  p.C = 0.0;
  p.m = 0.6;
  p.T = 500.0;
  p.n = 400;
  const LogSeries s = lppl_series(p);
  for (std::size_t t = 2; t < s.size(); ++t)
    REQUIRE(s.values[t] - s.values[t - 1] > s.values[t - 1] - s.values[t - 2]);
}

TEST_CASE("pure oscillation hits phase zero at the horizon") {
  const LpplParams p = testutil::oscillation_params();
  // Constructed so omega*ln(T) + phi = 11*pi: value -1 at t = 0.
  REQUIRE(lppl_eval(p, 0.0) == Catch::Approx(-1.0).margin(1e-11));
  // At t = n the oscillation phase is 0 mod 2*pi and the value returns to A.
  const double phase =
      p.omega * std::log(p.T - static_cast<double>(p.n)) + p.phi;
  REQUIRE(phase == Catch::Approx(0.0).margin(1e-9));
  REQUIRE(lppl_eval(p, static_cast<double>(p.n)) ==
          Catch::Approx(1.0).margin(1e-11));
  REQUIRE(p.pure_log_periodic());
}

TEST_CASE("evaluation rejects t at or beyond the critical time") {
  LpplParams p;
  p.A = 1.0;
  p.B = 0.1;
  p.m = 0.5;
  p.T = 10.0;
  p.n = 5;
  REQUIRE_THROWS_AS(lppl_eval(p, 10.0), DataError);
  REQUIRE_THROWS_AS(lppl_eval(p, 11.0), DataError);
  REQUIRE_THROWS_AS(lppl_eval(p, -1.0), DataError);
}

TEST_CASE("parameter validation") {
  LpplParams good;
  good.A = 1.0;
  good.B = 0.1;
  good.m = 0.5;
  good.T = 100.0;
  good.n = 50;
  REQUIRE_NOTHROW(good.validate());

  LpplParams p = good;
  p.B = -0.1;
  REQUIRE_THROWS_AS(p.validate(), DataError);
  p = good;
  p.m = 1.5;
  REQUIRE_THROWS_AS(p.validate(), DataError);
  p = good;
  p.m = -0.1;
  REQUIRE_THROWS_AS(p.validate(), DataError);
  p = good;
  p.T = 48.0;  // T must exceed n - 1
  REQUIRE_THROWS_AS(p.validate(), DataError);
  p = good;
  p.n = 1;
  REQUIRE_THROWS_AS(p.validate(), DataError);
  p = good;
  p.A = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(p.validate(), DataError);
}

TEST_CASE("normalized power law closed form at m = 1") {
  const LpplParams p = normalized_power_law(1.0, 100.0);
  REQUIRE(p.A == Catch::Approx(0.01).epsilon(1e-14));
  REQUIRE(p.B == Catch::Approx(0.0001).epsilon(1e-14));
  REQUIRE(p.C == 0.0);
  REQUIRE(lppl_eval(p, 0.0) == 0.0);  // exact by construction
}

TEST_CASE("normalized power law integrates to one half") {
  for (double m : {1.0, 0.7, 0.3}) {
    const double T = 1000.0;
    const LpplParams p = normalized_power_law(m, T);
    REQUIRE(lppl_eval(p, 0.0) == 0.0);
    const double integral =
        tanh_sinh([&](double t) { return lppl_eval(p, t); }, 0.0, T);
    REQUIRE(integral == Catch::Approx(0.5).margin(1e-6));
  }
}

TEST_CASE("normalized power law peak grows as m shrinks (delta limit)") {
  double prev = 0.0;
  for (double m : {0.5, 0.1, 0.01}) {
    const LpplParams p = normalized_power_law(m, 25000.0);
    const LogSeries s = lppl_series(p);
    double peak = 0.0;
    for (double v : s.values) peak = std::max(peak, std::abs(v));
    REQUIRE(peak > prev);
    prev = peak;
  }
}

TEST_CASE("normalized power law rejects bad arguments") {
  REQUIRE_THROWS_AS(normalized_power_law(0.0, 100.0), DataError);
  REQUIRE_THROWS_AS(normalized_power_law(1.5, 100.0), DataError);
  REQUIRE_THROWS_AS(normalized_power_law(0.5, 0.0), DataError);
}

TEST_CASE("fm band closed form") {
  LpplParams p;
  p.A = 1.0;
  p.B = 1.0;
  p.C = -1.0;
  p.m = 0.0;
  p.omega = 2.0 * M_PI;
  p.T = 2000.0;
  p.n = 1000;
  const FmBand band = fm_band(p);
  REQUIRE(band.f_min == Catch::Approx(1.0 / 2000.0).epsilon(1e-14));
  REQUIRE(band.f_max == Catch::Approx(1.0 / 1000.0).epsilon(1e-14));
  REQUIRE_FALSE(band.clipped);
}

TEST_CASE("fm band on the oscillation configuration matches the oracle") {
  const LpplParams p = testutil::oscillation_params();
  const FmBand band = fm_band(p);
  REQUIRE(band.f_min ==
          Catch::Approx(5.8466308007609556044e-5).epsilon(1e-12));
  REQUIRE(band.f_max ==
          Catch::Approx(2.2872770398891929977e-3).epsilon(1e-12));
  REQUIRE_FALSE(band.clipped);
}

TEST_CASE("fm band clips at the Nyquist frequency") {
  LpplParams p;
  p.A = 0.0;
  p.B = 1.0;
  p.C = 1.0;
  p.m = 0.0;
  p.omega = 2.0 * M_PI;
  p.T = 1001.0;
  p.n = 1000;  // f_max = 1/(2*pi) * omega / 1 = 1 > 1/2
  const FmBand band = fm_band(p);
  REQUIRE(band.clipped);
  REQUIRE(band.f_max == 0.5);
  REQUIRE(band.f_min < band.f_max);
}

TEST_CASE("fm band rejects degenerate inputs") {
  LpplParams p = testutil::oscillation_params();
  p.omega = 0.0;
  REQUIRE_THROWS_AS(fm_band(p), DataError);
  p = testutil::oscillation_params();
  p.T = static_cast<double>(p.n);  // T must exceed n for a finite band
  REQUIRE_THROWS_AS(fm_band(p), DataError);
}

TEST_CASE("parameters round-trip through JSON") {
  const LpplParams p = testutil::bubble_params();
  nlohmann::json j = p;
  REQUIRE(j["omega"] == p.omega);
  REQUIRE(j["n"] == p.n);
  const LpplParams back = j.get<LpplParams>();
  REQUIRE(back.A == p.A);
  REQUIRE(back.B == p.B);
  REQUIRE(back.C == p.C);
  REQUIRE(back.m == p.m);
  REQUIRE(back.omega == p.omega);
  REQUIRE(back.phi == p.phi);
  REQUIRE(back.T == p.T);
  REQUIRE(back.n == p.n);
}
