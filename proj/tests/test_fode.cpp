#include <catch2/catch.hpp>

#include <cmath>

#include "oracles.hpp"
#include "tfpm/analysis.hpp"
#include "tfpm/fode.hpp"
#include "tfpm/special_functions.hpp"

using namespace tfpm;

TEST_CASE("scalar fode basics") {
  SECTION("lambda = 0 freezes the initial value") {
    // each step returns the convex history combination, so only summation
    // roundoff separates the states from v0
    const FodeSolution s = solve_scalar_fode(0.5, 0.0, 2.0, 1.3, 0.1, 50);
    for (const double v : s.values) REQUIRE(v == Approx(1.3).margin(1e-13));
  }
  SECTION("initial value and stability bound") {
    const FodeSolution s = solve_scalar_fode(0.4, 1.0, 0.5, 2.0, 0.05, 200);
    REQUIRE(s.values[0] == 2.0);
    for (const double v : s.values) {
      REQUIRE(v > 0.0);
      REQUIRE(v <= 2.0 + 1e-14);
    }
  }
  SECTION("parameter validation") {
    CHECK_THROWS_AS(solve_scalar_fode(0.5, 1.0, 2.0, 0.0, 0.1, 10), InvalidParameterError);
    CHECK_THROWS_AS(solve_scalar_fode(0.5, -1.0, 2.0, 1.0, 0.1, 10), InvalidParameterError);
    CHECK_THROWS_AS(solve_scalar_fode(0.5, 1.0, 2.0, 1.0, -0.1, 10), InvalidParameterError);
    CHECK_THROWS_AS(solve_scalar_fode(1.0, 1.0, 2.0, 1.0, 0.1, 10), InvalidParameterError);
  }
}

TEST_CASE("linear fode converges to the Mittag-Leffler solution") {
  const double alpha = 0.5, lambda = 1.0;
  const double exact = mittag_leffler(alpha, -std::pow(1.0, alpha));
  double prev_err = 1.0;
  for (const double tau : {2e-2, 1e-2, 5e-3}) {
    const int steps = static_cast<int>(std::llround(1.0 / tau));
    const FodeSolution s = solve_scalar_fode(alpha, lambda, 1.0, 1.0, tau, steps);
    const double err = std::abs(s.values.back() - exact);
    REQUIRE(err < prev_err);
    prev_err = err;
  }
  REQUIRE(prev_err < 1e-3);
}

TEST_CASE("kilbas fode") {
  SECTION("beta = 0 reduces to the linear solver") {
    const FodeSolution lin = solve_scalar_fode(0.6, 0.8, 1.0, 1.0, 0.02, 100);
    const FodeSolution kil = solve_kilbas_fode(0.6, 0.0, 0.8, 1.0, 0.02, 100);
    for (size_t k = 0; k < lin.values.size(); ++k)
      REQUIRE(kil.values[k] == Approx(lin.values[k]).margin(1e-12));
  }
  SECTION("initial value is exact") {
    const FodeSolution s = solve_kilbas_fode(0.5, 0.5, 1.0, 2.5, 0.1, 10);
    REQUIRE(s.values[0] == 2.5);
  }
  SECTION("matches the Kilbas-Saigo series") {
    // D^a v = -t^b v with a = 1/2, b = -1/4: v(t) = E_{1/2,1/2,-1/2}(-t^{1/4}).
    const double alpha = 0.5, beta = -0.25;
    const FodeSolution s = solve_kilbas_fode(alpha, beta, 1.0, 1.0, 1e-3, 1000);
    const double series = kilbas_saigo(alpha, 1.0 + beta / alpha, beta / alpha, -1.0);
    REQUIRE(std::abs(s.values.back() - series) / series < 1e-2);
  }
  SECTION("beta bound enforced") {
    CHECK_THROWS_AS(solve_kilbas_fode(0.5, -0.6, 1.0, 1.0, 0.1, 10), InvalidParameterError);
  }
}

TEST_CASE("kilbas decay ratio stays bounded", "[slow]") {
  // E_{a,r,l}(-x) ~ 1/(1+cx): at large x the series is numerically hopeless,
  // so the discrete solver provides the values; with a = b = 1/2 the argument
  // is x = t and the run reaches x = 1e4 directly.
  const double alpha = 0.5, beta = 0.5;
  const FodeSolution s = solve_kilbas_fode(alpha, beta, 1.0, 1.0, 2.0, 5000);
  // fit c at t = 100 (log-middle of the window), then bound the ratio
  const int i100 = 50;
  const double c = (1.0 / s.values[i100] - 1.0) / s.times[i100];
  REQUIRE(c > 0.0);
  for (size_t k = 0; k < s.times.size(); ++k) {
    const double t = s.times[k];
    if (t < 10.0 || t > 1e4) continue;
    const double ratio = s.values[k] * (1.0 + c * t);
    REQUIRE(ratio > 1.0 / 3.0);
    REQUIRE(ratio < 3.0);
  }
}

TEST_CASE("fast diffusion does not extinguish, the classical ODE does") {
  const double m = 0.5, lambda = 1.0, v0 = 1.0;
  const FodeSolution s = solve_scalar_fode(0.5, lambda, m, v0, 0.05, 2000);  // t <= 100
  for (const double v : s.values) REQUIRE(v > 0.0);

  const double t_ext = std::pow(v0, 1.0 - m) / (lambda * (1.0 - m));  // = 2
  REQUIRE(classical_ode_value(m, lambda, v0, t_ext * 0.9) > 0.0);
  REQUIRE(classical_ode_value(m, lambda, v0, t_ext * 1.1) == 0.0);
  REQUIRE(classical_ode_value(m, lambda, v0, 50.0) == 0.0);
}

TEST_CASE("fractional decay exponent for fast diffusion", "[slow]") {
  // log-log slope of v over [1e2, 1e4] is -alpha/m = -1 for alpha = m = 1/2.
  const FodeSolution s = solve_scalar_fode(0.5, 1.0, 0.5, 1.0, 2.0, 5000);
  const SlopeFit fit = fit_decay_slope(s.times, s.values, 1e2, 1e4);
  REQUIRE(!fit.extinguished);
  REQUIRE(fit.slope == Approx(-1.0).margin(0.1));
}

TEST_CASE("classical versus fractional decay table", "[slow]") {
  // m > 1: classical rate t^{-1/(m-1)} against fractional t^{-alpha/m}.
  const double m = 3.0, alpha = 0.5;
  const FodeSolution frac = solve_scalar_fode(alpha, 1.0, m, 1.0, 2.0, 5000);
  const SlopeFit ffit = fit_decay_slope(frac.times, frac.values, 1e2, 1e4);
  std::vector<double> t, v;
  for (double tt = 1e2; tt <= 1e4; tt *= 1.2) {
    t.push_back(tt);
    v.push_back(classical_ode_value(m, 1.0, 1.0, tt));
  }
  const SlopeFit cfit = fit_decay_slope(t, v, 1e2, 1e4);
  REQUIRE(cfit.slope == Approx(-1.0 / (m - 1.0)).margin(0.02));
  REQUIRE(ffit.slope == Approx(-alpha / m).margin(0.04));
}

TEST_CASE("decay envelope") {
  CHECK(decay_envelope(0.3, 2.0, 0.0) == 1.0);
  CHECK(decay_envelope(0.5, 2.0, 1e4) == Approx(1.0 / 11.0).epsilon(1e-12));
  double prev = 1.0;
  for (double t = 0.1; t < 1e5; t *= 2.7) {
    const double e = decay_envelope(0.7, 1.5, t);
    REQUIRE(e < prev);
    prev = e;
  }
}

TEST_CASE("fitted envelope constants bracket the trajectory") {
  const FodeSolution s = solve_scalar_fode(0.6, 1.0, 2.0, 1.5, 0.1, 400);
  REQUIRE(s.envelope_c1 > 0.0);
  REQUIRE(s.envelope_c1 <= s.envelope_c2);
  for (size_t k = 0; k < s.times.size(); ++k) {
    const double env = decay_envelope(s.alpha, s.m, s.times[k]);
    REQUIRE(s.values[k] >= s.envelope_c1 * env - 1e-12);
    REQUIRE(s.values[k] <= s.envelope_c2 * env + 1e-12);
  }
}
