#include <catch2/catch.hpp>

#include <cmath>

#include "oracles.hpp"
#include "tfpm/analysis.hpp"
#include "tfpm/profile.hpp"
#include "tfpm/special_functions.hpp"

using namespace tfpm;

namespace {

/// Galerkin residual restated through the public operators: coefficients of
/// L S^m minus coefficients of S.
double public_residual(const SpectralBasis& basis, const Field& s, double m) {
  std::vector<double> sm(basis.n_grid());
  for (int g = 0; g < basis.n_grid(); ++g)
    sm[g] = std::pow(std::max(s.values[g], 0.0), m);
  const Field lsm = basis.apply_operator(Field::from_values(std::move(sm)));
  double acc = 0.0;
  for (int j = 0; j < basis.n_modes(); ++j) {
    const double d = lsm.coeffs[j] - s.coeffs[j];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("elliptic profile solves the eigen-relation") {
  const auto basis = build_interval_basis(M_PI, 32, 128, 1.0);
  for (const double m : {0.5, 2.0, 3.0}) {
    const Field s = solve_elliptic_profile(basis, m, 1e-8);
    CHECK(public_residual(basis, s, m) < 1e-8);
    for (const double v : s.values) CHECK(v > -1e-10);
    const double defect = profile_symmetry_defect(basis, s);
    if (defect > 1e-8)
      WARN("profile for m = " << m << " asymmetric by " << defect);
  }
}

TEST_CASE("m = 1 profile is the first eigenfunction, and only with unit lambda_1") {
  const auto basis = build_interval_basis(M_PI, 16, 64, 1.0);
  const Field s = solve_elliptic_profile(basis, 1.0, 1e-10);
  REQUIRE(s.coeffs[0] == Approx(1.0).margin(1e-12));
  for (int k = 1; k < 16; ++k) REQUIRE(s.coeffs[k] == Approx(0.0).margin(1e-12));

  const auto unit = build_interval_basis(1.0, 16, 64, 1.0);  // lambda_1 = pi^2
  CHECK_THROWS_AS(solve_elliptic_profile(unit, 1.0, 1e-10), UnsupportedParameterError);
}

TEST_CASE("profile parameter validation") {
  const auto basis = build_interval_basis(M_PI, 16, 64, 0.3);  // m_crit = 0.4/1.6 = 0.25
  CHECK_THROWS_AS(solve_elliptic_profile(basis, 0.2, 1e-8), UnsupportedParameterError);
  CHECK_THROWS_AS(solve_elliptic_profile(basis, -1.0, 1e-8), InvalidParameterError);
  CHECK_THROWS_AS(solve_elliptic_profile(basis, 2.0, 0.0), InvalidParameterError);
}

TEST_CASE("profile boundary exponent", "[slow]") {
  // S ~ dist^{1/m} near the boundary (gamma = 1 for the spectral family).
  // Evaluated through V = L^{-1} S = S^m, whose truncated series converges
  // fast enough near the boundary to support the fit.
  const auto basis = build_interval_basis(M_PI, 256, 1024, 1.0);
  const double m = 2.0;
  const Field s = solve_elliptic_profile(basis, m, 1e-8);
  const Field v = basis.apply_inverse(s);
  std::vector<double> xs, ys;
  for (double x = 0.005; x <= 0.1; x *= 1.4) {
    double vx = 0.0;
    for (int k = 1; k <= basis.n_modes(); ++k)
      vx += v.coeffs[k - 1] * basis.eigenfunction(k, x);
    REQUIRE(vx > 0.0);
    xs.push_back(std::log(x));
    ys.push_back(std::log(std::pow(vx, 1.0 / m)));
  }
  const auto fit = tfpm::detail::fit_line(xs, ys);
  REQUIRE(fit.slope == Approx(1.0 / m).margin(0.1));
}

TEST_CASE("separable solution") {
  const auto basis = make_interval_basis(M_PI, 24, 96, 1.0);
  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.m = 2.0;
  cfg.tau = 1e-2;
  cfg.n_steps = 200;
  const Field s = solve_elliptic_profile(*basis, cfg.m, 1e-9);

  SECTION("state at t = 0 is F0 * S") {
    const Trajectory traj = separable_solution(s, 1.5, cfg, basis);
    for (int j = 0; j < basis->n_modes(); ++j)
      REQUIRE(traj.states[0].coeffs[j] == Approx(1.5 * s.coeffs[j]).margin(1e-14));
  }
  SECTION("m = 1 time factor is Mittag-Leffler") {
    SolverConfig lin = cfg;
    lin.m = 1.0;
    lin.tau = 1e-3;
    lin.n_steps = 1000;
    const Field phi1 = solve_elliptic_profile(*basis, 1.0, 1e-10);
    const Trajectory traj = separable_solution(phi1, 1.0, lin, basis);
    const double exact = mittag_leffler(0.5, -1.0);
    REQUIRE(traj.states.back().coeffs[0] == Approx(exact).epsilon(2e-3));
  }
  SECTION("full evolution stays on the separable ray") {
    const Trajectory ref = separable_solution(s, 1.0, cfg, basis);
    const Trajectory pde = evolve(ref.states[0], cfg, basis);
    double worst = 0.0;
    for (int k = 0; k <= cfg.n_steps; ++k) {
      double num = 0.0, den = 0.0;
      for (int g = 0; g < basis->n_grid(); ++g) {
        const double d = pde.states[k].values[g] - ref.states[k].values[g];
        num += d * d;
        den += ref.states[k].values[g] * ref.states[k].values[g];
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
    REQUIRE(worst < 1e-6);
  }
  SECTION("F0 must be positive") {
    CHECK_THROWS_AS(separable_solution(s, 0.0, cfg, basis), InvalidParameterError);
  }
}

TEST_CASE("harnack band") {
  const auto basis = make_interval_basis(M_PI, 24, 96, 1.0);
  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.m = 2.0;
  cfg.tau = 0.25;
  cfg.n_steps = 400;
  const Field s = solve_elliptic_profile(*basis, cfg.m, 1e-9);

  SECTION("separable big data sits inside its own band") {
    const Trajectory traj = separable_solution(s, 2.0, cfg, basis);
    const HarnackBand band = harnack_band(traj, 1.0);
    REQUIRE(!band.degenerate);
    REQUIRE(band.violations == 0);
    REQUIRE(band.c0 > 0.0);
    REQUIRE(band.c0 <= band.c1);
  }
  SECTION("zero trajectory reports degenerate instead of asserting") {
    SolverConfig tiny = cfg;
    tiny.n_steps = 10;
    const Trajectory traj =
        evolve(Field::from_coeffs(std::vector<double>(24, 0.0)), tiny, basis);
    const HarnackBand band = harnack_band(traj, 1.0);
    REQUIRE(band.degenerate);
  }
}
