#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tfpm/spectral.hpp"

using namespace tfpm;

TEST_CASE("interval basis eigenvalues") {
  SECTION("Dirichlet Laplacian on (0, pi)") {
    const auto basis = build_interval_basis(M_PI, 3, 16, 1.0);
    CHECK(basis.eigenvalue(1) == Approx(1.0).margin(1e-13));
    CHECK(basis.eigenvalue(2) == Approx(4.0).margin(1e-12));
    CHECK(basis.eigenvalue(3) == Approx(9.0).margin(1e-12));
  }
  SECTION("unit interval") {
    const auto basis = build_interval_basis(1.0, 1, 8, 1.0);
    CHECK(basis.eigenvalue(1) == Approx(M_PI * M_PI).epsilon(1e-14));
  }
  SECTION("spectral fractional power") {
    const auto basis = build_interval_basis(M_PI, 2, 8, 0.4);
    CHECK(basis.eigenvalue(2) == Approx(1.7411011265922482).epsilon(1e-13));
  }
  SECTION("monotone and positive") {
    const auto basis = build_interval_basis(2.7, 40, 80, 0.6);
    REQUIRE(basis.eigenvalue(1) > 0.0);
    for (int k = 2; k <= 40; ++k) REQUIRE(basis.eigenvalue(k) > basis.eigenvalue(k - 1));
  }
}

TEST_CASE("interval basis construction errors") {
  CHECK_THROWS_AS(build_interval_basis(-1.0, 4, 8, 1.0), InvalidParameterError);
  CHECK_THROWS_AS(build_interval_basis(1.0, 0, 8, 1.0), InvalidParameterError);
  CHECK_THROWS_AS(build_interval_basis(1.0, 8, 4, 1.0), InvalidParameterError);
  CHECK_THROWS_AS(build_interval_basis(1.0, 4, 8, 0.0), InvalidParameterError);
  CHECK_THROWS_AS(build_interval_basis(1.0, 4, 8, 1.5), InvalidParameterError);
}

TEST_CASE("discrete orthonormality and first eigenfunction sign") {
  const auto basis = build_interval_basis(M_PI, 24, 96, 1.0);
  for (int j = 1; j <= 24; j += 5)
    for (int k = 1; k <= 24; k += 3) {
      double s = 0.0;
      for (int g = 0; g < basis.n_grid(); ++g) s += basis.phi(j, g) * basis.phi(k, g);
      s *= basis.dx();
      CHECK(s == Approx(j == k ? 1.0 : 0.0).margin(1e-12));
    }
  for (int g = 0; g < basis.n_grid(); ++g) REQUIRE(basis.phi(1, g) >= 0.0);
}

TEST_CASE("field transforms round trip") {
  const auto basis = build_interval_basis(2.0, 16, 48, 1.0);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  SECTION("analyze then synthesize is identity on the span") {
    std::vector<double> c(16);
    for (double& v : c) v = unif(rng);
    const auto vals = basis.synthesize(c);
    const auto back = basis.analyze(vals);
    for (int k = 0; k < 16; ++k) REQUIRE(back[k] == Approx(c[k]).margin(1e-13));
  }
  SECTION("zero coefficients give zero values") {
    Field f = Field::from_coeffs(std::vector<double>(16, 0.0));
    basis.ensure_values(f);
    for (double v : f.values) REQUIRE(v == 0.0);
  }
  SECTION("empty field rejected") {
    Field f;
    CHECK_THROWS_AS(basis.ensure_values(f), InvalidParameterError);
  }
}

TEST_CASE("apply_operator and apply_inverse") {
  const auto basis = build_interval_basis(M_PI, 8, 32, 1.0);

  SECTION("first eigenfunction is fixed by L when lambda_1 = 1") {
    std::vector<double> c(8, 0.0);
    c[0] = 1.0;
    const Field lf = basis.apply_operator(Field::from_coeffs(c));
    CHECK(lf.coeffs[0] == Approx(1.0).margin(1e-13));
    for (int k = 1; k < 8; ++k) CHECK(lf.coeffs[k] == 0.0);
  }
  SECTION("zero maps to zero") {
    const Field lf = basis.apply_operator(Field::from_coeffs(std::vector<double>(8, 0.0)));
    for (double v : lf.coeffs) REQUIRE(v == 0.0);
  }
  SECTION("linearity across two modes") {
    std::vector<double> c(8, 0.0);
    c[0] = 1.0;
    c[1] = 1.0;
    const Field lf = basis.apply_operator(Field::from_coeffs(c));
    CHECK(lf.coeffs[0] == Approx(1.0).margin(1e-12));
    CHECK(lf.coeffs[1] == Approx(4.0).margin(1e-12));
  }
  SECTION("inverse divides by the eigenvalue") {
    std::vector<double> c(8, 0.0);
    c[1] = 1.0;
    const Field lf = basis.apply_inverse(Field::from_coeffs(c));
    CHECK(lf.coeffs[1] == Approx(0.25).margin(1e-14));
  }
  SECTION("operator after inverse is the identity on the span") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    std::vector<double> c(8);
    for (double& v : c) v = unif(rng);
    const Field back = basis.apply_operator(basis.apply_inverse(Field::from_coeffs(c)));
    for (int k = 0; k < 8; ++k) REQUIRE(back.coeffs[k] == Approx(c[k]).margin(1e-12));
  }
  SECTION("dimension mismatch rejected") {
    CHECK_THROWS_AS(basis.apply_operator(Field::from_coeffs(std::vector<double>(5, 1.0))),
                    DimensionError);
  }
}

TEST_CASE("green kernel") {
  const auto basis = build_interval_basis(1.0, 32, 128, 1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.02, 0.98);

  SECTION("closed-form value at the center") {
    CHECK(basis.green_kernel(0.5, 0.5) == Approx(0.25).epsilon(1e-14));
  }
  SECTION("symmetry") {
    for (int i = 0; i < 50; ++i) {
      const double x = unif(rng), y = unif(rng);
      REQUIRE(basis.green_kernel(x, y) == Approx(basis.green_kernel(y, x)).margin(1e-15));
    }
  }
  SECTION("two-sided bounds on the unit interval") {
    // lower: G >= x(1-x) y(1-y); upper: G <= 1/4 everywhere, sharper than the
    // distance-power envelope (which is unbounded only once s < 1/2).
    for (int i = 0; i < 200; ++i) {
      const double x = unif(rng), y = unif(rng);
      const double g = basis.green_kernel(x, y);
      REQUIRE(g >= x * (1.0 - x) * y * (1.0 - y) - 1e-15);
      REQUIRE(g <= 0.25 + 1e-15);
    }
  }
  SECTION("spectral-sum branch stays symmetric") {
    const auto frac = build_interval_basis(1.0, 64, 256, 0.4);
    for (int i = 0; i < 20; ++i) {
      const double x = unif(rng), y = unif(rng);
      REQUIRE(frac.green_kernel(x, y) == Approx(frac.green_kernel(y, x)).margin(1e-15));
    }
    REQUIRE(frac.green_kernel(0.5, 0.5) > 0.0);
  }
  SECTION("points outside the domain rejected") {
    CHECK_THROWS_AS(basis.green_kernel(-0.1, 0.5), DomainError);
    CHECK_THROWS_AS(basis.green_kernel(0.5, 1.0), DomainError);
  }
}

TEST_CASE("norms") {
  const auto basis = build_interval_basis(M_PI, 16, 64, 1.0);
  std::vector<double> e1(16, 0.0);
  e1[0] = 1.0;
  Field phi1 = Field::from_coeffs(e1);

  SECTION("first eigenfunction") {
    const NormSet n = basis.norms(phi1, 2.0, 1.0);
    CHECK(n.hstar == Approx(1.0).margin(1e-12));    // lambda_1 = 1, unit L2 mass
    CHECK(n.h == Approx(1.0).margin(1e-12));
    CHECK(n.lp == Approx(1.0).margin(1e-12));       // p = 2
    CHECK(n.l1_phi1 == Approx(1.0).margin(1e-12));  // quadrature of Phi_1^2
  }
  SECTION("zero field") {
    const NormSet n = basis.norms(Field::from_coeffs(std::vector<double>(16, 0.0)), 3.0, 2.0);
    CHECK(n.lp == 0.0);
    CHECK(n.linf == 0.0);
    CHECK(n.l1_phi1 == 0.0);
    CHECK(n.h == 0.0);
    CHECK(n.hstar == 0.0);
    CHECK(n.energy == 0.0);
  }
  SECTION("invalid exponents rejected") {
    CHECK_THROWS_AS(basis.norms(phi1, 0.5, 1.0), InvalidParameterError);
    CHECK_THROWS_AS(basis.norms(phi1, 2.0, -1.0), InvalidParameterError);
  }
}

TEST_CASE("spectral domain invariants", "[property]") {
  const auto basis = build_interval_basis(M_PI, 32, 256, 1.0);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  SECTION("Parseval on the resolved span") {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> c(32);
      for (double& v : c) v = unif(rng);
      Field f = Field::from_coeffs(c);
      const double grid_l2 = basis.norms(f, 2.0, 1.0).lp;
      double coeff_l2 = 0.0;
      for (double v : c) coeff_l2 += v * v;
      REQUIRE(grid_l2 == Approx(std::sqrt(coeff_l2)).margin(1e-11));
    }
  }
  SECTION("weighted L1 controlled by the dual norm for nonnegative fields") {
    for (int trial = 0; trial < 20; ++trial) {
      Field f = Field::from_coeffs(oracles::positive_span_coeffs(rng, 32, 8, 1.0));
      basis.ensure_values(f);
      const NormSet n = basis.norms(f, 1.0, 1.0);
      REQUIRE(n.l1_phi1 <= std::sqrt(basis.eigenvalue(1)) * n.hstar + 1e-12);
    }
  }
  SECTION("inverse is bounded with constant 1/lambda_1 in the coefficient norm") {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> c(32);
      for (double& v : c) v = unif(rng);
      const Field inv = basis.apply_inverse(Field::from_coeffs(c));
      double nin = 0.0, nout = 0.0;
      for (int k = 0; k < 32; ++k) {
        nin += c[k] * c[k];
        nout += inv.coeffs[k] * inv.coeffs[k];
      }
      REQUIRE(std::sqrt(nout) <= std::sqrt(nin) / basis.eigenvalue(1) + 1e-14);
    }
  }
}
