#include <doctest.h>

#include <cmath>

#include "carbon/market_dynamics.hpp"

using namespace carbon;

TEST_CASE("Jacobi drift") {
  const JacobiParams p;
  CHECK(drift(p, p.d_bar) == 0.0);
  CHECK(drift(p, 0.0) == doctest::Approx(2.1e5));
  CHECK(drift(p, 30000.0) == doctest::Approx(-9e4));
  CHECK_THROWS_AS(drift(p, -1.0), DomainError);
  CHECK_THROWS_AS(drift(p, 30001.0), DomainError);
}

TEST_CASE("Jacobi diffusion") {
  const JacobiParams p;
  CHECK(diffusion(p, 0.0) == 0.0);
  CHECK(diffusion(p, 30000.0) == 0.0);
  CHECK(diffusion(p, 15000.0) == doctest::Approx(15000.0).epsilon(1e-14));
  CHECK_THROWS_AS(diffusion(p, 40000.0), DomainError);
  for (int k = 0; k <= 300; ++k) {
    const double d = 30000.0 * k / 300.0;
    CHECK(diffusion_squared(p, d) == 2.0 * p.eta * p.sigma_bar * d * (p.xi_max - d));
    CHECK(diffusion_squared(p, d) == doctest::Approx(diffusion_squared(p, p.xi_max - d)).epsilon(1e-12));
  }
}

TEST_CASE("Fichera function on the boundary") {
  const JacobiParams p;
  CHECK(fichera(p, 0.0, 0.0, {1.0, 0.0}) == doctest::Approx(1.95e5));
  for (double d : {0.0, 10000.0, 30000.0}) {
    CHECK(fichera(p, d, 0.0, {0.0, 1.0}) >= 0.0);
    CHECK(fichera(p, d, 5e7, {0.0, 1.0}) >= 0.0);
    CHECK(fichera(p, d, 5e7, {0.0, -1.0}) < 0.0);
  }
  // D = xi_max with inward normal -1.
  CHECK(fichera(p, 30000.0, 0.0, {-1.0, 0.0}) == doctest::Approx(10.0 * (1500.0 - 9000.0) * -1.0));
}

TEST_CASE("validity report") {
  CHECK(validate(JacobiParams{}).ok());
  JacobiParams p;
  p.sigma_bar = 0.9;
  CHECK_FALSE(validate(p).ok());
  p = {};
  p.d_bar = p.xi_max;
  CHECK_FALSE(validate(p).ok());
  p = {};
  p.eta = 0.0;
  CHECK_FALSE(validate(p).ok());
  p = {};
  p.d0 = 0.0;
  const ValidityReport r = validate(p);
  CHECK(r.violations.size() == 1);
  CHECK(r.summary().find("d0") != std::string::npos);
  CHECK_THROWS_AS(require_valid(p), ConfigError);
  p = {};
  p.sigma_bar = 0.0;
  CHECK(validate(p).ok());
}

TEST_CASE("Fichera sign on the D faces matches the validity condition") {
  // Inward normals are +1 on D = 0 and -1 on D = xi_max.
  int valid = 0;
  int invalid = 0;
  for (double sigma : {0.01, 0.05, 0.1, 0.2, 0.3, 0.5}) {
    for (int k = 1; k < 1000; ++k) {
      JacobiParams p;
      p.sigma_bar = sigma;
      p.d_bar = p.xi_max * k / 1000.0;
      const bool nonnegative = fichera(p, 0.0, 0.0, {1.0, 0.0}) >= 0.0 &&
                               fichera(p, p.xi_max, 0.0, {-1.0, 0.0}) >= 0.0;
      CHECK(nonnegative == validate(p).ok());
      (nonnegative ? valid : invalid) += 1;
    }
  }
  CHECK(valid > 0);
  CHECK(invalid > 0);
}
