#include <doctest.h>

#include <cmath>
#include <random>

#include "carbon/stack_model.hpp"
#include "oracles.hpp"

using namespace carbon;

namespace {

const StackParams ref{};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("bid stack closed form") {
  CHECK(bau_bid(ref, 0.0) == 0.0);
  CHECK(bau_bid(ref, 30000.0) == doctest::Approx(200.0).epsilon(1e-15));
  CHECK(bau_bid(ref, 15000.0) == doctest::Approx(200.0 * std::pow(0.5, 10)).epsilon(1e-14));
  CHECK(bau_bid(ref, 15000.0) == doctest::Approx(0.1953).epsilon(1e-3));
  CHECK_THROWS_AS(bau_bid(ref, -1.0), DomainError);
  CHECK_THROWS_AS(bau_bid(ref, 30000.5), DomainError);
}

TEST_CASE("marginal emissions closed form") {
  CHECK(marginal_emissions(ref, 0.0) == doctest::Approx(1.2));
  CHECK(marginal_emissions(ref, 30000.0) == doctest::Approx(0.4));
  CHECK(marginal_emissions(ref, 15000.0) == doctest::Approx(1.2 - 0.8 * std::pow(0.5, 0.4)));
  CHECK(marginal_emissions(ref, 15000.0) == doctest::Approx(0.5937).epsilon(1e-4));
  CHECK_THROWS_AS(marginal_emissions(ref, 40000.0), DomainError);
}

TEST_CASE("adjusted bid") {
  for (double x : {0.0, 1234.0, 15000.0, 29999.0}) CHECK(adjusted_bid(ref, 0.0, x) == bau_bid(ref, x));
  CHECK(adjusted_bid(ref, 100.0, 0.0) == doctest::Approx(120.0));
  CHECK(adjusted_bid(ref, 100.0, 30000.0) == doctest::Approx(240.0));
  CHECK_THROWS_AS(adjusted_bid(ref, -1.0, 10.0), DomainError);
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(ref.validate());
  auto broken = [](auto mutate) {
    StackParams p;
    mutate(p);
    return p;
  };
  CHECK_THROWS_AS(broken([](StackParams& p) { p.theta1 = 2.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](StackParams& p) { p.e_min = 0.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](StackParams& p) { p.e_min = 1.3; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](StackParams& p) { p.theta2 = 1.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](StackParams& p) { p.b_max = -1.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](StackParams& p) { p.kappa = 0.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(broken([](StackParams& p) { p.xi_max = 0.0; }).validate(), ConfigError);
}

TEST_CASE("active set at zero allowance price is [0, d]") {
  for (double d : {0.0, 1.0, 15000.0, 21000.0, 30000.0}) {
    const ActiveSet s = active_set(ref, 0.0, d);
    CHECK(s.lo == doctest::Approx(0.0));
    CHECK(s.hi == doctest::Approx(d));
  }
}

TEST_CASE("active set at zero demand sits at the minimizer") {
  for (double a : {0.0, 10.0, 100.0, 1000.0}) {
    const ActiveSet s = active_set(ref, a, 0.0);
    CHECK(s.measure() == 0.0);
    CHECK(s.lo == doctest::Approx(oracle::minimizer(ref, a)).epsilon(1e-6));
  }
}

TEST_CASE("active set agrees with the level bisection and the brute-force scan") {
  const ActiveSet s = active_set(ref, 100.0, 21000.0);
  CHECK(s.measure() == doctest::Approx(21000.0).epsilon(1e-12));
  REQUIRE(s.lo > 0.0);
  REQUIRE(s.hi < ref.xi_max);
  CHECK(adjusted_bid(ref, 100.0, s.lo) == doctest::Approx(adjusted_bid(ref, 100.0, s.hi)).epsilon(1e-9));

  const auto level = oracle::active_set_by_level(ref, 100.0, 21000.0);
  CHECK(std::abs(s.lo - level.lo) < 1e-6 * ref.xi_max);
  CHECK(std::abs(s.hi - level.hi) < 1e-6 * ref.xi_max);
  CHECK(electricity_price(ref, 100.0, 21000.0) == doctest::Approx(level.price).epsilon(1e-9));

  const auto [lo, hi] = oracle::active_set_by_scan(ref, 100.0, 21000.0);
  const double h = ref.xi_max / (1000000 - 1);
  CHECK(std::abs(s.lo - lo) < 3 * h);
  CHECK(std::abs(s.hi - hi) < 3 * h);
}

TEST_CASE("electricity price") {
  for (double d : {0.0, 5000.0, 21000.0}) CHECK(electricity_price(ref, 0.0, d) == doctest::Approx(bau_bid(ref, d)));
  CHECK(electricity_price(ref, 0.0, 30000.0) == doctest::Approx(200.0));
  const ActiveSet s = active_set(ref, 100.0, 21000.0);
  CHECK(electricity_price(ref, 100.0, 21000.0) == doctest::Approx(adjusted_bid(ref, 100.0, s.hi)));
}

TEST_CASE("emissions rate calibration constants") {
  CHECK(rel(emissions_rate(ref, 0.0, 30000.0), 1.6519e8) <= 5e-4);
  CHECK(rel(emissions_rate(ref, 0.0, 21000.0), 1.2961e8) <= 5e-4);
  CHECK(rel(bau_emissions_rate(ref, 30000.0), 1.6519e8) <= 5e-4);
  CHECK(rel(bau_emissions_rate(ref, 21000.0), 1.2961e8) <= 5e-4);
  CHECK(bau_emissions_rate(ref, 0.0) == 0.0);
  for (double a : {0.0, 50.0, 300.0}) CHECK(emissions_rate(ref, a, 0.0) == 0.0);
  CHECK(bau_emissions_rate(ref, 12345.0) == doctest::Approx(emissions_rate(ref, 0.0, 12345.0)).epsilon(1e-14));
  CHECK(bau_emissions_rate(ref, 21000.0) ==
        doctest::Approx(oracle::emissions_by_trapezoid(ref, 0.0, 21000.0)).epsilon(1e-7));
  CHECK_THROWS_AS(bau_emissions_rate(ref, -5.0), DomainError);
}

TEST_CASE("clipping keeps the measure when the candidate interval leaves the capacity range") {
  // At a very high carbon price the cleanest (highest-xi) units come first.
  const ActiveSet s = active_set(ref, 5000.0, 10000.0);
  CHECK(s.hi == doctest::Approx(ref.xi_max));
  CHECK(s.measure() == doctest::Approx(10000.0));
}

TEST_CASE("merit-order consistency: units inside the active set are cheaper than those outside") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.0, 300.0);
  std::uniform_real_distribution<double> ud(0.0, 30000.0);
  for (int n = 0; n < 200; ++n) {
    const double a = ua(rng);
    const double d = ud(rng);
    const ActiveSet s = active_set(ref, a, d);
    CHECK(std::abs(s.measure() - d) <= 1e-8 * ref.xi_max);
    double worst_inside = -INFINITY;
    double best_outside = INFINITY;
    for (int k = 0; k <= 400; ++k) {
      const double x = ref.xi_max * k / 400.0;
      const double v = adjusted_bid(ref, a, x);
      if (x > s.lo + 1e-6 && x < s.hi - 1e-6) worst_inside = std::max(worst_inside, v);
      if (x < s.lo - 1e-6 || x > s.hi + 1e-6) best_outside = std::min(best_outside, v);
    }
    CHECK(worst_inside <= best_outside + 1e-9 * std::max(1.0, std::abs(best_outside)));
  }
}

TEST_CASE("adjusted bid has a single stationary point") {
  for (double a : {0.0, 1.0, 50.0, 200.0, 1000.0}) {
    int sign_changes = 0;
    double prev = 0.0;
    for (int k = 1; k < 3000; ++k) {
      const double x = ref.xi_max * k / 3000.0;
      const double h = 1e-3;
      const double slope = adjusted_bid(ref, a, x + h) - adjusted_bid(ref, a, x - h);
      if (k > 1 && (slope > 0) != (prev > 0)) ++sign_changes;
      prev = slope;
    }
    CHECK(sign_changes <= 1);
  }
}

TEST_CASE("function stack matches the parametric closed forms") {
  const StackParams p = ref;
  const FunctionStack fs([p](double x) { return bau_bid(p, x); },
                         [p](double x) { return marginal_emissions(p, x); }, p.xi_max, p.kappa);
  const ParametricStack ps(p);
  for (double a : {0.0, 30.0, 100.0}) {
    CHECK(fs.adjusted_minimizer(a) == doctest::Approx(ps.adjusted_minimizer(a)).epsilon(1e-6));
    for (double d : {1000.0, 21000.0, 29000.0}) {
      CHECK(emissions_rate(fs, a, d) == doctest::Approx(emissions_rate(ps, a, d)).epsilon(1e-7));
    }
  }
  CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 3.0) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(golden_section_minimize([](double x) { return (x - 2.0) * (x - 2.0); }, 0.0, 5.0, 1e-9) ==
        doctest::Approx(2.0).epsilon(1e-8));
  CHECK(golden_section_minimize([](double x) { return x; }, 1.0, 5.0, 1e-9) == doctest::Approx(1.0));
}
