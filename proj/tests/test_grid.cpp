#include <doctest.h>

#include <cmath>
#include <vector>

#include "carbon/emissions_table.hpp"
#include "carbon/grid.hpp"

using namespace carbon;

TEST_CASE("grid spacing and nodes") {
  const Grid g = Grid::make(6, 100, 110, 30000.0, 1.6519e8, 1.0);
  CHECK(g.delta_d() == 5000.0);
  CHECK(g.n_e * g.delta_e() == doctest::Approx(g.e_max));
  CHECK(g.e(g.n_e) == g.e_max);
  CHECK(g.d(g.n_d) == g.xi_max);
  CHECK(g.t(g.n_t) == g.horizon);
  CHECK(g.size() == 7u * 101u);
  CHECK(g.index(1, 0) == 101u);
  CHECK(g.time_index(g.t(37)) == 37);
  CHECK_THROWS_AS(g.time_index(0.5 * g.delta_t()), DomainError);
  CHECK_THROWS_AS(Grid::make(1, 10, 10, 1.0, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(Grid::make(4, 10, 10, 1.0, -1.0, 1.0), ConfigError);
}

TEST_CASE("cap alignment puts every cap on an E node") {
  const double caps[] = {1.17e8};
  const double e_max = align_e_max(caps, 1.6519e8, 100);
  CHECK(e_max >= 1.6519e8);
  CHECK(e_max == doctest::Approx(1.17e8 * 100.0 / 70.0));
  for (int n_e : {100, 200, 400, 800}) {
    const Grid g = Grid::make(6, n_e, 1, 30000.0, e_max, 1.0);
    CHECK(g.on_e_node(1.17e8));
  }
  const double pair[] = {8e7, 8e7};
  const double e2 = align_e_max(pair, 1.6519e8, 200);
  CHECK(Grid::make(2, 200, 1, 1.0, e2, 1.0).on_e_node(8e7));
  CHECK(Grid::make(2, 200, 1, 1.0, e2, 1.0).on_e_node(1.6e8));
  const double clash[] = {1e8, 0.3e8 * M_PI};
  CHECK_THROWS_AS(align_e_max(clash, 1.6519e8, 10), ConfigError);
  const double none[] = {0.0};
  CHECK(align_e_max(none, 5.0, 10) == 5.0);
  // Already aligned stays put.
  const double exact[] = {1.0};
  CHECK(align_e_max(exact, 2.0, 10) == doctest::Approx(2.0));
}

TEST_CASE("bilinear interpolation") {
  const Grid g = Grid::make(2, 2, 1, 2.0, 2.0, 1.0);
  ValueSurface s(g, 0.0);
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j) s(i, j) = 10.0 * i + j * j;
  CHECK(interpolate(s, 1.0, 1.0) == s(1, 1));
  CHECK(interpolate(s, 2.0, 2.0) == s(2, 2));
  CHECK(interpolate(s, 0.5, 0.5) == doctest::Approx((s(0, 0) + s(0, 1) + s(1, 0) + s(1, 1)) / 4.0));
  CHECK(interpolate(s, 1.0, 5.0) == s(1, 2));
  CHECK_THROWS_AS(interpolate(s, -0.1, 0.0), DomainError);
  CHECK_THROWS_AS(interpolate(s, 0.0, -0.1), DomainError);
}

TEST_CASE("surface history lookup") {
  const Grid g = Grid::make(2, 2, 4, 1.0, 1.0, 1.0);
  SurfaceHistory h(g, 2);
  for (int k : {4, 2, 0}) {
    ValueSurface s(g, g.t(k));
    for (double& v : s.values) v = k;
    h.append(s);
  }
  h.finish();
  CHECK(h.front().time == 0.0);
  CHECK(h.back().time == 1.0);
  CHECK(h.at_or_below(0.3).time == 0.0);
  CHECK(h.at_or_below(0.5).time == 0.5);
  CHECK(h.at_or_below(0.74).time == 0.5);
  CHECK(h.exactly_at(0.5).values[0] == 2.0);
  CHECK_THROWS_AS(h.exactly_at(0.25), MissingAllowanceError);
  CHECK(h.evaluate(0.8, 0.5, 0.5) == 2.0);
  CHECK_THROWS_AS(h.at_or_below(-0.5), MissingAllowanceError);
}

TEST_CASE("emissions table reproduces exact rates on its lattice") {
  const StackParams p;
  const EmissionsTable t(p, 6, 100.0, 5);
  for (int i = 0; i <= 6; ++i) {
    const double d = p.xi_max * i / 6.0;
    for (int k = 0; k < 5; ++k) {
      const double a = 100.0 * k / 4.0;
      CHECK(t.at_node(i, a) == doctest::Approx(emissions_rate(p, a, d)).epsilon(1e-12));
      CHECK(t(a, d) == doctest::Approx(emissions_rate(p, a, d)).epsilon(1e-12));
    }
    CHECK(t.at_node(i, 500.0) == t.at_node(i, 100.0));
    CHECK(t.at_node(i, -3.0) == t.at_node(i, 0.0));
  }
  CHECK(t.max_rate() == doctest::Approx(bau_emissions_rate(p, p.xi_max)));
  const EmissionsTable c = EmissionsTable::constant(4, 10.0, 3.0);
  CHECK(c(17.0, 2.5) == 3.0);
}
