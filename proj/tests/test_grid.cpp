#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "ringks/grid.hpp"

using namespace ringks;

TEST_CASE("build_grid places nodes and spacing") {
  const Grid gp = build_grid(4, 1.0, Boundary::periodic);
  REQUIRE(gp.spacing == Catch::Approx(0.25));
  REQUIRE(gp.nodes == std::vector<double>{0.0, 0.25, 0.5, 0.75});

  const Grid gd = build_grid(3, 1.0, Boundary::dirichlet);
  REQUIRE(gd.spacing == Catch::Approx(0.25));
  REQUIRE(gd.nodes == std::vector<double>{0.25, 0.5, 0.75});

  REQUIRE_THROWS_AS(build_grid(2, 1.0, Boundary::periodic), config_error);
  REQUIRE_THROWS_AS(build_grid(16, -1.0, Boundary::periodic), config_error);
  REQUIRE_THROWS_AS(build_grid(16, 0.0, Boundary::dirichlet), config_error);
}

TEST_CASE("nodes increase strictly and quadrature measures the box") {
  for (auto bc : {Boundary::periodic, Boundary::dirichlet}) {
    const Grid g = build_grid(200, 7.5, bc);
    for (int i = 1; i < g.n_points; ++i)
      REQUIRE(g.nodes[i] > g.nodes[i - 1]);
    const Profile one = make_field(g, std::vector<double>(g.n_points, 1.0));
    const double measure = integrate(g, one);
    if (bc == Boundary::periodic)
      REQUIRE(measure == Catch::Approx(7.5).margin(1e-12));
    else  // n/(n+1) of the box; approaches the length as n grows
      REQUIRE(measure == Catch::Approx(7.5 * 200.0 / 201.0).margin(1e-12));
  }
}

TEST_CASE("integrate: constants, linearity, discrete delta") {
  const Grid g = build_grid(100, 10.0, Boundary::periodic);
  REQUIRE(integrate(g, make_field(g, std::vector<double>(100, 1.0))) ==
          Catch::Approx(10.0).margin(1e-13));
  const Grid g5 = build_grid(50, 5.0, Boundary::periodic);
  REQUIRE(integrate(g5, make_field(g5, std::vector<double>(50, 2.0))) ==
          Catch::Approx(10.0).margin(1e-13));

  std::vector<double> delta(100, 0.0);
  delta[37] = 1.0 / g.spacing;
  REQUIRE(integrate(g, make_density(g, delta)) ==
          Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("laplacian: constant, plane wave, linear profile") {
  const Grid g = build_grid(128, 4.0, Boundary::periodic);
  const auto zero = laplacian_apply(
      g, make_field(g, std::vector<double>(g.n_points, 3.7)));
  for (double v : zero.values) REQUIRE(std::abs(v) < 1e-11);

  std::vector<double> wave(g.n_points);
  const double kx = 2.0 * M_PI / g.length;
  for (int i = 0; i < g.n_points; ++i) wave[i] = std::sin(kx * g.nodes[i]);
  const Profile p = make_field(g, wave);
  const auto lap = laplacian_apply(g, p);
  double max_err = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    max_err = std::max(max_err,
                       std::abs(lap.values[i] + kx * kx * p.values[i]));
  // second-order stencil: error O(dr^2) relative to the k^2 eigenvalue
  REQUIRE(max_err < kx * kx * kx * kx * g.spacing * g.spacing);

  const Grid gd = build_grid(64, 2.0, Boundary::dirichlet);
  std::vector<double> lin(gd.n_points);
  for (int i = 0; i < gd.n_points; ++i) lin[i] = 0.3 * gd.nodes[i];
  const auto lap_lin = laplacian_apply(gd, make_field(gd, lin));
  for (int i = 0; i < gd.n_points - 1; ++i)  // exact except at the far wall
    REQUIRE(std::abs(lap_lin.values[i]) < 1e-10);
}

TEST_CASE("laplacian is linear and symmetric under the quadrature product") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto bc : {Boundary::periodic, Boundary::dirichlet}) {
    const Grid g = build_grid(96, 3.0, bc);
    std::vector<double> pa(g.n_points), pb(g.n_points);
    for (auto& v : pa) v = u(gen);
    for (auto& v : pb) v = u(gen);
    const Profile a = make_field(g, pa);
    const Profile b = make_field(g, pb);

    std::vector<double> combo(g.n_points);
    for (int i = 0; i < g.n_points; ++i)
      combo[i] = 2.0 * pa[i] - 0.5 * pb[i];
    const auto lc = laplacian_apply(g, make_field(g, combo));
    const auto la = laplacian_apply(g, a);
    const auto lb = laplacian_apply(g, b);
    for (int i = 0; i < g.n_points; ++i)
      REQUIRE(lc.values[i] ==
              Catch::Approx(2.0 * la.values[i] - 0.5 * lb.values[i])
                  .margin(1e-9));

    const double lhs = inner_product(g, a, lb);
    const double rhs = inner_product(g, la, b);
    REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-12).margin(1e-12));
  }
}

TEST_CASE("profile construction and mismatch errors") {
  const Grid g = build_grid(16, 1.0, Boundary::periodic);
  const Grid other = build_grid(17, 1.0, Boundary::periodic);
  REQUIRE_THROWS_AS(make_field(g, std::vector<double>(5, 0.0)), usage_error);
  REQUIRE_THROWS_AS(make_density(g, std::vector<double>(16, -1e-6)),
                    numerical_error);
  const Profile p = make_field(g, std::vector<double>(16, 1.0));
  REQUIRE_THROWS_AS(laplacian_apply(other, p), grid_mismatch_error);
  REQUIRE_THROWS_AS(integrate(other, p), grid_mismatch_error);
}
