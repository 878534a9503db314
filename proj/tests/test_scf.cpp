#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "ringks/scf.hpp"

using namespace ringks;

namespace {

PotentialSpec harmonic_spec(double center) {
  PotentialSpec spec;
  spec.external = Harmonic{1.0, center};
  return spec;
}

}  // namespace

TEST_CASE("free energy formula on closed-form inputs") {
  const Grid g = build_grid(64, 10.0, Boundary::periodic);
  Constants c;
  c.beta = 1.0;
  const Profile n =
      make_density(g, std::vector<double>(g.n_points, 1.0 / g.length));
  const Profile w = make_field(g, std::vector<double>(g.n_points, 0.0));
  PotentialSpec none;

  // free particle: F = -ln Q with the analytic Q = V sqrt(m/2 pi hbar^2 beta)
  const double q_free = g.length / std::sqrt(2.0 * M_PI);
  REQUIRE(free_energy(n, w, q_free, none, c) ==
          Catch::Approx(-1.3836).margin(1e-3));

  // with w = 0 and U = 0 the formula is exactly -(N/beta) ln Q
  REQUIRE(free_energy(n, w, 2.0, none, c) ==
          Catch::Approx(-std::log(2.0)).margin(1e-14));

  REQUIRE_THROWS_AS(free_energy(n, w, 0.0, none, c), divergence_error);
  REQUIRE_THROWS_AS(free_energy(n, w, -1.0, none, c), divergence_error);
}

TEST_CASE("external-only problems are solved in one iteration") {
  const Grid g = build_grid(256, 16.0, Boundary::dirichlet);
  Constants c;
  c.beta = 1.0;
  for (Route route : {Route::diffusion, Route::spectral}) {
    SCFConfig cfg;
    cfg.route = route;
    cfg.beta_steps = 400;
    const SCFResult res = run_scf(g, harmonic_spec(8.0), c, cfg);
    REQUIRE(res.converged);
    REQUIRE(res.iterations == 1);
    REQUIRE(res.residual_history.size() == 1);
    REQUIRE(res.residual_history[0] <= 1e-15);
    REQUIRE(integrate(g, res.density) == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("harmonic self-consistent free energy matches the closed form") {
  const Grid g = build_grid(384, 20.0, Boundary::dirichlet);
  Constants c;
  c.beta = 1.0;
  SCFConfig cfg;
  cfg.route = Route::diffusion;
  cfg.beta_steps = 1000;
  const SCFResult res = run_scf(g, harmonic_spec(10.0), c, cfg);
  REQUIRE(res.free_energy == Catch::Approx(0.04132).margin(1e-3));
}

TEST_CASE("route=both reports the density discrepancy at the final field") {
  const Grid g = build_grid(256, 20.0, Boundary::dirichlet);
  Constants c;
  c.beta = 1.0;
  SCFConfig cfg;
  cfg.route = Route::both;
  cfg.beta_steps = 1500;
  const SCFResult res = run_scf(g, harmonic_spec(10.0), c, cfg);
  REQUIRE(res.route_discrepancy.has_value());
  REQUIRE(*res.route_discrepancy <= 1e-6);
}

TEST_CASE("interacting loop: normalization, symmetry, fixed-point consistency") {
  const Grid g = build_grid(96, 12.0, Boundary::dirichlet);
  Constants c;
  c.beta = 4.0;
  c.n_particles = 2;
  PotentialSpec spec = harmonic_spec(6.0);
  spec.hartree = HartreeTerm{1.0, 0.5};
  SCFConfig cfg;
  cfg.route = Route::spectral;
  cfg.occupancy = OccupancyMode::zero_temperature;
  cfg.n_eigs = 12;
  const SCFResult res = run_scf(g, spec, c, cfg);
  REQUIRE(res.converged);
  REQUIRE(res.residual_history.size() ==
          static_cast<std::size_t>(res.iterations));
  REQUIRE(res.residual_history.back() <= cfg.residual_tolerance);
  REQUIRE(integrate(g, res.density) == Catch::Approx(2.0).margin(1e-12));

  double parity = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    parity = std::max(parity, std::abs(res.density.values[i] -
                                       res.density.values[g.n_points - 1 - i]));
  REQUIRE(parity < 1e-10);

  // one more pass of the density map moves the answer by less than the
  // tolerance
  const Profile w = evaluate_field(spec, res.density);
  const Spectrum s = diagonalize(g, w, c, cfg.n_eigs);
  const Occupancy occ = solve_occupancy(s, c, TemperatureMode::zero_temperature);
  const Profile again = density_from_spectrum(s, occ);
  double change = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    change += std::abs(again.values[i] - res.density.values[i]);
  change *= g.spacing / c.n_particles;
  REQUIRE(change <= cfg.residual_tolerance);
}

TEST_CASE("a starved iteration budget reports non-convergence") {
  const Grid g = build_grid(64, 12.0, Boundary::dirichlet);
  Constants c;
  c.beta = 4.0;
  c.n_particles = 2;
  PotentialSpec spec = harmonic_spec(6.0);
  spec.hartree = HartreeTerm{1.0, 0.8};
  SCFConfig cfg;
  cfg.route = Route::spectral;
  cfg.occupancy = OccupancyMode::zero_temperature;
  cfg.n_eigs = 8;
  cfg.max_iterations = 3;
  cfg.residual_tolerance = 1e-14;
  const SCFResult res = run_scf(g, spec, c, cfg);
  REQUIRE_FALSE(res.converged);
  REQUIRE(res.iterations == 3);
  REQUIRE(res.residual_history.size() == 3);
  REQUIRE(std::isfinite(res.free_energy));
}

TEST_CASE("configuration contract") {
  SCFConfig bad_mixing;
  bad_mixing.mixing_fraction = 0.0;
  REQUIRE_THROWS_AS(validate_scf_config(bad_mixing), config_error);
  bad_mixing.mixing_fraction = 1.5;
  REQUIRE_THROWS_AS(validate_scf_config(bad_mixing), config_error);

  SCFConfig bad_occ;
  bad_occ.route = Route::diffusion;
  bad_occ.occupancy = OccupancyMode::fermi_dirac;
  REQUIRE_THROWS_AS(validate_scf_config(bad_occ), config_error);

  const Grid g = build_grid(16, 4.0, Boundary::dirichlet);
  Constants c;
  PotentialSpec driven = harmonic_spec(2.0);
  driven.drive = TimeDrive{};
  REQUIRE_THROWS_AS(run_scf(g, driven, c, SCFConfig{}), usage_error);
}
