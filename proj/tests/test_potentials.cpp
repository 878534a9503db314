#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "ringks/potentials.hpp"

using namespace ringks;

namespace {

Profile delta_at(const Grid& g, int node) {
  std::vector<double> v(g.n_points, 0.0);
  v[node] = 1.0 / g.spacing;
  return make_density(g, v);
}

}  // namespace

TEST_CASE("evaluate_energy: empty, harmonic, hartree self-pair") {
  const Grid g = build_grid(100, 10.0, Boundary::periodic);

  PotentialSpec none;
  REQUIRE(evaluate_energy(none, delta_at(g, 13)) == 0.0);

  PotentialSpec harm;
  harm.external = Harmonic{1.0, 0.0};
  // node 20 sits at r = 2 exactly
  REQUIRE(g.nodes[20] == Catch::Approx(2.0));
  REQUIRE(evaluate_energy(harm, delta_at(g, 20)) ==
          Catch::Approx(2.0).margin(1e-12));

  PotentialSpec hart;
  hart.hartree = HartreeTerm{1.0, 1.0};
  REQUIRE(evaluate_energy(hart, delta_at(g, 0)) ==
          Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("evaluate_field: external only is density independent") {
  const Grid g = build_grid(64, 8.0, Boundary::dirichlet);
  PotentialSpec harm;
  harm.external = Harmonic{1.0, 0.0};
  const Profile w1 = evaluate_field(harm, delta_at(g, 5));
  const Profile w2 = evaluate_field(harm, delta_at(g, 50));
  for (int i = 0; i < g.n_points; ++i) {
    REQUIRE(w1.values[i] == Catch::Approx(0.5 * g.nodes[i] * g.nodes[i]));
    REQUIRE(w1.values[i] == w2.values[i]);
  }
  REQUIRE(w1.kind == ProfileKind::field);
}

TEST_CASE("evaluate_field: hartree of a point charge is the softened kernel") {
  const Grid g = build_grid(80, 8.0, Boundary::dirichlet);
  PotentialSpec spec;
  spec.hartree = HartreeTerm{1.0, 1.0};
  const int j = 17;
  const Profile w = evaluate_field(spec, delta_at(g, j));
  for (int i = 0; i < g.n_points; ++i) {
    const double x = g.nodes[i] - g.nodes[j];
    REQUIRE(w.values[i] == Catch::Approx(1.0 / std::sqrt(x * x + 1.0))
                               .margin(1e-13));
  }
}

TEST_CASE("hartree kernel is exactly symmetric") {
  const Grid g = build_grid(48, 5.0, Boundary::periodic);
  PotentialSpec spec;
  spec.hartree = HartreeTerm{0.7, 1.3};
  for (auto [a, b] : {std::pair{3, 40}, {0, 47}, {11, 12}}) {
    const double wab = evaluate_field(spec, delta_at(g, a)).values[b];
    const double wba = evaluate_field(spec, delta_at(g, b)).values[a];
    REQUIRE(wab == wba);
  }
}

TEST_CASE("time drive: sin(0) adds nothing, missing t is an error") {
  const Grid g = build_grid(32, 4.0, Boundary::dirichlet);
  PotentialSpec spec;
  spec.external = Harmonic{1.0, 0.0};
  spec.drive = TimeDrive{LinearRamp{1.0, 0.0}, SinusoidalEnvelope{2.0, 0.3}};
  const Profile n = delta_at(g, 7);

  REQUIRE_THROWS_AS(evaluate_field(spec, n), usage_error);

  const Profile w0 = evaluate_field(spec, n, 0.0);
  for (int i = 0; i < g.n_points; ++i)
    REQUIRE(w0.values[i] == Catch::Approx(0.5 * g.nodes[i] * g.nodes[i]));

  const double t = 0.4;
  const Profile wt = evaluate_field(spec, n, t);
  for (int i = 0; i < g.n_points; ++i)
    REQUIRE(wt.values[i] - w0.values[i] ==
            Catch::Approx(0.3 * std::sin(2.0 * t) * g.nodes[i]).margin(1e-13));
}

TEST_CASE("box well acts inside its band around the box center") {
  const Grid g = build_grid(100, 10.0, Boundary::dirichlet);
  PotentialSpec spec;
  spec.external = BoxWell{2.0, 3.0};
  const Profile w = evaluate_field(spec, delta_at(g, 1));
  for (int i = 0; i < g.n_points; ++i) {
    const bool inside = std::abs(g.nodes[i] - 5.0) <= 1.5;
    REQUIRE(w.values[i] == (inside ? -2.0 : 0.0));
  }
}

TEST_CASE("field is the functional derivative of the energy") {
  const Grid g = build_grid(60, 6.0, Boundary::periodic);
  PotentialSpec spec;
  spec.external = SoftenedCoulomb{-1.0, 0.8, 3.0};
  spec.hartree = HartreeTerm{1.1, 0.6};

  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> base(g.n_points), dir(g.n_points);
  for (auto& v : base) v = 0.2 + u(gen);
  for (auto& v : dir) v = u(gen) - 0.5;
  const Profile n = make_density(g, base);
  const Profile w = evaluate_field(spec, n);

  double w_dot_dn = 0.0;
  for (int i = 0; i < g.n_points; ++i) w_dot_dn += w.values[i] * dir[i];
  w_dot_dn *= g.spacing;

  for (double eps : {1e-4, 1e-5}) {
    std::vector<double> plus(g.n_points), minus(g.n_points);
    for (int i = 0; i < g.n_points; ++i) {
      plus[i] = base[i] + eps * dir[i];
      minus[i] = base[i] - eps * dir[i];
    }
    const double diff = (evaluate_energy(spec, make_density(g, plus)) -
                         evaluate_energy(spec, make_density(g, minus))) /
                        (2.0 * eps);
    REQUIRE(diff == Catch::Approx(w_dot_dn).epsilon(1e-6));
  }
}

TEST_CASE("potential validation rejects nonpositive softening") {
  PotentialSpec spec;
  spec.external = SoftenedCoulomb{-1.0, 0.0, 0.0};
  REQUIRE_THROWS_AS(validate_potential(spec), config_error);
  PotentialSpec hart;
  hart.hartree = HartreeTerm{-1.0, 1.0};
  REQUIRE_THROWS_AS(validate_potential(hart), config_error);
}
