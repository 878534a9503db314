#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ringks/constants.hpp"
#include "ringks/grid.hpp"
#include "ringks/operator.hpp"
#include "ringks/potentials.hpp"
#include "ringks/spectral.hpp"
#include "ringks/tridiagonal.hpp"

namespace ringks {

// Real-time Kohn-Sham state: a set of complex orbitals with occupancies
// frozen at their initial values. Each Crank-Nicolson step is exactly
// unitary, so per-orbital norms are conserved to solver roundoff.
struct TDState {
  Grid grid;
  double time = 0.0;
  double dt = 0.0;
  std::vector<ComplexProfile> orbitals;
  std::vector<double> occupations;
};

inline TDState make_state(const Grid& g, std::vector<ComplexProfile> orbitals,
                          std::vector<double> occupations, double dt) {
  if (!(dt > 0.0)) throw usage_error("time step dt must be positive");
  if (orbitals.size() != occupations.size())
    throw usage_error("one occupation per orbital required");
  for (const auto& phi : orbitals)
    detail::check_same_grid(g, phi.grid, "make_state");
  TDState state;
  state.grid = g;
  state.dt = dt;
  state.orbitals = std::move(orbitals);
  state.occupations = std::move(occupations);
  return state;
}

// Embed a static spectrum as the t = 0 state.
inline TDState init_from_spectrum(const Spectrum& s, const Occupancy& occ,
                                  double dt) {
  if (!(dt > 0.0)) throw usage_error("time step dt must be positive");
  const int count =
      std::min<int>(s.count, static_cast<int>(occ.occupations.size()));
  std::vector<ComplexProfile> orbitals;
  std::vector<double> occupations;
  orbitals.reserve(count);
  for (int j = 0; j < count; ++j) {
    std::vector<std::complex<double>> v(s.grid.n_points);
    for (int i = 0; i < s.grid.n_points; ++i)
      v[i] = std::complex<double>(s.orbitals(i, j), 0.0);
    orbitals.push_back(
        BasicProfile<std::complex<double>>{s.grid, ProfileKind::orbital,
                                           std::move(v)});
    occupations.push_back(occ.occupations[j]);
  }
  return make_state(s.grid, std::move(orbitals), std::move(occupations), dt);
}

// n(r, t) = Σ f_i |φ_i(r, t)|²; real and nonnegative by construction.
inline Profile density_at_time(const TDState& state) {
  std::vector<double> n(state.grid.n_points, 0.0);
  for (std::size_t j = 0; j < state.orbitals.size(); ++j) {
    const double f = state.occupations[j];
    if (f == 0.0) continue;
    for (int i = 0; i < state.grid.n_points; ++i)
      n[i] += f * std::norm(state.orbitals[j].values[i]);
  }
  return make_density(state.grid, std::move(n));
}

namespace detail {

inline void crank_nicolson_step(std::vector<ComplexProfile>& orbitals,
                                const TridiagonalMatrix<double>& k,
                                double dt_over_hbar) {
  const std::complex<double> half(0.0, 0.5 * dt_over_hbar);
  const auto forward = identity_plus_scaled(k, -half);
  const TridiagonalSolver<std::complex<double>> backward(
      identity_plus_scaled(k, +half));
  std::vector<std::complex<double>> tmp(k.size());
  for (auto& phi : orbitals) {
    forward.apply(phi.values.data(), tmp.data());
    backward.solve_in_place(tmp.data());
    phi.values.swap(tmp);
  }
}

}  // namespace detail

// One Crank-Nicolson step of iħ ∂φ/∂t = Kφ with the field evaluated at the
// midpoint time. With a Hartree term the midpoint density comes from one
// predictor half-step under the old field (adiabatic approximation); the
// drive is always evaluated at t + dt/2. A negated dt steps backward and is
// the exact inverse of the forward step for static fields.
inline TDState step(TDState state, const PotentialSpec& spec,
                    const Constants& c) {
  validate_constants(c);
  validate_potential(spec);
  if (state.dt == 0.0) throw usage_error("state has no time step");
  const double t_mid = state.time + 0.5 * state.dt;
  const std::optional<double> t_arg =
      spec.drive ? std::optional<double>(t_mid) : std::nullopt;

  Profile n_now = density_at_time(state);
  Profile w_mid = evaluate_field(spec, n_now, t_arg);
  if (spec.hartree && !state.orbitals.empty()) {
    TDState half = state;
    detail::crank_nicolson_step(half.orbitals,
                                kohn_sham_operator(state.grid, w_mid, c),
                                0.5 * state.dt / c.hbar);
    w_mid = evaluate_field(spec, density_at_time(half), t_arg);
  }
  detail::crank_nicolson_step(state.orbitals,
                              kohn_sham_operator(state.grid, w_mid, c),
                              state.dt / c.hbar);
  state.time += state.dt;
  return state;
}

struct TDObservables {
  double norm_defect = 0.0;  // max_i |∫|φ_i|² dr − 1|
  double energy = 0.0;       // Σ f_i ⟨φ_i|K|φ_i⟩ with the instantaneous field
  double dipole = 0.0;       // ∫ (r − L/2) n dr, moment about the box center
};

inline TDObservables observables(const TDState& state,
                                 const PotentialSpec& spec,
                                 const Constants& c) {
  TDObservables obs;
  const Grid& g = state.grid;
  Profile n_now = density_at_time(state);
  const std::optional<double> t_arg =
      spec.drive ? std::optional<double>(state.time) : std::nullopt;
  const auto k =
      kohn_sham_operator(g, evaluate_field(spec, n_now, t_arg), c);
  for (std::size_t j = 0; j < state.orbitals.size(); ++j) {
    const auto& phi = state.orbitals[j];
    double norm = 0.0;
    for (const auto& v : phi.values) norm += std::norm(v);
    norm *= g.spacing;
    obs.norm_defect = std::max(obs.norm_defect, std::abs(norm - 1.0));
    obs.energy += state.occupations[j] * operator_expectation(k, g, phi);
  }
  const double mid = g.center();
  for (int i = 0; i < g.n_points; ++i)
    obs.dipole += (g.nodes[i] - mid) * n_now.values[i];
  obs.dipole *= g.spacing;
  return obs;
}

}  // namespace ringks
