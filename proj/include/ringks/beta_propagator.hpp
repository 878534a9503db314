#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "ringks/constants.hpp"
#include "ringks/grid.hpp"
#include "ringks/operator.hpp"
#include "ringks/tridiagonal.hpp"

namespace ringks {

// Dense thermal kernel q(r_j, r_i, β) = entries(j, i), evolved in the
// inverse-temperature coordinate. The β = 0 state is the discrete delta
// V·δ_{ij}/Δr, and the generator is self-adjoint, so the matrix stays real
// and symmetric along the march.
struct PropagatorMatrix {
  Grid grid;
  double beta_current = 0.0;
  int beta_steps = 0;
  Eigen::MatrixXd entries;
};

inline PropagatorMatrix initialize_propagator(const Grid& g,
                                              const Constants& c) {
  validate_constants(c);
  PropagatorMatrix p;
  p.grid = g;
  p.beta_current = 0.0;
  p.beta_steps = 0;
  p.entries = Eigen::MatrixXd::Zero(g.n_points, g.n_points);
  const double diag = g.volume() / g.spacing;
  for (int i = 0; i < g.n_points; ++i) p.entries(i, i) = diag;
  return p;
}

// Crank-Nicolson march of every column under ∂q/∂β = (ħ²/2m)∇²q − w·q,
// from the current β to c.beta in n_steps equal steps. The field is held
// fixed for the whole march (it is a functional of the target-β density).
inline PropagatorMatrix march_beta(PropagatorMatrix p, const Profile& w,
                                   const Constants& c, int n_steps) {
  validate_constants(c);
  detail::check_same_grid(p.grid, w.grid, "march_beta");
  if (w.kind != ProfileKind::field)
    throw usage_error("march_beta expects a field profile");
  if (n_steps < 1) throw usage_error("march_beta needs n_steps >= 1");
  if (!(c.beta > p.beta_current))
    throw usage_error("march target beta must exceed the current beta");

  const int n = p.grid.n_points;
  const double dbeta = (c.beta - p.beta_current) / n_steps;
  const auto k = kohn_sham_operator(p.grid, w, c);
  const auto forward = identity_plus_scaled(k, -0.5 * dbeta);
  const TridiagonalSolver<double> backward(
      identity_plus_scaled(k, +0.5 * dbeta));

  std::vector<double> tmp(n);
  for (int step = 0; step < n_steps; ++step) {
    double max_abs = 0.0;
    for (int col = 0; col < n; ++col) {
      double* column = p.entries.col(col).data();
      forward.apply(column, tmp.data());
      backward.solve_in_place(tmp.data());
      for (int i = 0; i < n; ++i) {
        column[i] = tmp[i];
        const double a = std::abs(tmp[i]);
        if (a > max_abs) max_abs = a;
      }
    }
    if (!(max_abs < 1e300))
      throw divergence_error("beta march diverged at step " +
                             std::to_string(step + 1) + " of " +
                             std::to_string(n_steps));
  }
  p.beta_current = c.beta;
  p.beta_steps += n_steps;
  return p;
}

// Q(β) = (1/V)·Δr·tr q.
inline double partition_function(const PropagatorMatrix& p) {
  return p.entries.trace() * p.grid.spacing / p.grid.volume();
}

// n(rᵢ) = (N/V)·q(rᵢ, rᵢ, β)/Q; integrates to N exactly by construction.
inline Profile density_from_propagator(const PropagatorMatrix& p,
                                       const Constants& c) {
  const double q = partition_function(p);
  if (!(q > 0.0))
    throw divergence_error("nonpositive partition function Q = " +
                           std::to_string(q));
  const Grid& g = p.grid;
  const double pref = c.n_particles / (g.volume() * q);
  std::vector<double> n(g.n_points);
  for (int i = 0; i < g.n_points; ++i) n[i] = pref * p.entries(i, i);
  return make_density(g, std::move(n));
}

}  // namespace ringks
