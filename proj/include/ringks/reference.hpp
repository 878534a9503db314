#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ringks/beta_propagator.hpp"
#include "ringks/constants.hpp"
#include "ringks/grid.hpp"
#include "ringks/potentials.hpp"

// Closed-form and brute-force references used to validate the solver
// modules. Everything in here is built from grid and potential types only
// and shares no propagation code with the marches it checks; the dense
// operator below is assembled locally on purpose.
namespace ringks::reference {

// Free-particle heat kernel q = V·√(m/2πħ²β)·Σ_k e^{−m(r−r0+kL)²/2ħ²β}.
// Periodic grids carry the image sum (truncated once a whole image falls
// below 1e-16); Dirichlet grids get the bare infinite-line Gaussian, valid
// while β ≪ m·d_wall²/ħ².
inline PropagatorMatrix free_kernel(const Grid& g, const Constants& c,
                                    double beta) {
  validate_constants(c);
  if (!(beta > 0.0)) throw usage_error("free_kernel needs beta > 0");
  const int n = g.n_points;
  const double width = 2.0 * c.hbar * c.hbar * beta / c.mass;
  const double pref = g.volume() / std::sqrt(M_PI * width);
  PropagatorMatrix p;
  p.grid = g;
  p.beta_current = beta;
  p.entries.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double s = g.nodes[i] - g.nodes[j];
      double sum = std::exp(-s * s / width);
      if (g.boundary == Boundary::periodic) {
        for (int k = 1;; ++k) {
          const double a = s + k * g.length;
          const double b = s - k * g.length;
          const double term = std::exp(-a * a / width) + std::exp(-b * b / width);
          sum += term;
          if (term < 1e-16) break;
        }
      }
      p.entries(j, i) = pref * sum;
    }
  return p;
}

// Imaginary-time harmonic-oscillator kernel (Mehler formula), written about
// an explicit trap center:
//   q = V·√(mω/2πħ sinh(ωħβ)) · e^{−mω[(x²+x0²)cosh(ωħβ) − 2xx0]/2ħ sinh(ωħβ)}.
inline PropagatorMatrix mehler_kernel(const Grid& g, const Constants& c,
                                      double omega, double beta,
                                      double center) {
  validate_constants(c);
  if (!(omega > 0.0) || !(beta > 0.0))
    throw usage_error("mehler_kernel needs omega > 0 and beta > 0");
  const int n = g.n_points;
  const double u = omega * c.hbar * beta;
  const double sh = std::sinh(u);
  const double ch = std::cosh(u);
  const double pref =
      g.volume() * std::sqrt(c.mass * omega / (2.0 * M_PI * c.hbar * sh));
  const double expo = c.mass * omega / (2.0 * c.hbar * sh);
  PropagatorMatrix p;
  p.grid = g;
  p.beta_current = beta;
  p.entries.resize(n, n);
  for (int j = 0; j < n; ++j) {
    const double x0 = g.nodes[j] - center;
    for (int i = 0; i < n; ++i) {
      const double x = g.nodes[i] - center;
      p.entries(j, i) =
          pref * std::exp(-expo * ((x * x + x0 * x0) * ch - 2.0 * x * x0));
    }
  }
  return p;
}

namespace detail {

inline Eigen::MatrixXd dense_operator(const Grid& g, const Profile& w,
                                      const Constants& c) {
  ringks::detail::check_same_grid(g, w.grid, "reference operator");
  const int n = g.n_points;
  const double t = c.hbar * c.hbar / (2.0 * c.mass * g.spacing * g.spacing);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    k(i, i) = 2.0 * t + w.values[i];
    if (i + 1 < n) {
      k(i, i + 1) = -t;
      k(i + 1, i) = -t;
    }
  }
  if (g.boundary == Boundary::periodic) {
    k(0, n - 1) += -t;
    k(n - 1, 0) += -t;
  }
  return k;
}

}  // namespace detail

// Exact thermal kernel (V/Δr)·e^{−βK} by full eigendecomposition of the
// dense discrete operator. An independent route for arbitrary fields; the
// O(n³) cost caps the grid at 512 points.
inline PropagatorMatrix brute_force_propagator(const Grid& g, const Profile& w,
                                               const Constants& c,
                                               double beta) {
  validate_constants(c);
  if (g.n_points > 512)
    throw usage_error("brute_force_propagator is capped at 512 points");
  if (beta < 0.0) throw usage_error("brute_force_propagator needs beta >= 0");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      detail::dense_operator(g, w, c));
  if (solver.info() != Eigen::Success)
    throw numerical_error("reference eigensolve failed");
  Eigen::VectorXd decay = (-beta * solver.eigenvalues().array()).exp();
  PropagatorMatrix p;
  p.grid = g;
  p.beta_current = beta;
  p.entries = (g.volume() / g.spacing) *
              (solver.eigenvectors() * decay.asDiagonal() *
               solver.eigenvectors().transpose());
  return p;
}

// Boltzmann density n_cl = N·e^{−βw} / ∫ e^{−βw} dr, the classical target of
// the ħ → 0 limit. The field is shifted by its minimum before
// exponentiation, which leaves the ratio unchanged.
inline Profile classical_density(const Grid& g, const Profile& w,
                                 const Constants& c) {
  validate_constants(c);
  ringks::detail::check_same_grid(g, w.grid, "classical_density");
  const double wmin = *std::min_element(w.values.begin(), w.values.end());
  std::vector<double> n(g.n_points);
  double norm = 0.0;
  for (int i = 0; i < g.n_points; ++i) {
    n[i] = std::exp(-c.beta * (w.values[i] - wmin));
    norm += n[i];
  }
  norm *= g.spacing;
  const double pref = c.n_particles / norm;
  for (double& v : n) v *= pref;
  return make_density(g, std::move(n));
}

namespace detail {

// Self-consistent density under a given single-field map; collapses to one
// evaluation when the field does not depend on the density.
template <class Map>
inline Profile fixed_point_density(const Grid& g, const PotentialSpec& spec,
                                   const Constants& c, Map&& density_of_field) {
  const double n0 = c.n_particles / g.volume();
  Profile density = make_density(g, std::vector<double>(g.n_points, n0));
  const int max_iter = spec.hartree ? 500 : 1;
  for (int iter = 0; iter < max_iter; ++iter) {
    Profile fresh = density_of_field(evaluate_field(spec, density));
    double change = 0.0;
    for (int i = 0; i < g.n_points; ++i)
      change += std::abs(fresh.values[i] - density.values[i]);
    change *= g.spacing / c.n_particles;
    if (!spec.hartree || change <= 1e-12) return fresh;
    for (int i = 0; i < g.n_points; ++i)
      density.values[i] = 0.5 * (density.values[i] + fresh.values[i]);
  }
  return density;
}

}  // namespace detail

// L1 distances between the quantum density and the Boltzmann density over a
// descending ħ sequence. As ħ shrinks the kernel loses its spread in the
// thermal coordinate and the sequence must fall monotonically.
inline std::vector<double> classical_limit_distances(
    const Grid& g, const PotentialSpec& spec, const Constants& c,
    const std::vector<double>& hbar_sequence) {
  validate_constants(c);
  validate_potential(spec);
  if (hbar_sequence.empty())
    throw usage_error("classical_limit_distances needs at least one hbar");
  for (std::size_t i = 0; i < hbar_sequence.size(); ++i) {
    if (!(hbar_sequence[i] > 0.0))
      throw usage_error("hbar values must be positive");
    if (i > 0 && !(hbar_sequence[i] < hbar_sequence[i - 1]))
      throw usage_error("hbar sequence must be strictly descending");
  }

  std::vector<double> distances;
  distances.reserve(hbar_sequence.size());
  for (double hb : hbar_sequence) {
    Constants cq = c;
    cq.hbar = hb;
    Profile quantum = detail::fixed_point_density(
        g, spec, cq, [&](const Profile& w) {
          return density_from_propagator(
              brute_force_propagator(g, w, cq, cq.beta), cq);
        });
    Profile classical = detail::fixed_point_density(
        g, spec, c,
        [&](const Profile& w) { return classical_density(g, w, c); });
    double dist = 0.0;
    for (int i = 0; i < g.n_points; ++i)
      dist += std::abs(quantum.values[i] - classical.values[i]);
    distances.push_back(dist * g.spacing);
  }
  return distances;
}

}  // namespace ringks::reference
