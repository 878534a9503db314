#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "ringks/beta_propagator.hpp"
#include "ringks/constants.hpp"
#include "ringks/grid.hpp"
#include "ringks/operator.hpp"

namespace ringks {

// Lowest eigenpairs of the Kohn-Sham operator K. Energies ascend and the
// orbitals are real with quadrature norm 1 (∫|φ|² dr = 1). The β-evolution
// generator is −K, so its eigenvalues are the negatives of these energies;
// e^{−βE} weights then decay for bound states.
struct Spectrum {
  Grid grid;
  std::vector<double> energies;
  Eigen::MatrixXd orbitals;  // column i holds φ_i on the nodes
  int count = 0;

  double diffusion_generator_eigenvalue(int i) const { return -energies[i]; }

  Profile orbital(int i) const {
    std::vector<double> v(orbitals.col(i).data(),
                          orbitals.col(i).data() + grid.n_points);
    return BasicProfile<double>{grid, ProfileKind::orbital, std::move(v)};
  }
};

inline Spectrum diagonalize(const Grid& g, const Profile& w,
                            const Constants& c, int n_eigs) {
  validate_constants(c);
  detail::check_same_grid(g, w.grid, "diagonalize");
  if (n_eigs < 1 || n_eigs > g.n_points)
    throw usage_error("diagonalize needs 1 <= n_eigs <= n_points");
  const auto k = kohn_sham_operator(g, w, c);
  const int n = g.n_points;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  if (g.boundary == Boundary::dirichlet) {
    // strictly tridiagonal: skip the Householder reduction
    Eigen::VectorXd diag(n), sub(n - 1);
    for (int i = 0; i < n; ++i) diag[i] = k.diag[i];
    for (int i = 0; i < n - 1; ++i) sub[i] = k.lower[i];
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  } else {
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) dense(i, i) = k.diag[i];
    for (int i = 0; i < n - 1; ++i) {
      dense(i + 1, i) = k.lower[i];
      dense(i, i + 1) = k.upper[i];
    }
    dense(0, n - 1) = k.corner_tr;
    dense(n - 1, 0) = k.corner_bl;
    solver.compute(dense);
  }
  if (solver.info() != Eigen::Success)
    throw numerical_error("eigensolve failed for a " + std::to_string(n) +
                          "-point operator");

  Spectrum s;
  s.grid = g;
  s.count = n_eigs;
  s.energies.assign(solver.eigenvalues().data(),
                    solver.eigenvalues().data() + n_eigs);
  s.orbitals = solver.eigenvectors().leftCols(n_eigs);
  const double scale = 1.0 / std::sqrt(g.spacing);
  for (int j = 0; j < n_eigs; ++j) {
    auto col = s.orbitals.col(j);
    // fix the arbitrary eigenvector sign: largest-magnitude entry positive
    int imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    col *= (col[imax] < 0.0 ? -scale : scale);
  }
  return s;
}

enum class TemperatureMode { finite_beta, zero_temperature };

struct Occupancy {
  double mu = 0.0;
  std::vector<double> occupations;
  double target_count = 0.0;
  TemperatureMode mode = TemperatureMode::finite_beta;
};

inline double fermi_dirac(double x) {
  // 1/(e^x + 1), safe against overflow on both sides
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (std::exp(x) + 1.0);
}

// Chemical potential by bisection so that Σ f(β(E_i − μ)) = N. Fermi tails
// beyond 50 thermal units are below double precision, which fixes the
// bracket.
inline Occupancy solve_occupancy(const Spectrum& s, const Constants& c,
                                 TemperatureMode mode) {
  validate_constants(c);
  const int count = s.count;
  const double n_target = static_cast<double>(c.n_particles);
  if (n_target > count)
    throw insufficient_spectrum_error(
        "need at least as many retained levels as particles");

  Occupancy occ;
  occ.mode = mode;
  occ.target_count = n_target;
  occ.occupations.assign(count, 0.0);

  if (mode == TemperatureMode::zero_temperature) {
    const int n_int = c.n_particles;
    for (int i = 0; i < n_int; ++i) occ.occupations[i] = 1.0;
    occ.mu = n_int < count
                 ? 0.5 * (s.energies[n_int - 1] + s.energies[n_int])
                 : s.energies[count - 1];
    return occ;
  }

  const double beta = c.beta;
  auto total = [&](double mu) {
    double sum = 0.0;
    for (int i = 0; i < count; ++i)
      sum += fermi_dirac(beta * (s.energies[i] - mu));
    return sum;
  };
  double lo = s.energies.front() - 50.0 / beta;
  double hi = s.energies.back() + 50.0 / beta;
  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < 500; ++it) {
    mu = 0.5 * (lo + hi);
    const double defect = total(mu) - n_target;
    if (std::abs(defect) <= 1e-12) break;
    (defect < 0.0 ? lo : hi) = mu;
  }
  occ.mu = mu;
  for (int i = 0; i < count; ++i)
    occ.occupations[i] = fermi_dirac(beta * (s.energies[i] - mu));

  if (count < s.grid.n_points) {
    const double tail = (s.grid.n_points - count) *
                        fermi_dirac(beta * (s.energies.back() - mu));
    if (tail >= 1e-12)
      throw insufficient_spectrum_error(
          "occupancy tail beyond the retained spectrum is too heavy");
  }
  return occ;
}

// n(r) = Σ f_i |φ_i(r)|²; integrates to Σ f_i exactly under the quadrature
// normalization of the orbitals.
inline Profile density_from_spectrum(const Spectrum& s, const Occupancy& occ) {
  if (static_cast<int>(occ.occupations.size()) != s.count)
    throw usage_error("occupancy was not built from this spectrum");
  const Grid& g = s.grid;
  std::vector<double> n(g.n_points, 0.0);
  for (int j = 0; j < s.count; ++j) {
    const double f = occ.occupations[j];
    if (f == 0.0) continue;
    for (int i = 0; i < g.n_points; ++i) {
      const double v = s.orbitals(i, j);
      n[i] += f * v * v;
    }
  }
  return make_density(g, std::move(n));
}

// Spectral reconstruction q(r0, r, β) = V·Σ φ_i(r0) φ_i(r) e^{−βE_i}; the
// cross-validation twin of the β-marched kernel. A truncated spectrum must
// carry no thermal weight in the dropped tail.
inline PropagatorMatrix propagator_from_spectrum(const Spectrum& s,
                                                 const Constants& c) {
  validate_constants(c);
  if (s.count < s.grid.n_points) {
    const double tail =
        std::exp(-c.beta * (s.energies.back() - s.energies.front()));
    if (!(tail < 1e-14))
      throw insufficient_spectrum_error(
          "retained spectrum too short: e^{-beta (E_last - E_1)} = " +
          std::to_string(tail));
  }
  PropagatorMatrix p;
  p.grid = s.grid;
  p.beta_current = c.beta;
  p.beta_steps = 0;
  Eigen::VectorXd weights(s.count);
  for (int i = 0; i < s.count; ++i)
    weights[i] = std::exp(-c.beta * s.energies[i]);
  p.entries = s.grid.volume() *
              (s.orbitals * weights.asDiagonal() * s.orbitals.transpose());
  return p;
}

}  // namespace ringks
