#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ringks/beta_propagator.hpp"
#include "ringks/constants.hpp"
#include "ringks/grid.hpp"
#include "ringks/potentials.hpp"
#include "ringks/spectral.hpp"

namespace ringks {

enum class Route { diffusion, spectral, both };

// Statistics used to close the density map. The β-marched propagator
// realizes ring (Boltzmann) statistics; Fermi-Dirac and its zero-T limit are
// available through the spectral route only.
enum class OccupancyMode { boltzmann, fermi_dirac, zero_temperature };

struct SCFConfig {
  double mixing_fraction = 0.3;
  int max_iterations = 200;
  double residual_tolerance = 1e-8;
  Route route = Route::diffusion;
  OccupancyMode occupancy = OccupancyMode::boltzmann;
  int beta_steps = 1000;  // Crank-Nicolson resolution of the diffusion route
  int n_eigs = 0;         // retained eigenpairs for the spectral route; 0 = all
};

inline void validate_scf_config(const SCFConfig& cfg) {
  if (!(cfg.mixing_fraction > 0.0 && cfg.mixing_fraction <= 1.0))
    throw config_error("mixing fraction must lie in (0, 1]");
  if (cfg.max_iterations < 1)
    throw config_error("max_iterations must be positive");
  if (!(cfg.residual_tolerance > 0.0))
    throw config_error("residual tolerance must be positive");
  if (cfg.beta_steps < 1) throw config_error("beta_steps must be positive");
  if (cfg.n_eigs < 0) throw config_error("n_eigs must be nonnegative");
  if (cfg.route != Route::spectral && cfg.occupancy != OccupancyMode::boltzmann)
    throw config_error(
        "fermi occupancies need route=spectral; the diffusion route realizes "
        "ring statistics only");
}

struct SCFResult {
  Profile density;
  Profile field;
  double free_energy = 0.0;
  double partition = 0.0;
  int iterations = 0;
  std::vector<double> residual_history;
  bool converged = false;
  std::optional<double> route_discrepancy;  // filled when route = both
  std::optional<Spectrum> spectrum;         // filled by spectral routes
  std::optional<Occupancy> occupancy;       // filled by fermi occupancies
};

// F = −(N/β)·ln Q − ∫ w n dr + U[n].
inline double free_energy(const Profile& n, const Profile& w, double q,
                          const PotentialSpec& spec, const Constants& c) {
  if (!(q > 0.0))
    throw divergence_error("free energy needs a positive partition function");
  const Grid& g = n.grid;
  detail::check_same_grid(g, w.grid, "free_energy");
  double wn = 0.0;
  for (int i = 0; i < g.n_points; ++i) wn += w.values[i] * n.values[i];
  wn *= g.spacing;
  return -(c.n_particles / c.beta) * std::log(q) - wn + evaluate_energy(spec, n);
}

namespace detail {

struct DensityMapOutput {
  Profile density;
  double partition = 0.0;
  std::optional<Spectrum> spectrum;
  std::optional<Occupancy> occupancy;
};

inline DensityMapOutput diffusion_density(const Grid& g, const Profile& w,
                                          const Constants& c, int beta_steps) {
  auto p = march_beta(initialize_propagator(g, c), w, c, beta_steps);
  DensityMapOutput out{density_from_propagator(p, c), partition_function(p),
                       std::nullopt, std::nullopt};
  return out;
}

inline DensityMapOutput spectral_density(const Grid& g, const Profile& w,
                                         const Constants& c,
                                         OccupancyMode mode, int n_eigs) {
  const int count = n_eigs > 0 ? n_eigs : g.n_points;
  Spectrum s = diagonalize(g, w, c, count);
  DensityMapOutput out;
  if (mode == OccupancyMode::boltzmann) {
    auto p = propagator_from_spectrum(s, c);
    out.density = density_from_propagator(p, c);
    out.partition = partition_function(p);
  } else {
    const auto tmode = mode == OccupancyMode::zero_temperature
                           ? TemperatureMode::zero_temperature
                           : TemperatureMode::finite_beta;
    Occupancy occ = solve_occupancy(s, c, tmode);
    out.density = density_from_spectrum(s, occ);
    double q = 0.0;
    for (double e : s.energies) q += std::exp(-c.beta * e);
    out.partition = q;
    out.occupancy = std::move(occ);
  }
  out.spectrum = std::move(s);
  return out;
}

inline double linf_relative(const Profile& a, const Profile& b) {
  double diff = 0.0, scale = 0.0;
  for (int i = 0; i < a.grid.n_points; ++i) {
    diff = std::max(diff, std::abs(a.values[i] - b.values[i]));
    scale = std::max(scale, std::abs(b.values[i]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace detail

// Picard fixed-point loop over the stationarity conditions: density → field
// → fresh density, linearly mixed. Without a Hartree term the field does not
// depend on the density, so the first map output is the fixed point exactly
// and the loop is skipped. Non-convergence is reported, not thrown.
inline SCFResult run_scf(const Grid& g, const PotentialSpec& spec,
                         const Constants& c, const SCFConfig& cfg) {
  validate_constants(c);
  validate_potential(spec);
  validate_scf_config(cfg);
  if (spec.drive)
    throw usage_error("run_scf solves static problems; drop the time drive");

  auto apply_map = [&](const Profile& w) -> detail::DensityMapOutput {
    if (cfg.route == Route::spectral)
      return detail::spectral_density(g, w, c, cfg.occupancy, cfg.n_eigs);
    return detail::diffusion_density(g, w, c, cfg.beta_steps);
  };

  const double n0 = c.n_particles / g.volume();
  Profile density = make_density(g, std::vector<double>(g.n_points, n0));

  SCFResult result;
  if (!spec.hartree) {
    Profile w = evaluate_field(spec, density);
    auto out = apply_map(w);
    result.density = std::move(out.density);
    result.field = std::move(w);
    result.partition = out.partition;
    result.spectrum = std::move(out.spectrum);
    result.occupancy = std::move(out.occupancy);
    result.iterations = 1;
    result.residual_history = {0.0};
    result.converged = true;
  } else {
    const double inv_n = 1.0 / c.n_particles;
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
      Profile w = evaluate_field(spec, density);
      detail::DensityMapOutput out;
      try {
        out = apply_map(w);
      } catch (const divergence_error& e) {
        throw divergence_error("scf iteration " + std::to_string(iter) + ": " +
                               e.what());
      }
      double residual = 0.0;
      for (int i = 0; i < g.n_points; ++i)
        residual += std::abs(out.density.values[i] - density.values[i]);
      residual *= g.spacing * inv_n;
      result.residual_history.push_back(residual);
      result.iterations = iter;
      if (residual <= cfg.residual_tolerance) {
        result.converged = true;
        result.density = std::move(out.density);
        result.field = std::move(w);
        result.partition = out.partition;
        result.spectrum = std::move(out.spectrum);
        result.occupancy = std::move(out.occupancy);
        break;
      }
      for (int i = 0; i < g.n_points; ++i)
        density.values[i] = (1.0 - cfg.mixing_fraction) * density.values[i] +
                            cfg.mixing_fraction * out.density.values[i];
      if (iter == cfg.max_iterations) {
        result.density = std::move(out.density);
        result.field = std::move(w);
        result.partition = out.partition;
        result.spectrum = std::move(out.spectrum);
        result.occupancy = std::move(out.occupancy);
      }
    }
  }

  result.free_energy =
      free_energy(result.density, result.field, result.partition, spec, c);

  if (cfg.route == Route::both) {
    auto alt = detail::spectral_density(g, result.field, c,
                                        OccupancyMode::boltzmann, cfg.n_eigs);
    result.route_discrepancy = detail::linf_relative(result.density,
                                                     alt.density);
    if (!result.spectrum) result.spectrum = std::move(alt.spectrum);
  }
  return result;
}

}  // namespace ringks
