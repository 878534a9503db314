#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ringks/config.hpp"
#include "ringks/constants.hpp"
#include "ringks/errors.hpp"
#include "ringks/grid.hpp"
#include "ringks/reference.hpp"
#include "ringks/scf.hpp"
#include "ringks/spectral.hpp"
#include "ringks/tdks.hpp"

namespace ringks {

namespace run_detail {

// 17 significant digits in scientific notation round-trips doubles exactly,
// which is what makes reruns bit-identical.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

// Removes everything written so far unless the run finishes and disarms it.
class ArtifactGuard {
 public:
  ~ArtifactGuard() {
    if (armed_) {
      std::error_code ec;
      for (const auto& p : paths_) std::filesystem::remove(p, ec);
    }
  }
  void track(const std::filesystem::path& p) { paths_.push_back(p); }
  void disarm() { armed_ = false; }

 private:
  bool armed_ = true;
  std::vector<std::filesystem::path> paths_;
};

class CsvFile {
 public:
  CsvFile(ArtifactGuard& guard, const std::filesystem::path& path,
          const std::string& header)
      : out_(path) {
    if (!out_) throw config_error("cannot open output file " + path.string());
    guard.track(path);
    out_ << header << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

inline Spectrum report_spectrum(const SCFResult& result, const Grid& g,
                                const Constants& c, const SCFConfig& cfg) {
  if (result.spectrum) return *result.spectrum;
  const int count = cfg.n_eigs > 0 ? cfg.n_eigs : g.n_points;
  return diagonalize(g, result.field, c, count);
}

// Occupation column of spectrum.csv: Fermi factors when a chemical potential
// was solved, thermal (ring) weights N e^{−βE}/Σe^{−βE} otherwise.
inline std::vector<double> report_occupations(const SCFResult& result,
                                              const Spectrum& s,
                                              const Constants& c) {
  if (result.occupancy) {
    std::vector<double> occ = result.occupancy->occupations;
    occ.resize(s.count, 0.0);
    return occ;
  }
  std::vector<double> occ(s.count);
  double z = 0.0;
  for (int i = 0; i < s.count; ++i) {
    occ[i] = std::exp(-c.beta * (s.energies[i] - s.energies.front()));
    z += occ[i];
  }
  for (double& v : occ) v *= c.n_particles / z;
  return occ;
}

inline void write_profile_csv(ArtifactGuard& guard,
                              const std::filesystem::path& path,
                              const std::string& value_name, const Profile& p) {
  CsvFile csv(guard, path, "r," + value_name);
  for (int i = 0; i < p.grid.n_points; ++i)
    csv.row({fmt(p.grid.nodes[i]), fmt(p.values[i])});
}

inline const char* route_name(Route r) {
  switch (r) {
    case Route::diffusion: return "diffusion";
    case Route::spectral: return "spectral";
    default: return "both";
  }
}

inline const char* occupancy_name(OccupancyMode m) {
  switch (m) {
    case OccupancyMode::boltzmann: return "boltzmann";
    case OccupancyMode::fermi_dirac: return "fermi";
    default: return "zero_t";
  }
}

inline void run_static(const RunSpec& spec, const std::filesystem::path& out,
                       ArtifactGuard& guard) {
  const Grid g = build_grid(spec.grid_points, spec.grid_length, spec.boundary);
  const SCFResult result = run_scf(g, spec.potential, spec.constants, spec.scf);
  if (spec.require_convergence && !result.converged)
    throw non_convergence_error(
        "scf did not reach tolerance within " +
        std::to_string(spec.scf.max_iterations) + " iterations");

  write_profile_csv(guard, out / "density.csv", "n", result.density);
  write_profile_csv(guard, out / "field.csv", "w", result.field);

  const Spectrum s = report_spectrum(result, g, spec.constants, spec.scf);
  const std::vector<double> occ = report_occupations(result, s, spec.constants);
  {
    CsvFile csv(guard, out / "spectrum.csv", "index,energy,occupation");
    for (int i = 0; i < s.count; ++i)
      csv.row({std::to_string(i), fmt(s.energies[i]), fmt(occ[i])});
  }

  std::ofstream report(out / "report.txt");
  if (!report) throw config_error("cannot open report.txt for writing");
  guard.track(out / "report.txt");
  report << "static run\n";
  report << "grid: points=" << g.n_points << " length=" << fmt(g.length)
         << " spacing=" << fmt(g.spacing) << " boundary="
         << (g.boundary == Boundary::periodic ? "periodic" : "dirichlet")
         << "\n";
  report << "constants: hbar=" << fmt(spec.constants.hbar)
         << " mass=" << fmt(spec.constants.mass)
         << " beta=" << fmt(spec.constants.beta)
         << " particles=" << spec.constants.n_particles << "\n";
  report << "route: " << route_name(spec.scf.route)
         << "  occupancy: " << occupancy_name(spec.scf.occupancy) << "\n";
  report << "converged: " << (result.converged ? "yes" : "no")
         << "  iterations: " << result.iterations << "\n";
  report << "free energy F = " << fmt(result.free_energy) << "\n";
  report << "partition function Q(beta) = " << fmt(result.partition) << "\n";
  if (result.occupancy)
    report << "chemical potential mu = " << fmt(result.occupancy->mu) << "\n";
  if (result.route_discrepancy)
    report << "route discrepancy (Linf relative) = "
           << fmt(*result.route_discrepancy) << "\n";
  report << "residual history:\n";
  for (std::size_t i = 0; i < result.residual_history.size(); ++i)
    report << "  iteration " << i + 1 << ": "
           << fmt(result.residual_history[i]) << "\n";
}

inline void run_beta_sweep(const RunSpec& spec,
                           const std::filesystem::path& out,
                           ArtifactGuard& guard) {
  const Grid g = build_grid(spec.grid_points, spec.grid_length, spec.boundary);
  CsvFile csv(guard, out / "q_trace.csv", "beta,Q,F");
  for (int i = 0; i < spec.sweep.count; ++i) {
    Constants c = spec.constants;
    c.beta = spec.sweep.count == 1
                 ? spec.sweep.beta_min
                 : spec.sweep.beta_min +
                       (spec.sweep.beta_max - spec.sweep.beta_min) * i /
                           (spec.sweep.count - 1);
    const SCFResult r = run_scf(g, spec.potential, c, spec.scf);
    csv.row({fmt(c.beta), fmt(r.partition), fmt(r.free_energy)});
  }
}

inline void run_classical_limit(const RunSpec& spec,
                                const std::filesystem::path& out,
                                ArtifactGuard& guard) {
  const Grid g = build_grid(spec.grid_points, spec.grid_length, spec.boundary);
  const std::vector<double> distances = reference::classical_limit_distances(
      g, spec.potential, spec.constants, spec.classical.hbar_values);
  CsvFile csv(guard, out / "cylinder.csv", "hbar,l1_distance");
  for (std::size_t i = 0; i < distances.size(); ++i)
    csv.row({fmt(spec.classical.hbar_values[i]), fmt(distances[i])});
}

inline TDState displaced(TDState state, int nodes) {
  if (nodes == 0) return state;
  const int n = state.grid.n_points;
  for (auto& phi : state.orbitals) {
    std::vector<std::complex<double>> shifted(n, std::complex<double>(0.0));
    for (int i = 0; i < n; ++i) {
      const int j = i - nodes;
      if (state.grid.boundary == Boundary::periodic)
        shifted[i] = phi.values[((j % n) + n) % n];
      else if (j >= 0 && j < n)
        shifted[i] = phi.values[j];
    }
    phi.values = std::move(shifted);
  }
  return state;
}

inline void run_dynamics(const RunSpec& spec, const std::filesystem::path& out,
                         ArtifactGuard& guard) {
  const Grid g = build_grid(spec.grid_points, spec.grid_length, spec.boundary);
  PotentialSpec static_spec = spec.potential;
  static_spec.drive.reset();
  const SCFResult ground = run_scf(g, static_spec, spec.constants, spec.scf);
  if (spec.require_convergence && !ground.converged)
    throw non_convergence_error("scf preparation of the dynamics run stalled");

  const Spectrum s = report_spectrum(ground, g, spec.constants, spec.scf);
  Occupancy occ;
  if (ground.occupancy) {
    occ = *ground.occupancy;
    occ.occupations.resize(s.count, 0.0);
  } else {
    occ.mode = TemperatureMode::finite_beta;
    occ.mu = 0.0;
    occ.target_count = spec.constants.n_particles;
    occ.occupations = report_occupations(ground, s, spec.constants);
  }

  TDState state = displaced(init_from_spectrum(s, occ, spec.dynamics.dt),
                            spec.dynamics.displace_nodes);

  CsvFile traj(guard, out / "trajectory.csv", "step,t,norm_defect,energy,dipole");
  CsvFile snap(guard, out / "snapshots.csv", "step,t,r,n");
  auto record = [&](int stepno) {
    const TDObservables obs = observables(state, spec.potential, spec.constants);
    traj.row({std::to_string(stepno), fmt(state.time), fmt(obs.norm_defect),
              fmt(obs.energy), fmt(obs.dipole)});
    const Profile n_now = density_at_time(state);
    for (int i = 0; i < g.n_points; ++i)
      snap.row({std::to_string(stepno), fmt(state.time), fmt(g.nodes[i]),
                fmt(n_now.values[i])});
  };

  record(0);
  for (int k = 1; k <= spec.dynamics.steps; ++k) {
    try {
      state = step(std::move(state), spec.potential, spec.constants);
    } catch (const numerical_error& e) {
      throw numerical_error("dynamics step " + std::to_string(k) + ": " +
                            e.what());
    }
    if (k % spec.dynamics.record_every == 0 || k == spec.dynamics.steps)
      record(k);
  }
}

}  // namespace run_detail

// Executes one parsed run specification; artifacts land in output_dir (or the
// override). Throws on any failure after removing partial outputs.
inline void run(const RunSpec& spec, const std::string& out_override = "") {
  namespace fs = std::filesystem;
  const fs::path out = out_override.empty() ? spec.output_dir : out_override;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw config_error("cannot create output directory " + out.string());

  run_detail::ArtifactGuard guard;
  switch (spec.mode) {
    case RunMode::static_run:
      run_detail::run_static(spec, out, guard);
      break;
    case RunMode::beta_sweep:
      run_detail::run_beta_sweep(spec, out, guard);
      break;
    case RunMode::classical_limit:
      run_detail::run_classical_limit(spec, out, guard);
      break;
    case RunMode::dynamics:
      run_detail::run_dynamics(spec, out, guard);
      break;
    case RunMode::validate:
      throw usage_error("validate mode is dispatched by the command line tool");
  }
  guard.disarm();
}

}  // namespace ringks
