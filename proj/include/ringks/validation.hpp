#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "ringks/beta_propagator.hpp"
#include "ringks/config.hpp"
#include "ringks/grid.hpp"
#include "ringks/reference.hpp"
#include "ringks/runner.hpp"
#include "ringks/scf.hpp"
#include "ringks/spectral.hpp"
#include "ringks/tdks.hpp"

// End-to-end verification suite behind `ringks validate` and the acceptance
// test binary: one check per claimed property, each printing a pass/fail
// line with the measured numbers.
namespace ringks::validation {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace vdetail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

inline PotentialSpec harmonic_spec(double center, double k = 1.0) {
  PotentialSpec spec;
  spec.external = Harmonic{k, center};
  return spec;
}

inline PotentialSpec soft_coulomb_spec(double center) {
  PotentialSpec spec;
  spec.external = SoftenedCoulomb{-1.0, 1.0, center};
  return spec;
}

inline double linf_rel(const Profile& a, const Profile& b) {
  double diff = 0.0, scale = 0.0;
  for (int i = 0; i < a.grid.n_points; ++i) {
    diff = std::max(diff, std::abs(a.values[i] - b.values[i]));
    scale = std::max(scale, std::abs(b.values[i]));
  }
  return diff / scale;
}

inline double linf_abs(const Profile& a, const Profile& b) {
  double diff = 0.0;
  for (int i = 0; i < a.grid.n_points; ++i)
    diff = std::max(diff, std::abs(a.values[i] - b.values[i]));
  return diff;
}

inline Profile analytic_ground_density(const Grid& g, double center) {
  std::vector<double> n(g.n_points);
  for (int i = 0; i < g.n_points; ++i) {
    const double x = g.nodes[i] - center;
    n[i] = std::exp(-x * x) / std::sqrt(M_PI);
  }
  return make_density(g, std::move(n));
}

// Exact harmonic-trap partition function Σ e^{−β(n+1/2)} = 1/(2 sinh(β/2)).
inline double harmonic_q(double beta) { return 1.0 / (2.0 * std::sinh(0.5 * beta)); }

}  // namespace vdetail

// 1. The marched thermal kernel and its spectral reconstruction give the
// same density for harmonic and softened-Coulomb potentials.
inline CheckResult check_route_equivalence() {
  using namespace vdetail;
  const auto t0 = std::chrono::steady_clock::now();
  const Grid g = build_grid(512, 20.0, Boundary::dirichlet);
  Constants c;
  c.beta = 1.0;
  double worst = 0.0;
  std::string parts;
  for (const auto& [label, spec] :
       {std::pair{"harmonic", harmonic_spec(10.0)},
        std::pair{"soft-coulomb", soft_coulomb_spec(10.0)}}) {
    const Profile n0 = make_density(g, std::vector<double>(g.n_points, 0.1));
    const Profile w = evaluate_field(spec, n0);
    const auto marched = march_beta(initialize_propagator(g, c), w, c, 2000);
    const Profile nd = density_from_propagator(marched, c);
    const Spectrum s = diagonalize(g, w, c, g.n_points);
    const Profile ns =
        density_from_propagator(propagator_from_spectrum(s, c), c);
    const double d = linf_rel(nd, ns);
    worst = std::max(worst, d);
    parts += std::string(label) + " " + num(d) + "  ";
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  CheckResult r{1, "route equivalence (diffusion vs spectral density)",
                worst <= 1e-6 && secs < 30.0,
                "Linf-rel: " + parts + "(tol 1e-6), runtime " + num(secs) +
                    " s (limit 30)"};
  return r;
}

// 2. Lowest five harmonic eigenvalues against n + 1/2.
inline CheckResult check_harmonic_spectrum() {
  using namespace vdetail;
  const Grid g = build_grid(1024, 20.0, Boundary::dirichlet);
  Constants c;
  c.beta = 1.0;
  const Profile w = evaluate_field(
      harmonic_spec(10.0),
      make_density(g, std::vector<double>(g.n_points, 0.05)));
  const Spectrum s = diagonalize(g, w, c, 5);
  bool ok = true;
  std::string parts;
  for (int i = 0; i < 5; ++i) {
    const double target = i + 0.5;
    const double rel = (s.energies[i] - target) / target;
    if (std::abs(rel) > 1e-4) ok = false;
    parts += "E" + std::to_string(i) + " rel " + num(rel) + "  ";
  }
  return CheckResult{2, "harmonic-trap spectrum vs n + 1/2", ok,
                     parts + "(tol 1e-4 relative)"};
}

// 3. Partition functions by both routes: harmonic trap and free particle.
inline CheckResult check_partition_functions() {
  using namespace vdetail;
  Constants c;
  c.beta = 1.0;
  std::string parts;
  bool ok = true;

  const Grid gh = build_grid(512, 20.0, Boundary::dirichlet);
  const Profile wh = evaluate_field(
      harmonic_spec(10.0),
      make_density(gh, std::vector<double>(gh.n_points, 0.05)));
  const double qh_target = harmonic_q(1.0);
  const double qh_march =
      partition_function(march_beta(initialize_propagator(gh, c), wh, c, 2000));
  const Spectrum sh = diagonalize(gh, wh, c, gh.n_points);
  const double qh_spec = partition_function(propagator_from_spectrum(sh, c));
  ok = ok && std::abs(qh_march - qh_target) <= 1e-3 &&
       std::abs(qh_spec - qh_target) <= 1e-3;
  parts += "harmonic march " + num(std::abs(qh_march - qh_target)) +
           " spectral " + num(std::abs(qh_spec - qh_target)) + "  ";

  const Grid gf = build_grid(512, 10.0, Boundary::periodic);
  const Profile wf = make_field(gf, std::vector<double>(gf.n_points, 0.0));
  const double qf_target =
      gf.length * std::sqrt(c.mass / (2.0 * M_PI * c.hbar * c.hbar * c.beta));
  const double qf_march =
      partition_function(march_beta(initialize_propagator(gf, c), wf, c, 2000));
  const Spectrum sf = diagonalize(gf, wf, c, gf.n_points);
  const double qf_spec = partition_function(propagator_from_spectrum(sf, c));
  ok = ok && std::abs(qf_march - qf_target) <= 1e-3 &&
       std::abs(qf_spec - qf_target) <= 1e-3;
  parts += "free march " + num(std::abs(qf_march - qf_target)) + " spectral " +
           num(std::abs(qf_spec - qf_target));

  return CheckResult{3, "partition function Q(beta=1) by both routes", ok,
                     parts + "  (tol 1e-3)"};
}

// 4. Free energy of the self-consistent harmonic trap vs ln(2 sinh(β/2))/β.
inline CheckResult check_free_energy() {
  using namespace vdetail;
  const Grid g = build_grid(640, 20.0, Boundary::dirichlet);
  SCFConfig cfg;
  cfg.route = Route::diffusion;
  cfg.beta_steps = 1000;
  bool ok = true;
  std::string parts;
  for (double beta : {0.5, 1.0, 2.0}) {
    Constants c;
    c.beta = beta;
    const SCFResult res = run_scf(g, harmonic_spec(10.0), c, cfg);
    const double target = std::log(2.0 * std::sinh(0.5 * beta)) / beta;
    const double err = std::abs(res.free_energy - target);
    ok = ok && err <= 1e-3 && res.converged && res.iterations == 1;
    parts += "beta " + num(beta) + " err " + num(err) + "  ";
  }
  return CheckResult{4, "free energy at self-consistency (harmonic)", ok,
                     parts + "(tol 1e-3)"};
}

// 5. Zero-temperature limit at β = 50: ground-orbital density and occupancy
// collapse. The Fermi factor of the first excited level is e^{−βΔE/2}
// (chemical potential sits mid-gap); the thermal weight e^{−βΔE} is the
// quantity that reaches 1e-20.
inline CheckResult check_zero_temperature_limit() {
  using namespace vdetail;
  const Grid g = build_grid(512, 20.0, Boundary::dirichlet);
  Constants c;
  c.beta = 50.0;
  const Profile w = evaluate_field(
      harmonic_spec(10.0),
      make_density(g, std::vector<double>(g.n_points, 0.05)));
  const Spectrum s = diagonalize(g, w, c, 64);
  const Occupancy occ = solve_occupancy(s, c, TemperatureMode::finite_beta);
  const Profile n = density_from_spectrum(s, occ);
  const double derr = linf_abs(n, analytic_ground_density(g, 10.0));
  const double f1_defect = std::abs(occ.occupations[0] - 1.0);
  const double f2 = occ.occupations[1];
  const double ring_w2 = std::exp(-c.beta * (s.energies[1] - s.energies[0]));
  const bool ok =
      derr <= 1e-4 && f1_defect <= 1e-9 && f2 <= 1e-10 && ring_w2 < 1e-20;
  return CheckResult{
      5, "zero-temperature limit (beta = 50, N = 1)", ok,
      "density Linf " + num(derr) + " (tol 1e-4), 1-f1 " + num(f1_defect) +
          ", fermi f2 " + num(f2) + " (tol 1e-10), thermal weight " +
          num(ring_w2) + " (tol 1e-20)"};
}

// 6. Conservation over 1000 real-time steps: norms always, energy and
// density for a static field; norms alone under a drive.
inline CheckResult check_dynamic_conservation() {
  using namespace vdetail;
  const Grid g = build_grid(256, 16.0, Boundary::dirichlet);
  Constants c;
  c.beta = 1.0;
  c.n_particles = 2;
  const PotentialSpec spec = harmonic_spec(8.0);
  SCFConfig cfg;
  cfg.route = Route::spectral;
  cfg.occupancy = OccupancyMode::zero_temperature;
  cfg.n_eigs = 8;
  const SCFResult ground = run_scf(g, spec, c, cfg);
  const Profile n0 = ground.density;

  TDState state = init_from_spectrum(*ground.spectrum, *ground.occupancy, 1e-3);
  const double e0 = observables(state, spec, c).energy;
  double norm_defect = 0.0, energy_drift = 0.0, density_drift = 0.0;
  for (int k = 0; k < 1000; ++k) {
    state = step(std::move(state), spec, c);
    const TDObservables obs = observables(state, spec, c);
    norm_defect = std::max(norm_defect, obs.norm_defect);
    energy_drift = std::max(energy_drift, std::abs(obs.energy - e0));
    density_drift =
        std::max(density_drift, linf_abs(density_at_time(state), n0));
  }

  PotentialSpec driven = spec;
  driven.drive = TimeDrive{LinearRamp{1.0, 8.0}, SinusoidalEnvelope{1.3, 0.05}};
  TDState state2 = init_from_spectrum(*ground.spectrum, *ground.occupancy, 1e-3);
  double norm_defect_driven = 0.0;
  for (int k = 0; k < 1000; ++k) {
    state2 = step(std::move(state2), driven, c);
    norm_defect_driven = std::max(
        norm_defect_driven, observables(state2, driven, c).norm_defect);
  }

  const bool ok = norm_defect <= 1e-9 && energy_drift <= 1e-8 &&
                  density_drift <= 1e-8 && norm_defect_driven <= 1e-9;
  return CheckResult{
      6, "conservation over 1000 propagation steps", ok,
      "norm defect " + num(norm_defect) + " (tol 1e-9), energy drift " +
          num(energy_drift) + " (tol 1e-8), density drift " +
          num(density_drift) + " (tol 1e-8), driven norm defect " +
          num(norm_defect_driven)};
}

// 7. A displaced Gaussian in the harmonic trap oscillates as x0·cos(ωt).
inline CheckResult check_ehrenfest() {
  using namespace vdetail;
  const Grid g = build_grid(2000, 10.0, Boundary::dirichlet);
  Constants c;
  c.beta = 1.0;
  const double center = 5.0;
  const double x0 = 1.0;
  const PotentialSpec spec = harmonic_spec(center);

  std::vector<std::complex<double>> phi(g.n_points);
  double norm = 0.0;
  for (int i = 0; i < g.n_points; ++i) {
    const double x = g.nodes[i] - center - x0;
    phi[i] = std::exp(-0.5 * x * x);
    norm += std::norm(phi[i]);
  }
  norm = std::sqrt(norm * g.spacing);
  for (auto& v : phi) v /= norm;

  const int n_steps = 2000;
  const double dt = 2.0 * M_PI / n_steps;
  TDState state = make_state(
      g, {ComplexProfile{g, ProfileKind::orbital, std::move(phi)}}, {1.0}, dt);

  auto moment = [&](const TDState& st) {
    const Profile n = density_at_time(st);
    double m = 0.0;
    for (int i = 0; i < g.n_points; ++i)
      m += (g.nodes[i] - center) * n.values[i];
    return m * g.spacing;
  };

  const double r0 = moment(state);
  double worst = 0.0;
  for (int k = 1; k <= n_steps; ++k) {
    state = step(std::move(state), spec, c);
    worst = std::max(worst, std::abs(moment(state) - r0 * std::cos(k * dt)));
  }
  return CheckResult{7, "coherent-state center follows x0 cos(wt)",
                     worst <= 1e-4,
                     "max deviation " + num(worst) + " over one period (tol "
                     "1e-4), x0 = " + num(r0)};
}

// 8. Propagating a converged static solution leaves the density fixed.
inline CheckResult check_static_limit() {
  using namespace vdetail;
  const Grid g = build_grid(400, 16.0, Boundary::dirichlet);
  Constants c;
  c.beta = 1.0;
  const PotentialSpec spec = harmonic_spec(8.0);
  SCFConfig cfg;
  cfg.route = Route::spectral;
  cfg.occupancy = OccupancyMode::zero_temperature;
  cfg.n_eigs = 4;
  const SCFResult ground = run_scf(g, spec, c, cfg);
  TDState state = init_from_spectrum(*ground.spectrum, *ground.occupancy, 1e-3);
  double drift = 0.0;
  for (int k = 0; k < 1000; ++k) {
    state = step(std::move(state), spec, c);
    drift = std::max(drift, linf_abs(density_at_time(state), ground.density));
  }
  return CheckResult{8, "dynamics reduces to the static solution", drift <= 1e-8,
                     "density Linf drift " + num(drift) +
                         " over 1000 steps (tol 1e-8)"};
}

// 9. Classical limit: the quantum-classical L1 distance falls strictly with
// ħ and is below 1e-3 at ħ = 0.01.
inline CheckResult check_classical_limit() {
  using namespace vdetail;
  const Grid g = build_grid(512, 20.0, Boundary::dirichlet);
  Constants c;
  c.beta = 1.0;
  const std::vector<double> hbars{1.0, 0.5, 0.25, 0.125, 0.01};
  const std::vector<double> dist =
      reference::classical_limit_distances(g, harmonic_spec(10.0), c, hbars);
  bool ok = dist.back() <= 1e-3;
  std::string parts;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (i > 0 && !(dist[i] < dist[i - 1])) ok = false;
    parts += "hbar " + num(hbars[i]) + ": " + num(dist[i]) + "  ";
  }
  return CheckResult{9, "classical limit (thermal dimension drops out)", ok,
                     parts + "(strictly decreasing; last tol 1e-3)"};
}

// 10. The Richardson-extrapolated march matches the matrix-exponential
// reference on a random bounded smooth field (mt19937 seed 12345).
inline CheckResult check_oracle_independence() {
  using namespace vdetail;
  const Grid g = build_grid(192, 10.0, Boundary::periodic);
  Constants c;
  c.beta = 1.0;
  std::mt19937 gen(12345);
  std::uniform_real_distribution<double> coeff(-0.5, 0.5);
  std::vector<double> wv(g.n_points, 0.0);
  for (int k = 1; k <= 4; ++k) {
    const double a = coeff(gen), b = coeff(gen);
    for (int i = 0; i < g.n_points; ++i) {
      const double arg = 2.0 * M_PI * k * g.nodes[i] / g.length;
      wv[i] += a * std::cos(arg) + b * std::sin(arg);
    }
  }
  const Profile w = make_field(g, std::move(wv));

  const auto coarse = march_beta(initialize_propagator(g, c), w, c, 1000);
  const auto fine = march_beta(initialize_propagator(g, c), w, c, 2000);
  const auto exact = reference::brute_force_propagator(g, w, c, c.beta);
  const Eigen::MatrixXd richardson =
      (4.0 * fine.entries - coarse.entries) / 3.0;
  const double scale = exact.entries.cwiseAbs().maxCoeff();
  const double diff =
      (richardson - exact.entries).cwiseAbs().maxCoeff() / scale;
  const double plain =
      (fine.entries - exact.entries).cwiseAbs().maxCoeff() / scale;
  return CheckResult{10, "march vs matrix exponential (Richardson in dbeta)",
                     diff <= 1e-7,
                     "extrapolated " + num(diff) + " (tol 1e-7), plain " +
                         num(plain)};
}

// 11. Interacting two-particle trap: convergence, parity symmetry, and the
// frozen regression values of the first verified run.
inline CheckResult check_scf_robustness() {
  using namespace vdetail;
  const Grid g = build_grid(384, 16.0, Boundary::dirichlet);
  Constants c;
  c.beta = 10.0;
  c.n_particles = 2;
  PotentialSpec spec = harmonic_spec(8.0);
  spec.hartree = HartreeTerm{1.0, 0.5};
  SCFConfig cfg;
  cfg.route = Route::spectral;
  cfg.occupancy = OccupancyMode::zero_temperature;
  cfg.mixing_fraction = 0.3;
  cfg.max_iterations = 200;
  cfg.residual_tolerance = 1e-8;
  cfg.n_eigs = 16;
  const SCFResult res = run_scf(g, spec, c, cfg);

  double parity = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    parity = std::max(parity,
                      std::abs(res.density.values[i] -
                               res.density.values[g.n_points - 1 - i]));
  double peak = 0.0;
  for (double v : res.density.values) peak = std::max(peak, v);

  // golden regression from the first verified run of this configuration
  const double e0_ref = 1.2259958356;
  const double e1_ref = 2.1570685675;
  const double peak_ref = 0.6621011201;
  const double e0_err = std::abs(res.spectrum->energies[0] - e0_ref);
  const double e1_err = std::abs(res.spectrum->energies[1] - e1_ref);
  const double peak_err = std::abs(peak - peak_ref);

  const bool ok = res.converged && res.iterations <= 200 && parity <= 1e-9 &&
                  e0_err <= 1e-6 && e1_err <= 1e-6 && peak_err <= 1e-6;
  return CheckResult{
      11, "interacting SCF: convergence, parity, golden values", ok,
      "converged " + std::string(res.converged ? "yes" : "no") + " in " +
          std::to_string(res.iterations) + " iterations, parity " +
          num(parity) + " (tol 1e-9), |dE0| " + num(e0_err) + ", |dE1| " +
          num(e1_err) + ", |dpeak| " + num(peak_err) + " (tol 1e-6)"};
}

namespace vdetail {

inline std::map<std::string, std::string> slurp_dir(
    const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    files[entry.path().filename().string()] =
        std::string(std::istreambuf_iterator<char>(in), {});
  }
  return files;
}

}  // namespace vdetail

// 12. Identical run specifications produce bit-identical artifacts.
inline CheckResult check_determinism() {
  using namespace vdetail;
  namespace fs = std::filesystem;
  const std::string static_cfg =
      "mode = static\n"
      "grid.points = 96\n"
      "grid.length = 12.0\n"
      "constants.beta = 2.0\n"
      "constants.particles = 2\n"
      "potential.external = harmonic\n"
      "potential.hartree.coupling = 0.4\n"
      "scf.route = spectral\n"
      "scf.occupancy = zero_t\n"
      "scf.eigenpairs = 12\n";
  const std::string dynamics_cfg =
      "mode = dynamics\n"
      "grid.points = 96\n"
      "grid.length = 12.0\n"
      "constants.beta = 2.0\n"
      "potential.external = harmonic\n"
      "scf.route = spectral\n"
      "scf.occupancy = zero_t\n"
      "scf.eigenpairs = 4\n"
      "dynamics.dt = 0.01\n"
      "dynamics.steps = 40\n"
      "dynamics.record_every = 10\n"
      "drive.profile = linear\n"
      "drive.envelope = sinusoidal\n"
      "drive.frequency = 1.2\n"
      "drive.amplitude = 0.05\n";

  const fs::path base = fs::temp_directory_path() / "ringks-determinism";
  std::error_code ec;
  fs::remove_all(base, ec);
  bool ok = true;
  std::string parts;
  int pair_index = 0;
  for (const std::string& cfg_text : {static_cfg, dynamics_cfg}) {
    const RunSpec spec = parse_config(cfg_text);
    const fs::path a = base / ("a" + std::to_string(pair_index));
    const fs::path b = base / ("b" + std::to_string(pair_index));
    run(spec, a.string());
    run(spec, b.string());
    const auto fa = slurp_dir(a);
    const auto fb = slurp_dir(b);
    const bool same = fa == fb && !fa.empty();
    ok = ok && same;
    parts += std::string(pair_index == 0 ? "static" : "dynamics") + " " +
             (same ? "identical" : "DIFFERS") + " (" +
             std::to_string(fa.size()) + " files)  ";
    ++pair_index;
  }
  fs::remove_all(base, ec);
  return CheckResult{12, "bit-identical artifacts on repeated runs", ok, parts};
}

inline std::vector<CheckResult> run_suite(std::ostream* progress = nullptr) {
  std::vector<CheckResult> results;
  const auto push = [&](CheckResult r) {
    if (progress)
      *progress << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] "
                << r.name << "\n      " << r.detail << "\n";
    results.push_back(std::move(r));
  };
  push(check_route_equivalence());
  push(check_harmonic_spectrum());
  push(check_partition_functions());
  push(check_free_energy());
  push(check_zero_temperature_limit());
  push(check_dynamic_conservation());
  push(check_ehrenfest());
  push(check_static_limit());
  push(check_classical_limit());
  push(check_oracle_independence());
  push(check_scf_robustness());
  push(check_determinism());
  return results;
}

}  // namespace ringks::validation
