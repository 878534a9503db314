#pragma once

#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ringks/constants.hpp"
#include "ringks/errors.hpp"
#include "ringks/grid.hpp"
#include "ringks/potentials.hpp"
#include "ringks/scf.hpp"

namespace ringks {

enum class RunMode { static_run, beta_sweep, classical_limit, dynamics, validate };

struct DynamicsConfig {
  double dt = 0.0;
  int steps = 0;
  int record_every = 10;
  int displace_nodes = 0;  // rigid shift of the initial orbitals, in nodes
};

struct SweepConfig {
  double beta_min = 0.0;
  double beta_max = 0.0;
  int count = 0;
};

struct ClassicalConfig {
  std::vector<double> hbar_values;
};

// A fully validated run specification; every module-level precondition is
// checked at parse time so runs fail before any computation starts.
struct RunSpec {
  RunMode mode = RunMode::validate;
  int grid_points = 0;
  double grid_length = 0.0;
  Boundary boundary = Boundary::dirichlet;
  Constants constants;
  PotentialSpec potential;
  SCFConfig scf;
  bool require_convergence = false;
  DynamicsConfig dynamics;
  SweepConfig sweep;
  ClassicalConfig classical;
  std::string output_dir = "out";
};

namespace cfg_detail {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class KeyTable {
 public:
  explicit KeyTable(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const std::size_t hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      const std::string stripped = trim(raw);
      if (stripped.empty()) continue;
      const std::size_t eq = stripped.find('=');
      if (eq == std::string::npos)
        throw config_error("line " + std::to_string(line) +
                           ": expected 'key = value', got '" + stripped + "'");
      std::string key = trim(stripped.substr(0, eq));
      std::string value = trim(stripped.substr(eq + 1));
      if (key.empty() || value.empty())
        throw config_error("line " + std::to_string(line) +
                           ": empty key or value");
      if (entries_.count(key))
        throw config_error("line " + std::to_string(line) +
                           ": duplicate key '" + key + "'");
      entries_[key] = Entry{value, line, false};
    }
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::optional<std::string> take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    it->second.used = true;
    return it->second.value;
  }

  std::string require(const std::string& key) {
    auto v = take(key);
    if (!v) throw config_error("missing required key '" + key + "'");
    return *v;
  }

  double take_double(const std::string& key, double fallback) {
    auto v = take(key);
    return v ? parse_double(key, *v) : fallback;
  }

  double require_double(const std::string& key) {
    return parse_double(key, require(key));
  }

  int take_int(const std::string& key, int fallback) {
    auto v = take(key);
    return v ? parse_int(key, *v) : fallback;
  }

  int require_int(const std::string& key) { return parse_int(key, require(key)); }

  bool take_bool(const std::string& key, bool fallback) {
    auto v = take(key);
    if (!v) return fallback;
    if (*v == "true") return true;
    if (*v == "false") return false;
    throw config_error(located(key) + ": expected true or false, got '" + *v +
                       "'");
  }

  std::vector<double> require_double_list(const std::string& key) {
    std::string text = require(key);
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t comma = text.find(',', pos);
      const std::string part =
          trim(text.substr(pos, comma == std::string::npos ? std::string::npos
                                                           : comma - pos));
      if (part.empty()) throw config_error(located(key) + ": empty list entry");
      out.push_back(parse_double(key, part));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return out;
  }

  void reject_unused() const {
    for (const auto& [key, entry] : entries_)
      if (!entry.used)
        throw config_error("line " + std::to_string(entry.line) +
                           ": unknown or inapplicable key '" + key + "'");
  }

  std::string located(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end()
               ? "key '" + key + "'"
               : "line " + std::to_string(it->second.line) + ": key '" + key +
                     "'";
  }

 private:
  double parse_double(const std::string& key, const std::string& text) const {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size())
      throw config_error(located(key) + ": '" + text + "' is not a number");
    return v;
  }

  int parse_int(const std::string& key, const std::string& text) const {
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size())
      throw config_error(located(key) + ": '" + text + "' is not an integer");
    return static_cast<int>(v);
  }

  std::map<std::string, Entry> entries_;
};

// Potential profiles name their center optionally; absent centers resolve to
// the box middle once the grid length is known.
inline ExternalPotential parse_profile(KeyTable& keys, const std::string& group,
                                       const std::string& kind,
                                       double box_center) {
  if (kind == "none") return NoExternal{};
  if (kind == "harmonic") {
    Harmonic h;
    h.k = keys.take_double(group + ".harmonic.k", 1.0);
    h.center = keys.take_double(group + ".harmonic.center", box_center);
    if (!(h.k > 0.0))
      throw config_error("key '" + group + ".harmonic.k' must be positive");
    return h;
  }
  if (kind == "box_well") {
    BoxWell b;
    b.depth = keys.take_double(group + ".box_well.depth", 1.0);
    b.width = keys.take_double(group + ".box_well.width", 1.0);
    if (!(b.width > 0.0))
      throw config_error("key '" + group + ".box_well.width' must be positive");
    return b;
  }
  if (kind == "softened_coulomb") {
    SoftenedCoulomb s;
    s.charge = keys.take_double(group + ".coulomb.charge", -1.0);
    s.softening = keys.take_double(group + ".coulomb.softening", 1.0);
    s.center = keys.take_double(group + ".coulomb.center", box_center);
    if (!(s.softening > 0.0))
      throw config_error("key '" + group +
                         ".coulomb.softening' must be positive");
    return s;
  }
  if (kind == "linear" && group == "drive") {
    LinearRamp l;
    l.slope = keys.take_double("drive.linear.slope", 1.0);
    l.center = keys.take_double("drive.linear.center", box_center);
    return l;
  }
  throw config_error("key '" + group + "': unknown profile kind '" + kind +
                     "'");
}

}  // namespace cfg_detail

inline RunSpec parse_config(const std::string& text) {
  cfg_detail::KeyTable keys(text);
  RunSpec spec;

  const std::string mode = keys.require("mode");
  if (mode == "static")
    spec.mode = RunMode::static_run;
  else if (mode == "beta_sweep")
    spec.mode = RunMode::beta_sweep;
  else if (mode == "classical_limit")
    spec.mode = RunMode::classical_limit;
  else if (mode == "dynamics")
    spec.mode = RunMode::dynamics;
  else if (mode == "validate")
    spec.mode = RunMode::validate;
  else
    throw config_error(keys.located("mode") + ": unknown mode '" + mode + "'");

  spec.output_dir = keys.take("output.dir").value_or("out");

  if (spec.mode == RunMode::validate) {
    keys.reject_unused();
    return spec;
  }

  spec.grid_points = keys.require_int("grid.points");
  spec.grid_length = keys.require_double("grid.length");
  const std::string bc = keys.take("grid.boundary").value_or("dirichlet");
  if (bc == "periodic")
    spec.boundary = Boundary::periodic;
  else if (bc == "dirichlet")
    spec.boundary = Boundary::dirichlet;
  else
    throw config_error(keys.located("grid.boundary") +
                       ": expected periodic or dirichlet, got '" + bc + "'");
  if (spec.grid_points < 3)
    throw config_error(keys.located("grid.points") + ": need at least 3 points");
  if (!(spec.grid_length > 0.0))
    throw config_error(keys.located("grid.length") + ": must be positive");
  const double box_center = 0.5 * spec.grid_length;

  spec.constants.hbar = keys.take_double("constants.hbar", 1.0);
  spec.constants.mass = keys.take_double("constants.mass", 1.0);
  spec.constants.beta = keys.require_double("constants.beta");
  spec.constants.n_particles = keys.take_int("constants.particles", 1);
  try {
    validate_constants(spec.constants);
  } catch (const config_error& e) {
    throw config_error(std::string("constants.*: ") + e.what());
  }

  const std::string ext = keys.take("potential.external").value_or("none");
  spec.potential.external =
      cfg_detail::parse_profile(keys, "potential", ext, box_center);
  if (keys.has("potential.hartree.coupling") ||
      keys.has("potential.hartree.softening")) {
    HartreeTerm h;
    h.coupling = keys.require_double("potential.hartree.coupling");
    h.softening = keys.take_double("potential.hartree.softening", 1.0);
    if (!(h.softening > 0.0))
      throw config_error("key 'potential.hartree.softening' must be positive");
    spec.potential.hartree = h;
  }

  const std::string drive = keys.take("drive.profile").value_or("none");
  if (drive != "none") {
    if (spec.mode != RunMode::dynamics)
      throw config_error("drive.* keys apply to dynamics runs only");
    TimeDrive d;
    d.profile = cfg_detail::parse_profile(keys, "drive", drive, box_center);
    const std::string env = keys.take("drive.envelope").value_or("constant");
    if (env == "constant") {
      d.envelope = ConstantEnvelope{};
    } else if (env == "sinusoidal") {
      SinusoidalEnvelope s;
      s.frequency = keys.require_double("drive.frequency");
      s.amplitude = keys.require_double("drive.amplitude");
      d.envelope = s;
    } else {
      throw config_error(keys.located("drive.envelope") +
                         ": expected constant or sinusoidal, got '" + env +
                         "'");
    }
    spec.potential.drive = d;
  }

  spec.scf.mixing_fraction = keys.take_double("scf.mixing", 0.3);
  spec.scf.max_iterations = keys.take_int("scf.max_iterations", 200);
  spec.scf.residual_tolerance = keys.take_double("scf.tolerance", 1e-8);
  spec.scf.beta_steps = keys.take_int("scf.beta_steps", 1000);
  spec.scf.n_eigs = keys.take_int("scf.eigenpairs", 0);
  spec.require_convergence = keys.take_bool("scf.require_convergence", false);
  const std::string route = keys.take("scf.route").value_or("diffusion");
  if (route == "diffusion")
    spec.scf.route = Route::diffusion;
  else if (route == "spectral")
    spec.scf.route = Route::spectral;
  else if (route == "both")
    spec.scf.route = Route::both;
  else
    throw config_error(keys.located("scf.route") + ": unknown route '" + route +
                       "'");
  const std::string occ = keys.take("scf.occupancy").value_or("boltzmann");
  if (occ == "boltzmann")
    spec.scf.occupancy = OccupancyMode::boltzmann;
  else if (occ == "fermi")
    spec.scf.occupancy = OccupancyMode::fermi_dirac;
  else if (occ == "zero_t")
    spec.scf.occupancy = OccupancyMode::zero_temperature;
  else
    throw config_error(keys.located("scf.occupancy") +
                       ": expected boltzmann, fermi or zero_t, got '" + occ +
                       "'");
  if (spec.scf.n_eigs > spec.grid_points)
    throw config_error("key 'scf.eigenpairs' cannot exceed grid.points");
  try {
    validate_scf_config(spec.scf);
  } catch (const config_error& e) {
    throw config_error(std::string("scf.*: ") + e.what());
  }

  if (spec.mode == RunMode::dynamics) {
    spec.dynamics.dt = keys.require_double("dynamics.dt");
    spec.dynamics.steps = keys.require_int("dynamics.steps");
    spec.dynamics.record_every = keys.take_int("dynamics.record_every", 10);
    spec.dynamics.displace_nodes = keys.take_int("dynamics.displace_nodes", 0);
    if (!(spec.dynamics.dt > 0.0))
      throw config_error(keys.located("dynamics.dt") + ": must be positive");
    if (spec.dynamics.steps < 1)
      throw config_error(keys.located("dynamics.steps") + ": must be positive");
    if (spec.dynamics.record_every < 1)
      throw config_error(keys.located("dynamics.record_every") +
                         ": must be positive");
  }

  if (spec.mode == RunMode::beta_sweep) {
    spec.sweep.beta_min = keys.require_double("sweep.beta_min");
    spec.sweep.beta_max = keys.require_double("sweep.beta_max");
    spec.sweep.count = keys.require_int("sweep.count");
    if (!(spec.sweep.beta_min > 0.0))
      throw config_error(keys.located("sweep.beta_min") + ": must be positive");
    if (!(spec.sweep.beta_max >= spec.sweep.beta_min))
      throw config_error(keys.located("sweep.beta_max") +
                         ": must be >= sweep.beta_min");
    if (spec.sweep.count < 1)
      throw config_error(keys.located("sweep.count") + ": must be positive");
  }

  if (spec.mode == RunMode::classical_limit) {
    spec.classical.hbar_values = keys.require_double_list("classical.hbar_values");
    for (std::size_t i = 0; i < spec.classical.hbar_values.size(); ++i) {
      if (!(spec.classical.hbar_values[i] > 0.0))
        throw config_error("key 'classical.hbar_values': entries must be positive");
      if (i > 0 && !(spec.classical.hbar_values[i] <
                     spec.classical.hbar_values[i - 1]))
        throw config_error(
            "key 'classical.hbar_values': entries must descend strictly");
    }
  }

  keys.reject_unused();
  try {
    validate_potential(spec.potential);
  } catch (const config_error& e) {
    throw config_error(std::string("potential.*: ") + e.what());
  }
  return spec;
}

}  // namespace ringks
