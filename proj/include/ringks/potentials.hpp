#pragma once

#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "ringks/errors.hpp"
#include "ringks/grid.hpp"

namespace ringks {

// External one-body potentials. The box well is centered at L/2 and a
// positive depth means an attractive well of value −depth.
struct NoExternal {};
struct Harmonic {
  double k = 1.0;
  double center = 0.0;
};
struct BoxWell {
  double depth = 1.0;
  double width = 1.0;
};
struct SoftenedCoulomb {
  double charge = -1.0;
  double softening = 1.0;
  double center = 0.0;
};
// Uniform-field (dipole) ramp, slope·(r − center). Only meaningful as a
// time-drive profile.
struct LinearRamp {
  double slope = 1.0;
  double center = 0.0;
};

using ExternalPotential =
    std::variant<NoExternal, Harmonic, BoxWell, SoftenedCoulomb, LinearRamp>;

// Pairwise mean-field term with the softened 1D Coulomb kernel
// v(x) = 1/sqrt(x² + a²); the softening a regularizes the bare kernel,
// which has no finite integrals in 1D.
struct HartreeTerm {
  double softening = 1.0;
  double coupling = 1.0;
};

struct ConstantEnvelope {};
struct SinusoidalEnvelope {
  double frequency = 1.0;
  double amplitude = 1.0;
};

// Time-dependent addition to the field: envelope(t) · profile(r).
struct TimeDrive {
  ExternalPotential profile = LinearRamp{};
  std::variant<ConstantEnvelope, SinusoidalEnvelope> envelope =
      ConstantEnvelope{};
};

struct PotentialSpec {
  ExternalPotential external = NoExternal{};
  std::optional<HartreeTerm> hartree;
  std::optional<TimeDrive> drive;
};

inline void validate_potential(const PotentialSpec& spec) {
  if (const auto* h = std::get_if<Harmonic>(&spec.external))
    if (!(h->k > 0.0)) throw config_error("harmonic spring constant must be positive");
  if (const auto* s = std::get_if<SoftenedCoulomb>(&spec.external))
    if (!(s->softening > 0.0)) throw config_error("coulomb softening must be positive");
  if (spec.hartree && !(spec.hartree->softening > 0.0))
    throw config_error("hartree softening must be positive");
  if (spec.drive) {
    if (const auto* s = std::get_if<SoftenedCoulomb>(&spec.drive->profile))
      if (!(s->softening > 0.0))
        throw config_error("drive coulomb softening must be positive");
  }
}

inline double external_value(const ExternalPotential& pot, double r,
                             const Grid& g) {
  struct Eval {
    double r;
    const Grid& g;
    double operator()(const NoExternal&) const { return 0.0; }
    double operator()(const Harmonic& h) const {
      const double d = r - h.center;
      return 0.5 * h.k * d * d;
    }
    double operator()(const BoxWell& b) const {
      return std::abs(r - g.center()) <= 0.5 * b.width ? -b.depth : 0.0;
    }
    double operator()(const SoftenedCoulomb& s) const {
      const double d = r - s.center;
      return s.charge / std::sqrt(d * d + s.softening * s.softening);
    }
    double operator()(const LinearRamp& l) const {
      return l.slope * (r - l.center);
    }
  };
  return std::visit(Eval{r, g}, pot);
}

inline double envelope_value(const TimeDrive& drive, double t) {
  if (std::holds_alternative<ConstantEnvelope>(drive.envelope)) return 1.0;
  const auto& s = std::get<SinusoidalEnvelope>(drive.envelope);
  return s.amplitude * std::sin(s.frequency * t);
}

// Potential-energy functional
//   U[n] = ∫ v_ext n dr + (coupling/2) ∬ n(r) v_soft(r−r′) n(r′) dr dr′.
// The drive never contributes here: it enters fields only.
inline double evaluate_energy(const PotentialSpec& spec, const Profile& n) {
  if (n.kind != ProfileKind::density)
    throw usage_error("evaluate_energy expects a density profile");
  const Grid& g = n.grid;
  const double dr = g.spacing;
  double u = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    u += external_value(spec.external, g.nodes[i], g) * n.values[i];
  u *= dr;
  if (spec.hartree) {
    const double a2 = spec.hartree->softening * spec.hartree->softening;
    double pair = 0.0;
    for (int i = 0; i < g.n_points; ++i) {
      double row = 0.0;
      for (int j = 0; j < g.n_points; ++j) {
        const double x = g.nodes[i] - g.nodes[j];
        row += n.values[j] / std::sqrt(x * x + a2);
      }
      pair += n.values[i] * row;
    }
    u += 0.5 * spec.hartree->coupling * pair * dr * dr;
  }
  return u;
}

// Field w = δU/δn plus the instantaneous drive:
//   w(r) = v_ext(r) + coupling·∫ v_soft(r−r′) n(r′) dr′ + envelope(t)·profile(r).
// t must be supplied exactly when a drive is present.
inline Profile evaluate_field(const PotentialSpec& spec, const Profile& n,
                              std::optional<double> t = std::nullopt) {
  if (n.kind != ProfileKind::density)
    throw usage_error("evaluate_field expects a density profile");
  if (spec.drive && !t)
    throw usage_error("potential has a time drive; evaluate_field needs t");
  const Grid& g = n.grid;
  std::vector<double> w(g.n_points, 0.0);
  for (int i = 0; i < g.n_points; ++i)
    w[i] = external_value(spec.external, g.nodes[i], g);
  if (spec.hartree) {
    const double a2 = spec.hartree->softening * spec.hartree->softening;
    const double pref = spec.hartree->coupling * g.spacing;
    for (int i = 0; i < g.n_points; ++i) {
      double conv = 0.0;
      for (int j = 0; j < g.n_points; ++j) {
        const double x = g.nodes[i] - g.nodes[j];
        conv += n.values[j] / std::sqrt(x * x + a2);
      }
      w[i] += pref * conv;
    }
  }
  if (spec.drive) {
    const double env = envelope_value(*spec.drive, *t);
    for (int i = 0; i < g.n_points; ++i)
      w[i] += env * external_value(spec.drive->profile, g.nodes[i], g);
  }
  return make_field(g, std::move(w));
}

}  // namespace ringks
