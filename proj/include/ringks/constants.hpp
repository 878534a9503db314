#pragma once

#include <string>

#include "ringks/errors.hpp"

namespace ringks {

// Physical constants of a run. k_B is absorbed: temperature enters only
// through β = 1/k_BT. Defaults are natural units ħ = m = 1.
struct Constants {
  double hbar = 1.0;
  double mass = 1.0;
  double beta = 1.0;
  int n_particles = 1;
};

inline void validate_constants(const Constants& c) {
  if (!(c.hbar > 0.0)) throw config_error("hbar must be positive");
  if (!(c.mass > 0.0)) throw config_error("mass must be positive");
  if (!(c.beta > 0.0)) throw config_error("beta must be positive");
  if (c.n_particles < 1)
    throw config_error("particle count must be a positive integer, got " +
                       std::to_string(c.n_particles));
}

}  // namespace ringks
