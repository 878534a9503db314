#pragma once

#include <stdexcept>
#include <string>

namespace ringks {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid build-time configuration (grid sizes, constants, config files).
struct config_error : error {
  using error::error;
};

// An operation was called with arguments that violate its contract.
struct usage_error : error {
  using error::error;
};

// A profile or matrix does not live on the grid the operation expects.
struct grid_mismatch_error : error {
  using error::error;
};

// A β-march or propagation blew up (pathological field or step size).
struct divergence_error : error {
  using error::error;
};

// An eigensolve or linear solve failed, or a numeric invariant broke.
struct numerical_error : error {
  using error::error;
};

// Not enough retained eigenpairs for the requested thermal occupation.
struct insufficient_spectrum_error : error {
  using error::error;
};

// An SCF run stalled and the caller asked for that to be fatal.
struct non_convergence_error : error {
  using error::error;
};

}  // namespace ringks
