#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ringks/errors.hpp"

namespace ringks {

enum class Boundary { periodic, dirichlet };

// Uniform 1D grid. Periodic grids cover [0, L) with nodes k·Δr, k = 0..n−1
// and Δr = L/n. Dirichlet grids hold the n interior nodes k·Δr, k = 1..n of
// a box [0, L] with Δr = L/(n+1); the walls carry identically-zero values
// and are not stored.
struct Grid {
  int n_points = 0;
  double length = 0.0;
  double spacing = 0.0;
  Boundary boundary = Boundary::periodic;
  std::vector<double> nodes;

  // The 1D stand-in for the system volume V.
  double volume() const { return length; }
  double center() const { return 0.5 * length; }

  bool operator==(const Grid& other) const {
    return n_points == other.n_points && length == other.length &&
           boundary == other.boundary;
  }
  bool operator!=(const Grid& other) const { return !(*this == other); }
};

inline Grid build_grid(int n_points, double length, Boundary boundary) {
  if (n_points < 3)
    throw config_error("grid needs at least 3 points, got " +
                       std::to_string(n_points));
  if (!(length > 0.0))
    throw config_error("grid length must be positive, got " +
                       std::to_string(length));
  Grid g;
  g.n_points = n_points;
  g.length = length;
  g.boundary = boundary;
  g.spacing = boundary == Boundary::periodic ? length / n_points
                                             : length / (n_points + 1);
  g.nodes.resize(n_points);
  const int first = boundary == Boundary::periodic ? 0 : 1;
  for (int k = 0; k < n_points; ++k) g.nodes[k] = (first + k) * g.spacing;
  return g;
}

enum class ProfileKind { density, field, orbital };

// A function sampled on the grid nodes, real for densities and fields,
// complex for propagated orbitals.
template <class T>
struct BasicProfile {
  Grid grid;
  ProfileKind kind = ProfileKind::field;
  std::vector<T> values;
};

using Profile = BasicProfile<double>;
using ComplexProfile = BasicProfile<std::complex<double>>;

namespace detail {
inline void check_same_grid(const Grid& g, const Grid& pg, const char* what) {
  if (g != pg)
    throw grid_mismatch_error(std::string(what) +
                              ": profile lives on a different grid");
}
}  // namespace detail

template <class T>
inline BasicProfile<T> make_profile(const Grid& g, ProfileKind kind,
                                    std::vector<T> values) {
  if (static_cast<int>(values.size()) != g.n_points)
    throw usage_error("profile needs one value per grid node");
  return BasicProfile<T>{g, kind, std::move(values)};
}

inline Profile make_field(const Grid& g, std::vector<double> values) {
  return make_profile(g, ProfileKind::field, std::move(values));
}

// Densities must be nonnegative up to accumulated rounding (−1e−12).
inline Profile make_density(const Grid& g, std::vector<double> values) {
  for (double v : values)
    if (v < -1e-12)
      throw numerical_error("density profile has a negative node value " +
                            std::to_string(v));
  return make_profile(g, ProfileKind::density, std::move(values));
}

template <class T>
inline BasicProfile<T> zero_profile(const Grid& g, ProfileKind kind) {
  return BasicProfile<T>{g, kind, std::vector<T>(g.n_points, T(0))};
}

// Second-order central difference (p[i−1] − 2p[i] + p[i+1]) / Δr², with
// wraparound on periodic grids and zero ghost values at Dirichlet walls.
template <class T>
inline BasicProfile<T> laplacian_apply(const Grid& g,
                                       const BasicProfile<T>& p) {
  detail::check_same_grid(g, p.grid, "laplacian_apply");
  const int n = g.n_points;
  const double inv_dr2 = 1.0 / (g.spacing * g.spacing);
  std::vector<T> out(n);
  for (int i = 0; i < n; ++i) {
    T left, right;
    if (g.boundary == Boundary::periodic) {
      left = p.values[(i + n - 1) % n];
      right = p.values[(i + 1) % n];
    } else {
      left = i > 0 ? p.values[i - 1] : T(0);
      right = i < n - 1 ? p.values[i + 1] : T(0);
    }
    out[i] = (left - 2.0 * p.values[i] + right) * inv_dr2;
  }
  return BasicProfile<T>{g, p.kind, std::move(out)};
}

// Rectangle-rule quadrature Δr·Σᵢ values[i]; exact for periodic trigonometric
// polynomials below Nyquist and matched to the discrete self-adjointness of
// the stencil above.
template <class T>
inline T integrate(const Grid& g, const BasicProfile<T>& p) {
  detail::check_same_grid(g, p.grid, "integrate");
  T sum(0);
  for (const T& v : p.values) sum += v;
  return sum * g.spacing;
}

// Quadrature inner product ⟨a, b⟩ = Δr·Σ conj(a)·b.
inline double inner_product(const Grid& g, const Profile& a,
                            const Profile& b) {
  detail::check_same_grid(g, a.grid, "inner_product");
  detail::check_same_grid(g, b.grid, "inner_product");
  double sum = 0.0;
  for (int i = 0; i < g.n_points; ++i) sum += a.values[i] * b.values[i];
  return sum * g.spacing;
}

inline std::complex<double> inner_product(const Grid& g,
                                          const ComplexProfile& a,
                                          const ComplexProfile& b) {
  detail::check_same_grid(g, a.grid, "inner_product");
  detail::check_same_grid(g, b.grid, "inner_product");
  std::complex<double> sum(0.0, 0.0);
  for (int i = 0; i < g.n_points; ++i)
    sum += std::conj(a.values[i]) * b.values[i];
  return sum * g.spacing;
}

}  // namespace ringks
