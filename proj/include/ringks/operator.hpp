#pragma once

#include <complex>

#include "ringks/constants.hpp"
#include "ringks/grid.hpp"
#include "ringks/potentials.hpp"
#include "ringks/tridiagonal.hpp"

namespace ringks {

// Discrete Kohn-Sham operator K = −(ħ²/2m)∇² + w on the grid stencil.
// K is the negative of the β-evolution generator: the thermal kernel is
// e^{−βK} and bound states carry positive K-eigenvalues.
inline TridiagonalMatrix<double> kohn_sham_operator(const Grid& g,
                                                    const Profile& w,
                                                    const Constants& c) {
  detail::check_same_grid(g, w.grid, "kohn_sham_operator");
  if (w.kind != ProfileKind::field)
    throw usage_error("kohn_sham_operator expects a field profile");
  const int n = g.n_points;
  const double t = c.hbar * c.hbar / (2.0 * c.mass * g.spacing * g.spacing);
  TridiagonalMatrix<double> k;
  k.diag.resize(n);
  k.lower.assign(n - 1, -t);
  k.upper.assign(n - 1, -t);
  for (int i = 0; i < n; ++i) k.diag[i] = 2.0 * t + w.values[i];
  if (g.boundary == Boundary::periodic) {
    k.corner_tr = -t;
    k.corner_bl = -t;
  }
  return k;
}

// I + s·K for real or complex step factors s (Crank-Nicolson half-steps).
template <class S>
inline TridiagonalMatrix<S> identity_plus_scaled(
    const TridiagonalMatrix<double>& k, S s) {
  const int n = k.size();
  TridiagonalMatrix<S> out;
  out.diag.resize(n);
  out.lower.resize(n - 1);
  out.upper.resize(n - 1);
  for (int i = 0; i < n; ++i) out.diag[i] = S(1) + s * k.diag[i];
  for (int i = 0; i < n - 1; ++i) {
    out.lower[i] = s * k.lower[i];
    out.upper[i] = s * k.upper[i];
  }
  out.corner_tr = s * k.corner_tr;
  out.corner_bl = s * k.corner_bl;
  return out;
}

// ⟨φ|K|φ⟩ under the quadrature inner product.
inline double operator_expectation(const TridiagonalMatrix<double>& k,
                                   const Grid& g, const ComplexProfile& phi) {
  const int n = g.n_points;
  std::vector<std::complex<double>> kphi(n);
  k.apply(phi.values.data(), kphi.data());
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += std::real(std::conj(phi.values[i]) * kphi[i]);
  return acc * g.spacing;
}

}  // namespace ringks
