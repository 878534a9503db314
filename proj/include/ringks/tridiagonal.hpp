#pragma once

#include <cmath>
#include <vector>

#include "ringks/errors.hpp"

namespace ringks {

// Tridiagonal matrix with optional cyclic corner entries (top-right,
// bottom-left), as produced by the second-order stencil on periodic grids.
template <class T>
struct TridiagonalMatrix {
  std::vector<T> lower;  // n−1 entries, A(i+1, i)
  std::vector<T> diag;   // n entries
  std::vector<T> upper;  // n−1 entries, A(i, i+1)
  T corner_tr = T(0);    // A(0, n−1)
  T corner_bl = T(0);    // A(n−1, 0)

  int size() const { return static_cast<int>(diag.size()); }

  bool cyclic() const { return corner_tr != T(0) || corner_bl != T(0); }

  // y = A·x. U may be a wider scalar than T (complex input on a real matrix).
  template <class U>
  void apply(const U* x, U* y) const {
    const int n = size();
    for (int i = 0; i < n; ++i) {
      U acc = x[i] * diag[i];
      if (i > 0) acc += x[i - 1] * lower[i - 1];
      if (i < n - 1) acc += x[i + 1] * upper[i];
      y[i] = acc;
    }
    if (cyclic()) {
      y[0] += x[n - 1] * corner_tr;
      y[n - 1] += x[0] * corner_bl;
    }
  }
};

// Factored Thomas solver; cyclic systems use the Sherman-Morrison rank-one
// correction with the auxiliary solve precomputed, so each right-hand side
// costs one tridiagonal sweep.
template <class T>
class TridiagonalSolver {
 public:
  explicit TridiagonalSolver(const TridiagonalMatrix<T>& a)
      : n_(a.size()), lower_(a.lower), upper_(a.upper), diag_(a.diag) {
    if (n_ < 2) throw usage_error("tridiagonal solver needs at least 2 rows");
    if (a.cyclic()) {
      cyclic_ = true;
      gamma_ = -diag_[0];
      v_ratio_ = a.corner_tr / gamma_;
      diag_[0] -= gamma_;
      diag_[n_ - 1] -= a.corner_tr * a.corner_bl / gamma_;
      factor();
      z_.assign(n_, T(0));
      z_[0] = gamma_;
      z_[n_ - 1] = a.corner_bl;
      plain_solve(z_.data());
      denom_ = T(1) + z_[0] + v_ratio_ * z_[n_ - 1];
      if (denom_ == T(0))
        throw numerical_error("singular cyclic tridiagonal system");
    } else {
      factor();
    }
  }

  void solve_in_place(T* rhs) const {
    plain_solve(rhs);
    if (cyclic_) {
      const T factor = (rhs[0] + v_ratio_ * rhs[n_ - 1]) / denom_;
      for (int i = 0; i < n_; ++i) rhs[i] -= factor * z_[i];
    }
  }

 private:
  void factor() {
    mult_.resize(n_ - 1);
    for (int i = 1; i < n_; ++i) {
      if (diag_[i - 1] == T(0))
        throw numerical_error("zero pivot in tridiagonal factorization");
      mult_[i - 1] = lower_[i - 1] / diag_[i - 1];
      diag_[i] -= mult_[i - 1] * upper_[i - 1];
    }
    if (diag_[n_ - 1] == T(0))
      throw numerical_error("zero pivot in tridiagonal factorization");
  }

  void plain_solve(T* rhs) const {
    for (int i = 1; i < n_; ++i) rhs[i] -= mult_[i - 1] * rhs[i - 1];
    rhs[n_ - 1] /= diag_[n_ - 1];
    for (int i = n_ - 2; i >= 0; --i)
      rhs[i] = (rhs[i] - upper_[i] * rhs[i + 1]) / diag_[i];
  }

  int n_;
  std::vector<T> lower_, upper_, diag_, mult_, z_;
  bool cyclic_ = false;
  T gamma_{}, v_ratio_{}, denom_{};
};

}  // namespace ringks
