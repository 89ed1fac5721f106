#pragma once

// Second-order finite differences on grid fields: centered stencils in the
// interior, one-sided stencils on the boundary rings, so every node carries
// an O(h^2) first-derivative estimate (second derivatives drop one order at
// the two end nodes).

#include "wsurf/grid.hpp"
#include "wsurf/threads.hpp"

namespace wsurf {

namespace fd {

// First derivative along a line of samples, node k of n, spacing h.
// The boundary stencils are one-sided formulas built to reproduce the
// centered stencil's truncation series through two orders: the five-point
// weights (-5/2, 11/2, -5, 5/2, -1/2)/h satisfy the moment conditions
// sum w = 0, sum k w = 1, sum k^2 w = 0, sum k^3 w = 1, sum k^4 w = 0, so
// both the h^2 f''' / 6 term and the (vanishing) h^3 term agree with the
// interior formula.  A differentiated field then carries a single error
// profile that is smooth across the whole line up to O(h^4); this matters
// whenever the output is differenced again (and, for fields that feed an
// integrator, differenced a third time downstream), since every later
// generation of differences amplifies a boundary error kink by 1/h.
// Shorter lines fall back to the four-point match (h^2 term only) and to
// the classic three-point formula.
template <class At>
inline double d1(const At& f, int k, int n, double h) {
  if (k == 0) {
    if (n == 3) return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
    if (n == 4) return (-2.0 * f(0) + 3.5 * f(1) - 2.0 * f(2) + 0.5 * f(3)) / h;
    return (-2.5 * f(0) + 5.5 * f(1) - 5.0 * f(2) + 2.5 * f(3) - 0.5 * f(4)) / h;
  }
  if (k == n - 1) {
    if (n == 3) return (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
    if (n == 4)
      return (2.0 * f(n - 1) - 3.5 * f(n - 2) + 2.0 * f(n - 3) - 0.5 * f(n - 4)) / h;
    return (2.5 * f(n - 1) - 5.5 * f(n - 2) + 5.0 * f(n - 3) - 2.5 * f(n - 4) +
            0.5 * f(n - 5)) /
           h;
  }
  return (f(k + 1) - f(k - 1)) / (2.0 * h);
}

// Second derivative, same layout.
template <class At>
inline double d2(const At& f, int k, int n, double h) {
  if (k == 0) return (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / (h * h);
  if (k == n - 1)
    return (2.0 * f(n - 1) - 5.0 * f(n - 2) + 4.0 * f(n - 3) - f(n - 4)) / (h * h);
  return (f(k - 1) - 2.0 * f(k) + f(k + 1)) / (h * h);
}

}  // namespace fd

inline double du_at(const Field& f, int i, int j, double h_u) {
  return fd::d1([&](int k) { return f(k, j); }, i, f.n_u(), h_u);
}
inline double dv_at(const Field& f, int i, int j, double h_v) {
  return fd::d1([&](int k) { return f(i, k); }, j, f.n_v(), h_v);
}
inline double duu_at(const Field& f, int i, int j, double h_u) {
  return fd::d2([&](int k) { return f(k, j); }, i, f.n_u(), h_u);
}
inline double dvv_at(const Field& f, int i, int j, double h_v) {
  return fd::d2([&](int k) { return f(i, k); }, j, f.n_v(), h_v);
}

inline Field du_field(const Field& f, double h_u) {
  Field out(f.n_u(), f.n_v());
  parallel_rows(f.n_v(), [&](int j) {
    for (int i = 0; i < f.n_u(); ++i) out(i, j) = du_at(f, i, j, h_u);
  });
  return out;
}
inline Field dv_field(const Field& f, double h_v) {
  Field out(f.n_u(), f.n_v());
  parallel_rows(f.n_v(), [&](int j) {
    for (int i = 0; i < f.n_u(); ++i) out(i, j) = dv_at(f, i, j, h_v);
  });
  return out;
}
inline Field duu_field(const Field& f, double h_u) {
  Field out(f.n_u(), f.n_v());
  parallel_rows(f.n_v(), [&](int j) {
    for (int i = 0; i < f.n_u(); ++i) out(i, j) = duu_at(f, i, j, h_u);
  });
  return out;
}
inline Field dvv_field(const Field& f, double h_v) {
  Field out(f.n_u(), f.n_v());
  parallel_rows(f.n_v(), [&](int j) {
    for (int i = 0; i < f.n_u(); ++i) out(i, j) = dvv_at(f, i, j, h_v);
  });
  return out;
}

}  // namespace wsurf
