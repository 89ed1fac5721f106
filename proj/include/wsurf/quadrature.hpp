#pragma once

// Quadratures of the Weingarten integrands:
//   I(nu) = ∫_{nu0}^{nu} f'(s) ds / (f(s) - g(s)),
//   J(nu) = ∫_{nu0}^{nu} g'(s) ds / (g(s) - f(s)),
// realized by integrating a not-a-knot cubic spline of the integrand over a
// dense uniform table (default 2049 nodes).  Not-a-knot ends keep the
// interpolant fourth-order accurate all the way to the boundary, so the
// cumulative values carry a global O(h^4) error at every node for smooth
// integrands, and the interpolant's derivative is the spline itself, so
// dI/dnu = f'/(f-g) holds to the same order at arbitrary evaluation points.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wsurf/errors.hpp"
#include "wsurf/weingarten.hpp"

namespace wsurf {

// Cubic spline of samples y_k at uniform nodes x_k = x0 + k*h (not-a-knot
// ends for n >= 4, degenerating gracefully for shorter tables), together with
// its exact running integral C_k = ∫_{x_0}^{x_k} S.
class CubicQuadrature {
 public:
  CubicQuadrature() = default;

  CubicQuadrature(double x0, double h, std::vector<double> y)
      : x0_(x0), h_(h), y_(std::move(y)) {
    build();
  }

  double x_min() const { return x0_; }
  double x_max() const { return x0_ + h_ * (static_cast<int>(y_.size()) - 1); }

  // Running integral from x_min to x.
  double integral_to(double x) const {
    const int k = locate(x);
    return C_[k] + piece_integral(k, x);
  }

  // Spline value (= integrand interpolant = derivative of integral_to).
  double value_at(double x) const {
    const int k = locate(x);
    const double xk = x0_ + k * h_;
    const double s = x - xk, r = h_ - s;
    return M_[k] * r * r * r / (6.0 * h_) + M_[k + 1] * s * s * s / (6.0 * h_) +
           (y_[k] - M_[k] * h_ * h_ / 6.0) * r / h_ +
           (y_[k + 1] - M_[k + 1] * h_ * h_ / 6.0) * s / h_;
  }

 private:
  void build() {
    const int n = static_cast<int>(y_.size());
    M_.assign(n, 0.0);
    if (n == 3) {
      // Single interior node: the parabola through the three samples.
      M_[0] = M_[1] = M_[2] = (y_[0] - 2.0 * y_[1] + y_[2]) / (h_ * h_);
    } else if (n >= 4) {
      // Interior second-derivative equations (r_k defined for k = 1..n-2):
      // M_{k-1} + 4 M_k + M_{k+1} = r_k = 6 (y_{k-1} - 2 y_k + y_{k+1}) / h^2,
      // closed with not-a-knot ends (third derivative continuous across the
      // first and last interior nodes): M_0 = 2 M_1 - M_2 and symmetrically.
      // Substituting the end conditions collapses the first and last interior
      // equations to 6 M_1 = r_1 and 6 M_{n-2} = r_{n-2}, leaving a plain
      // (1, 4, 1) tridiagonal system for M_2 .. M_{n-3}.
      std::vector<double> r(n, 0.0);
      for (int k = 1; k + 1 < n; ++k)
        r[k] = 6.0 * (y_[k - 1] - 2.0 * y_[k] + y_[k + 1]) / (h_ * h_);
      M_[1] = r[1] / 6.0;
      M_[n - 2] = r[n - 2] / 6.0;
      const int m = n - 4;  // unknowns M_2 .. M_{n-3}
      if (m >= 1) {
        std::vector<double> c(m, 0.0), d(m, 0.0);
        for (int j = 0; j < m; ++j) d[j] = r[j + 2];
        d[0] -= M_[1];
        d[m - 1] -= M_[n - 2];
        double beta = 4.0;
        c[0] = 1.0 / beta;
        d[0] /= beta;
        for (int j = 1; j < m; ++j) {
          beta = 4.0 - c[j - 1];
          c[j] = 1.0 / beta;
          d[j] = (d[j] - d[j - 1]) / beta;
        }
        for (int j = m - 2; j >= 0; --j) d[j] -= c[j] * d[j + 1];
        for (int j = 0; j < m; ++j) M_[j + 2] = d[j];
      }
      M_[0] = 2.0 * M_[1] - M_[2];
      M_[n - 1] = 2.0 * M_[n - 2] - M_[n - 3];
    }
    C_.assign(n, 0.0);
    for (int k = 0; k + 1 < n; ++k) {
      C_[k + 1] = C_[k] + h_ * (y_[k] + y_[k + 1]) / 2.0 -
                  h_ * h_ * h_ * (M_[k] + M_[k + 1]) / 24.0;
    }
  }

  int locate(double x) const {
    const int n = static_cast<int>(y_.size());
    const double eps = 1e-9 * (1.0 + std::abs(h_) * n);
    if (x < x_min() - eps || x > x_max() + eps)
      throw DomainError("quadrature evaluation at nu = " + std::to_string(x) +
                        " outside tabulated range");
    int k = static_cast<int>(std::floor((x - x0_) / h_));
    return std::clamp(k, 0, n - 2);
  }

  double piece_integral(int k, double t) const {
    const double xk = x0_ + k * h_;
    const double s = t - xk, r = h_ - s;
    const double h4 = h_ * h_ * h_ * h_;
    return M_[k] * (h4 - r * r * r * r) / (24.0 * h_) +
           M_[k + 1] * s * s * s * s / (24.0 * h_) +
           (y_[k] - M_[k] * h_ * h_ / 6.0) * (h_ * h_ - r * r) / (2.0 * h_) +
           (y_[k + 1] - M_[k + 1] * h_ * h_ / 6.0) * s * s / (2.0 * h_);
  }

  double x0_ = 0.0, h_ = 1.0;
  std::vector<double> y_, M_, C_;
};

// Tabulated I and J anchored at nu0 (I(nu0) = J(nu0) = 0), with interpolants
// valid on the span of the requested samples.
struct QuadratureResult {
  std::vector<double> I;  // at the requested samples
  std::vector<double> J;
  double nu0 = 0.0;
  bool trivial = false;  // degenerate span (all samples at nu0)
  CubicQuadrature I_interp, J_interp;
  double I_anchor = 0.0, J_anchor = 0.0;  // running integral at nu0

  double I_of(double nu) const { return trivial ? 0.0 : I_interp.integral_to(nu) - I_anchor; }
  double J_of(double nu) const { return trivial ? 0.0 : J_interp.integral_to(nu) - J_anchor; }
  double dI_of(double nu) const { return trivial ? 0.0 : I_interp.value_at(nu); }
  double dJ_of(double nu) const { return trivial ? 0.0 : J_interp.value_at(nu); }
};

// tol_singular < 0 selects the default 1e-8 * (scale of f over the table).
inline QuadratureResult compute_IJ(const WeingartenPair& pair, double nu0,
                                   const std::vector<double>& nu_samples,
                                   int table_size = 2049, double tol_singular = -1.0) {
  QuadratureResult out;
  out.nu0 = nu0;
  pair.require_in_domain(nu0);

  double lo = nu0, hi = nu0;
  for (double nu : nu_samples) {
    pair.require_in_domain(nu);
    lo = std::min(lo, nu);
    hi = std::max(hi, nu);
  }

  if (hi - lo <= 0.0) {
    out.trivial = true;
    out.I.assign(nu_samples.size(), 0.0);
    out.J.assign(nu_samples.size(), 0.0);
    return out;
  }

  if (table_size < 5) table_size = 5;
  const double h = (hi - lo) / (table_size - 1);
  std::vector<double> fv(table_size), gv(table_size), diff(table_size);
  double f_scale = 0.0;
  for (int k = 0; k < table_size; ++k) {
    const double nu = lo + k * h;
    fv[k] = pair.fp(nu);
    gv[k] = pair.gp(nu);
    diff[k] = pair.diff(nu);
    f_scale = std::max(f_scale, std::abs(pair.f(nu)));
  }
  if (tol_singular < 0.0) tol_singular = 1e-8 * std::max(1.0, f_scale);
  for (int k = 0; k < table_size; ++k) {
    if (std::abs(diff[k]) < tol_singular)
      throw DomainError("f - g below singular tolerance at nu = " +
                        std::to_string(lo + k * h));
    if (k > 0 && diff[k] * diff[k - 1] < 0.0)
      throw DomainError("f - g changes sign inside the integration range");
  }

  std::vector<double> yI(table_size), yJ(table_size);
  for (int k = 0; k < table_size; ++k) {
    yI[k] = fv[k] / diff[k];
    yJ[k] = -gv[k] / diff[k];
  }
  out.I_interp = CubicQuadrature(lo, h, std::move(yI));
  out.J_interp = CubicQuadrature(lo, h, std::move(yJ));
  out.I_anchor = out.I_interp.integral_to(nu0);
  out.J_anchor = out.J_interp.integral_to(nu0);

  out.I.reserve(nu_samples.size());
  out.J.reserve(nu_samples.size());
  for (double nu : nu_samples) {
    out.I.push_back(out.I_of(nu));
    out.J.push_back(out.J_of(nu));
  }
  return out;
}

}  // namespace wsurf
