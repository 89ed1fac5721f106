#pragma once

// Natural charts and invariant fields.
//
// On a natural principal chart with constants (a, b, nu0) the metric and
// the principal geodesic curvatures are determined by the quadratures I, J:
//   E = a^-2 e^{-2 I(nu)},   G = b^-2 e^{-2 J(nu)},
//   gamma1 = b e^{J} (I)_v,  gamma2 = -a e^{I} (J)_u,
// and the chart is natural iff sqrt(EG) (nu1 - nu2) is constant.

#include <cmath>
#include <utility>
#include <vector>

#include "wsurf/errors.hpp"
#include "wsurf/fd.hpp"
#include "wsurf/grid.hpp"
#include "wsurf/quadrature.hpp"
#include "wsurf/threads.hpp"
#include "wsurf/weingarten.hpp"

namespace wsurf {

struct NaturalChart {
  double a_const = 1.0;  // a > 0
  double b_const = 1.0;  // b > 0
  double nu0 = 0.0;
  GridSpec grid;

  void validate() const {
    if (!(a_const > 0.0) || !(b_const > 0.0))
      throw UsageError("chart constants a, b must be positive");
    grid.validate();
  }
};

struct InvariantGrid {
  NaturalChart chart;
  Field nu;  // curvature parameter (chart-built grids only; see has_nu)
  Field nu1, nu2, gamma1, gamma2, E, G;
  bool has_nu = true;

  double H(int i, int j) const { return 0.5 * (nu1(i, j) + nu2(i, j)); }
  double Hp(int i, int j) const { return 0.5 * (nu1(i, j) - nu2(i, j)); }
  double Kp(int i, int j) const { return nu1(i, j) * nu2(i, j); }
  double K(int i, int j) const { return -Kp(i, j); }
};

// E = a^-2 e^{-2I(nu)}, G = b^-2 e^{-2J(nu)} pointwise over the field.
inline std::pair<Field, Field> metric_from_chart(const NaturalChart& chart,
                                                 const WeingartenPair& pair,
                                                 const Field& nu_field) {
  chart.validate();
  const QuadratureResult quad = compute_IJ(pair, chart.nu0, nu_field.raw());
  Field E(nu_field.n_u(), nu_field.n_v()), G(nu_field.n_u(), nu_field.n_v());
  const double ia2 = 1.0 / (chart.a_const * chart.a_const);
  const double ib2 = 1.0 / (chart.b_const * chart.b_const);
  for (std::size_t k = 0; k < nu_field.size(); ++k) {
    E[k] = ia2 * std::exp(-2.0 * quad.I[k]);
    G[k] = ib2 * std::exp(-2.0 * quad.J[k]);
  }
  return {std::move(E), std::move(G)};
}

// Full invariant set from a nu-field on a natural chart: nu1 = f(nu),
// nu2 = g(nu), metric by the quadratures, geodesic curvatures by centered
// finite differences of the I, J fields.
inline InvariantGrid invariants_from_nu(const NaturalChart& chart, const WeingartenPair& pair,
                                        const Field& nu_field) {
  chart.validate();
  const int nu_n = nu_field.n_u(), nv_n = nu_field.n_v();
  const double h_u = chart.grid.h_u(), h_v = chart.grid.h_v();
  const QuadratureResult quad = compute_IJ(pair, chart.nu0, nu_field.raw());

  InvariantGrid out;
  out.chart = chart;
  out.nu = nu_field;
  out.nu1 = Field(nu_n, nv_n);
  out.nu2 = Field(nu_n, nv_n);
  out.E = Field(nu_n, nv_n);
  out.G = Field(nu_n, nv_n);
  Field I_field(nu_n, nv_n), J_field(nu_n, nv_n);

  const double ia2 = 1.0 / (chart.a_const * chart.a_const);
  const double ib2 = 1.0 / (chart.b_const * chart.b_const);
  for (std::size_t k = 0; k < nu_field.size(); ++k) {
    const double nu = nu_field[k];
    out.nu1[k] = pair.f(nu);
    out.nu2[k] = pair.g(nu);
    I_field[k] = quad.I[k];
    J_field[k] = quad.J[k];
    out.E[k] = ia2 * std::exp(-2.0 * quad.I[k]);
    out.G[k] = ib2 * std::exp(-2.0 * quad.J[k]);
  }

  out.gamma1 = Field(nu_n, nv_n);
  out.gamma2 = Field(nu_n, nv_n);
  parallel_rows(nv_n, [&](int j) {
    for (int i = 0; i < nu_n; ++i) {
      const double Iv = dv_at(I_field, i, j, h_v);
      const double Ju = du_at(J_field, i, j, h_u);
      out.gamma1(i, j) = chart.b_const * std::exp(J_field(i, j)) * Iv;
      out.gamma2(i, j) = -chart.a_const * std::exp(I_field(i, j)) * Ju;
    }
  });
  return out;
}

// Lemma diagnostics: lambda = sqrt(E) e^{I}, mu = sqrt(G) e^{J}.  On a
// natural chart both are constant fields, equal to 1/a and 1/b.
inline std::pair<Field, Field> lemma_functions(const InvariantGrid& grid,
                                               const WeingartenPair& pair) {
  if (!grid.has_nu) throw UsageError("lemma_functions needs a chart-built grid with nu");
  const QuadratureResult quad = compute_IJ(pair, grid.chart.nu0, grid.nu.raw());
  Field lam(grid.nu.n_u(), grid.nu.n_v()), mu(grid.nu.n_u(), grid.nu.n_v());
  for (std::size_t k = 0; k < grid.nu.size(); ++k) {
    lam[k] = std::sqrt(grid.E[k]) * std::exp(quad.I[k]);
    mu[k] = std::sqrt(grid.G[k]) * std::exp(quad.J[k]);
  }
  return {std::move(lam), std::move(mu)};
}

// Deviation of sqrt(EG)(nu1 - nu2) from its grid mean (max norm); zero to
// tolerance exactly when the parameters are natural principal.
inline double check_natural_parameters(const InvariantGrid& grid) {
  const std::size_t n = grid.E.size();
  if (n == 0) return 0.0;
  std::vector<double> field(n);
  double mean = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    field[k] = std::sqrt(grid.E[k] * grid.G[k]) * (grid.nu1[k] - grid.nu2[k]);
    mean += field[k];
  }
  mean /= static_cast<double>(n);
  double dev = 0.0;
  for (std::size_t k = 0; k < n; ++k) dev = std::max(dev, std::abs(field[k] - mean));
  return dev;
}

// Principal-parameter invariants from fundamental forms:
//   nu1 = L/E, nu2 = N/G, gamma1 = -E_v/(2 E sqrt(G)), gamma2 = G_u/(2 G sqrt(E)).
// Requires F and M to vanish to tolerance (principal parameters).
inline InvariantGrid invariants_from_forms(const Field& E, const Field& F, const Field& G,
                                           const Field& L, const Field& M, const Field& N,
                                           double h_u, double h_v,
                                           double tol_principal = 1e-6) {
  double maxF = 0.0, maxM = 0.0;
  for (std::size_t k = 0; k < F.size(); ++k) {
    maxF = std::max(maxF, std::abs(F[k]));
    maxM = std::max(maxM, std::abs(M[k]));
  }
  if (maxF > tol_principal || maxM > tol_principal)
    throw NotPrincipalError("fundamental forms not principal: max|F| = " +
                            std::to_string(maxF) + ", max|M| = " + std::to_string(maxM));

  InvariantGrid out;
  out.has_nu = false;
  out.chart.grid.n_u = E.n_u();
  out.chart.grid.n_v = E.n_v();
  out.chart.grid.u1 = h_u * (E.n_u() - 1);
  out.chart.grid.v1 = h_v * (E.n_v() - 1);
  out.nu = Field(E.n_u(), E.n_v());
  out.nu1 = Field(E.n_u(), E.n_v());
  out.nu2 = Field(E.n_u(), E.n_v());
  out.E = E;
  out.G = G;
  for (std::size_t k = 0; k < E.size(); ++k) {
    if (!(E[k] > 0.0) || !(G[k] > 0.0))
      throw DomainError("E and G must be positive (space-like surface)");
    out.nu1[k] = L[k] / E[k];
    out.nu2[k] = N[k] / G[k];
  }
  out.gamma1 = Field(E.n_u(), E.n_v());
  out.gamma2 = Field(E.n_u(), E.n_v());
  parallel_rows(E.n_v(), [&](int j) {
    for (int i = 0; i < E.n_u(); ++i) {
      const double Ev = dv_at(E, i, j, h_v);
      const double Gu = du_at(G, i, j, h_u);
      out.gamma1(i, j) = -Ev / (2.0 * E(i, j) * std::sqrt(G(i, j)));
      out.gamma2(i, j) = Gu / (2.0 * G(i, j) * std::sqrt(E(i, j)));
    }
  });
  return out;
}

}  // namespace wsurf
