#pragma once

// Independent verification of reconstructed surfaces: recover the two
// fundamental forms from mesh positions by finite differences, compare the
// measured principal curvatures against the prescribed Weingarten data, and
// evaluate the Gauss and Codazzi equations pointwise on invariant fields.
//
// Error norms come in full-grid and interior-only variants; the one-sided
// second-derivative stencils on the outermost ring are first-order, so
// quantitative acceptance numbers use the interior variants.

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "wsurf/errors.hpp"
#include "wsurf/fd.hpp"
#include "wsurf/grid.hpp"
#include "wsurf/invariants.hpp"
#include "wsurf/minkowski.hpp"
#include "wsurf/reconstruct.hpp"
#include "wsurf/threads.hpp"
#include "wsurf/weingarten.hpp"

namespace wsurf {

// Coefficients of the first (E, F, G) and second (L, M, N) fundamental
// forms, all with respect to the Minkowski pairing.
struct FormFields {
  Field E, F, G, L, M, N;

  // Space-like first form: E, G > 0 and EG - F^2 > 0 at every node.
  bool space_like() const {
    for (std::size_t k = 0; k < E.size(); ++k) {
      if (!(E[k] > 0.0) || !(G[k] > 0.0)) return false;
      if (!(E[k] * G[k] - F[k] * F[k] > 0.0)) return false;
    }
    return true;
  }
};

// Where the unit normal used for L, M, N comes from: the frames stored by
// the integrator (isolates mesh-differentiation error), or a recomputed
// Lorentzian cross product of the mesh tangents (cross-check mode).
enum class NormalSource { STORED, CROSS_PRODUCT };

namespace detail {

inline MinkowskiVec d1_u(const SurfaceGrid& s, int i, int j, double h) {
  auto c = [&](double MinkowskiVec::*m) {
    return fd::d1([&](int k) { return s.at(k, j).z.*m; }, i, s.n_u, h);
  };
  return {c(&MinkowskiVec::x1), c(&MinkowskiVec::x2), c(&MinkowskiVec::x3)};
}
inline MinkowskiVec d1_v(const SurfaceGrid& s, int i, int j, double h) {
  auto c = [&](double MinkowskiVec::*m) {
    return fd::d1([&](int k) { return s.at(i, k).z.*m; }, j, s.n_v, h);
  };
  return {c(&MinkowskiVec::x1), c(&MinkowskiVec::x2), c(&MinkowskiVec::x3)};
}
inline MinkowskiVec d2_u(const SurfaceGrid& s, int i, int j, double h) {
  auto c = [&](double MinkowskiVec::*m) {
    return fd::d2([&](int k) { return s.at(k, j).z.*m; }, i, s.n_u, h);
  };
  return {c(&MinkowskiVec::x1), c(&MinkowskiVec::x2), c(&MinkowskiVec::x3)};
}
inline MinkowskiVec d2_v(const SurfaceGrid& s, int i, int j, double h) {
  auto c = [&](double MinkowskiVec::*m) {
    return fd::d2([&](int k) { return s.at(i, k).z.*m; }, j, s.n_v, h);
  };
  return {c(&MinkowskiVec::x1), c(&MinkowskiVec::x2), c(&MinkowskiVec::x3)};
}

}  // namespace detail

// Recover all six form coefficients from mesh positions.  First derivatives
// feed E, F, G; mixed and pure second derivatives feed L, M, N through the
// chosen normal.  The mixed derivative differentiates the z_u field in v, so
// L, M, N stay second-order accurate away from the outermost ring.
inline FormFields forms_from_mesh(const SurfaceGrid& s,
                                  NormalSource source = NormalSource::STORED) {
  const int n_u = s.n_u, n_v = s.n_v;
  if (n_u < 5 || n_v < 5) throw UsageError("form recovery needs a grid of at least 5x5");
  const double h_u = s.chart.grid.h_u(), h_v = s.chart.grid.h_v();

  FormFields f;
  f.E = Field(n_u, n_v);
  f.F = Field(n_u, n_v);
  f.G = Field(n_u, n_v);
  f.L = Field(n_u, n_v);
  f.M = Field(n_u, n_v);
  f.N = Field(n_u, n_v);

  VecField zu(n_u, n_v);
  parallel_rows(n_v, [&](int j) {
    for (int i = 0; i < n_u; ++i) zu(i, j) = detail::d1_u(s, i, j, h_u);
  });

  parallel_rows(n_v, [&](int j) {
    for (int i = 0; i < n_u; ++i) {
      const MinkowskiVec z_u = zu(i, j);
      const MinkowskiVec z_v = detail::d1_v(s, i, j, h_v);
      const MinkowskiVec z_uu = detail::d2_u(s, i, j, h_u);
      const MinkowskiVec z_vv = detail::d2_v(s, i, j, h_v);
      auto at_uv = [&](double MinkowskiVec::*m) {
        return fd::d1([&](int k) { return zu(i, k).*m; }, j, n_v, h_v);
      };
      const MinkowskiVec z_uv{at_uv(&MinkowskiVec::x1), at_uv(&MinkowskiVec::x2),
                              at_uv(&MinkowskiVec::x3)};

      MinkowskiVec l = s.at(i, j).l;
      if (source == NormalSource::CROSS_PRODUCT) {
        const MinkowskiVec c = cross_l(z_u, z_v);
        const double cc = minkowski_dot(c, c);
        if (!(cc < 0.0))
          throw DomainError("mesh tangents do not span a space-like plane");
        l = c / std::sqrt(-cc);
      }

      f.E(i, j) = minkowski_dot(z_u, z_u);
      f.F(i, j) = minkowski_dot(z_u, z_v);
      f.G(i, j) = minkowski_dot(z_v, z_v);
      f.L(i, j) = minkowski_dot(l, z_uu);
      f.M(i, j) = minkowski_dot(l, z_uv);
      f.N(i, j) = minkowski_dot(l, z_vv);
    }
  });
  return f;
}

// --- field statistics ------------------------------------------------------

inline double max_abs(const Field& f) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) m = std::max(m, std::abs(f[k]));
  return m;
}

inline double mean_abs(const Field& f) {
  if (f.size() == 0) return 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += std::abs(f[k]);
  return s / static_cast<double>(f.size());
}

// Max over nodes at least `ring` away from every edge (empty set -> 0).
inline double max_abs_interior(const Field& f, int ring = 1) {
  double m = 0.0;
  for (int j = ring; j < f.n_v() - ring; ++j)
    for (int i = ring; i < f.n_u() - ring; ++i) m = std::max(m, std::abs(f(i, j)));
  return m;
}

inline double mean_abs_interior(const Field& f, int ring = 1) {
  double s = 0.0;
  long count = 0;
  for (int j = ring; j < f.n_v() - ring; ++j)
    for (int i = ring; i < f.n_u() - ring; ++i) {
      s += std::abs(f(i, j));
      ++count;
    }
  return count > 0 ? s / static_cast<double>(count) : 0.0;
}

// --- Gauss-Codazzi ----------------------------------------------------------

// Pointwise residuals of the structure equations in principal parameters:
//   codazzi1 = gamma1 - (nu1)_v / (sqrt(G)(nu1 - nu2)),
//   codazzi2 = gamma2 - (nu2)_u / (sqrt(E)(nu1 - nu2)),
//   gauss    = (gamma2)_u/sqrt(E) - (gamma1)_v/sqrt(G)
//              + gamma1^2 + gamma2^2 - nu1 nu2.
// Assumes nu1 - nu2 > 0 (enforced upstream); purely diagnostic.
struct ResidualFields {
  Field codazzi1, codazzi2, gauss;
};

inline ResidualFields gauss_codazzi_residual(const InvariantGrid& grid) {
  const int n_u = grid.nu1.n_u(), n_v = grid.nu1.n_v();
  if (n_u < 3 || n_v < 3)
    throw UsageError("structure-equation residuals need at least 3 nodes per axis");
  const double h_u = grid.chart.grid.h_u(), h_v = grid.chart.grid.h_v();

  ResidualFields r;
  r.codazzi1 = Field(n_u, n_v);
  r.codazzi2 = Field(n_u, n_v);
  r.gauss = Field(n_u, n_v);

  parallel_rows(n_v, [&](int j) {
    for (int i = 0; i < n_u; ++i) {
      const double d = grid.nu1(i, j) - grid.nu2(i, j);
      const double sE = std::sqrt(grid.E(i, j));
      const double sG = std::sqrt(grid.G(i, j));
      r.codazzi1(i, j) = grid.gamma1(i, j) - dv_at(grid.nu1, i, j, h_v) / (sG * d);
      r.codazzi2(i, j) = grid.gamma2(i, j) - du_at(grid.nu2, i, j, h_u) / (sE * d);
      r.gauss(i, j) = du_at(grid.gamma2, i, j, h_u) / sE -
                      dv_at(grid.gamma1, i, j, h_v) / sG +
                      grid.gamma1(i, j) * grid.gamma1(i, j) +
                      grid.gamma2(i, j) * grid.gamma2(i, j) -
                      grid.nu1(i, j) * grid.nu2(i, j);
    }
  });
  return r;
}

// --- curvature comparison ---------------------------------------------------

// Deviation of the mesh-measured principal curvatures L/E, N/G from the
// prescribed Weingarten values f(nu), g(nu).
struct CurvatureDeviation {
  double nu1_max = 0.0, nu1_mean = 0.0;
  double nu2_max = 0.0, nu2_mean = 0.0;
  double nu1_max_interior = 0.0, nu2_max_interior = 0.0;
};

inline CurvatureDeviation compare_curvatures(const SurfaceGrid& surface,
                                             const WeingartenPair& pair,
                                             const Field& nu_field,
                                             NormalSource source = NormalSource::STORED) {
  if (nu_field.n_u() != surface.n_u || nu_field.n_v() != surface.n_v)
    throw UsageError("nu field shape does not match the surface grid");
  const FormFields f = forms_from_mesh(surface, source);

  Field dev1(surface.n_u, surface.n_v), dev2(surface.n_u, surface.n_v);
  for (int j = 0; j < surface.n_v; ++j)
    for (int i = 0; i < surface.n_u; ++i) {
      dev1(i, j) = f.L(i, j) / f.E(i, j) - pair.f(nu_field(i, j));
      dev2(i, j) = f.N(i, j) / f.G(i, j) - pair.g(nu_field(i, j));
    }

  CurvatureDeviation out;
  out.nu1_max = max_abs(dev1);
  out.nu1_mean = mean_abs(dev1);
  out.nu2_max = max_abs(dev2);
  out.nu2_mean = mean_abs(dev2);
  out.nu1_max_interior = max_abs_interior(dev1);
  out.nu2_max_interior = max_abs_interior(dev2);
  return out;
}

// --- aggregate report -------------------------------------------------------

// One-stop verification of a reconstructed mesh: recovers forms, converts
// them to invariants, and summarizes the structure-equation residuals plus
// the principal-parameter defect (max|F|, max|M|).  All headline numbers are
// interior-only; full-grid maxima ride along for diagnosis.
struct VerificationReport {
  double codazzi1_max = 0.0, codazzi2_max = 0.0, gauss_max = 0.0;
  double nu1_dev = 0.0, nu2_dev = 0.0;
  double F_max = 0.0, M_max = 0.0;
  double codazzi1_max_full = 0.0, codazzi2_max_full = 0.0, gauss_max_full = 0.0;
  double F_max_full = 0.0, M_max_full = 0.0;
  double h_u = 0.0, h_v = 0.0;
};

inline VerificationReport verify_surface(const SurfaceGrid& surface,
                                         const WeingartenPair& pair, const Field& nu_field,
                                         double tol_principal = 1.0) {
  const FormFields f = forms_from_mesh(surface);
  const double h_u = surface.chart.grid.h_u(), h_v = surface.chart.grid.h_v();
  const InvariantGrid inv =
      invariants_from_forms(f.E, f.F, f.G, f.L, f.M, f.N, h_u, h_v, tol_principal);
  const ResidualFields res = gauss_codazzi_residual(inv);
  const CurvatureDeviation dev = compare_curvatures(surface, pair, nu_field);

  VerificationReport rep;
  rep.codazzi1_max = max_abs_interior(res.codazzi1);
  rep.codazzi2_max = max_abs_interior(res.codazzi2);
  rep.gauss_max = max_abs_interior(res.gauss);
  rep.codazzi1_max_full = max_abs(res.codazzi1);
  rep.codazzi2_max_full = max_abs(res.codazzi2);
  rep.gauss_max_full = max_abs(res.gauss);
  rep.nu1_dev = dev.nu1_max_interior;
  rep.nu2_dev = dev.nu2_max_interior;
  rep.F_max = max_abs_interior(f.F);
  rep.M_max = max_abs_interior(f.M);
  rep.F_max_full = max_abs(f.F);
  rep.M_max_full = max_abs(f.M);
  rep.h_u = h_u;
  rep.h_v = h_v;
  return rep;
}

}  // namespace wsurf
