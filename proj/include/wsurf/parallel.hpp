#pragma once

// Parallel-family transformations: a surface offset by a constant distance a
// along its unit normal, z_bar = z + a*l, stays space-like away from the
// excluded set (1 - a*nu1)(1 - a*nu2) = 0, and every structural quantity
// transports by closed formulas:
//   tangents   z_bar_u = (1 - a*nu1) z_u,    z_bar_v = (1 - a*nu2) z_v
//   normal     l_bar   = eps * l,  eps = sign((1 - a*nu1)(1 - a*nu2))
//   curvatures nu_bar_i = eps * nu_i / (1 - a*nu_i)   (and back:
//              nu_i = eps * nu_bar_i / (1 + a*eps*nu_bar_i))
//   pair       f_bar = eps*f/(1 - a*f),  g_bar = eps*g/(1 - a*g)
//   relation   (alpha, beta, gamma, delta) -> (eps*(alpha + 2a*gamma),
//              eps*beta, gamma, delta - a*alpha - a^2*gamma)
// The offset is certified on the data first: both factors 1 - a*nu_i must
// keep one sign across the grid and stay clear of zero, so eps is a single
// constant.  Grids straddling the excluded set are rejected outright rather
// than split.

#include <algorithm>
#include <cmath>
#include <utility>

#include "wsurf/errors.hpp"
#include "wsurf/expr.hpp"
#include "wsurf/grid.hpp"
#include "wsurf/invariants.hpp"
#include "wsurf/pde.hpp"
#include "wsurf/reconstruct.hpp"
#include "wsurf/relation.hpp"
#include "wsurf/verify.hpp"
#include "wsurf/weingarten.hpp"

namespace wsurf {

struct ParallelOffset {
  double a = 0.0;
  int epsilon = +1;
};

namespace detail {

inline void require_offset_nonzero(double a) {
  if (!(a != 0.0)) throw UsageError("parallel offset a must be a nonzero constant");
}

// Feed both factor samples through one pass: each factor must stay on one
// side of zero and outside the tol-neighborhood of it.
class OffsetCertifier {
 public:
  OffsetCertifier(double a, double tol) : a_(a), tol_(tol) { require_offset_nonzero(a); }

  void sample(double nu1, double nu2) {
    absorb(1.0 - a_ * nu1, sign1_);
    absorb(1.0 - a_ * nu2, sign2_);
  }

  int epsilon() const { return sign1_ * sign2_; }

 private:
  void absorb(double w, int& slot) {
    if (std::abs(w) < tol_)
      throw SingularOffsetError("parallel offset hits the excluded set: |1 - a nu| = " +
                                std::to_string(std::abs(w)) + " is below tolerance");
    const int s = w > 0.0 ? +1 : -1;
    if (slot == 0) slot = s;
    if (slot != s)
      throw SingularOffsetError(
          "grid straddles the excluded set (1 - a nu1)(1 - a nu2) = 0; the offset "
          "does not define a single parallel surface on this domain");
  }

  double a_;
  double tol_;
  int sign1_ = 0, sign2_ = 0;
};

}  // namespace detail

// Certify an offset against per-node principal curvatures and derive the
// constant sign eps.
inline ParallelOffset certify_offset(const Field& nu1, const Field& nu2, double a,
                                     double tol = 1e-9) {
  if (!nu1.same_shape(nu2)) throw UsageError("curvature fields differ in shape");
  detail::OffsetCertifier cert(a, tol);
  for (std::size_t k = 0; k < nu1.size(); ++k) cert.sample(nu1[k], nu2[k]);
  return ParallelOffset{a, cert.epsilon()};
}

struct ParallelInvariants {
  Field nu1_bar, nu2_bar;
  int epsilon = +1;
};

// Principal curvatures of the parallel surface from those of the base.
inline ParallelInvariants parallel_invariants(const Field& nu1, const Field& nu2, double a,
                                              double tol = 1e-9) {
  const ParallelOffset off = certify_offset(nu1, nu2, a, tol);
  ParallelInvariants out;
  out.epsilon = off.epsilon;
  out.nu1_bar = Field(nu1.n_u(), nu1.n_v());
  out.nu2_bar = Field(nu2.n_u(), nu2.n_v());
  const double eps = static_cast<double>(off.epsilon);
  for (std::size_t k = 0; k < nu1.size(); ++k) {
    out.nu1_bar[k] = eps * nu1[k] / (1.0 - a * nu1[k]);
    out.nu2_bar[k] = eps * nu2[k] / (1.0 - a * nu2[k]);
  }
  return out;
}

// Inverse map: base curvatures from the parallel surface's.
inline std::pair<Field, Field> parallel_invariants_inverse(const Field& nu1_bar,
                                                           const Field& nu2_bar, double a,
                                                           int epsilon) {
  detail::require_offset_nonzero(a);
  if (epsilon != 1 && epsilon != -1) throw UsageError("epsilon must be +1 or -1");
  if (!nu1_bar.same_shape(nu2_bar)) throw UsageError("curvature fields differ in shape");
  Field nu1(nu1_bar.n_u(), nu1_bar.n_v()), nu2(nu2_bar.n_u(), nu2_bar.n_v());
  const double eps = static_cast<double>(epsilon);
  for (std::size_t k = 0; k < nu1_bar.size(); ++k) {
    nu1[k] = eps * nu1_bar[k] / (1.0 + a * eps * nu1_bar[k]);
    nu2[k] = eps * nu2_bar[k] / (1.0 + a * eps * nu2_bar[k]);
  }
  return {std::move(nu1), std::move(nu2)};
}

// Offset an integrated mesh along its stored normals.  Curvatures for the
// offset certificate come from the recovered fundamental forms, which carry
// O(h^2) discretization error; the default tolerance is therefore a coarse
// safety band, not a rounding threshold — offsets passing that close to the
// excluded set have no trustworthy parallel mesh at this resolution anyway.
inline SurfaceGrid parallel_surface(const SurfaceGrid& s, double a, double tol = 1e-3) {
  detail::require_offset_nonzero(a);
  const FormFields f = forms_from_mesh(s);

  Field nu1(s.n_u, s.n_v), nu2(s.n_u, s.n_v);
  for (int j = 0; j < s.n_v; ++j)
    for (int i = 0; i < s.n_u; ++i) {
      nu1(i, j) = f.L(i, j) / f.E(i, j);
      nu2(i, j) = f.N(i, j) / f.G(i, j);
    }
  const ParallelOffset off = certify_offset(nu1, nu2, a, tol);

  // Constant factor signs were certified above, so the frame maps are the
  // same at every node: X flips with sign(1 - a*nu1), Y with sign(1 - a*nu2),
  // l with their product.
  const double s1 = (1.0 - a * nu1(0, 0)) > 0.0 ? 1.0 : -1.0;
  const double s2 = (1.0 - a * nu2(0, 0)) > 0.0 ? 1.0 : -1.0;
  const double eps = static_cast<double>(off.epsilon);

  SurfaceGrid out = s;
  for (Frame& fr : out.frames) {
    fr.z = fr.z + a * fr.l;
    fr.X = s1 * fr.X;
    fr.Y = s2 * fr.Y;
    fr.l = eps * fr.l;
    fr.renormalize();
  }
  return out;
}

struct ParallelPair {
  WeingartenPair pair;
  int epsilon = +1;
};

// Weingarten functions of the parallel surface as new expression trees,
// certified by sampling on [nu_lo, nu_hi] (which must lie in the pair's
// domain).  sign(f_bar - g_bar) = sign(f - g) follows from the identity
// f_bar - g_bar = eps (f - g) / ((1 - a f)(1 - a g)).
inline ParallelPair parallel_weingarten(const WeingartenPair& pair, double a, double nu_lo,
                                        double nu_hi, int n_samples = 257,
                                        double tol = 1e-9) {
  detail::require_offset_nonzero(a);
  if (!(nu_lo < nu_hi) || n_samples < 2)
    throw UsageError("parallel_weingarten needs nu_lo < nu_hi and at least 2 samples");

  detail::OffsetCertifier cert(a, tol);
  for (int k = 0; k < n_samples; ++k) {
    const double nu = nu_lo + (nu_hi - nu_lo) * k / (n_samples - 1);
    pair.require_in_domain(nu);
    cert.sample(pair.f(nu), pair.g(nu));
  }
  const double eps = static_cast<double>(cert.epsilon());

  const Expr fe = pair.f_expr(), ge = pair.g_expr();
  WeingartenPair bar(eps * fe / (1.0 - a * fe), eps * ge / (1.0 - a * ge), pair.domain());
  return ParallelPair{std::move(bar), cert.epsilon()};
}

// Coefficient transport of a linear curvature relation
// delta*K' = alpha*H + beta*H' + gamma under a parallel offset.  The
// discriminant alpha^2 - beta^2 + 4*gamma*delta is preserved exactly:
//   (alpha + 2a*gamma)^2 - beta^2 + 4*gamma*(delta - a*alpha - a^2*gamma)
//     = alpha^2 - beta^2 + 4*gamma*delta,
// so the output is nondegenerate whenever the input is.
inline LinearRelation parallel_relation(const LinearRelation& rel, double a,
                                        int epsilon = +1, double tol = 1e-12) {
  detail::require_offset_nonzero(a);
  if (epsilon != 1 && epsilon != -1) throw UsageError("epsilon must be +1 or -1");
  if (rel.degenerate(tol))
    throw DegenerateRelationError(
        "degenerate relation (alpha^2 - beta^2 + 4 gamma delta = 0) has no "
        "parallel transport");
  const double eps = static_cast<double>(epsilon);
  LinearRelation out;
  out.alpha = eps * (rel.alpha + 2.0 * a * rel.gamma);
  out.beta = eps * rel.beta;
  out.gamma = rel.gamma;
  out.delta = rel.delta - a * rel.alpha - a * a * rel.gamma;
  return out;
}

// Certificate that the natural structure transports: the parallel data keep
// sqrt(E G)(nu1 - nu2) constant on the same (u, v) chart, and the natural
// PDE residual of the parallel data reproduces the base residual.
//
// The two residuals are proportional per node, not equal: expanding the
// transported coefficients shows
//   residual(parallel) * (1 - a f(nu)) (1 - a g(nu)) = residual(base)
// holds as an algebraic identity for ANY field nu (both residuals difference
// the same nu, so the finite-difference error divides out).  The report
// carries both measurements:
//   * identity_defect  — the factored identity above; rounding-level for any
//                        field, solution or not.
//   * residual_match   — the unfactored max |res_bar - res|; on a field that
//                        solves the base PDE both residuals are O(h^2)
//                        truncation, so this difference decays at O(h^2).
struct ParallelNaturalReport {
  double a = 0.0;
  int epsilon = +1;
  double a_bar = 0.0, b_bar = 0.0;  // transported chart amplitudes
  double f0 = 0.0, g0 = 0.0;        // pair at the chart origin nu0
  double constancy_abs = 0.0;       // max |sqrt(EG)(nu1-nu2) - mean|, parallel data
  double constancy_rel = 0.0;       // the same relative to |mean|
  double residual_match = 0.0;      // max |residual(parallel) - residual(base)|
  double identity_defect = 0.0;     // max |residual(parallel)*(1-af)(1-ag) - residual(base)|
};

inline ParallelNaturalReport check_parallel_natural(const NaturalChart& chart,
                                                    const WeingartenPair& pair,
                                                    const Field& nu_field, double a,
                                                    double tol = 1e-9) {
  detail::require_offset_nonzero(a);
  chart.validate();

  ParallelNaturalReport rep;
  rep.a = a;
  rep.f0 = pair.f(chart.nu0);
  rep.g0 = pair.g(chart.nu0);

  // Certify over the field's curvature values and at the chart origin (the
  // amplitude transport divides by 1 - a*f0 and 1 - a*g0).
  detail::OffsetCertifier cert(a, tol);
  cert.sample(rep.f0, rep.g0);
  for (std::size_t k = 0; k < nu_field.size(); ++k)
    cert.sample(pair.f(nu_field[k]), pair.g(nu_field[k]));
  rep.epsilon = cert.epsilon();
  const double eps = static_cast<double>(rep.epsilon);

  const Expr fe = pair.f_expr(), ge = pair.g_expr();
  const WeingartenPair bar(eps * fe / (1.0 - a * fe), eps * ge / (1.0 - a * ge),
                           pair.domain());

  NaturalChart chart_bar = chart;
  chart_bar.a_const = chart.a_const / std::abs(1.0 - a * rep.f0);
  chart_bar.b_const = chart.b_const / std::abs(1.0 - a * rep.g0);
  rep.a_bar = chart_bar.a_const;
  rep.b_bar = chart_bar.b_const;

  const InvariantGrid inv_bar = invariants_from_nu(chart_bar, bar, nu_field);
  rep.constancy_abs = check_natural_parameters(inv_bar);
  double mean = 0.0;
  for (std::size_t k = 0; k < inv_bar.E.size(); ++k)
    mean += std::sqrt(inv_bar.E[k] * inv_bar.G[k]) * (inv_bar.nu1[k] - inv_bar.nu2[k]);
  mean /= static_cast<double>(inv_bar.E.size());
  rep.constancy_rel = mean != 0.0 ? rep.constancy_abs / std::abs(mean) : rep.constancy_abs;

  const Field res_bar = natural_pde_residual(chart_bar, bar, nu_field);
  const Field res = natural_pde_residual(chart, pair, nu_field);
  for (std::size_t k = 0; k < res.size(); ++k) {
    const double w =
        (1.0 - a * pair.f(nu_field[k])) * (1.0 - a * pair.g(nu_field[k]));
    rep.residual_match = std::max(rep.residual_match, std::abs(res_bar[k] - res[k]));
    rep.identity_defect =
        std::max(rep.identity_defect, std::abs(res_bar[k] * w - res[k]));
  }
  return rep;
}

}  // namespace wsurf
