#pragma once

// The natural PDE machinery.
//
// Four canonical second-order operators act on a transformed unknown:
//   Delta  w     = w_uu + w_vv          DeltaBar  w    = w_uu - w_vv
//   Delta* w     = w_uu + (1/w)_vv      DeltaBar* w    = w_uu - (1/w)_vv
// A canonical form is  (F(lam))_uu +/- (Ftilde(lam))_vv = R(lam), where
// Ftilde = F for the plain operators and 1/F for the starred ones.
//
// The general natural PDE, whose residual natural_pde_residual evaluates, is
//   a^2 e^{2I} (J_uu + I_u J_u - J_u^2)
//     + b^2 e^{2J} (I_vv + I_v J_v - I_v^2) + f(nu) g(nu) = 0,
// with I, J the Weingarten quadratures of (f,g).  The residual is computed
// by the chain rule: finite differences act on the nu-field only, while
// I' = f'/(f-g), J' = g'/(g-f) and their nu-derivatives are evaluated
// symbolically, so algebraic identities between residuals of related
// surfaces hold to quadrature precision rather than stencil precision.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "wsurf/errors.hpp"
#include "wsurf/expr.hpp"
#include "wsurf/fd.hpp"
#include "wsurf/grid.hpp"
#include "wsurf/invariants.hpp"
#include "wsurf/quadrature.hpp"
#include "wsurf/threads.hpp"
#include "wsurf/weingarten.hpp"

namespace wsurf {

enum class OperatorKind { DELTA, DELTA_BAR, DELTA_STAR, DELTA_BAR_STAR };
enum class Signature { MINKOWSKI, EUCLIDEAN };

inline bool is_starred(OperatorKind op) {
  return op == OperatorKind::DELTA_STAR || op == OperatorKind::DELTA_BAR_STAR;
}
// Solver routing: unbarred operators go to the Dirichlet/Newton solver and
// barred ones to Cauchy marching.  Note this tracks the operator family, not
// the analytic type of the linearization -- the reciprocal v-part flips the
// principal signature (Delta* problems are hyperbolic-type where F' > 0, and
// DeltaBar* marching is the classically ill-posed lateral problem), so data
// for the starred members must come from compatible states, not arbitrary
// boundary curves.
inline bool is_elliptic(OperatorKind op) {
  return op == OperatorKind::DELTA || op == OperatorKind::DELTA_STAR;
}
// Sign of the v-derivative term: +1 for Delta/Delta*, -1 for the barred ones.
inline double v_sign(OperatorKind op) { return is_elliptic(op) ? 1.0 : -1.0; }

inline const char* operator_name(OperatorKind op) {
  switch (op) {
    case OperatorKind::DELTA: return "Delta";
    case OperatorKind::DELTA_BAR: return "DeltaBar";
    case OperatorKind::DELTA_STAR: return "DeltaStar";
    case OperatorKind::DELTA_BAR_STAR: return "DeltaBarStar";
  }
  return "";
}
inline OperatorKind operator_from_name(const std::string& s) {
  if (s == "Delta") return OperatorKind::DELTA;
  if (s == "DeltaBar") return OperatorKind::DELTA_BAR;
  if (s == "DeltaStar") return OperatorKind::DELTA_STAR;
  if (s == "DeltaBarStar") return OperatorKind::DELTA_BAR_STAR;
  throw UsageError("unknown operator name '" + s + "'");
}

struct PdeForm {
  OperatorKind op = OperatorKind::DELTA;
  Expr lhs_transform;  // F(lam), applied inside the operator (identity: lam)
  Expr rhs;            // R(lam); parameters p, q appear symbolically
  Signature signature = Signature::MINKOWSKI;
  double p = 0.0, q = 0.0;

  // Substitution metadata linking the canonical unknown lam to the
  // curvature parameter nu of the generating Weingarten pair.
  int class_id = 0;
  Expr sub_nu_of_lam;  // nu = S(lam)
  Expr sub_lam_of_nu;  // lam = T(nu)
  Expr lhs_inverse;    // F^{-1}; formal variable stands for the F-value
  Interval lam_domain;
  bool identity_sub = true;

  double eval_lhs(double lam) const { return lhs_transform.eval({lam, p, q}); }
  double eval_rhs(double lam) const { return rhs.eval({lam, p, q}); }
  double eval_nu(double lam) const { return sub_nu_of_lam.eval({lam, p, q}); }
  double eval_lam(double nu) const { return sub_lam_of_nu.eval({nu, p, q}); }
};

// Apply one of the four operators to a field with centered differences.
// The result is defined on interior nodes only; the boundary ring is set
// to zero.
inline Field operator_apply(OperatorKind op, const Field& lam, double h_u, double h_v,
                            double tol_singular = 1e-12) {
  const int n_u = lam.n_u(), n_v = lam.n_v();
  if (n_u < 3 || n_v < 3) throw UsageError("operator_apply needs at least 3x3 nodes");
  const bool starred = is_starred(op);
  const double sv = v_sign(op);

  Field w(n_u, n_v);
  if (starred) {
    for (std::size_t k = 0; k < lam.size(); ++k) {
      if (std::abs(lam[k]) < tol_singular)
        throw SingularFieldError("field passes through 0; starred operator undefined");
      w[k] = 1.0 / lam[k];
    }
  } else {
    w = lam;
  }

  Field out(n_u, n_v, 0.0);
  parallel_rows(n_v - 2, [&](int jj) {
    const int j = jj + 1;
    for (int i = 1; i < n_u - 1; ++i) {
      const double uu = (lam(i - 1, j) - 2.0 * lam(i, j) + lam(i + 1, j)) / (h_u * h_u);
      const double vv = (w(i, j - 1) - 2.0 * w(i, j) + w(i, j + 1)) / (h_v * h_v);
      out(i, j) = uu + sv * vv;
    }
  });
  return out;
}

// Residual of a canonical form on a lam-field: op(F(lam)) - R(lam),
// interior nodes (boundary ring zero).
inline Field canonical_pde_residual(const PdeForm& form, const Field& lam, double h_u,
                                    double h_v, double tol_singular = 1e-12) {
  Field w(lam.n_u(), lam.n_v());
  for (std::size_t k = 0; k < lam.size(); ++k) w[k] = form.eval_lhs(lam[k]);
  Field res = operator_apply(form.op, w, h_u, h_v, tol_singular);
  parallel_rows(lam.n_v() - 2, [&](int jj) {
    const int j = jj + 1;
    for (int i = 1; i < lam.n_u() - 1; ++i) res(i, j) -= form.eval_rhs(lam(i, j));
  });
  return res;
}

namespace detail {

// Pointwise coefficients of the chain-rule expansion of the natural PDE.
// With ' = d/dnu:
//   J_u  = J' nu_u,          J_uu = J'' nu_u^2 + J' nu_uu,
//   LHS_u = A [ J' nu_uu + (J'' + I'J' - J'^2) nu_u^2 ],  A = a^2 e^{2I},
// and symmetrically in v with I and B = b^2 e^{2J}.
struct NaturalCoeffs {
  double A, B;        // a^2 e^{2I}, b^2 e^{2J}
  double cu1, cu2;    // A * J', A * (J'' + I'J' - J'^2)
  double cv1, cv2;    // B * I', B * (I'' + I'J' - I'^2)
  double fg;          // f(nu) * g(nu)
};

inline NaturalCoeffs natural_coeffs(const NaturalChart& chart, const WeingartenPair& pair,
                                    const QuadratureResult& quad, double nu) {
  const double d = pair.diff(nu);
  const double fp = pair.fp(nu), gp = pair.gp(nu);
  const double fpp = pair.fpp(nu), gpp = pair.gpp(nu);
  const double Ip = fp / d;
  const double Jp = -gp / d;
  const double Ipp = fpp / d - fp * (fp - gp) / (d * d);
  const double Jpp = -gpp / d + gp * (fp - gp) / (d * d);
  const double I = quad.I_of(nu), J = quad.J_of(nu);
  NaturalCoeffs c{};
  c.A = chart.a_const * chart.a_const * std::exp(2.0 * I);
  c.B = chart.b_const * chart.b_const * std::exp(2.0 * J);
  c.cu1 = c.A * Jp;
  c.cu2 = c.A * (Jpp + Ip * Jp - Jp * Jp);
  c.cv1 = c.B * Ip;
  c.cv2 = c.B * (Ipp + Ip * Jp - Ip * Ip);
  c.fg = pair.f(nu) * pair.g(nu);
  return c;
}

}  // namespace detail

// Residual of the general natural PDE on a nu-field (LHS + f g, which is
// LHS - RHS since the equation reads LHS = -f g).  Defined at every node;
// the interior estimate converges at O(h^2).
inline Field natural_pde_residual(const NaturalChart& chart, const WeingartenPair& pair,
                                  const Field& nu_field) {
  if (nu_field.n_u() < 5 || nu_field.n_v() < 5)
    throw UsageError("natural_pde_residual needs at least a 5x5 grid");
  const double h_u = chart.grid.h_u(), h_v = chart.grid.h_v();
  const QuadratureResult quad = compute_IJ(pair, chart.nu0, nu_field.raw());

  Field res(nu_field.n_u(), nu_field.n_v());
  parallel_rows(nu_field.n_v(), [&](int j) {
    for (int i = 0; i < nu_field.n_u(); ++i) {
      const double nu = nu_field(i, j);
      const auto c = detail::natural_coeffs(chart, pair, quad, nu);
      const double nu_u = du_at(nu_field, i, j, h_u);
      const double nu_v = dv_at(nu_field, i, j, h_v);
      const double nu_uu = duu_at(nu_field, i, j, h_u);
      const double nu_vv = dvv_at(nu_field, i, j, h_v);
      res(i, j) = c.cu1 * nu_uu + c.cu2 * nu_u * nu_u + c.cv1 * nu_vv +
                  c.cv2 * nu_v * nu_v + c.fg;
    }
  });
  return res;
}

// One-dimensional residual of the natural ODE (the v-independent reduction:
// only the u-terms survive, gamma1 = 0).
inline std::vector<double> natural_ode_residual(const NaturalChart& chart,
                                                const WeingartenPair& pair,
                                                const std::vector<double>& nu_of_u) {
  const int n = static_cast<int>(nu_of_u.size());
  if (n < 5) throw UsageError("natural_ode_residual needs at least 5 samples");
  const double h_u = chart.grid.h_u();
  const QuadratureResult quad = compute_IJ(pair, chart.nu0, nu_of_u);

  std::vector<double> res(n);
  auto at = [&](int k) { return nu_of_u[k]; };
  for (int i = 0; i < n; ++i) {
    const double nu = nu_of_u[i];
    const auto c = detail::natural_coeffs(chart, pair, quad, nu);
    const double nu_u = fd::d1(at, i, n, h_u);
    const double nu_uu = fd::d2(at, i, n, h_u);
    res[i] = c.cu1 * nu_uu + c.cu2 * nu_u * nu_u + c.fg;
  }
  return res;
}

}  // namespace wsurf
