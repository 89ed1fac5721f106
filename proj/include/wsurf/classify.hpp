#pragma once

// Classification of linear curvature relations into the ten basic classes.
//
// A nondegenerate relation  delta*K' = alpha*H + beta*H' + gamma
// (alpha^2 - beta^2 + 4*gamma*delta != 0) determines -- up to parallel
// offset, choice of unit normal, and similarity -- exactly one basic class
// with a canonical natural PDE.  The dispatch:
//
//   delta = 0 (offset-free form alpha*H + beta*H' + gamma = 0):
//     alpha = gamma = 0      -> only umbilical surfaces satisfy it; rejected
//     alpha = 0              -> class 3  (constant H', leveled by similarity)
//     gamma = 0, beta  = 0   -> class 1  (H = 0)
//     gamma = 0, beta != 0   -> class 4 / 5 (H = p*H', split on eta)
//     beta  = 0              -> class 2  (constant mean curvature)
//     all three nonzero      -> class 6 / 7 (H = p*H' + 1, split on eta)
//   where eta := sign(alpha^2 - beta^2).
//
//   delta != 0 (normalized to K' = alpha*H + beta*H' + gamma):
//     alpha = gamma = 0      -> class 9  (K' = 2*H' after similarity)
//     alpha^2 + 4*gamma >= 0 -> a parallel offset a solving
//                               1 - a*alpha - a^2*gamma = 0 removes the K'
//                               term; classify the transported delta = 0
//                               relation (classes 1..7)
//     alpha^2 + 4*gamma < 0  -> the offset a = -alpha/(2*gamma) removes the
//                               H term, leaving K' = beta*H' + gamma:
//                               beta = 0 -> class 8, beta != 0 -> class 10
//
// Similarity (homothety by c > 0) scales curvatures nu -> nu/c and maps
// coefficient vectors (alpha, beta, gamma, delta) -> (alpha/c, beta/c,
// gamma/c^2, delta); flipping the unit normal maps (alpha, beta, gamma,
// delta) -> (-alpha, beta, gamma, delta).  Both are used to land on the
// frozen basic rows; the descriptor records the scale, the flip, and the
// signed family level the scale absorbed.

#include <algorithm>
#include <cmath>
#include <string>

#include "wsurf/classes.hpp"
#include "wsurf/errors.hpp"
#include "wsurf/expr.hpp"
#include "wsurf/parallel.hpp"
#include "wsurf/pde.hpp"
#include "wsurf/relation.hpp"

namespace wsurf {

struct FractionalForm {
  double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
};

// Coefficients of the curvature-ratio form nu1 = (A*nu2 + B)/(C*nu2 + D)
// from the linear form and back:
//   alpha = A - D, beta = -(A + D), gamma = B, delta = C,
// under which alpha^2 - beta^2 + 4*gamma*delta = 4*(BC - AD) exactly, so the
// two nondegeneracy conditions coincide.
inline LinearRelation fractional_to_linear(double A, double B, double C, double D,
                                           double tol = 1e-12) {
  const double s = std::max({std::abs(A), std::abs(B), std::abs(C), std::abs(D)});
  const double thr = tol * std::max(1.0, s);
  if (std::abs(A - D) <= thr && std::abs(B) <= thr && std::abs(C) <= thr)
    throw UmbilicError(
        "A = D, B = C = 0 characterizes umbilical points; the relation "
        "determines no surface class");
  if (std::abs(B * C - A * D) <= tol * std::max(1.0, s * s))
    throw DegenerateError("BC - AD = 0: the curvature-ratio form is degenerate");
  LinearRelation rel;
  rel.alpha = A - D;
  rel.beta = -(A + D);
  rel.gamma = B;
  rel.delta = C;
  rel.has_fractional = true;
  rel.A = A;
  rel.B = B;
  rel.C = C;
  rel.D = D;
  return rel;
}

inline FractionalForm linear_to_fractional(const LinearRelation& rel, double tol = 1e-12) {
  if (rel.degenerate(tol))
    throw DegenerateError(
        "degenerate relation (alpha^2 - beta^2 + 4 gamma delta = 0) has no "
        "curvature-ratio form");
  FractionalForm f;
  f.A = (rel.alpha - rel.beta) / 2.0;
  f.D = -(rel.alpha + rel.beta) / 2.0;
  f.B = rel.gamma;
  f.C = rel.delta;
  return f;
}

// What classification produced: the basic class, its parameters, and the
// normalizations that led there.
struct BasicClassDescriptor {
  int class_id = 0;
  double p = 0.0, q = 0.0;          // class parameters (classes 4..7, 10)
  double offset_a = 0.0;            // parallel offset used (0 if none)
  int epsilon = +1;                 // normal sign assumed in the offset step
  bool epsilon_assumed = false;     // true when an offset was used without a
                                    // curvature range to fix the sign
  double similarity_scale = 1.0;    // homothety factor family -> basic (> 0)
  bool flipped = false;             // unit normal flipped before scaling
  int eta = 0;                      // sign(alpha^2 - beta^2), offset-free form
  double family_level = 0.0;        // signed family constant the similarity
                                    // absorbs (H, H', K' or beta level)
  LinearRelation reduced;           // the relation actually matched (delta=0,
                                    // or delta=1 for classes 8..10)
  std::string relation;             // canonical label, e.g. "H=0"
  PdeForm pde;                      // canonical basic form with p, q bound
};

namespace detail {

struct Dispatch {
  int class_id = 0;
  double p = 0.0, q = 0.0;
  double offset_a = 0.0;
  bool epsilon_assumed = false;
  int eta = 0;
  bool flipped = false;
  double similarity_scale = 1.0;
  double family_level = 0.0;
  double fam_beta = 0.0;   // family constants feeding the pre-similarity PDE
  double fam_gamma = 0.0;
  LinearRelation reduced;
};

inline LinearRelation make_relation(double al, double be, double ga, double de) {
  LinearRelation r;
  r.alpha = al;
  r.beta = be;
  r.gamma = ga;
  r.delta = de;
  return r;
}

inline bool near_zero(double x, double scale, double tol) {
  return std::abs(x) <= tol * std::max(1.0, scale);
}

// Offset-free branch: alpha*H + beta*H' + gamma = 0 with
// alpha^2 - beta^2 != 0 already certified.
inline Dispatch dispatch_offset_free(double al, double be, double ga, double tol) {
  const double s = std::max({std::abs(al), std::abs(be), std::abs(ga)});
  Dispatch d;
  d.reduced = make_relation(al, be, ga, 0.0);
  const bool al0 = near_zero(al, s, tol);
  const bool be0 = near_zero(be, s, tol);
  const bool ga0 = near_zero(ga, s, tol);
  if (al0 && ga0)
    throw DegenerateError(
        "the relation admits only umbilical surfaces (it forces H' = 0); no "
        "basic class applies");
  d.eta = (al * al > be * be) ? +1 : -1;

  if (al0) {  // class 3; beta != 0 by nondegeneracy, gamma != 0 by the gate
    const double bhat = be / ga;
    d.class_id = 3;
    d.fam_beta = bhat;
    d.family_level = -1.0 / bhat;  // the family's H' value
    d.similarity_scale = std::abs(d.family_level);
    return d;
  }
  const double bhat = be / al, ghat = ga / al;
  if (ga0) {
    if (be0) {
      d.class_id = 1;
      return d;
    }
    d.class_id = d.eta < 0 ? 4 : 5;
    d.p = -bhat;
    return d;
  }
  if (be0) {  // class 2: constant mean curvature -gamma/alpha
    d.class_id = 2;
    d.family_level = -ghat;
    d.flipped = d.family_level < 0.0;
    d.fam_gamma = ghat;
    d.similarity_scale = 2.0 * std::abs(ghat);
    return d;
  }
  // classes 6 / 7: flip the normal if needed so the constant level is +1
  // after scaling (the flip negates alpha, i.e. negates both hatted values).
  d.flipped = ghat > 0.0;
  const double be_e = d.flipped ? -bhat : bhat;
  const double ga_e = -std::abs(ghat);
  d.class_id = d.eta < 0 ? 6 : 7;
  d.p = -be_e;
  d.fam_beta = be_e;
  d.fam_gamma = ga_e;
  d.family_level = std::abs(ghat);
  d.similarity_scale = std::abs(ghat);
  return d;
}

inline Dispatch dispatch(const LinearRelation& rel, double tol) {
  if (rel.degenerate(tol))
    throw DegenerateError(
        "degenerate relation: alpha^2 - beta^2 + 4 gamma delta = 0; no basic "
        "class applies");
  const double s0 = rel.coefficient_scale();
  if (near_zero(rel.delta, s0, tol))
    return dispatch_offset_free(rel.alpha, rel.beta, rel.gamma, tol);

  // delta != 0: normalize to K' = alpha*H + beta*H' + gamma.
  const double al = rel.alpha / rel.delta;
  const double be = rel.beta / rel.delta;
  const double ga = rel.gamma / rel.delta;
  const double s1 = std::max({std::abs(al), std::abs(be), std::abs(ga)});
  const bool al0 = near_zero(al, s1, tol);
  const bool ga0 = near_zero(ga, s1, tol);

  if (al0 && ga0) {  // class 9; beta != 0 by nondegeneracy
    Dispatch d;
    d.class_id = 9;
    d.reduced = make_relation(0.0, be, 0.0, 1.0);
    d.fam_beta = be;
    d.family_level = be;
    d.similarity_scale = std::abs(be) / 2.0;
    return d;
  }

  const double disc2 = al * al + 4.0 * ga;
  if (disc2 >= -tol * std::max({1.0, al * al, std::abs(ga)})) {
    // An offset with 1 - a*alpha - a^2*gamma = 0 removes the K' term.
    double a;
    if (ga0) {
      a = 1.0 / al;
    } else if (al0) {
      a = 1.0 / std::sqrt(ga);  // symmetric roots; tie broken to positive
    } else {
      const double sq = std::sqrt(std::max(disc2, 0.0));
      const double t = -0.5 * (al + std::copysign(sq, al));
      const double r1 = t / ga, r2 = -1.0 / t;  // root product is -1/gamma
      a = std::abs(r1) < std::abs(r2)   ? r1
          : std::abs(r2) < std::abs(r1) ? r2
                                        : std::max(r1, r2);
    }
    LinearRelation moved = parallel_relation(make_relation(al, be, ga, 1.0), a, +1, tol);
    moved.delta = 0.0;  // exact by the choice of a
    Dispatch d = dispatch_offset_free(moved.alpha, moved.beta, moved.gamma, tol);
    d.offset_a = a;
    d.epsilon_assumed = true;
    return d;
  }

  // alpha^2 + 4*gamma < 0 (so gamma < 0): remove the H term.
  double a = 0.0, bt = be, gt = ga;
  if (!al0) {
    a = -al / (2.0 * ga);
    const double dbar = 1.0 - a * al - a * a * ga;  // = (al^2 + 4 ga)/(4 ga) > 0
    bt = be / dbar;
    gt = ga / dbar;
  }
  Dispatch d;
  d.offset_a = a;
  d.epsilon_assumed = a != 0.0;
  if (near_zero(bt, std::abs(gt), tol)) {  // class 8: constant K' < 0
    d.class_id = 8;
    d.fam_gamma = gt;
    d.family_level = gt;
    d.similarity_scale = std::sqrt(-gt);
    d.reduced = make_relation(0.0, 0.0, gt, 1.0);
    return d;
  }
  d.class_id = 10;
  d.p = bt;
  d.q = -gt;
  d.reduced = make_relation(0.0, bt, gt, 1.0);
  return d;
}

}  // namespace detail

inline BasicClassDescriptor classify(const LinearRelation& rel, double tol = 1e-12) {
  const detail::Dispatch d = detail::dispatch(rel, tol);
  check_class_params(d.class_id, d.p, d.q);
  BasicClassDescriptor out;
  out.class_id = d.class_id;
  out.p = d.p;
  out.q = d.q;
  out.offset_a = d.offset_a;
  out.epsilon = +1;
  out.epsilon_assumed = d.epsilon_assumed;
  out.similarity_scale = d.similarity_scale;
  out.flipped = d.flipped;
  out.eta = d.eta;
  out.family_level = d.family_level;
  out.reduced = d.reduced;
  out.relation = class_relation_label(d.class_id);
  out.pde = canonical_rhs(d.class_id, d.p, d.q);
  return out;
}

// The family's natural PDE before similarity normalization: the same class
// shape with the family's own constants (e.g. a constant-mean-curvature
// family keeps its |H| in the right-hand side).  For relations classified
// through a parallel offset this is the family PDE of the transported
// relation -- offsets do not change the natural PDE.  Classes whose relation
// is similarity-invariant (1, 4, 5, 10) have family = basic.
inline PdeForm family_pde(const LinearRelation& rel, double tol = 1e-12) {
  const detail::Dispatch d = detail::dispatch(rel, tol);
  const Expr lam = Expr::var("lam");
  const Expr nu = Expr::var("nu");
  switch (d.class_id) {
    case 1:
    case 4:
    case 5:
    case 10:
      return canonical_rhs(d.class_id, d.p, d.q);
    case 2: {
      PdeForm f = canonical_rhs(2);
      const double H = d.family_level;
      const double aH = std::abs(H);
      f.rhs = (2.0 * aH) * sinh(lam);
      f.sub_nu_of_lam = H - aH * exp(lam);
      f.sub_lam_of_nu = ln((H - nu) / aH);
      return f;
    }
    case 3: {
      PdeForm f = canonical_rhs(3);
      const double bh = d.fam_beta;  // relation beta/gamma
      f.lhs_transform = exp((-bh) * nu);
      f.rhs = (2.0 / bh) * nu * (bh * nu - 2.0);
      f.lhs_inverse = (-1.0 / bh) * ln(lam);
      return f;
    }
    case 6:
    case 7: {
      PdeForm f = canonical_rhs(d.class_id, d.p);
      const double b = d.fam_beta, g = d.fam_gamma;
      f.rhs = (b / (2.0 * (b + 1.0))) * ((b + 1.0) * lam + 2.0 * g) *
              ((b - 1.0) * lam + 2.0 * g) / lam;
      f.sub_nu_of_lam = (-(b + 1.0) / 2.0) * lam - g;
      f.sub_lam_of_nu = (-2.0) * (nu + g) / (b + 1.0);
      return f;
    }
    case 8: {
      PdeForm f = canonical_rhs(8);
      const double gt = d.fam_gamma;  // the family's K' (negative)
      const double K = std::sqrt(-gt);
      f.rhs = gt * sin(lam);
      f.sub_nu_of_lam = K * tan(lam);
      f.sub_lam_of_nu = arctan(nu / K);
      return f;
    }
    case 9: {
      PdeForm f = canonical_rhs(9);
      const double bt = d.fam_beta;
      f.rhs = Expr::constant(bt * bt * bt * bt / 8.0);
      f.sub_nu_of_lam = bt * (lam - 4.0) / (2.0 * (lam - 2.0));
      f.sub_lam_of_nu = 4.0 * (nu - bt) / (2.0 * nu - bt);
      return f;
    }
  }
  throw DegenerateError("no basic class applies");  // unreachable
}

// The same PDE posed in the other ambient signature: identical operator and
// transform, right-hand side negated.  Applying it twice restores the
// original form exactly (unary negation cancels structurally).
inline PdeForm euclidean_counterpart(const PdeForm& form) {
  PdeForm out = form;
  out.rhs = -form.rhs;
  out.signature =
      form.signature == Signature::MINKOWSKI ? Signature::EUCLIDEAN : Signature::MINKOWSKI;
  return out;
}

// Display strings of a basic row, for table output and golden comparisons.
struct TableRow {
  const char* relation;
  const char* op;
  const char* lhs;
  const char* rhs;
  const char* substitution;  // nu as a function of lam; "-" when identity
};

inline TableRow canonical_table_row(int class_id) {
  if (class_id < 1 || class_id > 10) throw UsageError("class_id must be 1..10");
  const auto& s = detail::class_strings(class_id);
  return TableRow{s.relation, operator_name(s.op), s.lhs, s.rhs,
                  *s.sub_S ? s.sub_S : "-"};
}

}  // namespace wsurf
