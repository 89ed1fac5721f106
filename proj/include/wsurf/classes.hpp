#pragma once

// The ten basic classes of linear Weingarten surfaces and their canonical
// natural PDEs:
//
//   1  H = 0          Delta lam    = exp(lam)            nu = -exp(lam)
//   2  H = 1/2        Delta lam    = sinh(lam)           nu = (1-exp(lam))/2
//   3  H' = 1         Delta* e^nu  = 2 nu (nu+2)         (unknown is nu)
//   4  H = p H'       Delta* nu^p  = 2p(p+1)/(p-1)^2 nu  (p^2 > 1)
//   5  H = p H'       DeltaBar* nu^p = same rhs          (p^2 < 1, p != 0)
//   6  H = p H' + 1   Delta* lam^p = p((p-1)lam+2)((p+1)lam+2)/(2(p-1)lam),
//                     nu = ((p-1)lam+2)/2                (p^2 > 1)
//   7  H = p H' + 1   DeltaBar* lam^p = same             (p^2 < 1, p != 0)
//   8  K' = -1        DeltaBar lam = -sin(lam)           nu = tan(lam)
//   9  K' = 2 H'      Delta* e^lam = 2                   nu = (lam-4)/(lam-2)
//  10  K' = p H' - q  Delta* e^{p Iq(lam)} = (pq/2) lam (p lam - 2q)/(lam^2+q),
//                     Iq(lam) = arctan(lam/sqrt(q))/sqrt(q), nu = lam + p/2
//                                                        (p != 0, q > 0)
//
// Each class also carries a generating Weingarten pair (f, g), the default
// anchor nu0, the chart constants a^2, b^2 at that anchor, and the residual
// multiplier Phi = kappa (f - g) that links the natural-PDE residual on a
// nu-field to the canonical residual on the substituted lam-field:
// r_natural = Phi * r_canonical.

#include <cmath>
#include <limits>
#include <string>

#include "wsurf/errors.hpp"
#include "wsurf/expr.hpp"
#include "wsurf/pde.hpp"
#include "wsurf/weingarten.hpp"

namespace wsurf {

inline void check_class_params(int class_id, double p, double q) {
  if (class_id < 1 || class_id > 10) throw UsageError("class_id must be 1..10");
  switch (class_id) {
    case 4:
    case 6:
      if (!(p * p > 1.0))
        throw ParamError("class " + std::to_string(class_id) + " requires p^2 > 1");
      break;
    case 5:
    case 7:
      if (!(p * p < 1.0) || p == 0.0)
        throw ParamError("class " + std::to_string(class_id) +
                         " requires p^2 < 1 and p != 0");
      break;
    case 10:
      if (p == 0.0 || !(q > 0.0)) throw ParamError("class 10 requires p != 0 and q > 0");
      break;
    default:
      break;
  }
}

namespace detail {

struct ClassStrings {
  const char* relation;
  OperatorKind op;
  const char* var;   // display variable of the canonical form
  const char* lhs;
  const char* rhs;
  const char* sub_S;      // nu as a function of lam ("" = identity)
  const char* sub_T;      // lam as a function of nu ("" = identity)
  const char* lhs_inv;    // F^{-1}, formal variable written as lam
};

inline const ClassStrings& class_strings(int id) {
  static const ClassStrings table[10] = {
      {"H=0", OperatorKind::DELTA, "lam", "lam", "exp(lam)", "-exp(lam)", "ln(-nu)",
       "lam"},
      {"H=1/2", OperatorKind::DELTA, "lam", "lam", "sinh(lam)", "(1-exp(lam))/2",
       "ln(1-2*nu)", "lam"},
      {"H'=1", OperatorKind::DELTA_STAR, "nu", "exp(nu)", "2*nu*(nu+2)", "", "",
       "ln(lam)"},
      {"H=pH'", OperatorKind::DELTA_STAR, "nu", "nu^p", "2*p*(p+1)/(p-1)^2*nu", "", "",
       "lam^(1/p)"},
      {"H=pH'", OperatorKind::DELTA_BAR_STAR, "nu", "nu^p", "2*p*(p+1)/(p-1)^2*nu", "",
       "", "lam^(1/p)"},
      {"H=pH'+1", OperatorKind::DELTA_STAR, "lam", "lam^p",
       "p*((p-1)*lam+2)*((p+1)*lam+2)/(2*(p-1)*lam)", "((p-1)*lam+2)/2",
       "2*(nu-1)/(p-1)", "lam^(1/p)"},
      {"H=pH'+1", OperatorKind::DELTA_BAR_STAR, "lam", "lam^p",
       "p*((p-1)*lam+2)*((p+1)*lam+2)/(2*(p-1)*lam)", "((p-1)*lam+2)/2",
       "2*(nu-1)/(p-1)", "lam^(1/p)"},
      {"K'=-1", OperatorKind::DELTA_BAR, "lam", "lam", "-sin(lam)", "tan(lam)",
       "arctan(nu)", "lam"},
      {"K'=2H'", OperatorKind::DELTA_STAR, "lam", "exp(lam)", "2", "(lam-4)/(lam-2)",
       "2*(nu-2)/(nu-1)", "ln(lam)"},
      {"K'=pH'-q", OperatorKind::DELTA_STAR, "lam",
       "exp(p/sqrt(q)*arctan(lam/sqrt(q)))", "p*q/2*lam*(p*lam-2*q)/(lam^2+q)",
       "lam+p/2", "nu-p/2", "sqrt(q)*tan(sqrt(q)*ln(lam)/p)"},
  };
  return table[id - 1];
}

struct ClassPairStrings {
  const char* f;
  const char* g;
};

inline const ClassPairStrings& class_pair_strings(int id) {
  static const ClassPairStrings table[10] = {
      {"-nu", "nu"},
      {"1-nu", "nu"},
      {"nu+2", "nu"},
      {"(p+1)/(p-1)*nu", "nu"},
      {"nu", "(p-1)/(p+1)*nu"},
      {"((p+1)*nu-2)/(p-1)", "nu"},
      {"((p+1)*nu-2)/(p-1)", "nu"},
      {"(sqrt(nu^2+1)-1)/nu", "-(sqrt(nu^2+1)+1)/nu"},
      {"(nu-1)/nu", "(nu-1)/(2*nu-1)"},
      {"nu-p/2", "(2*p*nu-p^2-4*q)/(4*nu)"},
  };
  return table[id - 1];
}

constexpr double kInf = std::numeric_limits<double>::infinity();

inline Interval class_nu_domain(int id, double p) {
  switch (id) {
    case 1: return Interval::open(-kInf, 0.0);
    case 2: return Interval::open(-kInf, 0.5);
    case 3: return Interval::all();
    case 4:
    case 5: return Interval::open(0.0, kInf);
    case 6:
    case 7: return p > 1.0 ? Interval::open(1.0, kInf) : Interval::open(-kInf, 1.0);
    case 8: return Interval::open(0.0, kInf);
    case 9: return Interval::open(1.0, kInf);
    case 10: return p > 0.0 ? Interval::open(0.0, kInf) : Interval::open(-kInf, 0.0);
  }
  return Interval::all();
}

inline Interval class_lam_domain(int id, double p) {
  constexpr double kPi = 3.14159265358979323846;
  switch (id) {
    case 1:
    case 2:
    case 3: return Interval::all();
    case 4:
    case 5:
    case 6:
    case 7: return Interval::open(0.0, kInf);
    case 8: return Interval::open(0.0, kPi / 2.0);
    case 9: return Interval::open(-kInf, 2.0);
    case 10: return p > 0.0 ? Interval::open(-p / 2.0, kInf) : Interval::open(-kInf, -p / 2.0);
  }
  return Interval::all();
}

inline double class_default_nu0(int id, double p) {
  switch (id) {
    case 1: return -1.0;
    case 2: return 0.0;
    case 3: return 0.0;
    case 4:
    case 5: return 1.0;
    case 6: return p > 1.0 ? 2.0 : 0.0;
    case 7: return 0.0;
    case 8: return 1.0;
    case 9: return 2.0;
    case 10: return p / 2.0;  // anchor at lam0 = nu0 - p/2 = 0
  }
  return 0.0;
}

inline double class_kappa(int id, double p, double q) {
  switch (id) {
    case 1:
    case 2: return 0.5;
    case 3: return -0.25;
    case 4: return -(p - 1.0) * (p - 1.0) / (4.0 * p);
    case 5: return -(p - 1.0) * (p - 1.0) * (p - 1.0) / (4.0 * p * (p + 1.0));
    case 6:
    case 7: return -(p - 1.0) / (2.0 * p);
    case 8: return -0.5;
    case 9: return -0.5;
    case 10: return -1.0 / (p * q);
  }
  return 1.0;
}

}  // namespace detail

inline const char* class_relation_label(int class_id) {
  return detail::class_strings(class_id).relation;
}

// The canonical PDE form of a basic class, with substitution metadata.
inline PdeForm canonical_rhs(int class_id, double p = 0.0, double q = 0.0) {
  check_class_params(class_id, p, q);
  const auto& s = detail::class_strings(class_id);
  PdeForm form;
  form.class_id = class_id;
  form.op = s.op;
  form.p = p;
  form.q = q;
  form.signature = Signature::MINKOWSKI;
  form.lhs_transform = Expr::parse(s.lhs);
  form.rhs = Expr::parse(s.rhs);
  form.identity_sub = std::string(s.sub_S).empty();
  form.sub_nu_of_lam = form.identity_sub ? Expr::var("lam") : Expr::parse(s.sub_S);
  form.sub_lam_of_nu = form.identity_sub ? Expr::var("nu") : Expr::parse(s.sub_T);
  form.lhs_inverse = Expr::parse(s.lhs_inv);
  form.lam_domain = detail::class_lam_domain(class_id, p);
  return form;
}

// A fully instantiated basic class: pair, form, anchor, chart constants and
// residual multiplier.  Parameters are bound numerically in the pair and in
// the evaluation environment of the form.
struct ClassInstance {
  int class_id = 1;
  double p = 0.0, q = 0.0;
  std::string relation;
  WeingartenPair pair;   // raw parameterization; f-g may be negative for
                         // p-ranges where the roles of f and g swap
  PdeForm form;
  Interval nu_domain;
  double nu0 = 0.0;
  double lam0 = 0.0;
  double kappa = 1.0;  // Phi = kappa * (f - g)
  double a2 = 1.0, b2 = 1.0;

  double phi(double lam) const {
    const double nu = form.eval_nu(lam);
    return kappa * pair.diff(nu);
  }
  NaturalChart chart(const GridSpec& grid) const {
    NaturalChart c;
    c.a_const = std::sqrt(a2);
    c.b_const = std::sqrt(b2);
    c.nu0 = nu0;
    c.grid = grid;
    return c;
  }
};

inline ClassInstance make_class_instance(int class_id, double p = 0.0, double q = 0.0,
                                         double nu0 = std::numeric_limits<double>::quiet_NaN()) {
  check_class_params(class_id, p, q);
  ClassInstance inst;
  inst.class_id = class_id;
  inst.p = p;
  inst.q = q;
  inst.relation = detail::class_strings(class_id).relation;
  inst.form = canonical_rhs(class_id, p, q);
  inst.nu_domain = detail::class_nu_domain(class_id, p);
  inst.kappa = detail::class_kappa(class_id, p, q);

  const auto& ps = detail::class_pair_strings(class_id);
  inst.pair = WeingartenPair(Expr::parse(ps.f).bind_params(p, q),
                             Expr::parse(ps.g).bind_params(p, q), inst.nu_domain);

  if (std::isnan(nu0)) nu0 = detail::class_default_nu0(class_id, p);
  if (!inst.nu_domain.contains(nu0))
    throw DomainError("nu0 = " + std::to_string(nu0) + " outside the class domain");
  inst.nu0 = nu0;
  inst.lam0 = inst.form.eval_lam(nu0);
  if (!inst.form.lam_domain.contains(inst.lam0))
    throw DomainError("substituted anchor lam0 outside the canonical domain");

  // Chart constants from the consistency identities at the anchor:
  //   a^2 e^{2I} dJ/dlam = Phi F',   b^2 e^{2J} dI/dlam = sv Phi Ftilde',
  // evaluated at lam0 where I = J = 0.
  const EvalEnv env0{inst.lam0, p, q};
  const double nu_at = inst.form.sub_nu_of_lam.eval(env0);
  const double Sp = inst.form.identity_sub ? 1.0 : inst.form.sub_nu_of_lam.diff().eval(env0);
  const double d = inst.pair.diff(nu_at);
  const double Ip_nu = inst.pair.fp(nu_at) / d;
  const double Jp_nu = -inst.pair.gp(nu_at) / d;
  const double Fp = inst.form.lhs_transform.diff().eval(env0);
  const double Fval = inst.form.lhs_transform.eval(env0);
  const double Ftp = is_starred(inst.form.op) ? -Fp / (Fval * Fval) : Fp;
  const double phi0 = inst.kappa * d;
  inst.a2 = phi0 * Fp / (Jp_nu * Sp);
  inst.b2 = v_sign(inst.form.op) * phi0 * Ftp / (Ip_nu * Sp);
  if (!(inst.a2 > 0.0) || !(inst.b2 > 0.0))
    throw DomainError("chart constants not positive at nu0 = " + std::to_string(nu0));
  return inst;
}

}  // namespace wsurf
