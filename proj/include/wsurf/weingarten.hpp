#pragma once

// A Weingarten pair is two differentiable functions f, g of the curvature
// parameter nu on an interval, with f - g != 0 and f'*g' != 0 there.  The
// principal curvatures of the surface are nu1 = f(nu), nu2 = g(nu).  The
// orientation convention nu1 - nu2 > 0 is enforced by an explicit, recorded
// swap so that raw class parameterizations with f - g < 0 remain usable.

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "wsurf/errors.hpp"
#include "wsurf/expr.hpp"

namespace wsurf {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = true;
  bool hi_open = true;

  static Interval all() { return {}; }
  static Interval open(double a, double b) { return {a, b, true, true}; }
  static Interval closed(double a, double b) { return {a, b, false, false}; }

  bool contains(double x) const {
    if (lo_open ? !(x > lo) : !(x >= lo)) return false;
    if (hi_open ? !(x < hi) : !(x <= hi)) return false;
    return true;
  }
  bool is_bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

class WeingartenPair {
 public:
  WeingartenPair() = default;
  WeingartenPair(Expr f, Expr g, Interval domain)
      : f_(std::move(f)),
        g_(std::move(g)),
        fp_(f_.diff()),
        gp_(g_.diff()),
        fpp_(fp_.diff()),
        gpp_(gp_.diff()),
        domain_(domain) {}

  // Orientation-enforcing factory: samples f - g at nu_probe and swaps the
  // pair (recording the swap) if negative, so f - g > 0 afterwards.
  static WeingartenPair oriented(Expr f, Expr g, Interval domain, double nu_probe) {
    WeingartenPair pair(std::move(f), std::move(g), domain);
    if (!domain.contains(nu_probe)) throw DomainError("orientation probe outside domain");
    if (pair.diff(nu_probe) < 0.0) {
      WeingartenPair swapped(pair.g_, pair.f_, domain);
      swapped.swapped_ = true;
      return swapped;
    }
    return pair;
  }

  double f(double nu) const { return f_(nu); }
  double g(double nu) const { return g_(nu); }
  double fp(double nu) const { return fp_(nu); }
  double gp(double nu) const { return gp_(nu); }
  double fpp(double nu) const { return fpp_(nu); }
  double gpp(double nu) const { return gpp_(nu); }
  double diff(double nu) const { return f_(nu) - g_(nu); }

  const Expr& f_expr() const { return f_; }
  const Expr& g_expr() const { return g_; }
  const Expr& fp_expr() const { return fp_; }
  const Expr& gp_expr() const { return gp_; }
  const Interval& domain() const { return domain_; }
  bool swapped() const { return swapped_; }

  void require_in_domain(double nu) const {
    if (!domain_.contains(nu) || !std::isfinite(f(nu)) || !std::isfinite(g(nu)))
      throw DomainError("nu = " + std::to_string(nu) + " outside the pair's domain");
  }

  // Sample the defining inequalities f - g != 0 and f'*g' != 0 over
  // [lo, hi]; throws DomainError on a violation.
  void validate(double lo, double hi, int n_samples = 257,
                double tol_singular = 1e-12) const {
    for (int k = 0; k < n_samples; ++k) {
      const double nu =
          n_samples == 1 ? lo : lo + (hi - lo) * k / static_cast<double>(n_samples - 1);
      require_in_domain(nu);
      if (std::abs(diff(nu)) < tol_singular)
        throw DomainError("f - g vanishes near nu = " + std::to_string(nu));
      if (std::abs(fp(nu) * gp(nu)) < tol_singular)
        throw DomainError("f'*g' vanishes near nu = " + std::to_string(nu));
    }
  }

 private:
  Expr f_, g_, fp_, gp_, fpp_, gpp_;
  Interval domain_;
  bool swapped_ = false;
};

}  // namespace wsurf
