#pragma once

// Linear relations  delta*K' = alpha*H + beta*H' + gamma  between the three
// curvature invariants K' = nu1*nu2, H = (nu1+nu2)/2, H' = (nu1-nu2)/2.
// The discriminant alpha^2 - beta^2 + 4*gamma*delta separates admissible
// relations from degenerate ones; it is preserved exactly by parallel-offset
// coefficient transformations, and for relations arising from the fractional
// form nu1 = (A*nu2 + B)/(C*nu2 + D) it equals +4(BC - AD).

#include <algorithm>
#include <cmath>

namespace wsurf {

struct LinearRelation {
  double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0;

  // Optional fractional origin nu1 = (A*nu2 + B)/(C*nu2 + D).
  bool has_fractional = false;
  double A = 0.0, B = 0.0, C = 0.0, D = 0.0;

  double discriminant() const {
    return alpha * alpha - beta * beta + 4.0 * gamma * delta;
  }

  double coefficient_scale() const {
    return std::max({std::abs(alpha), std::abs(beta), std::abs(gamma), std::abs(delta)});
  }

  // Degeneracy relative to the squared coefficient scale, so scaling the
  // relation by a constant does not change the verdict.
  bool degenerate(double tol = 1e-12) const {
    const double s = coefficient_scale();
    return std::abs(discriminant()) <= tol * std::max(1.0, s * s);
  }
};

}  // namespace wsurf
