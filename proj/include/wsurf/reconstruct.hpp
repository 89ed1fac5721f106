#pragma once

// Surface reconstruction from invariant fields: integrate the first-order
// moving-frame system
//   z_u = sqrt(E) X,  X_u = sqrt(E) (gamma1 Y - nu1 l),
//   Y_u = -sqrt(E) gamma1 X,  l_u = -sqrt(E) nu1 X,
//   z_v = sqrt(G) Y,  X_v = sqrt(G) gamma2 Y,
//   Y_v = -sqrt(G) (gamma2 X + nu2 l),  l_v = -sqrt(G) nu2 Y,
// with classical fourth-order Runge-Kutta along grid lines (invariant fields
// interpolated linearly between nodes) and signature-(2,1) Gram-Schmidt
// renormalization after every step.  The integrability conditions that make
// the result path-independent are checked by check_compatibility and
// measured by path_independence.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wsurf/errors.hpp"
#include "wsurf/fd.hpp"
#include "wsurf/grid.hpp"
#include "wsurf/invariants.hpp"
#include "wsurf/minkowski.hpp"
#include "wsurf/threads.hpp"

namespace wsurf {

// Position plus an orthonormal frame: X, Y unit space-like tangents, l the
// unit time-like normal, det[X Y l] > 0.
struct Frame {
  MinkowskiVec z, X, Y, l;

  // Max deviation of the Gram matrix from diag(1, 1, -1).
  double gram_defect() const {
    double d = std::abs(minkowski_dot(X, X) - 1.0);
    d = std::max(d, std::abs(minkowski_dot(Y, Y) - 1.0));
    d = std::max(d, std::abs(minkowski_dot(l, l) + 1.0));
    d = std::max(d, std::abs(minkowski_dot(X, Y)));
    d = std::max(d, std::abs(minkowski_dot(X, l)));
    d = std::max(d, std::abs(minkowski_dot(Y, l)));
    return d;
  }

  bool positively_oriented() const { return det3(X, Y, l) > 0.0; }

  // Gram-Schmidt adapted to signature (2,1): normalize the space-like pair
  // first, then project l off both and rescale by sqrt(-<l,l>).  A Euclidean
  // sweep would corrupt the time-like normalization.
  void renormalize() {
    X = X / std::sqrt(minkowski_dot(X, X));
    Y = Y - minkowski_dot(X, Y) * X;
    Y = Y / std::sqrt(minkowski_dot(Y, Y));
    l = l - minkowski_dot(l, X) * X - minkowski_dot(l, Y) * Y;
    const double ll = minkowski_dot(l, l);
    if (!(ll < 0.0))
      throw FrameDriftError("normal lost its time-like character during renormalization");
    l = l / std::sqrt(-ll);
  }
};

enum class IntegrationMode { STRONGLY_REGULAR, GAMMA1_ZERO, PRESCRIBED };

struct SurfaceGrid {
  NaturalChart chart;
  int n_u = 0, n_v = 0;
  std::vector<Frame> frames;  // row-major, j * n_u + i

  Frame& at(int i, int j) { return frames[static_cast<std::size_t>(j) * n_u + i]; }
  const Frame& at(int i, int j) const {
    return frames[static_cast<std::size_t>(j) * n_u + i];
  }

  // Max post-renormalization Gram defect over all nodes.
  double max_gram_defect() const {
    double d = 0.0;
    for (const Frame& f : frames) d = std::max(d, f.gram_defect());
    return d;
  }
};

// Diagnostic report of the Bonnet integrability conditions.
//
// With the strongly_regular flag set, the three classical conditions on the
// four invariant functions are evaluated:
//   1)   gamma1 (nu1)_v > 0 and gamma2 (nu2)_u > 0 at every node,
//   2.1) (ln((nu1)_v / gamma1))_u = (nu1)_u / (nu1 - nu2)  and
//        (ln((nu2)_u / gamma2))_v = -(nu2)_v / (nu1 - nu2),
//   2.2) (nu1-nu2)/2 ((gamma2^2)_u/(nu2)_u - (gamma1^2)_v/(nu1)_v)
//        + gamma1^2 + gamma2^2 = nu1 nu2.
// With the flag off, the division-free forms valid for any principal
// parameterization are used instead:
//   codazzi: gamma1 sqrt(G) (nu1-nu2) = (nu1)_v,
//            gamma2 sqrt(E) (nu1-nu2) = (nu2)_u,
//   gauss:   (gamma2)_u/sqrt(E) - (gamma1)_v/sqrt(G)
//            + gamma1^2 + gamma2^2 = nu1 nu2.
struct CompatibilityReport {
  bool strongly_regular = true;
  double tolerance = 1e-6;
  int sign_failures = 0;    // nodes where a condition-1 product is <= 0
  double sign_margin = 0.0; // min over nodes of the two products
  Field condition1;         // per-node min(gamma1*(nu1)_v, gamma2*(nu2)_u)
  double codazzi_u = 0.0;   // max residual of the first Codazzi equation
  double codazzi_v = 0.0;   // max residual of the second
  double gauss = 0.0;       // max residual of the Gauss equation
  bool pass = false;

  double sign_violation() const { return std::max(0.0, -sign_margin); }
};

inline CompatibilityReport check_compatibility(const InvariantGrid& grid,
                                               bool strongly_regular = true,
                                               double tolerance = 1e-6) {
  const int n_u = grid.nu1.n_u(), n_v = grid.nu1.n_v();
  if (n_u < 3 || n_v < 3)
    throw UsageError("integrability check needs at least 3 nodes per axis");
  const double h_u = n_u > 1 ? grid.chart.grid.h_u() : 1.0;
  const double h_v = n_v > 1 ? grid.chart.grid.h_v() : 1.0;

  CompatibilityReport rep;
  rep.strongly_regular = strongly_regular;
  rep.tolerance = tolerance;
  rep.condition1 = Field(n_u, n_v);

  if (!strongly_regular) {
    for (int j = 0; j < n_v; ++j) {
      for (int i = 0; i < n_u; ++i) {
        const double d = grid.nu1(i, j) - grid.nu2(i, j);
        const double c1 = grid.gamma1(i, j) * std::sqrt(grid.G(i, j)) * d -
                          dv_at(grid.nu1, i, j, h_v);
        const double c2 = grid.gamma2(i, j) * std::sqrt(grid.E(i, j)) * d -
                          du_at(grid.nu2, i, j, h_u);
        const double g2u = du_at(grid.gamma2, i, j, h_u);
        const double g1v = dv_at(grid.gamma1, i, j, h_v);
        const double ga = g2u / std::sqrt(grid.E(i, j)) - g1v / std::sqrt(grid.G(i, j)) +
                          grid.gamma1(i, j) * grid.gamma1(i, j) +
                          grid.gamma2(i, j) * grid.gamma2(i, j) -
                          grid.nu1(i, j) * grid.nu2(i, j);
        rep.codazzi_u = std::max(rep.codazzi_u, std::abs(c1));
        rep.codazzi_v = std::max(rep.codazzi_v, std::abs(c2));
        rep.gauss = std::max(rep.gauss, std::abs(ga));
      }
    }
    rep.pass = rep.codazzi_u < tolerance && rep.codazzi_v < tolerance && rep.gauss < tolerance;
    return rep;
  }

  // Condition 1 and the logarithm fields it legitimizes.
  Field nu1_v(n_u, n_v), nu2_u(n_u, n_v), w1(n_u, n_v), w2(n_u, n_v);
  Field g1sq(n_u, n_v), g2sq(n_u, n_v);
  bool first = true;
  for (int j = 0; j < n_v; ++j) {
    for (int i = 0; i < n_u; ++i) {
      nu1_v(i, j) = dv_at(grid.nu1, i, j, h_v);
      nu2_u(i, j) = du_at(grid.nu2, i, j, h_u);
      const double p1 = grid.gamma1(i, j) * nu1_v(i, j);
      const double p2 = grid.gamma2(i, j) * nu2_u(i, j);
      const double m = std::min(p1, p2);
      rep.condition1(i, j) = m;
      if (first || m < rep.sign_margin) rep.sign_margin = m;
      first = false;
      if (!(p1 > 0.0) || !(p2 > 0.0)) ++rep.sign_failures;
      g1sq(i, j) = grid.gamma1(i, j) * grid.gamma1(i, j);
      g2sq(i, j) = grid.gamma2(i, j) * grid.gamma2(i, j);
      // Ratios are positive wherever condition 1 holds; elsewhere the log
      // fields stay finite but their nodes are excluded from the residuals.
      const double r1 = nu1_v(i, j) / grid.gamma1(i, j);
      const double r2 = nu2_u(i, j) / grid.gamma2(i, j);
      w1(i, j) = r1 > 0.0 ? std::log(r1) : 0.0;
      w2(i, j) = r2 > 0.0 ? std::log(r2) : 0.0;
    }
  }

  for (int j = 0; j < n_v; ++j) {
    for (int i = 0; i < n_u; ++i) {
      if (!(rep.condition1(i, j) > 0.0)) continue;
      const double d = grid.nu1(i, j) - grid.nu2(i, j);
      const double c1 = du_at(w1, i, j, h_u) - du_at(grid.nu1, i, j, h_u) / d;
      const double c2 = dv_at(w2, i, j, h_v) + dv_at(grid.nu2, i, j, h_v) / d;
      const double ga = 0.5 * d *
                            (du_at(g2sq, i, j, h_u) / nu2_u(i, j) -
                             dv_at(g1sq, i, j, h_v) / nu1_v(i, j)) +
                        g1sq(i, j) + g2sq(i, j) - grid.nu1(i, j) * grid.nu2(i, j);
      rep.codazzi_u = std::max(rep.codazzi_u, std::abs(c1));
      rep.codazzi_v = std::max(rep.codazzi_v, std::abs(c2));
      rep.gauss = std::max(rep.gauss, std::abs(ga));
    }
  }
  rep.pass = rep.sign_failures == 0 && rep.codazzi_u < tolerance &&
             rep.codazzi_v < tolerance && rep.gauss < tolerance;
  return rep;
}

namespace detail {

// Derivative of the frame state along a principal direction with frozen
// coefficients: scale = sqrt(E) or sqrt(G), rot = gamma1 or gamma2,
// curv = nu1 or nu2.
inline Frame frame_rate(const Frame& s, bool along_u, double scale, double rot, double curv) {
  Frame d;
  if (along_u) {
    d.z = scale * s.X;
    d.X = scale * (rot * s.Y - curv * s.l);
    d.Y = (-scale * rot) * s.X;
    d.l = (-scale * curv) * s.X;
  } else {
    d.z = scale * s.Y;
    d.X = (scale * rot) * s.Y;
    d.Y = (-scale) * (rot * s.X + curv * s.l);
    d.l = (-scale * curv) * s.Y;
  }
  return d;
}

inline Frame frame_axpy(const Frame& s, const Frame& k, double t) {
  Frame out;
  out.z = s.z + t * k.z;
  out.X = s.X + t * k.X;
  out.Y = s.Y + t * k.Y;
  out.l = s.l + t * k.l;
  return out;
}

// One Runge-Kutta step with the three coefficients linearly interpolated
// between their endpoint samples.
inline Frame rk4_step(const Frame& s0, bool along_u, double h, double e0, double r0, double c0,
                      double e1, double r1, double c1) {
  const double em = 0.5 * (e0 + e1), rm = 0.5 * (r0 + r1), cm = 0.5 * (c0 + c1);
  const Frame k1 = frame_rate(s0, along_u, e0, r0, c0);
  const Frame k2 = frame_rate(frame_axpy(s0, k1, 0.5 * h), along_u, em, rm, cm);
  const Frame k3 = frame_rate(frame_axpy(s0, k2, 0.5 * h), along_u, em, rm, cm);
  const Frame k4 = frame_rate(frame_axpy(s0, k3, h), along_u, e1, r1, c1);
  Frame out;
  out.z = s0.z + (h / 6.0) * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
  out.X = s0.X + (h / 6.0) * (k1.X + 2.0 * k2.X + 2.0 * k3.X + k4.X);
  out.Y = s0.Y + (h / 6.0) * (k1.Y + 2.0 * k2.Y + 2.0 * k3.Y + k4.Y);
  out.l = s0.l + (h / 6.0) * (k1.l + 2.0 * k2.l + 2.0 * k3.l + k4.l);
  return out;
}

// Per-node sqrt(E), sqrt(G) and the rotation coefficients for a mode.
struct StepCoeffs {
  Field se, sg, rot_u, rot_v;  // sqrt(E), sqrt(G), gamma1, gamma2
};

inline StepCoeffs step_coeffs(const InvariantGrid& inv, IntegrationMode mode) {
  const int n_u = inv.nu1.n_u(), n_v = inv.nu1.n_v();
  StepCoeffs c;
  c.se = Field(n_u, n_v);
  c.sg = Field(n_u, n_v);
  c.rot_u = inv.gamma1;
  c.rot_v = inv.gamma2;

  if (mode == IntegrationMode::STRONGLY_REGULAR) {
    // Metric recovered from the four invariant functions alone:
    //   sqrt(E) = (nu2)_u / (gamma2 (nu1-nu2)),
    //   sqrt(G) = (nu1)_v / (gamma1 (nu1-nu2)),
    // positive exactly when condition 1 of the integrability test holds.
    if (n_u < 3 || n_v < 3)
      throw UsageError("metric recovery needs at least 3 nodes per axis");
    const double h_u = inv.chart.grid.h_u();
    const double h_v = inv.chart.grid.h_v();
    for (int j = 0; j < n_v; ++j) {
      for (int i = 0; i < n_u; ++i) {
        const double d = inv.nu1(i, j) - inv.nu2(i, j);
        const double se = du_at(inv.nu2, i, j, h_u) / (inv.gamma2(i, j) * d);
        const double sg = dv_at(inv.nu1, i, j, h_v) / (inv.gamma1(i, j) * d);
        if (!(se > 0.0) || !(sg > 0.0))
          throw CompatibilityError(
              "metric ratios nonpositive at node (" + std::to_string(i) + ", " +
              std::to_string(j) + "); data is not strongly regular");
        c.se(i, j) = se;
        c.sg(i, j) = sg;
      }
    }
    return c;
  }

  for (std::size_t k = 0; k < inv.E.size(); ++k) {
    if (!(inv.E[k] > 0.0) || !(inv.G[k] > 0.0))
      throw DomainError("E and G must be positive to integrate a space-like frame");
    c.se[k] = std::sqrt(inv.E[k]);
    c.sg[k] = std::sqrt(inv.G[k]);
  }
  if (mode == IntegrationMode::GAMMA1_ZERO) {
    // The ruled branch: the u-lines are geodesics by assumption.
    c.rot_u = Field(n_u, n_v, 0.0);
  }
  return c;
}

// Advance one node along a grid line, enforcing the drift bound before
// renormalizing.
inline Frame advance_node(const Frame& from, bool along_u, double h, const StepCoeffs& c,
                          const InvariantGrid& inv, int i0, int j0, int i1, int j1,
                          double drift_tol) {
  Frame next =
      along_u ? rk4_step(from, true, h, c.se(i0, j0), c.rot_u(i0, j0), inv.nu1(i0, j0),
                         c.se(i1, j1), c.rot_u(i1, j1), inv.nu1(i1, j1))
              : rk4_step(from, false, h, c.sg(i0, j0), c.rot_v(i0, j0), inv.nu2(i0, j0),
                         c.sg(i1, j1), c.rot_v(i1, j1), inv.nu2(i1, j1));
  const double drift = next.gram_defect();
  if (drift > drift_tol)
    throw FrameDriftError("frame drift " + std::to_string(drift) + " at node (" +
                          std::to_string(i1) + ", " + std::to_string(j1) +
                          ") exceeds the per-step bound");
  next.renormalize();
  return next;
}

inline SurfaceGrid integrate_sweep(const InvariantGrid& inv, const Frame& initial,
                                   IntegrationMode mode, double drift_tol, bool u_first) {
  const int n_u = inv.nu1.n_u(), n_v = inv.nu1.n_v();
  if (n_u < 1 || n_v < 1) throw UsageError("invariant grid must contain at least one node");
  if (initial.gram_defect() > 1e-6)
    throw UsageError("initial frame is not Minkowski-orthonormal");
  if (!initial.positively_oriented())
    throw UsageError("initial frame is not positively oriented");

  const double h_u = n_u > 1 ? inv.chart.grid.h_u() : 0.0;
  const double h_v = n_v > 1 ? inv.chart.grid.h_v() : 0.0;
  const StepCoeffs c = step_coeffs(inv, mode);

  SurfaceGrid out;
  out.chart = inv.chart;
  out.n_u = n_u;
  out.n_v = n_v;
  out.frames.resize(static_cast<std::size_t>(n_u) * n_v);
  out.at(0, 0) = initial;

  if (u_first) {
    for (int i = 0; i + 1 < n_u; ++i)
      out.at(i + 1, 0) = advance_node(out.at(i, 0), true, h_u, c, inv, i, 0, i + 1, 0,
                                      drift_tol);
    parallel_rows(n_u, [&](int i) {
      for (int j = 0; j + 1 < n_v; ++j)
        out.at(i, j + 1) = advance_node(out.at(i, j), false, h_v, c, inv, i, j, i, j + 1,
                                        drift_tol);
    });
  } else {
    for (int j = 0; j + 1 < n_v; ++j)
      out.at(0, j + 1) = advance_node(out.at(0, j), false, h_v, c, inv, 0, j, 0, j + 1,
                                      drift_tol);
    parallel_rows(n_v, [&](int j) {
      for (int i = 0; i + 1 < n_u; ++i)
        out.at(i + 1, j) = advance_node(out.at(i, j), true, h_u, c, inv, i, j, i + 1, j,
                                        drift_tol);
    });
  }
  return out;
}

}  // namespace detail

// Max misalignment between finite-difference tangents of the reconstructed
// positions and the frame directions scaled by the stored metric:
//   || d_u z - sqrt(E) X ||  and  || d_v z - sqrt(G) Y ||  (Euclidean norms).
// O(h^2) for compatible data; O(1) where the data is not integrable.
inline double alignment_defect(const SurfaceGrid& s, const InvariantGrid& inv) {
  const int n_u = s.n_u, n_v = s.n_v;
  const double h_u = n_u > 1 ? inv.chart.grid.h_u() : 1.0;
  const double h_v = n_v > 1 ? inv.chart.grid.h_v() : 1.0;
  double worst = 0.0;
  for (int j = 0; j < n_v; ++j) {
    for (int i = 0; i < n_u; ++i) {
      if (n_u > 1) {
        auto at = [&](int k) { return s.at(k, j).z; };
        MinkowskiVec zu{fd::d1([&](int k) { return at(k).x1; }, i, n_u, h_u),
                        fd::d1([&](int k) { return at(k).x2; }, i, n_u, h_u),
                        fd::d1([&](int k) { return at(k).x3; }, i, n_u, h_u)};
        worst = std::max(worst,
                         euclid_norm(zu - std::sqrt(inv.E(i, j)) * s.at(i, j).X));
      }
      if (n_v > 1) {
        auto at = [&](int k) { return s.at(i, k).z; };
        MinkowskiVec zv{fd::d1([&](int k) { return at(k).x1; }, j, n_v, h_v),
                        fd::d1([&](int k) { return at(k).x2; }, j, n_v, h_v),
                        fd::d1([&](int k) { return at(k).x3; }, j, n_v, h_v)};
        worst = std::max(worst,
                         euclid_norm(zv - std::sqrt(inv.G(i, j)) * s.at(i, j).Y));
      }
    }
  }
  return worst;
}

// Integrate the frame system over the grid: u-sweep along the first row,
// then v-sweeps up every column (independent, run concurrently).  When
// path_check_tol > 0 the result's tangent alignment is verified against the
// stored metric and a violation raises CompatibilityError.
inline SurfaceGrid integrate_frame(const InvariantGrid& inv, const Frame& initial,
                                   IntegrationMode mode = IntegrationMode::PRESCRIBED,
                                   double drift_tol = 1e-3, double path_check_tol = 0.0) {
  SurfaceGrid out = detail::integrate_sweep(inv, initial, mode, drift_tol, true);
  if (path_check_tol > 0.0) {
    const double defect = alignment_defect(out, inv);
    if (defect > path_check_tol)
      throw CompatibilityError("path dependence detected: tangent misalignment " +
                               std::to_string(defect) + " exceeds tolerance " +
                               std::to_string(path_check_tol));
  }
  return out;
}

// Magnitude built from the Minkowski pairings of the frame differences.
inline double frame_discrepancy(const Frame& a, const Frame& b) {
  const MinkowskiVec dz = a.z - b.z, dX = a.X - b.X, dY = a.Y - b.Y, dl = a.l - b.l;
  return std::sqrt(std::abs(minkowski_dot(dz, dz)) + std::abs(minkowski_dot(dX, dX)) +
                   std::abs(minkowski_dot(dY, dY)) + std::abs(minkowski_dot(dl, dl)));
}

// Integrate u-then-v and v-then-u from the same initial frame and return the
// largest frame/position discrepancy over the grid.  O(h^2) for compatible
// data; plateaus at O(1) when the invariants are not integrable.
inline double path_independence(const InvariantGrid& inv, const Frame& initial,
                                IntegrationMode mode = IntegrationMode::PRESCRIBED,
                                double drift_tol = 1e-3) {
  const SurfaceGrid a = detail::integrate_sweep(inv, initial, mode, drift_tol, true);
  const SurfaceGrid b = detail::integrate_sweep(inv, initial, mode, drift_tol, false);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.frames.size(); ++k)
    worst = std::max(worst, frame_discrepancy(a.frames[k], b.frames[k]));
  return worst;
}

}  // namespace wsurf
