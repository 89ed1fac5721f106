#pragma once

// Numerical solvers for the canonical forms.
//
// Elliptic (Delta, Delta*): damped Newton on the centered-difference
// discretization with the exact tridiagonal-block Jacobian assembled from
// symbolic derivatives of F, 1/F and R; linear solves by sparse LU.
// Backtracking halves the step until the sup-norm residual decreases.  When
// the Jacobian factorization fails (singular), the iteration falls back to a
// Picard step: the raw residual preconditioned by the constant-coefficient
// Dirichlet Laplacian, which for the plain operator with identity transform
// is the classical lagged-source fixed point Delta lam_{k+1} = R(lam_k).
//
// Hyperbolic (DeltaBar, DeltaBar*): explicit leapfrog marching in v from
// Cauchy data lam(., v0), lam_v(., v0) under the CFL bound h_v <= h_u.  For
// the starred operator the marched quantity is Y = 1/F(lam), whose exact
// v-acceleration the equation supplies: Y_vv = (F(lam))_uu - R(lam).

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "wsurf/errors.hpp"
#include "wsurf/expr.hpp"
#include "wsurf/fd.hpp"
#include "wsurf/grid.hpp"
#include "wsurf/invariants.hpp"
#include "wsurf/pde.hpp"

namespace wsurf {

struct SolverConfig {
  int max_iter = 100;
  double newton_tol = 1e-10;
  double damping = 1.0;  // initial Newton step scale, halved on backtracking
  // Elliptic: Dirichlet values on the boundary ring (full-shape field; the
  // interior doubles as the initial guess).
  Field dirichlet;
  // Hyperbolic: Cauchy data on the first v-row, one value per u-node.
  std::vector<double> cauchy_value;
  std::vector<double> cauchy_slope;
  double tol_singular = 1e-12;

  void validate() const {
    if (max_iter < 1) throw UsageError("max_iter must be >= 1");
    if (!(newton_tol > 0.0)) throw UsageError("newton_tol must be positive");
    if (!(damping > 0.0) || damping > 1.0) throw UsageError("damping must be in (0,1]");
  }
};

struct SolverReport {
  int iterations = 0;
  double final_residual = 0.0;
  double wall_time_s = 0.0;
};

namespace detail {

// Pointwise pieces of a canonical form with parameters bound: the u-side
// transform A = F, the v-side transform B (F or 1/F), and the rhs R, each
// with its lam-derivative.
struct BoundForm {
  Expr A, Ap, R, Rp;
  bool starred = false;
  double sv = 1.0;
  double tol_singular = 1e-12;

  explicit BoundForm(const PdeForm& form, double tol)
      : A(form.lhs_transform.bind_params(form.p, form.q)),
        Ap(A.diff()),
        R(form.rhs.bind_params(form.p, form.q)),
        Rp(R.diff()),
        starred(is_starred(form.op)),
        sv(v_sign(form.op)),
        tol_singular(tol) {}

  double a(double lam) const { return A(lam); }
  double ap(double lam) const { return Ap(lam); }
  double b(double lam) const {
    const double F = A(lam);
    check_singular(F);
    return starred ? 1.0 / F : F;
  }
  double bp(double lam) const {
    const double F = A(lam);
    check_singular(F);
    return starred ? -Ap(lam) / (F * F) : Ap(lam);
  }
  double r(double lam) const { return R(lam); }
  double rp(double lam) const { return Rp(lam); }

  void check_singular(double F) const {
    if (starred && std::abs(F) < tol_singular)
      throw SingularFieldError("transformed field hits 0 inside a starred operator");
  }
};

}  // namespace detail

inline Field solve_elliptic(const PdeForm& form, const NaturalChart& chart,
                            const SolverConfig& cfg, SolverReport* report = nullptr) {
  const auto t_start = std::chrono::steady_clock::now();
  if (!is_elliptic(form.op))
    throw UsageError("solve_elliptic requires the Delta or Delta* operator");
  cfg.validate();
  chart.validate();
  const int n_u = chart.grid.n_u, n_v = chart.grid.n_v;
  if (cfg.dirichlet.n_u() != n_u || cfg.dirichlet.n_v() != n_v)
    throw UsageError("Dirichlet field shape does not match the chart grid");

  const detail::BoundForm bf(form, cfg.tol_singular);
  const double ihu2 = 1.0 / (chart.grid.h_u() * chart.grid.h_u());
  const double ihv2 = 1.0 / (chart.grid.h_v() * chart.grid.h_v());
  const int m_u = n_u - 2, m_v = n_v - 2;
  const int n_unknowns = m_u * m_v;

  Field lam = cfg.dirichlet;

  auto residual = [&](const Field& x, Eigen::VectorXd& out) {
    double max_abs = 0.0;
    for (int j = 1; j < n_v - 1; ++j) {
      for (int i = 1; i < n_u - 1; ++i) {
        const double ruu =
            (bf.a(x(i - 1, j)) - 2.0 * bf.a(x(i, j)) + bf.a(x(i + 1, j))) * ihu2;
        const double rvv =
            (bf.b(x(i, j - 1)) - 2.0 * bf.b(x(i, j)) + bf.b(x(i, j + 1))) * ihv2;
        const double val = ruu + bf.sv * rvv - bf.r(x(i, j));
        out[(j - 1) * m_u + (i - 1)] = val;
        max_abs = std::max(max_abs, std::abs(val));
      }
    }
    return max_abs;
  };

  Eigen::VectorXd N(n_unknowns), N_trial(n_unknowns);
  double norm = residual(lam, N);
  double best = norm;
  int iter = 0;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(n_unknowns) * 5);

  // Lazily factored positive-definite Dirichlet Laplacian for the Picard
  // fallback taken when the Newton Jacobian is singular.
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> picard;
  bool picard_ready = false;
  auto picard_step = [&](const Eigen::VectorXd& res) {
    if (!picard_ready) {
      std::vector<Eigen::Triplet<double>> lt;
      lt.reserve(static_cast<std::size_t>(n_unknowns) * 5);
      for (int j = 1; j < n_v - 1; ++j) {
        for (int i = 1; i < n_u - 1; ++i) {
          const int row = (j - 1) * m_u + (i - 1);
          lt.emplace_back(row, row, 2.0 * (ihu2 + ihv2));
          if (i > 1) lt.emplace_back(row, row - 1, -ihu2);
          if (i < n_u - 2) lt.emplace_back(row, row + 1, -ihu2);
          if (j > 1) lt.emplace_back(row, row - m_u, -ihv2);
          if (j < n_v - 2) lt.emplace_back(row, row + m_u, -ihv2);
        }
      }
      Eigen::SparseMatrix<double> lap(n_unknowns, n_unknowns);
      lap.setFromTriplets(lt.begin(), lt.end());
      picard.compute(lap);
      picard_ready = true;
    }
    // With L the (negative) Laplacian stencil, the fixed-point update is
    // lam_{k+1} = lam_k - L^{-1} res; factoring -L > 0 flips the sign away.
    return Eigen::VectorXd(picard.solve(res));
  };

  while (norm >= cfg.newton_tol) {
    if (iter >= cfg.max_iter)
      throw NonConvergenceError("elliptic Newton iteration budget exhausted", best, iter);
    ++iter;

    trips.clear();
    for (int j = 1; j < n_v - 1; ++j) {
      for (int i = 1; i < n_u - 1; ++i) {
        const int row = (j - 1) * m_u + (i - 1);
        const double diag = -2.0 * bf.ap(lam(i, j)) * ihu2 -
                            2.0 * bf.sv * bf.bp(lam(i, j)) * ihv2 - bf.rp(lam(i, j));
        trips.emplace_back(row, row, diag);
        if (i > 1) trips.emplace_back(row, row - 1, bf.ap(lam(i - 1, j)) * ihu2);
        if (i < n_u - 2) trips.emplace_back(row, row + 1, bf.ap(lam(i + 1, j)) * ihu2);
        if (j > 1) trips.emplace_back(row, row - m_u, bf.sv * bf.bp(lam(i, j - 1)) * ihv2);
        if (j < n_v - 2) trips.emplace_back(row, row + m_u, bf.sv * bf.bp(lam(i, j + 1)) * ihv2);
      }
    }
    Eigen::SparseMatrix<double> Jac(n_unknowns, n_unknowns);
    Jac.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(Jac);
    const Eigen::VectorXd delta =
        lu.info() == Eigen::Success ? Eigen::VectorXd(lu.solve(-N)) : picard_step(N);

    double alpha = cfg.damping;
    bool accepted = false;
    for (int bt = 0; bt < 12; ++bt) {
      Field trial = lam;
      for (int j = 1; j < n_v - 1; ++j)
        for (int i = 1; i < n_u - 1; ++i)
          trial(i, j) = lam(i, j) + alpha * delta[(j - 1) * m_u + (i - 1)];
      double trial_norm;
      try {
        trial_norm = residual(trial, N_trial);
      } catch (const SingularFieldError&) {
        alpha *= 0.5;
        continue;
      }
      if (trial_norm < norm) {
        lam = std::move(trial);
        N = N_trial;
        norm = trial_norm;
        best = std::min(best, norm);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted)
      throw NonConvergenceError("Newton backtracking stalled", best, iter);
  }

  if (report) {
    report->iterations = iter;
    report->final_residual = norm;
    report->wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  }
  return lam;
}

inline Field solve_hyperbolic(const PdeForm& form, const NaturalChart& chart,
                              const SolverConfig& cfg, SolverReport* report = nullptr) {
  const auto t_start = std::chrono::steady_clock::now();
  if (is_elliptic(form.op))
    throw UsageError("solve_hyperbolic requires the DeltaBar or DeltaBar* operator");
  cfg.validate();
  chart.validate();
  const int n_u = chart.grid.n_u, n_v = chart.grid.n_v;
  const double h_u = chart.grid.h_u(), h_v = chart.grid.h_v();
  if (h_v > h_u * (1.0 + 1e-12))
    throw CflError("CFL violated: h_v = " + std::to_string(h_v) + " > h_u = " +
                   std::to_string(h_u));
  if (static_cast<int>(cfg.cauchy_value.size()) != n_u ||
      static_cast<int>(cfg.cauchy_slope.size()) != n_u)
    throw UsageError("Cauchy data must supply one value and one slope per u-node");

  const detail::BoundForm bf(form, cfg.tol_singular);
  const bool starred = bf.starred;
  const Expr Finv = form.lhs_inverse.bind_params(form.p, form.q);

  // Marched quantity Y: lam itself for the plain operator with identity
  // transform, else F(lam) (plain) or 1/F(lam) (starred); the equation gives
  // Y_vv = (F(lam))_uu - R(lam) in all barred cases.
  auto to_Y = [&](double lam) { return starred ? 1.0 / bf.a(lam) : bf.a(lam); };
  auto dY_dlam = [&](double lam) {
    if (!starred) return bf.ap(lam);
    const double F = bf.a(lam);
    bf.check_singular(F);
    return -bf.ap(lam) / (F * F);
  };
  auto from_Y = [&](double y) {
    if (starred) {
      if (std::abs(y) < cfg.tol_singular)
        throw SingularFieldError("marched field hit 0 during recovery");
      return Finv(1.0 / y);
    }
    return Finv(y);
  };

  Field lam(n_u, n_v), Y(n_u, n_v);
  for (int i = 0; i < n_u; ++i) {
    lam(i, 0) = cfg.cauchy_value[i];
    Y(i, 0) = to_Y(lam(i, 0));
  }

  // Y_vv on row j from the equation.
  std::vector<double> w(n_u), acc(n_u);
  auto row_acceleration = [&](int j) {
    for (int i = 0; i < n_u; ++i) w[i] = bf.a(lam(i, j));
    auto at = [&](int k) { return w[k]; };
    for (int i = 0; i < n_u; ++i)
      acc[i] = fd::d2(at, i, n_u, h_u) - bf.r(lam(i, j));
  };

  // First step: second-order Taylor using the supplied slope and the
  // equation's acceleration on the initial row.
  row_acceleration(0);
  for (int i = 0; i < n_u; ++i) {
    const double ydot = dY_dlam(lam(i, 0)) * cfg.cauchy_slope[i];
    Y(i, 1) = Y(i, 0) + h_v * ydot + 0.5 * h_v * h_v * acc[i];
    lam(i, 1) = from_Y(Y(i, 1));
  }

  for (int j = 1; j < n_v - 1; ++j) {
    row_acceleration(j);
    for (int i = 0; i < n_u; ++i) {
      Y(i, j + 1) = 2.0 * Y(i, j) - Y(i, j - 1) + h_v * h_v * acc[i];
      lam(i, j + 1) = from_Y(Y(i, j + 1));
    }
  }

  if (report) {
    report->iterations = n_v - 1;
    double res = 0.0;
    const Field canon = canonical_pde_residual(form, lam, h_u, h_v, cfg.tol_singular);
    for (int j = 1; j < n_v - 1; ++j)
      for (int i = 1; i < n_u - 1; ++i) res = std::max(res, std::abs(canon(i, j)));
    report->final_residual = res;
    report->wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  }
  return lam;
}

}  // namespace wsurf
