// PDE layer: the four second-order operators, canonical class forms with
// their substitution metadata, chart amplitudes, and the residual of the
// general natural equation — including the multiplier identity that links
// the natural and canonical residuals for every basic class.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <string>
#include <vector>

#include "wsurf/classes.hpp"
#include "wsurf/pde.hpp"

using namespace wsurf;

namespace {

constexpr double kPi = 3.14159265358979323846;

Field make_field(const GridSpec& g, double (*fn)(double, double)) {
  Field out(g.n_u, g.n_v);
  for (int j = 0; j < g.n_v; ++j)
    for (int i = 0; i < g.n_u; ++i) out(i, j) = fn(g.u(i), g.v(j));
  return out;
}

double max_interior(const Field& f) {
  double m = 0.0;
  for (int j = 1; j < f.n_v() - 1; ++j)
    for (int i = 1; i < f.n_u() - 1; ++i) m = std::max(m, std::abs(f(i, j)));
  return m;
}

}  // namespace

TEST_CASE("operator names round-trip") {
  for (OperatorKind op : {OperatorKind::DELTA, OperatorKind::DELTA_BAR,
                          OperatorKind::DELTA_STAR, OperatorKind::DELTA_BAR_STAR}) {
    CHECK(operator_from_name(operator_name(op)) == op);
  }
  CHECK(std::string(operator_name(OperatorKind::DELTA)) == "Delta");
  CHECK(std::string(operator_name(OperatorKind::DELTA_BAR_STAR)) == "DeltaBarStar");
  CHECK_THROWS_AS(operator_from_name("Laplacian"), UsageError);
  CHECK(is_elliptic(OperatorKind::DELTA_STAR));
  CHECK_FALSE(is_elliptic(OperatorKind::DELTA_BAR));
  CHECK(is_starred(OperatorKind::DELTA_BAR_STAR));
  CHECK_FALSE(is_starred(OperatorKind::DELTA_BAR));
}

TEST_CASE("plain operators are exact on quadratic fields") {
  GridSpec g{0.0, 1.0, 0.0, 1.0, 9, 11};
  Field lam = make_field(g, [](double u, double v) { return u * u + v * v; });

  Field d = operator_apply(OperatorKind::DELTA, lam, g.h_u(), g.h_v());
  Field db = operator_apply(OperatorKind::DELTA_BAR, lam, g.h_u(), g.h_v());
  for (int j = 1; j < g.n_v - 1; ++j) {
    for (int i = 1; i < g.n_u - 1; ++i) {
      CHECK(d(i, j) == Catch::Approx(4.0).margin(1e-11));
      CHECK(db(i, j) == Catch::Approx(0.0).margin(1e-11));
    }
  }
  SECTION("the boundary ring is left at zero") {
    CHECK(d(0, 3) == 0.0);
    CHECK(d(g.n_u - 1, 3) == 0.0);
    CHECK(d(3, 0) == 0.0);
    CHECK(d(3, g.n_v - 1) == 0.0);
  }
  SECTION("grids below 3x3 are rejected") {
    Field tiny(2, 5, 1.0);
    CHECK_THROWS_AS(operator_apply(OperatorKind::DELTA, tiny, 0.1, 0.1), UsageError);
  }
}

TEST_CASE("starred operators difference the reciprocal in v") {
  GridSpec g{0.0, 1.0, 1.0, 2.0, 41, 41};
  Field lam = make_field(g, [](double, double v) { return v; });

  // (1/v)_vv = 2 / v^3; the u-part vanishes.
  Field ds = operator_apply(OperatorKind::DELTA_STAR, lam, g.h_u(), g.h_v());
  Field dbs = operator_apply(OperatorKind::DELTA_BAR_STAR, lam, g.h_u(), g.h_v());
  const double h2 = g.h_v() * g.h_v();
  for (int j = 1; j < g.n_v - 1; ++j) {
    const double exact = 2.0 / std::pow(g.v(j), 3);
    CHECK(ds(5, j) == Catch::Approx(exact).margin(20.0 * h2));
    CHECK(dbs(5, j) == Catch::Approx(-exact).margin(20.0 * h2));
  }

  SECTION("a field through zero is rejected") {
    Field bad = make_field(g, [](double, double v) { return v - 1.5; });
    CHECK_THROWS_AS(operator_apply(OperatorKind::DELTA_STAR, bad, g.h_u(), g.h_v()),
                    SingularFieldError);
  }
  SECTION("constant fields are annihilated") {
    Field c(g.n_u, g.n_v, 2.5);
    Field r = operator_apply(OperatorKind::DELTA_STAR, c, g.h_u(), g.h_v());
    CHECK(max_interior(r) == 0.0);
  }
}

TEST_CASE("elliptic and hyperbolic operators differ by twice the v-part") {
  GridSpec g{0.0, 1.0, 0.0, 1.0, 17, 17};
  Field lam = make_field(g, [](double u, double v) {
    return std::sin(u) * std::cos(2.0 * v) + u * v;
  });
  Field d = operator_apply(OperatorKind::DELTA, lam, g.h_u(), g.h_v());
  Field db = operator_apply(OperatorKind::DELTA_BAR, lam, g.h_u(), g.h_v());
  for (int j = 1; j < g.n_v - 1; ++j) {
    for (int i = 1; i < g.n_u - 1; ++i) {
      const double vv = dvv_at(lam, i, j, g.h_v());
      CHECK(d(i, j) - db(i, j) == Catch::Approx(2.0 * vv).margin(1e-10));
    }
  }
}

TEST_CASE("canonical forms carry the published spellings") {
  SECTION("mean curvature zero") {
    PdeForm f = canonical_rhs(1);
    CHECK(f.op == OperatorKind::DELTA);
    CHECK(f.lhs_transform.str() == "lam");
    CHECK(f.rhs.str() == "exp(lam)");
    CHECK(f.sub_nu_of_lam.str() == "-exp(lam)");
    CHECK(f.sub_lam_of_nu.str() == "ln(-nu)");
    CHECK_FALSE(f.identity_sub);
  }
  SECTION("constant skew curvature uses the identity substitution") {
    PdeForm f = canonical_rhs(3);
    CHECK(f.op == OperatorKind::DELTA_STAR);
    CHECK(f.lhs_transform.str() == "exp(nu)");
    CHECK(f.rhs.str() == "2*nu*(nu+2)");
    CHECK(f.identity_sub);
    CHECK(f.eval_nu(0.7) == Catch::Approx(0.7));
    CHECK(f.eval_lam(0.7) == Catch::Approx(0.7));
  }
  SECTION("proportional family keeps parameters symbolic") {
    PdeForm f = canonical_rhs(4, 2.0);
    CHECK(f.rhs.str() == "2*p*(p+1)/(p-1)^2*nu");
    CHECK(f.eval_rhs(1.0) == Catch::Approx(12.0));
    CHECK(f.lhs_transform.str() == "nu^p");
    CHECK(f.eval_lhs(3.0) == Catch::Approx(9.0));
  }
  SECTION("negative constant total curvature is hyperbolic") {
    PdeForm f = canonical_rhs(8);
    CHECK(f.op == OperatorKind::DELTA_BAR);
    CHECK(f.rhs.str() == "-sin(lam)");
    CHECK(f.sub_nu_of_lam.str() == "tan(lam)");
    CHECK(f.sub_lam_of_nu.str() == "arctan(nu)");
  }
  SECTION("lhs inverse really inverts the transform") {
    for (int id = 1; id <= 10; ++id) {
      double p = 0.0, q = 0.0;
      if (id == 4 || id == 6) p = 2.0;
      if (id == 5 || id == 7) p = 0.5;
      if (id == 10) { p = 1.5; q = 0.8; }
      ClassInstance inst = make_class_instance(id, p, q);
      const double lam = inst.lam0;
      const double F = inst.form.eval_lhs(lam);
      const double back = inst.form.lhs_inverse.eval({F, p, q});
      CHECK(back == Catch::Approx(lam).margin(1e-12));
    }
  }
}

TEST_CASE("parameter gates reject degenerate family members") {
  CHECK_THROWS_AS(canonical_rhs(4, 1.0), ParamError);
  CHECK_THROWS_AS(canonical_rhs(4, -0.5), ParamError);
  CHECK_THROWS_AS(canonical_rhs(5, 2.0), ParamError);
  CHECK_THROWS_AS(canonical_rhs(5, 0.0), ParamError);
  CHECK_THROWS_AS(canonical_rhs(6, 0.5), ParamError);
  CHECK_THROWS_AS(canonical_rhs(7, -3.0), ParamError);
  CHECK_THROWS_AS(canonical_rhs(10, 0.0, 1.0), ParamError);
  CHECK_THROWS_AS(canonical_rhs(10, 1.0, -0.5), ParamError);
  CHECK_THROWS_AS(canonical_rhs(0), UsageError);
  CHECK_THROWS_AS(canonical_rhs(11), UsageError);
  CHECK_THROWS_AS(make_class_instance(1, 0.0, 0.0, 0.5), DomainError);  // nu0 >= 0
}

TEST_CASE("chart amplitudes match the closed forms") {
  auto a2b2 = [](int id, double p = 0.0, double q = 0.0,
                 double nu0 = std::numeric_limits<double>::quiet_NaN()) {
    ClassInstance inst = make_class_instance(id, p, q, nu0);
    return std::pair<double, double>(inst.a2, inst.b2);
  };

  {  // minimal: a^2 = b^2 = -2 nu0
    auto [a2, b2] = a2b2(1, 0, 0, -1.0);
    CHECK(a2 == Catch::Approx(2.0));
    CHECK(b2 == Catch::Approx(2.0));
    auto [a2c, b2c] = a2b2(1, 0, 0, -0.25);
    CHECK(a2c == Catch::Approx(0.5));
    CHECK(b2c == Catch::Approx(0.5));
  }
  {  // constant mean curvature one half: a^2 = b^2 = 1 - 2 nu0
    auto [a2, b2] = a2b2(2, 0, 0, -0.5);
    CHECK(a2 == Catch::Approx(2.0));
    CHECK(b2 == Catch::Approx(2.0));
  }
  {  // constant skew curvature: a^2 = e^{nu0}, b^2 = e^{-nu0}
    auto [a2, b2] = a2b2(3, 0, 0, 0.7);
    CHECK(a2 == Catch::Approx(std::exp(0.7)));
    CHECK(b2 == Catch::Approx(std::exp(-0.7)));
  }
  {  // H = pH', elliptic branch: a^2 = nu0^{p+1}, b^2 = (p-1)/(p+1) nu0^{1-p}
    const double p = 2.0, nu0 = 1.3;
    auto [a2, b2] = a2b2(4, p, 0, nu0);
    CHECK(a2 == Catch::Approx(std::pow(nu0, p + 1.0)));
    CHECK(b2 == Catch::Approx((p - 1.0) / (p + 1.0) * std::pow(nu0, 1.0 - p)));
  }
  {  // H = pH', hyperbolic branch with the ratio r = (1-p)/(1+p)
    const double p = 0.5, nu0 = 1.2, r = (1.0 - p) / (1.0 + p);
    auto [a2, b2] = a2b2(5, p, 0, nu0);
    CHECK(a2 == Catch::Approx(r * r * std::pow(nu0, p + 1.0)));
    CHECK(b2 == Catch::Approx(r * r * r * std::pow(nu0, 1.0 - p)));
  }
  {  // H = pH' + 1, elliptic branch, evaluated at lam0 = 2(nu0-1)/(p-1)
    const double p = 2.0, nu0 = 2.0, lam0 = 2.0 * (nu0 - 1.0) / (p - 1.0);
    auto [a2, b2] = a2b2(6, p, 0, nu0);
    CHECK(a2 == Catch::Approx(std::pow(lam0, p + 1.0)));
    CHECK(b2 == Catch::Approx((p - 1.0) / (p + 1.0) * std::pow(lam0, 1.0 - p)));
  }
  {  // H = pH' + 1, hyperbolic branch
    const double p = 0.5, nu0 = 0.0, lam0 = 2.0 * (nu0 - 1.0) / (p - 1.0);
    auto [a2, b2] = a2b2(7, p, 0, nu0);
    CHECK(a2 == Catch::Approx(std::pow(lam0, p + 1.0)));
    CHECK(b2 == Catch::Approx((1.0 - p) / (1.0 + p) * std::pow(lam0, 1.0 - p)));
  }
  {  // total curvature -1: a^2 = sec^2(lam0/2), b^2 = csc^2(lam0/2)
    const double nu0 = 1.0, lam0 = std::atan(nu0);
    auto [a2, b2] = a2b2(8, 0, 0, nu0);
    CHECK(a2 == Catch::Approx(1.0 / std::pow(std::cos(lam0 / 2.0), 2)));
    CHECK(b2 == Catch::Approx(1.0 / std::pow(std::sin(lam0 / 2.0), 2)));
  }
  {  // K' = 2H': a^2 = e^{lam0}(nu0-1)^2/nu0^2, b^2 = e^{-lam0}(nu0-1)^2/(2nu0-1)^2
    auto [a2, b2] = a2b2(9, 0, 0, 2.0);
    CHECK(a2 == Catch::Approx(0.25));
    CHECK(b2 == Catch::Approx(1.0 / 9.0));
    const double nu0 = 3.0, lam0 = 2.0 * (nu0 - 2.0) / (nu0 - 1.0);
    auto [a2c, b2c] = a2b2(9, 0, 0, nu0);
    CHECK(a2c == Catch::Approx(std::exp(lam0) * 4.0 / 9.0));
    CHECK(b2c == Catch::Approx(std::exp(-lam0) * 4.0 / 25.0));
  }
  {  // linear total/skew family at the anchor lam0 = 0
    const double p = 1.5, q = 0.8;
    auto [a2, b2] = a2b2(10, p, q);
    CHECK(a2 == Catch::Approx(4.0 / (p * p + 4.0 * q)));
    CHECK(b2 == Catch::Approx(4.0 / (p * p)));
  }
}

TEST_CASE("natural residual reduces to f*g on constant fields") {
  GridSpec g{0.0, 1.0, 0.0, 1.0, 7, 7};
  SECTION("minimal pair at nu = -1 leaves the product -1") {
    ClassInstance inst = make_class_instance(1);
    Field nu(g.n_u, g.n_v, -1.0);
    Field r = natural_pde_residual(inst.chart(g), inst.pair, nu);
    for (std::size_t k = 0; k < r.size(); ++k)
      CHECK(r[k] == Catch::Approx(-1.0).margin(1e-13));
  }
  SECTION("a root of g gives an exact solution") {
    ClassInstance inst = make_class_instance(2);  // g(nu) = nu vanishes at nu0 = 0
    Field nu(g.n_u, g.n_v, 0.0);
    Field r = natural_pde_residual(inst.chart(g), inst.pair, nu);
    for (std::size_t k = 0; k < r.size(); ++k) CHECK(r[k] == Catch::Approx(0.0).margin(1e-13));
  }
  SECTION("grids below 5x5 are rejected") {
    ClassInstance inst = make_class_instance(1);
    GridSpec tiny{0.0, 1.0, 0.0, 1.0, 4, 7};
    Field nu(4, 7, -1.0);
    CHECK_THROWS_AS(natural_pde_residual(inst.chart(tiny), inst.pair, nu), UsageError);
  }
}

TEST_CASE("natural residual matches a hand expansion for the shifted-linear pair") {
  // f = nu + 2, g = nu: I = (nu - nu0)/2, J = -(nu - nu0)/2 in closed form, so
  // with unit chart constants and nu0 = 0 the residual of a linear field
  // nu = alpha u + beta v is
  //   -e^{nu} alpha^2 / 2 - e^{-nu} beta^2 / 2 + nu (nu + 2)
  // exactly (all second differences vanish, first differences are exact).
  GridSpec g{0.0, 1.0, 0.0, 1.0, 9, 9};
  const double alpha = 0.6, beta = -0.35;
  ClassInstance inst = make_class_instance(3, 0, 0, 0.0);
  NaturalChart chart = inst.chart(g);
  chart.a_const = 1.0;  // a^2 = e^{nu0} = 1 anyway at nu0 = 0
  chart.b_const = 1.0;

  Field nu(g.n_u, g.n_v);
  for (int j = 0; j < g.n_v; ++j)
    for (int i = 0; i < g.n_u; ++i) nu(i, j) = alpha * g.u(i) + beta * g.v(j);

  Field r = natural_pde_residual(chart, inst.pair, nu);
  for (int j = 0; j < g.n_v; ++j) {
    for (int i = 0; i < g.n_u; ++i) {
      const double x = nu(i, j);
      const double expected = -std::exp(x) * alpha * alpha / 2.0 -
                              std::exp(-x) * beta * beta / 2.0 + x * (x + 2.0);
      CHECK(r(i, j) == Catch::Approx(expected).margin(1e-9));
    }
  }
}

TEST_CASE("ODE and PDE residuals agree on v-independent fields") {
  GridSpec g{0.0, 1.0, 0.0, 1.0, 31, 7};
  ClassInstance inst = make_class_instance(3, 0, 0, 0.0);
  NaturalChart chart = inst.chart(g);

  std::vector<double> nu_of_u(g.n_u);
  for (int i = 0; i < g.n_u; ++i) nu_of_u[i] = 0.3 * std::sin(2.0 * g.u(i));
  Field nu(g.n_u, g.n_v);
  for (int j = 0; j < g.n_v; ++j)
    for (int i = 0; i < g.n_u; ++i) nu(i, j) = nu_of_u[i];

  std::vector<double> r1 = natural_ode_residual(chart, inst.pair, nu_of_u);
  Field r2 = natural_pde_residual(chart, inst.pair, nu);
  for (int j = 0; j < g.n_v; ++j)
    for (int i = 0; i < g.n_u; ++i)
      CHECK(r2(i, j) == Catch::Approx(r1[i]).margin(1e-12));
}

TEST_CASE("canonical residual vanishes on the exact exponential-source solution") {
  // lam = ln(8 a^2) - 2 ln(1 - a^2 (u^2+v^2)) satisfies lam_uu + lam_vv = e^lam.
  auto exact = [](double u, double v) {
    const double a = 0.5;
    return std::log(8.0 * a * a) - 2.0 * std::log(1.0 - a * a * (u * u + v * v));
  };
  PdeForm form = canonical_rhs(1);
  auto residual_at = [&](int n) {
    GridSpec g{-0.8, 0.8, -0.8, 0.8, n, n};
    Field lam(g.n_u, g.n_v);
    for (int j = 0; j < g.n_v; ++j)
      for (int i = 0; i < g.n_u; ++i) lam(i, j) = exact(g.u(i), g.v(j));
    return max_interior(canonical_pde_residual(form, lam, g.h_u(), g.h_v()));
  };
  const double r33 = residual_at(33);
  const double r65 = residual_at(65);
  CHECK(r33 < 0.1);
  CHECK(r65 < 0.03);
  CHECK(r33 / r65 == Catch::Approx(4.0).margin(1.2));
}

TEST_CASE("natural residual vanishes on the transplanted exponential-source solution") {
  ClassInstance inst = make_class_instance(1);  // nu0 = -1, a^2 = b^2 = 2
  auto exact = [](double u, double v) {
    const double a = 0.5;
    return std::log(8.0 * a * a) - 2.0 * std::log(1.0 - a * a * (u * u + v * v));
  };
  auto residual_at = [&](int n) {
    GridSpec g{-0.8, 0.8, -0.8, 0.8, n, n};
    Field nu(n, n);
    for (int j = 0; j < g.n_v; ++j)
      for (int i = 0; i < g.n_u; ++i)
        nu(i, j) = inst.form.eval_nu(exact(g.u(i), g.v(j)));
    return max_interior(natural_pde_residual(inst.chart(g), inst.pair, nu));
  };
  const double r33 = residual_at(33);
  const double r65 = residual_at(65);
  CHECK(r65 < 0.1);
  CHECK(r33 / r65 == Catch::Approx(4.0).margin(1.5));
}

namespace {

struct ConsistencyCase {
  int id;
  double p, q;
  double amplitude;  // half-width of the lam window around lam0
};

// For every basic class the residual of the natural equation on the
// transplanted field nu = S(lam) equals Phi(lam) = kappa (f - g)(S(lam))
// times the canonical residual, up to discretization error of both sides.
double consistency_gap(const ClassInstance& inst, double amplitude, int n,
                       double* scale_out) {
  GridSpec g{0.0, 1.0, 0.0, 1.0, n, n};
  Field lam(n, n), nu(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      lam(i, j) = inst.lam0 +
                  amplitude * std::sin(1.3 * g.u(i) + 0.4) * std::cos(1.1 * g.v(j) - 0.2);
      nu(i, j) = inst.form.eval_nu(lam(i, j));
    }
  }
  Field r_nat = natural_pde_residual(inst.chart(g), inst.pair, nu);
  Field r_can = canonical_pde_residual(inst.form, lam, g.h_u(), g.h_v());
  double gap = 0.0, scale = 0.0;
  for (int j = 1; j < n - 1; ++j) {
    for (int i = 1; i < n - 1; ++i) {
      gap = std::max(gap, std::abs(r_nat(i, j) - inst.phi(lam(i, j)) * r_can(i, j)));
      scale = std::max(scale, std::abs(r_nat(i, j)));
    }
  }
  if (scale_out) *scale_out = scale;
  return gap;
}

}  // namespace

TEST_CASE("natural and canonical residuals agree through the class multiplier") {
  const ConsistencyCase cases[] = {
      {1, 0.0, 0.0, 0.4},  {2, 0.0, 0.0, 0.4}, {3, 0.0, 0.0, 0.4}, {4, 2.0, 0.0, 0.4},
      {5, 0.5, 0.0, 0.4},  {6, 2.0, 0.0, 0.4}, {7, 0.5, 0.0, 0.4}, {8, 0.0, 0.0, 0.3},
      {9, 0.0, 0.0, 0.4},  {10, 1.5, 0.8, 0.3},
  };
  for (const auto& c : cases) {
    CAPTURE(c.id);
    ClassInstance inst = make_class_instance(c.id, c.p, c.q);
    double scale = 0.0;
    const double gap_coarse = consistency_gap(inst, c.amplitude, 25, nullptr);
    const double gap_fine = consistency_gap(inst, c.amplitude, 49, &scale);
    CHECK(scale > 0.05);                 // the test field is far from a solution
    CHECK(gap_fine < 0.02 * scale);      // identity holds to discretization error
    CHECK(gap_coarse / gap_fine > 2.5);  // and that error shrinks at second order
  }
}
