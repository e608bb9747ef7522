#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "strata/heisenberg_fourier.hpp"
#include "strata/series.hpp"
#include "strata/siegel_veech.hpp"

using namespace strata;

namespace {

ModularFunction mode(int n, int m, int k = 0) {
  return {[n, m](const JacobiPoint& p) { return e(n * p.x + m * p.v / p.y); }, k};
}

// a modular-invariant function: lattice sum of a radial bump
ModularFunction invariant(int k, int M = 1) {
  return sv_modular(KTypeFunction{bump_profile(k, 1.2, 8), k}, M);
}

QuadratureSpec small_q() {
  QuadratureSpec q;
  q.nx = 16;
  q.nu = 32;
  q.nv = 32;
  return q;
}

}  // namespace

TEST_CASE("torus coefficients of simple functions") {
  ModularFunction one{[](const JacobiPoint&) { return cplx(1.0); }, 0};
  cplx tau(0.2, 1.3);
  CHECK(std::abs(coeff_T(one, 0, 0, tau, small_q()) - 1.0) < 1e-14);
  CHECK(std::abs(coeff_T(one, 1, 0, tau, small_q())) < 1e-12);
  ModularFunction pq{[](const JacobiPoint& p) { return e(3 * p.p() + 2 * p.q()); }, 0};
  CHECK(std::abs(coeff_T(pq, 3, 2, tau, small_q()) - 1.0) < 1e-12);
  CHECK(std::abs(coeff_T(pq, 2, 3, tau, small_q())) < 1e-12);
  // pullbacks from the upper half plane only have (0, 0)
  ModularFunction pull{[](const JacobiPoint& p) { return cplx(std::cos(kTwoPi * p.x) / p.y); }, 0};
  for (int m = -2; m <= 2; ++m)
    for (int r = -2; r <= 2; ++r)
      if (m || r) CHECK(std::abs(coeff_T(pull, m, r, tau, small_q())) < 1e-12);
}

TEST_CASE("Heisenberg coefficients of modes") {
  for (auto [n, m] : {std::pair{0, 1}, std::pair{2, -3}, std::pair{-1, 0}}) {
    auto t = coeff_H0_table(mode(n, m), 3, 4, 1.7, small_q());
    for (int a = -3; a <= 3; ++a)
      for (int b = -4; b <= 4; ++b) {
        double expect = (a == n && b == m) ? 1.0 : 0.0;
        CHECK(std::abs(t[a + 3][b + 4] - expect) < 1e-10);
      }
    CHECK(std::abs(coeff_H0(mode(n, m), n, m, 0.9, small_q()) - 1.0) < 1e-10);
  }
  // c^H in (x, u) with r
  ModularFunction xu{[](const JacobiPoint& p) { return e(2 * p.x - p.u) * (1.0 + p.v); }, 0};
  CHECK(std::abs(coeff_H(xu, 2, -1, 1.5, 0.4, small_q()) - (1.0 + 0.6)) < 1e-12);
  CHECK_THROWS(coeff_H0_table(mode(0, 1), 8, 1, 1.0, small_q()));
}

TEST_CASE("Parseval on the (x, u) torus") {
  ModularFunction f{[](const JacobiPoint& p) {
                      return 0.5 * e(p.x + 2 * p.u) - 0.25 * e(-3 * p.x) + cplx(0, 0.1) * e(p.u);
                    },
                    0};
  double sum = 0;
  for (int n = -4; n <= 4; ++n)
    for (int r = -4; r <= 4; ++r) sum += std::norm(coeff_H(f, n, r, 1.0, 0.3, small_q()));
  CHECK(sum == doctest::Approx(0.25 + 0.0625 + 0.01).epsilon(1e-10));
}

TEST_CASE("torus coefficients against Heisenberg coefficients") {
  auto r = relation_T_H0(mode(2, 3), 3, cplx(0.3, 1.7), 3, small_q());
  CHECK(std::abs(r.lhs - e(2 * 0.3)) < 1e-10);
  CHECK(r.residual < 1e-10);
  // a trigonometric polynomial in (x, p, q)
  ModularFunction trig{[](const JacobiPoint& p) { return e(p.x + 2 * p.p()) + 0.5 * e(-p.x + 2 * p.p()) + e(p.q()); }, 0};
  CHECK(relation_T_H0(trig, 2, cplx(0.1, 1.1), 2, small_q()).residual < 1e-10);
  // an invariant function
  QuadratureSpec q;
  CHECK(relation_T_H0(invariant(0), 1, cplx(0.3, 1.7), 6, q).residual < 1e-8);
}

TEST_CASE("equivariance of torus coefficients") {
  QuadratureSpec q;
  q.nx = 32;
  q.nu = 32;
  SL2 T{1, 1, 0, 1}, S{0, -1, 1, 0}, mI{-1, 0, 0, -1}, id;
  for (int k : {0, 1, 2}) {
    ModularFunction phi = invariant(k);
    double scale = std::abs(coeff_T(phi, 0, 0, cplx(0.2, 1.1), q)) + 1e-3;
    for (const SL2& g : {id, T, S, mI}) {
      auto r = torus_equivariance_check(phi, g, 1, 2, cplx(0.2, 1.1), q);
      CHECK(r.residual < 1e-8 * std::max(1.0, scale));
    }
    // -I: c^T(m, r) = (-1)^k c^T(-m, -r)
    cplx a = coeff_T(phi, 1, 2, cplx(0.2, 1.1), q), b = coeff_T(phi, -1, -2, cplx(0.2, 1.1), q);
    CHECK(std::abs(a - std::pow(-1.0, k) * b) < 1e-10);
  }
}

TEST_CASE("scalar product through coefficients and the cusp predicate") {
  BetaProfile beta = beta_power_exp(2.0, kTwoPi);
  ModularFunction E = eisenstein_function(0, 1, beta, 6.0);
  ModularFunction P = poincare_function(0, 1, 2, beta, 6.0);
  QuadratureSpec q;
  q.nx = 8;
  q.nu = 127;
  q.nv = 8;
  ScalarProductSpec s;
  s.n_max = 2;
  s.m_max = 3;
  s.y_min = 0.5;
  s.y_max = 3.0;
  s.y_nodes = 12;
  cplx ee = scalar_product_via_coeffs(E, E, s, q);
  double expect = weighted_norm2(beta.eval, 0, 0.5, 3.0, 400);
  CHECK(std::abs(ee - expect) < 1e-6 * expect);
  CHECK(std::abs(scalar_product_via_coeffs(E, P, s, q)) < 1e-9 * expect);
  std::vector<double> ys{0.7, 1.3};
  CHECK(is_cusp_form(P, 3, ys, 1e-9, q));
  CHECK_FALSE(is_cusp_form(E, 3, ys, 1e-9, q));
  ModularFunction zero{[](const JacobiPoint&) { return cplx{}; }, 0};
  CHECK(is_cusp_form(zero, 3, ys, 1e-12, q));
}

TEST_CASE("Heisenberg averaging of lifts") {
  QuadratureSpec q = small_q();
  SAff g = from_iwasawa({0.3, 1.4, 0.2, -0.35, 0.8});
  for (int k : {0, 2}) {
    ModularFunction phi = mode(1, 2, k);
    cplx got = heisenberg_average(lift(phi), 1, 2, g, q);
    cplx want = heisenberg_average_predicted(phi, 1, 2, g, q);
    CHECK(std::abs(got - want) < 1e-10);
    CHECK(std::abs(got) > 0.1);
    CHECK(std::abs(heisenberg_average(lift(phi), 1, 1, g, q)) < 1e-10);
  }
  // invariant function, several characters
  ModularFunction phi = invariant(1);
  QuadratureSpec q2;
  q2.nx = 8;
  q2.nu = 32;
  q2.nv = 32;
  for (int m : {0, 1, -2}) {
    cplx got = heisenberg_average(lift(phi), 0, m, g, q2), want = heisenberg_average_predicted(phi, 0, m, g, q2);
    CHECK(std::abs(got - want) < 1e-9);
  }
}

TEST_CASE("Poincare lift at its own character") {
  BetaProfile beta = beta_power_exp(2.0, kTwoPi);
  ModularFunction P = poincare_function(0, 1, 1, beta, 10.0);
  SAff g = from_iwasawa({0.1, 1.2, 0.3, 0.1, 0.4});
  QuadratureSpec q;
  q.nx = 8;
  q.nu = 64;
  q.nv = 8;
  Iwasawa c = iwasawa(g);
  cplx want = beta(c.y) / std::sqrt(2.0) * e(c.x + c.w1);
  CHECK(std::abs(heisenberg_average(lift(P), 1, 1, g, q) - want) < 1e-9);
}

TEST_CASE("coefficient CSV") {
  auto rows = coefficient_rows(mode(1, 1), 1, 1, {1.0}, small_q());
  CHECK(rows.size() == 9);
  std::ostringstream os;
  write_coefficient_csv(os, rows);
  CHECK(os.str().rfind("n,m,y,re,im\n", 0) == 0);
}
