#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <random>

#include "strata/series.hpp"
#include "strata/siegel_veech.hpp"

using namespace strata;

namespace {

SAff integral(double a, double b, double c, double d, double m = 0, double n = 0) {
  SAff g;
  g.g = {a, b, c, d};
  g.w = {m, n};
  return g;
}

double radial_integral(const RadialProfile& f0, double R, int power) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double r) { return std::real(f0(r)) * std::pow(r, power); }, 0.0, R, 10, 1e-13);
}

}  // namespace

TEST_CASE("K-type functions rotate by a character") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k : {0, 1, -2, 3}) {
    KTypeFunction f{bump_profile(k, 1.5, 4), k};
    for (int i = 0; i < 20; ++i) {
      Vec2 w{U(rng), U(rng)};
      double a = 3 * U(rng);
      CHECK(std::abs(f(row_times(w, rot(a))) - std::exp(cplx(0, k * a)) * f(w)) < 1e-13);
    }
  }
}

TEST_CASE("profiles: integrals and norms") {
  KTypeFunction f{bump_profile(0, 1.5, 4), 0};
  double I = 2 * kPi * radial_integral(f.f0, 1.5, 1);
  CHECK(std::abs(f.integral() - I) < 1e-10);
  CHECK(f.norm2() == doctest::Approx(2 * kPi * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                                    [&](double r) { return std::norm(f.f0(r)) * r; }, 0.0, 1.5, 10,
                                                    1e-13))
                         .epsilon(1e-10));
  KTypeFunction g{bump_profile(2, 1.5, 4), 2};
  CHECK(std::abs(g.integral()) < 1e-14);
  KTypeFunction z{mean_zero_bump_profile(1.3, 6), 0};
  CHECK(z.mean_zero());
  CHECK(std::abs(radial_integral(z.f0, 1.3, 1)) < 1e-12);
  CHECK_FALSE(f.mean_zero());
  CHECK(f.support() == 1.5);
  CHECK(std::abs(f.f0(1.6)) == 0.0);
}

TEST_CASE("marked torus and relative periods") {
  JacobiPoint pt{0.3, 1.7, 0.2, 0.4};
  auto t = MarkedTorus::of(pt);
  CHECK(t.covolume() == doctest::Approx(1.0).epsilon(1e-14));
  for (int M : {1, 2, 3}) {
    double R = 12;
    auto pts = config_rel_M(t, M, R);
    // lattice point count against the area of the disc
    CHECK(pts.size() / (kPi * R * R * M * M) == doctest::Approx(1.0).epsilon(0.03));
    for (cplx c : pts) CHECK(std::abs(c) <= R + 1e-12);
  }
}

TEST_CASE("lattice sums are modular") {
  JacobiPoint pt{0.21, 0.93, 0.37, 0.11};
  for (int M : {1, 2}) {
    for (int k : {0, 1, 2}) {
      ModularFunction phi = sv_modular(KTypeFunction{bump_profile(k, 1.3, 6), k}, M);
      cplx base = phi(pt);
      for (const SAff& g : {integral(1, 1, 0, 1), integral(0, -1, 1, 0), integral(-1, 0, 0, -1),
                            integral(1, 0, 0, 1, 1, 0), integral(1, 0, 0, 1, 0, 1), integral(2, 1, 1, 1, 1, -1)})
        CHECK(std::abs(slash(phi, g)(pt) - base) < 1e-12 * std::max(1.0, std::abs(base)));
    }
  }
}

TEST_CASE("group form of the lattice sum agrees with the point form") {
  KTypeFunction f{bump_profile(2, 1.3, 6), 2};
  GroupFunction lifted = lift(sv_modular(f, 2));
  SAff g = from_iwasawa({0.1, 1.2, 0.3, -0.2, 0.7});
  cplx direct = sv_group(f.plane(), 1.3, g, 2);
  CHECK(std::abs(direct - lifted(g)) < 1e-12);
  JacobiPoint pt = jacobi_of(iwasawa(g));
  CHECK(std::abs(sv_rel_M_raw(f.plane(), 1.3, pt, 2) - std::pow(pt.y, 0.5 * 2) * sv_rel_M(f, pt, 2)) < 1e-12);
}

TEST_CASE("Fourier coefficients of lattice sums") {
  QuadratureSpec q;
  q.nx = 8;
  q.nu = 64;
  q.nv = 64;
  std::vector<double> ys{0.6, 1.1, 2.5};
  for (int M : {1, 2}) {
    for (int k : {0, 1}) {
      KTypeFunction f{bump_profile(k, 1.2, 6), k};
      auto rows = sv_coeffs_check(f, M, 2, 5, ys, false, q);
      CHECK(rows.size() == 5 * 11 * ys.size());
      // tiny high modes carry round-off, so compare against the largest coefficient
      double worst = 0, top = 0;
      for (const auto& r : rows) {
        worst = std::max(worst, std::abs(r.measured - r.predicted));
        top = std::max(top, std::abs(r.predicted));
      }
      CHECK(worst < 1e-11 * top);
    }
  }
  // the zero-mode prediction vanishes off multiples of M
  KTypeFunction f{bump_profile(0, 1.2, 6), 0};
  CHECK(sv_coefficient_predicted(f, 2, 3, 1.0) == cplx{});
  CHECK(std::abs(sv_coefficient_predicted(f, 2, 2, 1.0)) > 0);
}

TEST_CASE("literal closed form differs by y / 2 pi") {
  KTypeFunction f{bump_profile(0, 1.2, 6), 0};
  for (double y : {0.5, 1.5})
    for (int mt : {1, 2}) {
      cplx raw_pred = std::pow(y, 0.0) * sv_coefficient_predicted(f, 1, mt, y);
      cplx lit = sv_coefficient_literal(f, 1, mt, y);
      CHECK(std::abs(lit / raw_pred - y / kTwoPi) < 1e-10);
    }
}

TEST_CASE("cusp tail") {
  KTypeFunction f0{bump_profile(0, 1.0, 6), 0}, f1{bump_profile(1, 1.0, 6), 1};
  CHECK(std::abs(sv_cusp_tail(f0, f1, 1, 100)) == 0.0);
  cplx a = sv_cusp_tail(f0, f0, 1, 100), b = sv_cusp_tail(f0, f0, 1, 400);
  CHECK(a.real() > 0);
  CHECK(std::abs(a / b - 2.0) < 1e-12);
  CHECK(std::abs(sv_cusp_tail(f0, f0, 2, 100) / a - 8.0) < 1e-12);
  // L for a radial bump: F(h) = int f0(sqrt(s^2 + h^2)) ds
  double L = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double h) {
        double F = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double s) { return std::real(f0.f0(std::hypot(s, h))); }, -1.0, 1.0, 8, 1e-13);
        return F * F;
      },
      -1.0, 1.0, 8, 1e-12);
  CHECK(a.real() == doctest::Approx(3 / kPi * L * 2 / 10.0).epsilon(1e-8));
}

TEST_CASE("mean and second moment, small Monte Carlo") {
  KTypeFunction f{bump_profile(0, 1.0, 6), 0};
  MCSpec mc;
  mc.samples = 100000;
  mc.seed = 11;
  for (int M : {1, 2}) {
    auto est = sv_mean_mc(f, M, mc);
    double expect = M * M * f.integral().real();
    CHECK(std::abs(est.value - expect) < 4 * est.stderr_);
    CHECK(est.stderr_ < 0.02 * expect);
  }
  // weight-one functions have mean zero
  auto z = sv_mean_mc(KTypeFunction{bump_profile(1, 1.0, 6), 1}, 1, mc);
  CHECK(std::abs(z.value) < 4 * z.stderr_ + 1e-12);
  // second moment: int |f|^2 + |int f|^2 for M = 1
  auto s2 = sv_second_moment_mc(f, 1, mc);
  double expect = f.norm2() + std::norm(f.integral());
  CHECK(std::abs(s2.value - expect) < 4 * s2.stderr_);
  CHECK(s2.y_max > 4.0);
  CHECK(s2.tail.real() > 0);
}

TEST_CASE("adjoint of a lattice sum at a point") {
  KTypeFunction f{bump_profile(0, 1.0, 4), 0};
  MCSpec mc;
  mc.samples = 100000;
  mc.seed = 5;
  for (Vec2 xi : {Vec2{0.0, 0.0}, Vec2{0.3, -0.4}}) {
    auto est = sv_adjoint_of_sv(f, xi, mc);
    cplx expect = f(xi) + f.integral();
    CHECK(std::abs(est.value - expect) < 4 * est.stderr_ + 1e-3);
  }
}

TEST_CASE("lattice sums are orthogonal to a cusp form") {
  KTypeFunction f{bump_profile(0, 1.0, 6), 0};
  ModularFunction P = poincare_function(0, 1, 1, beta_power_exp(2.0, kTwoPi), 6);
  MCSpec mc;
  mc.samples = 20000;
  mc.seed = 9;
  auto est = orthogonality_to_cusp(f, 1, P, mc);
  CHECK(std::abs(est.value) < 4 * est.stderr_);
  CHECK(est.stderr_ > 0);
}
