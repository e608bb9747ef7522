#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "strata/special_fn.hpp"

using namespace strata;

namespace {

// W_{kappa,mu}(z) = e^{-z/2} z^{mu+1/2} / Gamma(1/2+mu-kappa) int_0^inf e^{-zt} t^{mu-1/2-kappa} (1+t)^{mu-1/2+kappa} dt
cplx w_integral(double kappa, cplx mu, double z) {
  // t = s^2 removes the t^{-1/2} endpoint singularity when kappa = 0
  boost::math::quadrature::exp_sinh<double> es;
  auto part = [&](bool imag) {
    return es.integrate([&](double s) {
      double t = s * s;
      if (t < 1e-250 || z * t > 700) return 0.0;
      cplx v = 2.0 * s * std::exp(-z * t) * std::pow(t, mu - 0.5 - kappa) * std::pow(1.0 + t, mu - 0.5 + kappa);
      return imag ? v.imag() : v.real();
    });
  };
  cplx integral(part(false), part(true));
  return std::exp(-z / 2) * std::pow(cplx(z), mu + 0.5) / gamma_fn(0.5 + mu - kappa) * integral;
}

// Hansen-Bessel: J_k(x) = (1/2 pi) int exp(-ik theta + i x sin theta) dtheta, trapezoid is spectral here
double hansen(int k, double x) {
  const int n = 256;
  cplx acc = 0;
  for (int i = 0; i < n; ++i) {
    double th = kTwoPi * i / n;
    acc += std::exp(cplx(0, -k * th + x * std::sin(th)));
  }
  return (acc / static_cast<double>(n)).real();
}

double series_j(int k, double x) {
  double s = 0;
  for (int m = 0; m < 60; ++m)
    s += std::pow(-1.0, m) / (boost::math::factorial<double>(m) * boost::math::factorial<double>(m + k)) *
         std::pow(x / 2, 2 * m + k);
  return s;
}

}  // namespace

TEST_CASE("log gamma") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-14);
  CHECK(std::abs(log_gamma(5.0) - std::log(24.0)) < 1e-13);
  for (int n = 1; n <= 20; ++n) {
    double f = boost::math::factorial<double>(n - 1);
    CHECK(std::abs(std::exp(log_gamma(static_cast<double>(n))).real() - f) / f < 1e-12);
  }
  cplx z(0.3, 2.0);
  CHECK(std::abs(gamma_fn(z) * gamma_fn(1.0 - z) - kPi / std::sin(kPi * z)) / std::abs(kPi / std::sin(kPi * z)) < 1e-12);
  // |Gamma(i y)|^2 = pi / (y sinh(pi y))
  for (double y : {0.5, 1.0, 3.0}) CHECK(std::norm(gamma_fn(cplx(0, y))) == doctest::Approx(kPi / (y * std::sinh(kPi * y))).epsilon(1e-12));
  CHECK_THROWS_AS(log_gamma(-3.0), std::domain_error);
}

TEST_CASE("Bessel J against the power series and the Hansen-Bessel integral") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  for (int k = 1; k <= 5; ++k) CHECK(bessel_j(k, 0.0) == 0.0);
  CHECK(std::abs(hansen(2, 3.7) - series_j(2, 3.7)) < 1e-10);
  for (int k = -5; k <= 5; ++k)
    for (double x : {-9.5, -3.1, 0.2, 1.0, 4.4, 10.0}) {
      CHECK(std::abs(bessel_j(k, x) - hansen(k, x)) < 1e-10);
      if (k >= 0) CHECK(std::abs(bessel_j(k, x) - series_j(k, x)) < 1e-10);
    }
}

TEST_CASE("Whittaker ODE residuals on a parameter lattice") {
  for (double kappa : {-1.0, 0.0, 0.5, 1.0, 1.5})
    for (cplx mu : {cplx(0, 0.5), cplx(0, 1.0), cplx(0, 2.5), cplx(0.3, 0)})
      for (double z : {0.05, 0.7, 2.0, 5.5, 13.0, 30.0, 60.0}) {
        WhittakerParams p{kappa, mu};
        CHECK(whittaker_ode_residual([&](double x) { return whittaker_w(p, x); }, p, z) < 1e-6);
        if (z <= 20) CHECK(whittaker_ode_residual([&](double x) { return whittaker_m(p, x); }, p, z) < 1e-6);
      }
  WhittakerParams p{1.0, cplx(0, 0.5)};
  CHECK(whittaker_ode_residual([&](double x) { return whittaker_w(p, x); }, p, 2.0) < 1e-6);
}

TEST_CASE("Whittaker W against its Laplace integral representation") {
  for (double kappa : {0.0, -0.5, -1.0})
    for (double t : {0.5, 1.0, 2.0})
      for (double z : {0.5, 3.0, 8.0, 45.0}) {
        cplx oracle = w_integral(kappa, cplx(0, t), z);
        CHECK(std::abs(whittaker_w({kappa, cplx(0, t)}, z) - oracle) < 1e-8 * std::abs(oracle));
      }
}

TEST_CASE("Whittaker W with real mu against Bessel K") {
  // W_{0,mu}(z) = sqrt(z/pi) K_mu(z/2)
  for (double mu : {0.3, 1.2})
    for (double z : {0.4, 2.0, 9.0, 45.0}) {
      double oracle = std::sqrt(z / kPi) * boost::math::cyl_bessel_k(mu, z / 2);
      CHECK(std::abs(whittaker_w({0.0, mu}, z).real() - oracle) < 1e-9 * oracle);
    }
}

TEST_CASE("exponential solutions are W functions") {
  for (int k = 2; k <= 5; ++k) {
    WhittakerParams p{0.5 * k, cplx(0.5 * (k - 1), 0)};
    for (double y = 1; y <= 10; y += 1.5)
      CHECK(std::abs(whittaker_w(p, y) / (std::exp(-y / 2) * std::pow(y, 0.5 * k)) - 1.0) < 1e-10);
  }
}

TEST_CASE("evaluation routes agree and W decays") {
  for (double kappa : {-1.0, 0.0, 1.0})
    for (double t : {0.3, 1.0, 2.5})
      for (double z : {2.0, 3.0, 4.0}) {
        WhittakerParams p{kappa, cplx(0, t)};
        cplx a = whittaker_w_connection(p, z), b = whittaker_w_ode(p, z);
        CHECK(std::abs(a - b) < 1e-9 * std::abs(b));
      }
  WhittakerParams p{1.0, cplx(0, 1.0)};
  for (double z : {45.0, 60.0, 90.0}) {
    CHECK(std::abs(whittaker_w(p, z)) < std::exp(-z / 4));
  }
  std::vector<double> zs{0.5, 2.0, 10.0, 35.0};
  auto grid = whittaker_w_grid(p, zs);
  for (std::size_t i = 0; i < zs.size(); ++i) CHECK(std::abs(grid[i] - whittaker_w(p, zs[i])) < 1e-9 * std::abs(grid[i]));
}

TEST_CASE("Whittaker M is the regular branch") {
  WhittakerParams p{0.5, cplx(0.25, 0)};
  // M ~ z^{mu + 1/2} at 0
  CHECK(std::abs(whittaker_m(p, 1e-6) / std::pow(1e-6, 0.75) - 1.0) < 1e-5);
  CHECK_THROWS(whittaker_m({0.0, cplx(-1.0, 0)}, 1.0));
}

TEST_CASE("Gamma^W factor") {
  for (double t : {0.5, 1.0, 2.0}) {
    cplx a = gamma_w(t, 2, 1), b = gamma_w(-t, 2, 1);
    CHECK(std::abs(a * b) > 0);
    // real k: Gamma^W(-t) = conj Gamma^W(t)
    CHECK(std::abs(b - std::conj(a)) < 1e-13 * std::abs(a));
    CHECK(std::abs(a - gamma_fn(cplx(0, 2 * t)) / gamma_fn(cplx(-0.5, t))) < 1e-12 * std::abs(a));
  }
  CHECK_THROWS(gamma_w(0.0, 2, 1));
}

TEST_CASE("small-y asymptotics") {
  cplx a = whittaker_asymptotic_smally(0, 1, 1.0, 1e-3), w = whittaker_scaled(0, 1, 1.0, 1e-3);
  CHECK(std::abs(a - w) / std::abs(w) < 1e-2);
  // the error decays at the rate y^{(3-k)/2}: regression of log max-error per decade
  for (int k : {1, 2, 3}) {
    std::vector<double> lx, ly;
    for (int dec = 2; dec <= 5; ++dec) {
      double worst = 0;
      for (int i = 0; i < 40; ++i) {
        double y = std::pow(10.0, -dec - i / 40.0);
        worst = std::max(worst, std::abs(whittaker_asymptotic_smally(k, 1, 1.0, y) - whittaker_scaled(k, 1, 1.0, y)));
      }
      lx.push_back(dec);
      ly.push_back(-std::log10(worst));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i] / lx.size(), my += ly[i] / ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
    CHECK(sxy / sxx >= 0.5 * (3 - k) - 0.2);
  }
}

TEST_CASE("Hankel transform: Sonine closed form, involution, isometry") {
  for (int k : {0, 1, 2, 3}) {
    const int nu = 6;
    RadialProfile f{[k](double r) { return cplx(r < 1 ? std::pow(r, k) * std::pow(1 - r * r, nu) : 0.0); }, 1.0};
    auto closed = [k](double s) {
      return std::pow(2.0, nu) * boost::math::factorial<double>(nu) * boost::math::cyl_bessel_j(k + nu + 1, s) / std::pow(s, nu + 1);
    };
    for (double s : {0.3, 1.0, 4.0, 17.0, 60.0}) CHECK(std::abs(hankel_transform(k, f, s, 1e-12) - closed(s)) < 1e-11);
    // involution with the closed-form transform truncated where it is below 1e-16
    RadialProfile g{[&](double s) { return cplx(s == 0 ? 0.0 : closed(s)); }, 400.0};
    double num = 0, den = 0;
    for (double r = 0.05; r < 1.0; r += 0.1) {
      cplx back = hankel_transform(k, g, r, 1e-12);
      num += std::norm(back - f(r)) * r;
      den += std::norm(f(r)) * r;
    }
    CHECK(std::sqrt(num / den) < 1e-5);
    // norm preservation
    double n1 = integrate([&](double r) { return cplx(std::norm(f(r)) * r); }, 0, 1, 1e-14).real();
    double n2 = 0;
    for (int p = 0; p < 400; ++p)
      n2 += integrate([&](double s) { return cplx(s == 0 ? 0.0 : closed(s) * closed(s) * s); }, p, p + 1.0, 1e-14).real();
    CHECK(std::abs(n2 - n1) / n1 < 1e-5);
  }
  // Gaussian self-reciprocity
  RadialProfile gauss{[](double r) { return cplx(std::exp(-r * r / 2)); }, 40.0};
  double worst = 0;
  for (double s = 0; s <= 5; s += 0.25) worst = std::max(worst, std::abs(hankel_transform(0, gauss, s) - std::exp(-s * s / 2)));
  CHECK(worst < 1e-6);
}

TEST_CASE("T and S transforms") {
  auto h = [](double r) { return cplx(std::exp(-r * r)); };
  for (int j : {1, 2, -1}) {
    auto T = t_transform(j, h);
    auto S = s_transform(j, T);
    for (double r : {0.1, 0.5, 1.3, 4.0}) CHECK(std::abs(S(r) - h(r)) < 1e-14);
  }
  CHECK_THROWS(t_transform(0, h));
  CHECK_THROWS(s_transform(0, h));
  // change of variables: int |T_j h|^2 y^-3 dy = 2 int |h(s)|^2 ds / s
  auto hb = [](double s) { return cplx(s > 1 && s < 3 ? std::sin(s) * (s - 1) * (3 - s) : 0.0); };
  auto T1 = t_transform(1, hb);
  double lhs = integrate([&](double y) { return cplx(std::norm(T1(y)) * std::pow(y, -3.0)); }, std::pow(kTwoPi / 3, 2), std::pow(kTwoPi, 2), 1e-13).real();
  double rhs = 2 * integrate([&](double s) { return cplx(std::norm(hb(s)) / s); }, 1, 3, 1e-13).real();
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  // T_2 of the indicator of [1, 2] is y on the window (4 pi / 2)^2 <= y <= (4 pi)^2
  auto T2 = t_transform(2, [](double s) { return cplx(s >= 1 && s <= 2 ? 1.0 : 0.0); });
  CHECK(T2(60.0).real() == doctest::Approx(60.0));
  CHECK(T2(30.0).real() == 0.0);
  CHECK(T2(200.0).real() == 0.0);
}

TEST_CASE("quadrature helpers") {
  std::vector<double> x, w;
  gauss_legendre(10, -1, 2, x, w);
  // exact for degree 19
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 19);
  CHECK(s == doctest::Approx((std::pow(2.0, 20) - 1) / 20).epsilon(1e-13));
  CHECK(integrate([](double t) { return cplx(std::cos(t), std::sin(t)); }, 0, kPi).imag() == doctest::Approx(2.0));
  CHECK(integrate_to_inf([](double t) { return cplx(std::exp(-t)); }, 0).real() == doctest::Approx(1.0).epsilon(1e-10));
}
