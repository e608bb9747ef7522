#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "strata/common.hpp"

namespace strata {

// principal log Gamma; throws std::domain_error at poles
cplx log_gamma(cplx z);
cplx gamma_fn(cplx z);

// J_k(x) for integer k and real x
double bessel_j(int k, double x);

struct WhittakerParams {
  double kappa = 0.0;
  cplx mu{0.0, 0.0};
};

// regular branch e^{-z/2} z^{mu+1/2} 1F1(1/2+mu-kappa; 1+2mu; z)
cplx whittaker_m(const WhittakerParams& p, double z);
// decaying branch, ~ e^{-z/2} z^kappa as z -> infinity
cplx whittaker_w(const WhittakerParams& p, double z);
// W on many points with a single inward integration
std::vector<cplx> whittaker_w_grid(const WhittakerParams& p, const std::vector<double>& z);

// the two evaluation routes of W, exposed for the overlap check
cplx whittaker_w_connection(const WhittakerParams& p, double z);
cplx whittaker_w_ode(const WhittakerParams& p, double z);
cplx whittaker_w_asymptotic(const WhittakerParams& p, double z);

// residual of f'' + (-1/4 + kappa/z + (1/4 - mu^2)/z^2) f at z over the larger term; step h * z
double whittaker_ode_residual(const std::function<cplx(double)>& f, const WhittakerParams& p, double z,
                              double h = 1e-3);

// Gamma(2it) / Gamma((1 - sgn k)/2 + it)
cplx gamma_w(double t, int k, int sgn_n);

// Gamma^W(t) Z^{(1-k)/2 - it} + Gamma^W(-t) Z^{(1-k)/2 + it}, Z = 4 pi |n| y
cplx whittaker_asymptotic_smally(int k, int n, double t, double y);
// Z^{-k/2} W_{sgn(n) k/2, it}(Z), the function approximated above
cplx whittaker_scaled(int k, int n, double t, double y);

struct RadialProfile {
  std::function<cplx(double)> eval;
  double support = std::numeric_limits<double>::infinity();  // f vanishes beyond this radius
  bool smooth = true;
  cplx operator()(double r) const { return r > support ? cplx{} : eval(r); }
};

// (H_k f)(s) = int_0^R f(r) J_k(s r) r dr, panels between zeros of J_k(s r)
cplx hankel_transform(int k, const RadialProfile& f, double s, double tol = 1e-10);
std::vector<cplx> hankel_transform(int k, const RadialProfile& f, const std::vector<double>& s, double tol = 1e-10);
// lazily evaluated transform; the input must have finite support
RadialProfile hankel_profile(int k, const RadialProfile& f, double tol = 1e-10);

// T_j h(y) = y h(2 pi j / sqrt y); S_j h(r) = r^2/(2 pi j)^2 h((2 pi j)^2 / r^2)
std::function<cplx(double)> t_transform(int j, std::function<cplx(double)> h);
std::function<cplx(double)> s_transform(int j, std::function<cplx(double)> h);

// Gauss-Legendre nodes/weights on [a, b]
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

// adaptive Gauss-Kronrod quadrature of a complex integrand on [a, b]
cplx integrate(const std::function<cplx(double)>& f, double a, double b, double tol = 1e-10);
// same on [a, infinity)
cplx integrate_to_inf(const std::function<cplx(double)>& f, double a, double tol = 1e-10);

}  // namespace strata
