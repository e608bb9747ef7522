#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "strata/saff_group.hpp"

namespace strata {

// |beta(y)| <= small_A * y^small_a on (0, small_y0]; |beta(y)| <= large_A * y^large_a on [large_y0, inf)
struct BetaProfile {
  std::function<cplx(double)> eval;
  double small_A = 1, small_a = 0, small_y0 = 1;
  double large_A = 1, large_a = 0, large_y0 = 1;
  cplx operator()(double y) const { return eval(y); }
};

// sampled check of both certificates on a log grid; for weight k the small-y exponent must exceed 1 - k/2
bool check_certificate(const BetaProfile& b, int k, std::string* why = nullptr);

struct Coset {
  long a = 1, b = 0, c = 0, d = 1;
};

struct CosetList {
  long R = 0;
  std::vector<Coset> cosets;
};

// coprime bottom rows in the box |c|, |d| <= R, completed with minimal |a| (then a > 0)
CosetList coset_list(long R);
Coset complete_coset(long c, long d);

struct SeriesValue {
  cplx value;
  double tail_bound = 0;  // rigorous bound on the omitted terms, infinity if the certificate does not apply
  std::size_t terms = 0;
};

// Sums over cosets with |c tau + d| <= rho.
SeriesValue eisenstein(int k, int m, const BetaProfile& beta, const JacobiPoint& pt, double rho);
SeriesValue poincare(int k, int n, int m, const BetaProfile& beta, const JacobiPoint& pt, double rho);

ModularFunction eisenstein_function(int k, int m, const BetaProfile& beta, double rho);
ModularFunction poincare_function(int k, int n, int m, const BetaProfile& beta, double rho);

// e^{-2 pi |n| y} (k > 1) or y^{-k} e^{-2 pi |n| y} (k < -1)
BetaProfile beta_discrete(int k, int n);

// y^a e^{-c y}; certificates small (1, a, 1), large from the maximum of y^a e^{-c y}
BetaProfile beta_power_exp(double a, double c);

// compactly supported test density on [t_lo, t_hi]
struct PsiSpec {
  std::function<cplx(double)> psi;
  double t_lo = 0.5, t_hi = 1.5;
  int nodes = 48;
};

PsiSpec psi_bump(double t0, double width);

cplx beta_whittaker(int k, int n, const PsiSpec& psi, double y);
BetaProfile beta_whittaker_profile(int k, int n, const PsiSpec& psi);
cplx beta_ypower(int k, const PsiSpec& psi, int sign, double y);
BetaProfile beta_ypower_profile(int k, const PsiSpec& psi, int sign);

// int |beta|^2 y^{k-2} dy over [y_lo, y_hi] by Gauss-Legendre in log y
double weighted_norm2(const std::function<cplx(double)>& beta, int k, double y_lo, double y_hi, int nodes = 400);
cplx weighted_inner(const std::function<cplx(double)>& b1, const std::function<cplx(double)>& b2, int k, double y_lo,
                    double y_hi, int nodes = 400);
double psi_norm2(const PsiSpec& psi);

struct ClassicalValue {
  double raw = 0;        // truncated coprime sum over the box |c|, |d| <= R, both signs
  double tail = 0;       // continuum estimate of the omitted terms
  double value() const { return raw + tail; }
};

// sum over coprime (c, d) of y^s / |c tau + d|^{2s}; s > 1
ClassicalValue classical_eisenstein(cplx tau, double s, long R);
// pi^{-s} Gamma(s) zeta(2s) times the series above, from the Fourier expansion (any real s != 0, 1/2, 1)
double completed_eisenstein(cplx tau, double s, int n_terms = 60);
// completed Riemann zeta xi(s) = pi^{-s/2} Gamma(s/2) zeta(s)
double xi(double s);

// sum over coprime (c, d) of (c tau + d)^k / |c tau + d|^k psi(y / |c tau + d|^2); psi supported in [u_lo, u_hi]
cplx eisenstein_k_psi(int k, const std::function<double(double)>& psi, double u_lo, cplx tau);

struct SeriesRow {
  std::string id;
  JacobiPoint pt;
  double rho = 0;
  SeriesValue v;
};
void write_series_csv(std::ostream& os, const std::vector<SeriesRow>& rows);

}  // namespace strata
