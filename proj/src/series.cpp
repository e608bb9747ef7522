#include "strata/series.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cstdio>
#include <numeric>

#include "strata/special_fn.hpp"

namespace strata {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

long ext_gcd(long a, long b, long& x, long& y) {
  if (b == 0) {
    x = (a >= 0) ? 1 : -1;
    y = 0;
    return std::abs(a);
  }
  long x1, y1;
  long g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

}  // namespace

bool check_certificate(const BetaProfile& b, int k, std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (!(b.small_a > 1.0 - 0.5 * k)) return fail("small-y exponent does not exceed 1 - k/2");
  for (int i = 0; i <= 200; ++i) {
    double y = b.small_y0 * std::pow(10.0, -8.0 * i / 200.0);
    if (std::abs(b(y)) > b.small_A * std::pow(y, b.small_a) * (1 + 1e-9) + 1e-300)
      return fail("small-y bound violated at y = " + std::to_string(y));
  }
  for (int i = 0; i <= 200; ++i) {
    double y = b.large_y0 * std::pow(10.0, 3.0 * i / 200.0);
    if (std::abs(b(y)) > b.large_A * std::pow(y, b.large_a) * (1 + 1e-9) + 1e-300)
      return fail("large-y bound violated at y = " + std::to_string(y));
  }
  if (why) why->clear();
  return true;
}

Coset complete_coset(long c, long d) {
  if (c == 0) {
    if (std::abs(d) != 1) throw std::invalid_argument("complete_coset: not coprime");
    return {d, 0, 0, d};
  }
  long x, y;
  // a d - b c = 1: solve d a' + c b' = g
  long g = ext_gcd(d, c, x, y);
  if (g != 1) throw std::invalid_argument("complete_coset: not coprime");
  long a = x, b = -y;
  // shift a by multiples of c to minimise |a|, ties toward a > 0
  long ac = std::abs(c);
  long r = ((a % ac) + ac) % ac;
  long target = (2 * r <= ac) ? r : r - ac;
  long t = (target - a) / c;
  a += t * c;
  b += t * d;
  return {a, b, c, d};
}

CosetList coset_list(long R) {
  if (R < 1) throw std::invalid_argument("coset_list: R >= 1");
  CosetList out;
  out.R = R;
  for (long c = -R; c <= R; ++c)
    for (long d = -R; d <= R; ++d) {
      if (std::gcd(c, d) != 1) continue;
      out.cosets.push_back(complete_coset(c, d));
    }
  return out;
}

namespace {

double tail_bound_ball(const BetaProfile& beta, int k, double y, double rho) {
  double X0 = rho * rho;
  if (y / X0 > beta.small_y0) return std::numeric_limits<double>::infinity();
  double sigma = beta.small_a + 0.5 * k;
  if (sigma <= 1.0) return std::numeric_limits<double>::infinity();
  double s = 4.0 * sigma / ((sigma - 1.0) * y) * std::pow(X0, 1.0 - sigma) +
             2.0 * (1.0 + 1.0 / y) * sigma / (sigma - 0.5) * std::pow(X0, 0.5 - sigma) + std::pow(X0, -sigma);
  return kInvSqrt2 * beta.small_A * std::pow(y, beta.small_a) * s;
}

template <class F>
void for_each_coprime_in_ball(const JacobiPoint& pt, double rho, F body) {
  double y = pt.y, x = pt.x;
  long C = static_cast<long>(std::floor(rho / y));
  for (long c = -C; c <= C; ++c) {
    double r2 = rho * rho - static_cast<double>(c) * c * y * y;
    if (r2 < 0) continue;
    double r = std::sqrt(r2);
    long d0 = static_cast<long>(std::ceil(-c * x - r)), d1 = static_cast<long>(std::floor(-c * x + r));
    for (long d = d0; d <= d1; ++d) {
      if (std::gcd(c, d) != 1) continue;
      body(c, d);
    }
  }
}

SeriesValue affine_series(int k, int n, int m, const BetaProfile& beta, const JacobiPoint& pt, double rho) {
  if (rho < 1.0) throw std::invalid_argument("series: rho must be at least 1");
  SeriesValue out;
  cplx tau = pt.tau();
  double s = pt.p();
  cplx acc = 0;
  for_each_coprime_in_ball(pt, rho, [&](long c, long d) {
    cplx j = static_cast<double>(c) * tau + static_cast<double>(d);
    double Q = std::norm(j);
    double yg = pt.y / Q;
    double sp = s * (c * pt.x + d) - c * pt.u;
    double phase = m * sp;
    if (n != 0) {
      Coset g = complete_coset(c, d);
      double re = (g.a * c * std::norm(tau) + (g.a * d + g.b * c) * pt.x + g.b * d) / Q;
      phase += n * re;
    }
    acc += std::pow(j, -k) * beta(yg) * e(phase);
    ++out.terms;
  });
  out.value = kInvSqrt2 * acc;
  out.tail_bound = tail_bound_ball(beta, k, pt.y, rho);
  return out;
}

}  // namespace

SeriesValue eisenstein(int k, int m, const BetaProfile& beta, const JacobiPoint& pt, double rho) {
  return affine_series(k, 0, m, beta, pt, rho);
}

SeriesValue poincare(int k, int n, int m, const BetaProfile& beta, const JacobiPoint& pt, double rho) {
  return affine_series(k, n, m, beta, pt, rho);
}

ModularFunction eisenstein_function(int k, int m, const BetaProfile& beta, double rho) {
  return {[=](const JacobiPoint& pt) { return eisenstein(k, m, beta, pt, rho).value; }, k};
}

ModularFunction poincare_function(int k, int n, int m, const BetaProfile& beta, double rho) {
  return {[=](const JacobiPoint& pt) { return poincare(k, n, m, beta, pt, rho).value; }, k};
}

BetaProfile beta_discrete(int k, int n) {
  if (static_cast<long>(n) * k <= 0 || std::abs(k) < 2)
    throw std::invalid_argument("beta_discrete: need n k > 0 and |k| >= 2");
  double c = kTwoPi * std::abs(n);
  BetaProfile b;
  if (k > 1) {
    b.eval = [c](double y) { return cplx(std::exp(-c * y)); };
    b.small_A = 1;
    b.small_a = 0;
    b.small_y0 = 1;
    b.large_A = 1;
    b.large_a = 0;
  } else {
    int p = -k;
    b.eval = [c, p](double y) { return cplx(std::pow(y, p) * std::exp(-c * y)); };
    b.small_A = 1;
    b.small_a = p;
    b.small_y0 = 1;
    b.large_A = std::pow(p / (c * std::exp(1.0)), p);
    b.large_a = 0;
  }
  return b;
}

BetaProfile beta_power_exp(double a, double c) {
  if (!(c > 0)) throw std::invalid_argument("beta_power_exp: c > 0");
  BetaProfile b;
  b.eval = [a, c](double y) { return cplx(std::pow(y, a) * std::exp(-c * y)); };
  b.small_A = 1;
  b.small_a = a;
  b.small_y0 = 1;
  b.large_A = a > 0 ? std::pow(a / (c * std::exp(1.0)), a) : 1.0;
  b.large_a = 0;
  return b;
}

PsiSpec psi_bump(double t0, double width) {
  PsiSpec s;
  s.t_lo = t0 - width;
  s.t_hi = t0 + width;
  s.psi = [t0, width](double t) {
    double u = (t - t0) / width;
    if (std::abs(u) >= 1) return cplx{};
    return cplx(std::exp(-1.0 / (1.0 - u * u)));
  };
  return s;
}

cplx beta_whittaker(int k, int n, const PsiSpec& psi, double y) {
  if (n == 0) throw std::invalid_argument("beta_whittaker: n != 0");
  std::vector<double> t, w;
  gauss_legendre(psi.nodes, psi.t_lo, psi.t_hi, t, w);
  int sg = n > 0 ? 1 : -1;
  double Z = 4.0 * kPi * std::abs(n) * y;
  cplx acc = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    cplx pv = psi.psi(t[i]);
    if (pv == cplx{}) continue;
    cplx g = gamma_w(t[i], k, sg) * gamma_w(-t[i], k, sg);
    acc += w[i] * pv / std::sqrt(g) * whittaker_w({0.5 * sg * k, cplx(0.0, t[i])}, Z);
  }
  return acc * std::pow(y, -0.5 * k) / (4.0 * kPi * std::pow(std::abs(n), 1.5));
}

BetaProfile beta_whittaker_profile(int k, int n, const PsiSpec& psi) {
  BetaProfile b;
  b.eval = [=](double y) { return beta_whittaker(k, n, psi, y); };
  b.small_a = 0.5 * (1 - k);
  return b;
}

cplx beta_ypower(int k, const PsiSpec& psi, int sign, double y) {
  std::vector<double> t, w;
  gauss_legendre(psi.nodes, psi.t_lo, psi.t_hi, t, w);
  double ly = std::log(y), base = 0.5 * (1 - k);
  cplx acc = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    cplx up = std::exp(cplx(base, t[i]) * ly), dn = std::exp(cplx(base, -t[i]) * ly);
    acc += w[i] * psi.psi(t[i]) * (up + static_cast<double>(sign) * dn);
  }
  return acc;
}

BetaProfile beta_ypower_profile(int k, const PsiSpec& psi, int sign) {
  BetaProfile b;
  b.eval = [=](double y) { return beta_ypower(k, psi, sign, y); };
  b.small_a = 0.5 * (1 - k);
  return b;
}

cplx weighted_inner(const std::function<cplx(double)>& b1, const std::function<cplx(double)>& b2, int k, double y_lo,
                    double y_hi, int nodes) {
  // split log range into unit panels for robustness
  double a = std::log(y_lo), b = std::log(y_hi);
  int panels = std::max(1, static_cast<int>(std::ceil(b - a)));
  int per = std::max(8, nodes / panels);
  cplx acc = 0;
  std::vector<double> t, w;
  for (int p = 0; p < panels; ++p) {
    gauss_legendre(per, a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels, t, w);
    for (std::size_t i = 0; i < t.size(); ++i) {
      double y = std::exp(t[i]);
      acc += w[i] * b1(y) * std::conj(b2(y)) * std::pow(y, k - 1);
    }
  }
  return acc;
}

double weighted_norm2(const std::function<cplx(double)>& beta, int k, double y_lo, double y_hi, int nodes) {
  return weighted_inner(beta, beta, k, y_lo, y_hi, nodes).real();
}

double psi_norm2(const PsiSpec& psi) {
  std::vector<double> t, w;
  gauss_legendre(4 * psi.nodes, psi.t_lo, psi.t_hi, t, w);
  double s = 0;
  for (std::size_t i = 0; i < t.size(); ++i) s += w[i] * std::norm(psi.psi(t[i]));
  return s;
}

ClassicalValue classical_eisenstein(cplx tau, double s, long R) {
  if (s <= 1.0) throw std::domain_error("classical_eisenstein: raw sum needs s > 1");
  double y = tau.imag(), x = tau.real(), t2 = std::norm(tau);
  ClassicalValue out;
  double acc = 0;
  for (long c = -R; c <= R; ++c)
    for (long d = -R; d <= R; ++d) {
      if (std::gcd(c, d) != 1) continue;
      double Q = c * c * t2 + 2.0 * c * d * x + static_cast<double>(d) * d;
      acc += std::pow(y / Q, s);
    }
  out.raw = acc;
  // coprime density 6/pi^2 times the integral of y^s Q^{-s} outside the box of half-width R + 1/2
  std::vector<double> ph, w;
  double tail = 0;
  for (int p = 0; p < 8; ++p) {
    gauss_legendre(64, p * kPi / 4, (p + 1) * kPi / 4, ph, w);
    for (std::size_t i = 0; i < ph.size(); ++i) {
      double cs = std::cos(ph[i]), sn = std::sin(ph[i]);
      double Qp = cs * cs * t2 + 2 * cs * sn * x + sn * sn;
      double rb = (R + 0.5) / std::max(std::abs(cs), std::abs(sn));
      tail += w[i] * std::pow(Qp, -s) * std::pow(rb, 2 - 2 * s) / (2 * s - 2);
    }
  }
  out.tail = 6.0 / (kPi * kPi) * std::pow(y, s) * tail;
  return out;
}

double xi(double s) {
  if (s < 0.5) return xi(1.0 - s);
  if (s == 1.0) throw std::domain_error("xi: pole at 1");
  return std::pow(kPi, -0.5 * s) * std::tgamma(0.5 * s) * boost::math::zeta(s);
}

namespace {

double divisor_sigma(long n, double a) {
  double s = 0;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    s += std::pow(static_cast<double>(d), a);
    long e2 = n / d;
    if (e2 != d) s += std::pow(static_cast<double>(e2), a);
  }
  return s;
}

}  // namespace

double completed_eisenstein(cplx tau, double s, int n_terms) {
  double y = tau.imag(), x = tau.real();
  double v = xi(2 * s) * std::pow(y, s) + xi(2 - 2 * s) * std::pow(y, 1 - s);
  double nu = std::abs(s - 0.5), acc = 0;
  for (int n = 1; n <= n_terms; ++n)
    acc += std::pow(n, s - 0.5) * divisor_sigma(n, 1 - 2 * s) * boost::math::cyl_bessel_k(nu, kTwoPi * n * y) *
           std::cos(kTwoPi * n * x);
  return 2.0 * (v + 4.0 * std::sqrt(y) * acc);
}

cplx eisenstein_k_psi(int k, const std::function<double(double)>& psi, double u_lo, cplx tau) {
  double y = tau.imag();
  JacobiPoint pt{tau.real(), y, 0, 0};
  cplx acc = 0;
  for_each_coprime_in_ball(pt, std::sqrt(y / u_lo), [&](long c, long d) {
    cplx j = static_cast<double>(c) * tau + static_cast<double>(d);
    double a = std::abs(j);
    acc += std::pow(j / a, k) * psi(y / (a * a));
  });
  return acc;
}

void write_series_csv(std::ostream& os, const std::vector<SeriesRow>& rows) {
  os << "id,x,y,u,v,rho,re,im,tail_bound,terms\n";
  char buf[256];
  for (auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.6g,%zu\n", r.id.c_str(), r.pt.x,
                  r.pt.y, r.pt.u, r.pt.v, r.rho, r.v.value.real(), r.v.value.imag(), r.v.tail_bound, r.v.terms);
    os << buf;
  }
}

}  // namespace strata
