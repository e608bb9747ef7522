#include "strata/special_fn.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/numeric/odeint.hpp>

namespace strata {

namespace {

bool is_pole(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
}

cplx log_gamma_stirling(cplx z) {
  static const double c[] = {1.0 / 12,       -1.0 / 360,       1.0 / 1260, -1.0 / 1680,
                             1.0 / 1188,     -691.0 / 360360,  1.0 / 156,  -3617.0 / 122400};
  cplx zi = 1.0 / z, zi2 = zi * zi, s = 0, p = zi;
  for (double ck : c) {
    s += ck * p;
    p *= zi2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(kTwoPi) + s;
}

}  // namespace

cplx log_gamma(cplx z) {
  if (is_pole(z)) throw std::domain_error("log_gamma: pole");
  if (z.real() < 0.5) {
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
  }
  cplx shift = 0;
  while (z.real() < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  return log_gamma_stirling(z) - shift;
}

cplx gamma_fn(cplx z) { return std::exp(log_gamma(z)); }

double bessel_j(int k, double x) {
  double sign = 1.0;
  if (k < 0) {
    k = -k;
    if (k % 2) sign = -sign;
  }
  if (x < 0) {
    x = -x;
    if (k % 2) sign = -sign;
  }
  return sign * boost::math::cyl_bessel_j(static_cast<double>(k), x);
}

namespace {

using State = std::array<double, 4>;  // Re f, Im f, Re f', Im f'

struct WhittakerSystem {
  double kappa;
  cplx mu;
  void operator()(const State& s, State& ds, double z) const {
    cplx f{s[0], s[1]};
    cplx q = -0.25 + kappa / z + (0.25 - mu * mu) / (z * z);
    cplx f2 = -q * f;
    ds = {s[2], s[3], f2.real(), f2.imag()};
  }
};

constexpr double kAsymptoticStart = 40.0;
constexpr double kConnectionMax = 4.0;
constexpr double kKummerMax = 20.0;

bool integral_two_mu(cplx mu) {
  return std::abs(mu.imag()) < 1e-9 && std::abs(2.0 * mu.real() - std::round(2.0 * mu.real())) < 1e-9;
}

// asymptotic series of W and W' at large z, truncated at the smallest term
std::pair<cplx, cplx> w_asymptotic_pair(const WhittakerParams& p, double z) {
  cplx a = 0.5 + p.mu - p.kappa, b = 0.5 - p.mu - p.kappa;
  cplx term = 1.0, sum = 0.0, dsum = 0.0;
  double last = std::numeric_limits<double>::infinity();
  for (int n = 0; n < 200; ++n) {
    double mag = std::abs(term);
    if (mag > last && n > 2) break;
    sum += term;
    dsum += term * (p.kappa - n) / z;
    if (mag < 1e-17 * std::abs(sum)) break;
    last = mag;
    term *= -(a + static_cast<double>(n)) * (b + static_cast<double>(n)) / (static_cast<double>(n + 1) * z);
  }
  cplx pre = std::exp(-0.5 * z + p.kappa * std::log(z));
  return {pre * sum, pre * (-0.5 * sum + dsum)};
}

cplx kummer_m_series(const WhittakerParams& p, double z, cplx mu) {
  cplx a = 0.5 + mu - p.kappa, b = 1.0 + 2.0 * mu;
  cplx term = 1.0, sum = 1.0;
  for (int n = 0; n < 2000; ++n) {
    term *= (a + static_cast<double>(n)) / (b + static_cast<double>(n)) * z / static_cast<double>(n + 1);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && n > 5) break;
  }
  return std::exp(-0.5 * z + (mu + 0.5) * std::log(z)) * sum;
}

template <class Obs>
void integrate_w(const WhittakerParams& p, const std::vector<double>& times, Obs obs) {
  namespace ode = boost::numeric::odeint;
  auto [w0, dw0] = w_asymptotic_pair(p, times.front());
  // the equation is linear: integrate a unit-size multiple so that the absolute tolerance is meaningful
  double scale = std::abs(w0);
  w0 /= scale;
  dw0 /= scale;
  State s{w0.real(), w0.imag(), dw0.real(), dw0.imag()};
  auto stepper = ode::make_dense_output(1e-14, 1e-13, ode::runge_kutta_dopri5<State>());
  auto rescaled = [&](const State& st, double z) { obs(State{st[0] * scale, st[1] * scale, st[2] * scale, st[3] * scale}, z); };
  ode::integrate_times(stepper, WhittakerSystem{p.kappa, p.mu}, s, times.begin(), times.end(), -1e-2, rescaled);
}

}  // namespace

cplx whittaker_m(const WhittakerParams& p, double z) {
  if (z <= 0) throw std::domain_error("whittaker_m: z must be positive");
  cplx tm = 2.0 * p.mu;
  if (std::abs(tm.imag()) < 1e-12 && tm.real() < 0 && std::abs(tm.real() - std::round(tm.real())) < 1e-12)
    throw std::domain_error("whittaker_m: 2 mu is a negative integer");
  if (z <= kKummerMax) return kummer_m_series(p, z, p.mu);
  // outward integration, M grows so this direction is stable
  namespace ode = boost::numeric::odeint;
  double z0 = kKummerMax, h = 1e-4;
  cplx m0 = kummer_m_series(p, z0, p.mu);
  cplx dm = (kummer_m_series(p, z0 + h, p.mu) - kummer_m_series(p, z0 - h, p.mu)) / (2 * h);
  State s{m0.real(), m0.imag(), dm.real(), dm.imag()};
  ode::integrate_adaptive(ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<State>()),
                          WhittakerSystem{p.kappa, p.mu}, s, z0, z, 1e-2);
  return {s[0], s[1]};
}

cplx whittaker_w_connection(const WhittakerParams& p, double z) {
  if (integral_two_mu(p.mu)) throw std::domain_error("whittaker_w_connection: 2 mu is an integer");
  cplx mu = p.mu;
  cplx c1 = std::exp(log_gamma(-2.0 * mu) - log_gamma(0.5 - mu - p.kappa));
  cplx c2 = std::exp(log_gamma(2.0 * mu) - log_gamma(0.5 + mu - p.kappa));
  return c1 * kummer_m_series(p, z, mu) + c2 * kummer_m_series(p, z, -mu);
}

cplx whittaker_w_asymptotic(const WhittakerParams& p, double z) { return w_asymptotic_pair(p, z).first; }

cplx whittaker_w_ode(const WhittakerParams& p, double z) {
  if (z >= kAsymptoticStart) return whittaker_w_asymptotic(p, z);
  cplx out;
  integrate_w(p, {kAsymptoticStart, z}, [&](const State& s, double) { out = {s[0], s[1]}; });
  return out;
}

cplx whittaker_w(const WhittakerParams& p, double z) {
  if (z <= 0) throw std::domain_error("whittaker_w: z must be positive");
  if (z >= kAsymptoticStart) return whittaker_w_asymptotic(p, z);
  if (z <= kConnectionMax && !integral_two_mu(p.mu)) return whittaker_w_connection(p, z);
  return whittaker_w_ode(p, z);
}

std::vector<cplx> whittaker_w_grid(const WhittakerParams& p, const std::vector<double>& z) {
  std::vector<cplx> out(z.size());
  std::vector<std::pair<double, std::size_t>> inner;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] <= 0) throw std::domain_error("whittaker_w_grid: z must be positive");
    if (z[i] >= kAsymptoticStart)
      out[i] = whittaker_w_asymptotic(p, z[i]);
    else if (z[i] <= kConnectionMax && !integral_two_mu(p.mu))
      out[i] = whittaker_w_connection(p, z[i]);
    else
      inner.push_back({z[i], i});
  }
  if (inner.empty()) return out;
  std::sort(inner.begin(), inner.end(), [](auto& a, auto& b) { return a.first > b.first; });
  std::vector<double> times{kAsymptoticStart};
  for (auto& [zz, i] : inner)
    if (zz < times.back()) times.push_back(zz);
  std::vector<cplx> vals;
  integrate_w(p, times, [&](const State& s, double) { vals.push_back({s[0], s[1]}); });
  // vals[j] corresponds to times[j]
  std::size_t j = 0;
  for (auto& [zz, i] : inner) {
    while (times[j] > zz) ++j;
    out[i] = vals[j];
  }
  return out;
}

double whittaker_ode_residual(const std::function<cplx(double)>& f, const WhittakerParams& p, double z, double h) {
  h *= z;  // relative step
  cplx f0 = f(z);
  cplx d2 = (-f(z + 2 * h) + 16.0 * f(z + h) - 30.0 * f0 + 16.0 * f(z - h) - f(z - 2 * h)) / (12.0 * h * h);
  cplx q = -0.25 + p.kappa / z + (0.25 - p.mu * p.mu) / (z * z);
  double scale = std::max(std::abs(d2), std::abs(q * f0));
  return std::abs(d2 + q * f0) / std::max(scale, 1e-300);
}

cplx gamma_w(double t, int k, int sgn_n) {
  if (t == 0.0) throw std::domain_error("gamma_w: t = 0 is a pole");
  int s = sgn_n >= 0 ? 1 : -1;
  return std::exp(log_gamma(cplx(0.0, 2.0 * t)) - log_gamma(cplx(0.5 * (1 - s * k), t)));
}

cplx whittaker_asymptotic_smally(int k, int n, double t, double y) {
  double Z = 4.0 * kPi * std::abs(n) * y;
  int s = n >= 0 ? 1 : -1;
  double lz = std::log(Z);
  return gamma_w(t, k, s) * std::exp(cplx(0.5 * (1 - k), -t) * lz) +
         gamma_w(-t, k, s) * std::exp(cplx(0.5 * (1 - k), t) * lz);
}

cplx whittaker_scaled(int k, int n, double t, double y) {
  double Z = 4.0 * kPi * std::abs(n) * y;
  int s = n >= 0 ? 1 : -1;
  return std::pow(Z, -0.5 * k) * whittaker_w({0.5 * s * k, cplx(0.0, t)}, Z);
}

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double r = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 1; j <= n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1) * r * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (r * p0 - p1) / (r * r - 1);
      double dr = p0 / dp;
      r -= dr;
      if (std::abs(dr) < 1e-16) break;
    }
    double wt = 2.0 / ((1 - r * r) * dp * dp);
    double m = 0.5 * (a + b), hl = 0.5 * (b - a);
    x[i] = m - hl * r;
    x[n - 1 - i] = m + hl * r;
    w[i] = w[n - 1 - i] = hl * wt;
  }
}

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 21>;

cplx gk_adaptive(const std::function<cplx(double)>& f, double a, double b, double tol, int depth) {
  const auto& xs = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = boost::math::quadrature::gauss<double, 10>::weights();
  double m = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx k = 0, g = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cplx fp = f(m + h * xs[i]);
    cplx fm = xs[i] == 0 ? cplx{} : f(m - h * xs[i]);
    k += wk[i] * (fp + fm);
    // odd-indexed Kronrod abscissae are the Gauss nodes
    if (i % 2 == 1) g += wg[i / 2] * (fp + fm);
  }
  k *= h;
  g *= h;
  if (depth <= 0 || std::abs(k - g) <= tol) return k;
  return gk_adaptive(f, a, m, 0.5 * tol, depth - 1) + gk_adaptive(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace

cplx integrate(const std::function<cplx(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  return gk_adaptive(f, a, b, tol, 30);
}

cplx integrate_to_inf(const std::function<cplx(double)>& f, double a, double tol) {
  auto g = [&](double t) {
    double u = 1.0 - t;
    return f(a + t / u) / (u * u);
  };
  return gk_adaptive(g, 0.0, 1.0, tol, 40);
}

cplx hankel_transform(int k, const RadialProfile& f, double s, double tol) {
  if (!std::isfinite(f.support)) throw std::invalid_argument("hankel_transform: profile needs finite support");
  double R = f.support;
  auto integrand = [&](double r) { return f.eval(r) * bessel_j(k, s * r) * r; };
  if (s * R < 1.0) return integrate(integrand, 0.0, R, tol);
  std::vector<double> cuts{0.0};
  int ak = std::abs(k);
  for (unsigned j = 1;; ++j) {
    double zr = boost::math::cyl_bessel_j_zero(static_cast<double>(ak), j) / s;
    if (zr >= R) break;
    cuts.push_back(zr);
  }
  cuts.push_back(R);
  cplx sum = 0;
  double panel_tol = tol / static_cast<double>(cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) sum += integrate(integrand, cuts[i], cuts[i + 1], panel_tol);
  return sum;
}

std::vector<cplx> hankel_transform(int k, const RadialProfile& f, const std::vector<double>& s, double tol) {
  std::vector<cplx> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = hankel_transform(k, f, s[i], tol);
  return out;
}

RadialProfile hankel_profile(int k, const RadialProfile& f, double tol) {
  RadialProfile out;
  out.eval = [k, f, tol](double s) { return hankel_transform(k, f, s, tol); };
  return out;
}

std::function<cplx(double)> t_transform(int j, std::function<cplx(double)> h) {
  if (j == 0) throw std::invalid_argument("t_transform: j = 0");
  return [j, h = std::move(h)](double y) { return y * h(kTwoPi * j / std::sqrt(y)); };
}

std::function<cplx(double)> s_transform(int j, std::function<cplx(double)> h) {
  if (j == 0) throw std::invalid_argument("s_transform: j = 0");
  return [j, h = std::move(h)](double r) {
    double c = kTwoPi * j;
    return r * r / (c * c) * h(c * c / (r * r));
  };
}

}  // namespace strata
