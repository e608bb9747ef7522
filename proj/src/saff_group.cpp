#include "strata/saff_group.hpp"

#include <algorithm>

#include "strata/parallel.hpp"

namespace strata {

SL2 operator*(const SL2& l, const SL2& r) {
  return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

SL2 inverse(const SL2& g) { return {g.d, -g.b, -g.c, g.a}; }

SL2 renormalize(const SL2& g) {
  double s = 1.0 / std::sqrt(g.det());
  return {g.a * s, g.b * s, g.c * s, g.d * s};
}

SL2 rot(double t) {
  double c = std::cos(t), s = std::sin(t);
  return {c, s, -s, c};
}

SAff identity() { return {}; }

Vec2 row_times(const Vec2& w, const SL2& g) { return {w[0] * g.a + w[1] * g.c, w[0] * g.b + w[1] * g.d}; }

SAff compose(const SAff& l, const SAff& r) {
  Vec2 t = row_times(l.w, r.g);
  return {l.g * r.g, {t[0] + r.w[0], t[1] + r.w[1]}};
}

SAff compose_chain(const std::vector<SAff>& factors) {
  SAff acc;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    acc = compose(acc, factors[i]);
    if ((i + 1) % kRenormalizeEvery == 0) acc.g = renormalize(acc.g);
  }
  return acc;
}

SAff inverse(const SAff& a) {
  SL2 gi = inverse(a.g);
  Vec2 t = row_times(a.w, gi);
  return {gi, {-t[0], -t[1]}};
}

double distance(const SAff& l, const SAff& r) {
  double m = 0;
  m = std::max({std::abs(l.g.a - r.g.a), std::abs(l.g.b - r.g.b), std::abs(l.g.c - r.g.c), std::abs(l.g.d - r.g.d)});
  return std::max({m, std::abs(l.w[0] - r.w[0]), std::abs(l.w[1] - r.w[1])});
}

Iwasawa iwasawa(const SAff& a) {
  const SL2& g = a.g;
  double n2 = g.c * g.c + g.d * g.d;
  Iwasawa r;
  r.y = 1.0 / n2;
  r.x = (g.a * g.c + g.b * g.d) / n2;
  r.theta = std::atan2(-g.c, g.d);
  double c = std::cos(r.theta), s = std::sin(r.theta);
  // undo the rotation: t = w k^T
  double t1 = a.w[0] * c + a.w[1] * s;
  double t2 = -a.w[0] * s + a.w[1] * c;
  double sy = std::sqrt(r.y);
  r.w1 = t1 / sy;
  r.w2 = t2 * sy;
  return r;
}

SAff from_iwasawa(const Iwasawa& c) {
  double sy = std::sqrt(c.y);
  SL2 na{sy, c.x / sy, 0.0, 1.0 / sy};
  SL2 k = rot(c.theta);
  SAff out;
  out.g = na * k;
  out.w = row_times({c.w1 * sy, c.w2 / sy}, k);
  return out;
}

JacobiPoint JacobiPoint::from_pq(double x, double y, double p, double q) { return {x, y, q + p * x, p * y}; }

JacobiPoint JacobiPoint::from_complex(cplx tau, cplx z) { return {tau.real(), tau.imag(), z.real(), z.imag()}; }

JacobiPoint jacobi_of(const Iwasawa& c) { return {c.x, c.y, c.w2, c.w1 * c.y}; }

SAff section(const JacobiPoint& pt) {
  double sy = std::sqrt(pt.y);
  return {{sy, pt.x / sy, 0.0, 1.0 / sy}, {pt.v / sy, pt.u / sy}};
}

cplx j_factor(const SL2& g, cplx tau) { return g.c * tau + g.d; }

JacobiPoint act(const SAff& a, const JacobiPoint& pt) {
  cplx tau = pt.tau(), z = pt.z();
  cplx j = j_factor(a.g, tau);
  cplx t2 = (a.g.a * tau + a.g.b) / j;
  cplx z2 = (z + a.w[0] * tau + a.w[1]) / j;
  return JacobiPoint::from_complex(t2, z2);
}

ModularFunction slash(const ModularFunction& phi, const SAff& a) {
  ModularFunction out;
  out.k = phi.k;
  out.eval = [phi, a](const JacobiPoint& pt) {
    return std::pow(j_factor(a.g, pt.tau()), -phi.k) * phi(act(a, pt));
  };
  return out;
}

GroupFunction lift(const ModularFunction& phi) {
  return [phi](const SAff& g) {
    JacobiPoint base{0.0, 1.0, 0.0, 0.0};
    return std::pow(j_factor(g.g, kI), -phi.k) * phi(act(g, base));
  };
}

ModularFunction unlift(const GroupFunction& f, int k) {
  ModularFunction out;
  out.k = k;
  out.eval = [f, k](const JacobiPoint& pt) { return std::pow(pt.y, -0.5 * k) * f(section(pt)); };
  return out;
}

namespace {

struct IntSL2 {
  long long a = 1, b = 0, c = 0, d = 1;
};

IntSL2 mul(const IntSL2& l, const IntSL2& r) {
  return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

cplx mobius(const IntSL2& g, cplx t) {
  return (static_cast<double>(g.a) * t + static_cast<double>(g.b)) / (static_cast<double>(g.c) * t + static_cast<double>(g.d));
}

}  // namespace

Reduction reduce_to_fundamental(const JacobiPoint& pt) {
  constexpr double tol = 1e-13;
  IntSL2 g;
  cplx tau = pt.tau();
  for (int it = 0; it < 10000; ++it) {
    double n = std::ceil(tau.real() - 0.5 - tol);
    if (n != 0.0) {
      IntSL2 t{1, -static_cast<long long>(n), 0, 1};
      g = mul(t, g);
      tau = mobius(g, pt.tau());
    }
    double r2 = std::norm(tau);
    if (r2 < 1.0 - tol) {
      IntSL2 s{0, -1, 1, 0};
      g = mul(s, g);
      tau = mobius(g, pt.tau());
      continue;
    }
    if (std::abs(r2 - 1.0) <= tol && tau.real() > tol && tau.real() < 0.5 - tol) {
      IntSL2 s{0, -1, 1, 0};
      g = mul(s, g);
      tau = mobius(g, pt.tau());
    }
    break;
  }
  SAff gs{{static_cast<double>(g.a), static_cast<double>(g.b), static_cast<double>(g.c), static_cast<double>(g.d)}, {0, 0}};
  JacobiPoint mid = act(gs, pt);
  double l1 = -std::floor(mid.p()), l2 = -std::floor(mid.q());
  // (I, l) * (g, 0) = (g, l g)
  SAff gamma = compose(SAff{SL2{}, {l1, l2}}, gs);
  JacobiPoint rep = act(gamma, pt);
  // clean up rounding at the torus seams
  double p = rep.p(), q = rep.q();
  if (p >= 1.0) p -= 1.0;
  if (q >= 1.0) q -= 1.0;
  if (p < 0.0) p = 0.0;
  if (q < 0.0) q = 0.0;
  rep = JacobiPoint::from_pq(rep.x, rep.y, p, q);
  return {gamma, rep};
}

bool in_fundamental_domain(const JacobiPoint& pt, double tol) {
  if (pt.x <= -0.5 - tol || pt.x > 0.5 + tol) return false;
  if (std::norm(pt.tau()) < 1.0 - tol) return false;
  double p = pt.p(), q = pt.q();
  return p >= -tol && p < 1.0 + tol && q >= -tol && q < 1.0 + tol;
}

namespace {
inline double u01(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }
}  // namespace

MasurVeechSampler::MasurVeechSampler(std::uint64_t seed, double y_max) : rng_(seed), y_max_(y_max) {}

MVSample MasurVeechSampler::next() {
  const double y0 = std::sqrt(3.0) / 2.0;
  for (;;) {
    double x = u01(rng_) - 0.5;
    double u = u01(rng_);
    double y = y_max_ > 0 ? 1.0 / (1.0 / y0 - u * (1.0 / y0 - 1.0 / y_max_)) : y0 / u;
    if (x * x + y * y < 1.0) continue;
    double p = u01(rng_), q = u01(rng_);
    double th = kTwoPi * u01(rng_);
    return {JacobiPoint::from_pq(x, y, p, q), th};
  }
}

double MasurVeechSampler::tail_mass() const { return y_max_ > 0 ? (1.0 / y_max_) / kModularVolume : 0.0; }

std::vector<MVSample> sample_masur_veech(std::uint64_t seed, std::size_t n, double y_max) {
  MasurVeechSampler s(seed, y_max);
  std::vector<MVSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(s.next());
  return out;
}

SAff group_element(const MVSample& s) {
  return from_iwasawa({s.pt.x, s.pt.y, s.pt.p(), s.pt.u, s.theta});
}

CEstimate batch_mean(const std::vector<cplx>& values, std::size_t batches) {
  std::size_t n = values.size();
  if (n == 0) return {};
  batches = std::clamp<std::size_t>(batches, 2, n);
  std::size_t per = n / batches;
  std::vector<cplx> means(batches);
  cplx total = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    cplx s = 0;
    std::size_t lo = b * per, hi = (b + 1 == batches) ? n : lo + per;
    for (std::size_t i = lo; i < hi; ++i) s += values[i];
    total += s;
    means[b] = s / static_cast<double>(hi - lo);
  }
  cplx mean = total / static_cast<double>(n);
  double var = 0;
  for (auto& m : means) var += std::norm(m - mean);
  var /= static_cast<double>(batches - 1);
  return {mean, std::sqrt(var / static_cast<double>(batches))};
}

CEstimate inner_product(const ModularFunction& phi1, const ModularFunction& phi2, const MCSpec& mc) {
  if (phi1.k != phi2.k) throw std::invalid_argument("inner_product: weight mismatch");
  auto samples = sample_masur_veech(mc.seed, mc.samples, mc.y_max);
  std::vector<cplx> vals(samples.size());
  int k = phi1.k;
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto& pt = samples[i].pt;
    vals[i] = phi1(pt) * std::conj(phi2(pt)) * std::pow(pt.y, k);
  });
  CEstimate est = batch_mean(vals, mc.batches);
  est.value *= kModularVolume;
  est.stderr_ *= kModularVolume;
  return est;
}

}  // namespace strata
