#include "strata/siegel_veech.hpp"

#include <numeric>

#include "strata/parallel.hpp"

namespace strata {

cplx KTypeFunction::operator()(const Vec2& w) const {
  double r = std::hypot(w[0], w[1]);
  if (r > f0.support) return 0.0;
  cplx v = f0.eval(r);
  if (k == 0 || v == cplx{}) return v;
  return v * std::polar(1.0, k * std::atan2(w[1], w[0]));
}

PlaneFunction KTypeFunction::plane() const {
  return [f = *this](const Vec2& w) { return f(w); };
}

cplx KTypeFunction::integral() const {
  if (k != 0) return 0.0;
  return kTwoPi * integrate([this](double r) { return f0.eval(r) * r; }, 0.0, f0.support, 1e-14);
}

bool KTypeFunction::mean_zero(double tol) const { return std::abs(integral()) <= tol; }

double KTypeFunction::norm2() const {
  return kTwoPi * integrate([this](double r) { return cplx(std::norm(f0.eval(r)) * r); }, 0.0, f0.support, 1e-14).real();
}

RadialProfile bump_profile(int k, double R, int nu) {
  RadialProfile p;
  int ak = std::abs(k);
  p.eval = [ak, R, nu](double r) {
    double t = 1.0 - r * r / (R * R);
    return t <= 0 ? cplx{} : cplx(std::pow(r, ak) * std::pow(t, nu));
  };
  p.support = R;
  return p;
}

RadialProfile mean_zero_bump_profile(double R, int nu) {
  RadialProfile p;
  double c = (nu + 2.0) / (R * R);
  p.eval = [c, R, nu](double r) {
    double t = 1.0 - r * r / (R * R);
    return t <= 0 ? cplx{} : cplx((1.0 - c * r * r) * std::pow(t, nu));
  };
  p.support = R;
  return p;
}

MarkedTorus MarkedTorus::of(const JacobiPoint& pt) {
  double s = 1.0 / std::sqrt(pt.y);
  return {pt.tau() * s, cplx(s, 0.0), pt.z() * s};
}

namespace {

// visits p0 + (a tau + b)/(M sqrt y) of modulus <= R for all integers a, b
template <class F>
void for_each_lattice_point(cplx p0, double x, double y, int M, double R, F body) {
  double sy = std::sqrt(y);
  double step_a = sy / M;  // imaginary step per a
  long a0 = static_cast<long>(std::ceil((-R - p0.imag()) / step_a));
  long a1 = static_cast<long>(std::floor((R - p0.imag()) / step_a));
  double inv = 1.0 / (M * sy);
  for (long a = a0; a <= a1; ++a) {
    double im = p0.imag() + a * step_a;
    double h2 = R * R - im * im;
    if (h2 < 0) continue;
    double h = std::sqrt(h2);
    double re0 = p0.real() + a * x * inv;
    long b0 = static_cast<long>(std::ceil((-h - re0) / inv));
    long b1 = static_cast<long>(std::floor((h - re0) / inv));
    for (long b = b0; b <= b1; ++b) body(cplx(re0 + b * inv, im));
  }
}

}  // namespace

std::vector<cplx> config_rel_M(const MarkedTorus& t, int M, double R) {
  if (M < 1) throw std::invalid_argument("config_rel_M: M >= 1");
  // recover x, y from the basis
  double sy = 1.0 / t.e2.real();
  double y = sy * sy, x = t.e1.real() * sy;
  std::vector<cplx> out;
  for_each_lattice_point(t.z, x, y, M, R, [&](cplx p) {
    if (std::abs(p) <= R) out.push_back(p);
  });
  return out;
}

cplx sv_group(const PlaneFunction& f, double R, const SAff& g, int M) {
  Iwasawa c = iwasawa(SAff{g.g, {0, 0}});
  SL2 k = rot(c.theta), ki = inverse(k);
  Vec2 w0 = row_times(g.w, ki);
  cplx acc = 0;
  for_each_lattice_point(plane_to_complex(w0), c.x, c.y, M, R, [&](cplx p) {
    Vec2 q = row_times(complex_to_plane(p), k);
    acc += f(q);
  });
  return acc;
}

cplx sv_rel_M_raw(const PlaneFunction& f, double R, const JacobiPoint& pt, int M) {
  cplx acc = 0;
  for_each_lattice_point(pt.z() / std::sqrt(pt.y), pt.x, pt.y, M, R, [&](cplx p) { acc += f(complex_to_plane(p)); });
  return acc;
}

cplx sv_rel_M(const KTypeFunction& f, const JacobiPoint& pt, int M) {
  cplx raw = sv_rel_M_raw(f.plane(), f.support(), pt, M);
  return f.k == 0 ? raw : raw * std::pow(pt.y, -0.5 * f.k);
}

ModularFunction sv_modular(const KTypeFunction& f, int M) {
  return {[f, M](const JacobiPoint& pt) { return sv_rel_M(f, pt, M); }, f.k};
}

cplx sv_abs(const PlaneFunction& f, double R, const JacobiPoint& pt) {
  cplx tau = pt.tau();
  double sy = std::sqrt(pt.y), rho = R * sy;
  long C = static_cast<long>(std::floor(rho / pt.y));
  cplx acc = 0;
  for (long c = -C; c <= C; ++c) {
    double r2 = rho * rho - static_cast<double>(c) * c * pt.y * pt.y;
    if (r2 < 0) continue;
    double r = std::sqrt(r2);
    long d0 = static_cast<long>(std::ceil(-c * pt.x - r)), d1 = static_cast<long>(std::floor(-c * pt.x + r));
    for (long d = d0; d <= d1; ++d) {
      if (std::gcd(c, d) != 1) continue;
      cplx lam = (static_cast<double>(c) * tau + static_cast<double>(d)) / sy;
      acc += f(complex_to_plane(lam));
    }
  }
  return acc;
}

MomentEstimate sv_mean_mc(const KTypeFunction& f, int M, const MCSpec& mc) {
  MasurVeechSampler sampler(mc.seed, 0.0);
  std::vector<MVSample> s(mc.samples);
  for (auto& v : s) v = sampler.next();
  std::vector<cplx> vals(s.size());
  PlaneFunction pf = f.plane();
  parallel_for(s.size(), [&](std::size_t i) {
    vals[i] = std::polar(1.0, f.k * s[i].theta) * sv_rel_M_raw(pf, f.support(), s[i].pt, M);
  });
  CEstimate est = batch_mean(vals, mc.batches);
  MomentEstimate out;
  out.value = out.truncated = est.value;
  out.stderr_ = est.stderr_;
  return out;
}

cplx sv_cusp_tail(const KTypeFunction& f1, const KTypeFunction& f2, int M, double y_max) {
  if (f1.k != f2.k) return 0.0;
  double R = std::max(f1.support(), f2.support());
  std::vector<double> t, w;
  const int panels = 16, per = 24;
  std::vector<double> nodes, weights;
  for (int p = 0; p < panels; ++p) {
    gauss_legendre(per, -R + 2 * R * p / panels, -R + 2 * R * (p + 1) / panels, t, w);
    nodes.insert(nodes.end(), t.begin(), t.end());
    weights.insert(weights.end(), w.begin(), w.end());
  }
  // F(h) = int f(plane(s + ih)) ds = int f((h, s)) ds
  auto line = [&](const KTypeFunction& f, double h) {
    cplx acc = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(Vec2{h, nodes[i]});
    return acc;
  };
  cplx L = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) L += weights[i] * line(f1, nodes[i]) * std::conj(line(f2, nodes[i]));
  return 3.0 / kPi * std::pow(M, 3) * L * 2.0 / std::sqrt(y_max);
}

MomentEstimate sv_cross_moment_mc(const KTypeFunction& f1, const KTypeFunction& f2, int M, const MCSpec& mc) {
  double R = std::max(f1.support(), f2.support());
  double Y = mc.y_max > 0 ? mc.y_max : std::max(64.0, 8.0 * R * R * M * M);
  if (Y <= 4.0 * R * R * M * M) throw std::invalid_argument("sv_cross_moment_mc: y_max must exceed 4 R^2 M^2");
  MasurVeechSampler sampler(mc.seed, Y);
  std::vector<MVSample> s(mc.samples);
  for (auto& v : s) v = sampler.next();
  std::vector<cplx> vals(s.size());
  PlaneFunction p1 = f1.plane(), p2 = f2.plane();
  parallel_for(s.size(), [&](std::size_t i) {
    cplx a = sv_rel_M_raw(p1, f1.support(), s[i].pt, M);
    cplx b = sv_rel_M_raw(p2, f2.support(), s[i].pt, M);
    vals[i] = std::polar(1.0, (f1.k - f2.k) * s[i].theta) * a * std::conj(b);
  });
  CEstimate est = batch_mean(vals, mc.batches);
  double keep = 1.0 - sampler.tail_mass();
  MomentEstimate out;
  out.y_max = Y;
  out.truncated = keep * est.value;
  out.tail = sv_cusp_tail(f1, f2, M, Y);
  out.value = out.truncated + out.tail;
  out.stderr_ = keep * est.stderr_;
  return out;
}

MomentEstimate sv_second_moment_mc(const KTypeFunction& f, int M, const MCSpec& mc) {
  return sv_cross_moment_mc(f, f, M, mc);
}

CEstimate sv_adjoint(const GroupFunction& h, const Vec2& xi, const MCSpec& mc) {
  auto s = sample_masur_veech(mc.seed, mc.samples, mc.y_max);
  std::vector<cplx> vals(s.size());
  parallel_for(s.size(), [&](std::size_t i) {
    SAff g = group_element(s[i]);
    g.w = {xi[0] - g.g.a, xi[1] - g.g.b};
    vals[i] = h(g);
  });
  return batch_mean(vals, mc.batches);
}

CEstimate sv_adjoint_of_sv(const KTypeFunction& f2, const Vec2& xi, const MCSpec& mc) {
  PlaneFunction p = f2.plane();
  double R = f2.support();
  return sv_adjoint([&](const SAff& g) { return sv_group(p, R, g, 1); }, xi, mc);
}

AdjointCheck adjoint_duality_check(const KTypeFunction& f, const KTypeFunction& f2, const MCSpec& mc) {
  AdjointCheck out;
  MomentEstimate lhs = sv_cross_moment_mc(f, f2, 1, mc);
  out.lhs = {lhs.value, lhs.stderr_};
  double Y = lhs.y_max;
  // <f, SV* SV f2> = int f(xi) conj(E_Lambda sum f2(xi + lambda)) dxi, joint sampling of xi and the lattice
  double R = f.support(), area = 4.0 * R * R;
  MasurVeechSampler sampler(mc.seed ^ 0x9e3779b97f4a7c15ULL, Y);
  std::mt19937_64 rng(mc.seed + 17);
  std::uniform_real_distribution<double> uni(-R, R);
  std::vector<MVSample> s(mc.samples);
  std::vector<Vec2> xs(mc.samples);
  for (std::size_t i = 0; i < mc.samples; ++i) {
    s[i] = sampler.next();
    xs[i] = {uni(rng), uni(rng)};
  }
  std::vector<cplx> vals(s.size());
  PlaneFunction p2 = f2.plane();
  parallel_for(s.size(), [&](std::size_t i) {
    cplx fv = f(xs[i]);
    if (fv == cplx{}) return;
    SAff g = group_element(s[i]);
    g.w = {xs[i][0] - g.g.a, xs[i][1] - g.g.b};
    vals[i] = area * fv * std::conj(sv_group(p2, f2.support(), g, 1));
  });
  CEstimate est = batch_mean(vals, mc.batches);
  double keep = 1.0 - sampler.tail_mass();
  // lattices with y > Y contribute sqrt(y) times the same line correlation as on the stratum side
  out.rhs = {keep * est.value + sv_cusp_tail(f, f2, 1, Y), keep * est.stderr_};
  out.closed_form = integrate(
                        [&](double r) {
                          return f.k == f2.k ? kTwoPi * f.f0.eval(r) * std::conj(f2.f0.eval(r)) * r : cplx{};
                        },
                        0.0, std::min(f.support(), f2.support()), 1e-13) +
                    f.integral() * std::conj(f2.integral());
  double sig = std::hypot(out.lhs.stderr_, out.rhs.stderr_);
  out.z_score = std::abs(out.lhs.value - out.rhs.value) / std::max(sig, 1e-300);
  return out;
}

cplx sv_coefficient_predicted(const KTypeFunction& f, int M, int mt, double y) {
  if (mt % M != 0) return 0.0;
  double s = kTwoPi * std::abs(mt) / std::sqrt(y);
  cplx h = hankel_transform(f.k, f.f0, s, 1e-13);
  cplx phase = std::pow(cplx(0.0, -1.0), f.k);
  if (mt < 0 && (f.k % 2 != 0)) phase = -phase;
  return kTwoPi * phase * std::pow(y, -0.5 * f.k) * static_cast<double>(M * M) * h;
}

cplx sv_coefficient_literal(const KTypeFunction& f, int M, int mt, double y) {
  if (mt % M != 0 || mt == 0) return 0.0;
  int m = mt / M;
  auto H = [&](double s) { return hankel_transform(f.k, f.f0, s, 1e-13); };
  auto T = t_transform(M, H);
  return static_cast<double>(mt) * mt * T(y / (static_cast<double>(m) * m));
}

std::vector<CoeffCheckRow> sv_coeffs_check(const KTypeFunction& f, int M, int n_max, int m_max,
                                           const std::vector<double>& y_grid, bool literal, const QuadratureSpec& q) {
  ModularFunction phi = literal ? ModularFunction{[f, M](const JacobiPoint& pt) {
                                                     return sv_rel_M_raw(f.plane(), f.support(), pt, M);
                                                   },
                                                   f.k}
                                : sv_modular(f, M);
  std::vector<CoeffCheckRow> rows;
  for (double y : y_grid) {
    auto table = coeff_H0_table(phi, n_max, m_max, y, q);
    for (int n = -n_max; n <= n_max; ++n)
      for (int m = -m_max; m <= m_max; ++m) {
        CoeffCheckRow r{n, m, y, table[n + n_max][m + m_max], 0.0, 0.0};
        bool nonzero = (n == 0 && m % M == 0 && m != 0);
        if (nonzero) r.predicted = literal ? sv_coefficient_literal(f, M, m, y) : sv_coefficient_predicted(f, M, m, y);
        if (n == 0 && m == 0) r.predicted = literal ? r.measured : sv_coefficient_predicted(f, M, 0, y);
        double diff = std::abs(r.measured - r.predicted);
        r.error = nonzero ? diff / std::max(std::abs(r.predicted), 1e-300) : diff;
        rows.push_back(r);
      }
  }
  return rows;
}

CEstimate orthogonality_to_cusp(const KTypeFunction& f, int M, const ModularFunction& cusp, const MCSpec& mc) {
  return inner_product(sv_modular(f, M), cusp, mc);
}

}  // namespace strata
