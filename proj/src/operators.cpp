#include "strata/operators.hpp"

#include <algorithm>

#include "strata/enveloping.hpp"
#include "strata/parallel.hpp"
#include "strata/special_fn.hpp"

namespace strata {

namespace {

cplx d1(const std::function<cplx(double)>& g, double h) {
  return (-g(2 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2 * h)) / (12.0 * h);
}
cplx d2(const std::function<cplx(double)>& g, double h) {
  return (-g(2 * h) + 16.0 * g(h) - 30.0 * g(0) + 16.0 * g(-h) - g(-2 * h)) / (12.0 * h * h);
}

template <class F>
cplx richardson(F val, double h, int levels) {
  cplx a = val(h);
  if (levels <= 0) return a;
  cplx b = val(h / 2);
  return (16.0 * b - a) / 15.0;
}

Coord4 coords(const JacobiPoint& pt) { return {pt.x, pt.y, pt.u, pt.v}; }
JacobiPoint point(const Coord4& c) { return {c[0], c[1], c[2], c[3]}; }

Field4 field_xyuv(const ModularFunction& phi) {
  return [phi](const Coord4& c) { return phi(point(c)); };
}
// G(x, y, p, q) = phi(x + iy, p tau + q)
Field4 field_xypq(const ModularFunction& phi) {
  return [phi](const Coord4& c) { return phi(JacobiPoint::from_pq(c[0], c[1], c[2], c[3])); };
}

Coord4 steps_for(double y, double h, bool scale_y) {
  double hy = scale_y ? h * y : h;
  return {h, hy, h, hy};
}

struct Partials {
  const Field4& f;
  Coord4 p, st;
  cplx operator()(int a0, int a1, int a2, int a3) const { return partial(f, p, {a0, a1, a2, a3}, st); }
};

}  // namespace

cplx partial(const Field4& f, const Coord4& p, const std::array<int, 4>& alpha, const Coord4& steps) {
  int i = 0;
  while (i < 4 && alpha[i] == 0) ++i;
  if (i == 4) return f(p);
  std::array<int, 4> rest = alpha;
  int order = std::min(alpha[i], 2);
  rest[i] -= order;
  auto g = [&](double t) {
    Coord4 q = p;
    q[i] += t;
    return partial(f, q, rest, steps);
  };
  return order == 1 ? d1(g, steps[i]) : d2(g, steps[i]);
}

cplx derivative(const std::function<cplx(double)>& f, double x, int order, double h, int levels) {
  if (order != 1 && order != 2) throw std::invalid_argument("derivative: order 1 or 2");
  auto g = [&](double t) { return f(x + t); };
  return richardson([&](double hh) { return order == 1 ? d1(g, hh) : d2(g, hh); }, h, levels);
}

int maass_weight_shift(Maass which) {
  switch (which) {
    case Maass::L: return -2;
    case Maass::R: return 2;
    case Maass::LH: return -1;
    case Maass::RH: return 1;
  }
  return 0;
}

cplx apply_maass(Maass which, const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s) {
  if (!(s.h > 1e-9)) throw std::invalid_argument("apply_maass: step underflow");
  Field4 f = field_xyuv(phi);
  auto val = [&](double h) {
    Partials d{f, coords(pt), steps_for(pt.y, h, s.scale_y)};
    cplx dtaubar = 0.5 * (d(1, 0, 0, 0) + kI * d(0, 1, 0, 0));
    cplx dtau = 0.5 * (d(1, 0, 0, 0) - kI * d(0, 1, 0, 0));
    cplx dzbar = 0.5 * (d(0, 0, 1, 0) + kI * d(0, 0, 0, 1));
    cplx dz = 0.5 * (d(0, 0, 1, 0) - kI * d(0, 0, 0, 1));
    double r = pt.v / pt.y;
    switch (which) {
      case Maass::L: return -2.0 * kI * pt.y * pt.y * (dtaubar + r * dzbar);
      case Maass::R: return 2.0 * kI * (dtau + r * dz) + static_cast<double>(phi.k) / pt.y * phi(pt);
      case Maass::LH: return -kI * pt.y * dzbar;
      case Maass::RH: return kI * dz;
    }
    return cplx{};
  };
  return richardson(val, s.h, s.richardson);
}

ModularFunction maass(Maass which, const ModularFunction& phi, const StencilSpec& s) {
  return {[which, phi, s](const JacobiPoint& pt) { return apply_maass(which, phi, pt, s); },
          phi.k + maass_weight_shift(which)};
}

cplx apply_fol(const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s) {
  if (!(s.h > 1e-9)) throw std::invalid_argument("apply_fol: step underflow");
  Field4 f = field_xyuv(phi);
  double y = pt.y, v = pt.v, k = phi.k;
  auto val = [&](double h) {
    Partials d{f, coords(pt), steps_for(y, h, s.scale_y)};
    return y * y * (d(2, 0, 0, 0) + d(0, 2, 0, 0)) + 2.0 * y * v * (d(1, 0, 1, 0) + d(0, 1, 0, 1)) +
           v * v * (d(0, 0, 2, 0) + d(0, 0, 0, 2)) - kI * k * y * (d(1, 0, 0, 0) + kI * d(0, 1, 0, 0)) -
           kI * k * v * (d(0, 0, 1, 0) + kI * d(0, 0, 0, 1));
  };
  return richardson(val, s.h, s.richardson);
}

cplx apply_fol_pq(const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s) {
  if (!(s.h > 1e-9)) throw std::invalid_argument("apply_fol_pq: step underflow");
  Field4 f = field_xypq(phi);
  double y = pt.y, k = phi.k;
  Coord4 c{pt.x, pt.y, pt.p(), pt.q()};
  auto val = [&](double h) {
    Partials d{f, c, steps_for(y, h, s.scale_y)};
    return y * y * (d(2, 0, 0, 0) + d(0, 2, 0, 0)) - kI * k * y * (d(1, 0, 0, 0) + kI * d(0, 1, 0, 0));
  };
  return richardson(val, s.h, s.richardson);
}

cplx apply_ver(const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s) {
  if (!(s.h > 1e-9)) throw std::invalid_argument("apply_ver: step underflow");
  Field4 f = field_xyuv(phi);
  auto val = [&](double h) {
    Partials d{f, coords(pt), steps_for(pt.y, h, s.scale_y)};
    return 0.25 * pt.y * (d(0, 0, 2, 0) + d(0, 0, 0, 2));
  };
  return richardson(val, s.h, s.richardson);
}

cplx apply_ver_pq(const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s) {
  if (!(s.h > 1e-9)) throw std::invalid_argument("apply_ver_pq: step underflow");
  Field4 f = field_xypq(phi);
  double x = pt.x, y = pt.y;
  Coord4 c{pt.x, pt.y, pt.p(), pt.q()};
  auto val = [&](double h) {
    Partials d{f, c, {h, s.scale_y ? h * y : h, h, h}};
    cplx qq = d(0, 0, 0, 2);
    cplx dp2 = d(0, 0, 2, 0) - 2.0 * x * d(0, 0, 1, 1) + x * x * qq;
    return 0.25 * y * (qq + dp2 / (y * y));
  };
  return richardson(val, s.h, s.richardson);
}

cplx apply_tot(const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s) {
  if (!(s.h > 1e-9)) throw std::invalid_argument("apply_tot: step underflow");
  Field4 f = field_xyuv(phi);
  double y = pt.y, v = pt.v, k = phi.k;
  auto val = [&](double h) {
    Partials d{f, coords(pt), steps_for(y, h, s.scale_y)};
    return 0.5 * k * y * (d(0, 0, 2, 0) + kI * d(0, 0, 1, 1)) +
           0.5 * kI * y * y * (d(1, 0, 2, 0) - d(1, 0, 0, 2)) + kI * y * y * d(0, 1, 1, 1) +
           0.5 * kI * y * v * (d(0, 0, 3, 0) + d(0, 0, 1, 2));
  };
  return richardson(val, s.h, s.richardson);
}

cplx apply_compound(const ModularFunction& phi, double eps, const JacobiPoint& pt, const StencilSpec& s) {
  return apply_fol(phi, pt, s) + eps * apply_ver(phi, pt, s);
}

ModularFunction fol(const ModularFunction& phi, const StencilSpec& s) {
  return {[phi, s](const JacobiPoint& pt) { return apply_fol(phi, pt, s); }, phi.k};
}
ModularFunction tot(const ModularFunction& phi, const StencilSpec& s) {
  return {[phi, s](const JacobiPoint& pt) { return apply_tot(phi, pt, s); }, phi.k};
}
ModularFunction compound(const ModularFunction& phi, double eps, const StencilSpec& s) {
  return {[phi, eps, s](const JacobiPoint& pt) { return apply_compound(phi, eps, pt, s); }, phi.k};
}

cplx fol_via_maass(const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s) {
  return apply_maass(Maass::R, maass(Maass::L, phi, s), pt, s);
}

cplx tot_via_maass(const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s) {
  double k = phi.k;
  ModularFunction lh = maass(Maass::LH, phi, s);
  ModularFunction rh = maass(Maass::RH, phi, s);
  cplx t1 = k * apply_maass(Maass::RH, lh, pt, s);
  cplx t2 = apply_maass(Maass::R, maass(Maass::LH, lh, s), pt, s);
  cplx t3 = apply_maass(Maass::L, maass(Maass::RH, rh, s), pt, s);
  return t1 - t2 + t3;
}

double twist_constant(int k) { return 0.5 * k * (0.5 * k - 1.0); }

std::vector<cplx> mode_reduce_fol(const std::vector<double>& y, const std::vector<cplx>& beta, int k, int n, int) {
  std::size_t N = y.size();
  if (N < 5 || beta.size() != N) throw std::invalid_argument("mode_reduce_fol: need >= 5 matching samples");
  double ds = std::log(y[1] / y[0]);
  for (std::size_t i = 1; i < N; ++i)
    if (std::abs(std::log(y[i] / y[i - 1]) - ds) > 1e-9 * std::abs(ds))
      throw std::invalid_argument("mode_reduce_fol: grid must be log-spaced");
  // y^2 beta'' = beta_ss - beta_s
  auto b = [&](long i) { return beta[static_cast<std::size_t>(i)]; };
  std::vector<cplx> out(N);
  for (std::size_t ii = 0; ii < N; ++ii) {
    long i = static_cast<long>(ii);
    cplx bs, bss;
    if (ii >= 2 && ii + 2 < N) {
      bs = (-b(i + 2) + 8.0 * b(i + 1) - 8.0 * b(i - 1) + b(i - 2)) / (12.0 * ds);
      bss = (-b(i + 2) + 16.0 * b(i + 1) - 30.0 * b(i) + 16.0 * b(i - 1) - b(i - 2)) / (12.0 * ds * ds);
    } else {
      // one-sided 4th-order formulas (second derivative taken from six points)
      int sgn = ii < 2 ? 1 : -1;
      long o = ii < 2 ? 0 : static_cast<long>(N) - 1;
      long j = sgn * (i - o);  // offset from the end
      auto f = [&](long t) { return b(o + sgn * t); };
      static const double c1[2][5] = {{-25, 48, -36, 16, -3}, {-3, -10, 18, -6, 1}};
      static const double c2[2][6] = {{45, -154, 214, -156, 61, -10}, {10, -15, -4, 14, -6, 1}};
      bs = 0;
      for (int t = 0; t < 5; ++t) bs += c1[j][t] * f(t);
      bs *= sgn / (12.0 * ds);
      bss = 0;
      for (int t = 0; t < 6; ++t) bss += c2[j][t] * f(t);
      bss /= 12.0 * ds * ds;
    }
    double yy = y[ii];
    out[ii] = -(bss - bs) + (4.0 * kPi * kPi * n * n * yy * yy - kTwoPi * k * n * yy + twist_constant(k)) * beta[ii];
  }
  return out;
}

cplx mode_reduce_fol(const std::function<cplx(double)>& beta, int k, int n, double y, double h) {
  cplx b2 = derivative(beta, y, 2, h * y);
  return -y * y * b2 + (4.0 * kPi * kPi * n * n * y * y - kTwoPi * k * n * y + twist_constant(k)) * beta(y);
}

cplx mode_untwisted(const std::function<cplx(double)>& F, int k, int n, double y, double h) {
  cplx f1 = derivative(F, y, 1, h * y), f2 = derivative(F, y, 2, h * y);
  return -y * y * f2 - k * y * f1 + (4.0 * kPi * kPi * n * n * y * y - kTwoPi * k * n * y) * F(y);
}

double mode_vertical(int m, double y) { return kPi * kPi * m * m / y; }

double eigen_residual(int k, int n, cplx lambda, const std::function<cplx(double)>& F, const std::vector<double>& grid) {
  double num = 0, den = 0;
  for (double y : grid) {
    cplx f = F(y);
    num += std::norm(mode_untwisted(F, k, n, y) - lambda * f);
    den += std::norm(f);
  }
  return std::sqrt(num / den);
}

LambdaFit fit_lambda(int k, int n, const std::function<cplx(double)>& F, const std::vector<double>& grid) {
  cplx num = 0;
  double den = 0;
  for (double y : grid) {
    cplx f = F(y);
    num += std::conj(f) * mode_untwisted(F, k, n, y);
    den += std::norm(f);
  }
  LambdaFit out;
  out.lambda = num / den;
  out.residual = eigen_residual(k, n, out.lambda, F, grid);
  return out;
}

CommutationResult sv_commutation_check(const KTypeFunction& f, int M, const std::vector<JacobiPoint>& pts,
                                       const StencilSpec& s) {
  DiffOpPoly D = euler_fol_operator();
  PlaneFunction pf = f.plane();
  PlaneFunction Df = [&](const Vec2& w) { return D.apply_numeric(pf, w, 1e-3); };
  ModularFunction phi = sv_modular(f, M);
  CommutationResult out;
  std::vector<cplx> lhs(pts.size()), rhs(pts.size()), tt(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const JacobiPoint& pt = pts[i];
    lhs[i] = std::pow(pt.y, -0.5 * f.k) * sv_rel_M_raw(Df, f.support(), pt, M);
    rhs[i] = 4.0 * (apply_fol(phi, pt, s) + twist_constant(f.k) * phi(pt));
    tt[i] = apply_tot(phi, pt, s);
  });
  for (std::size_t i = 0; i < pts.size(); ++i) out.scale = std::max(out.scale, std::abs(lhs[i]));
  out.scale = std::max(out.scale, 1e-300);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out.fol_residual = std::max(out.fol_residual, std::abs(lhs[i] - rhs[i]) / out.scale);
    out.tot_residual = std::max(out.tot_residual, std::abs(tt[i]) / out.scale);
  }
  return out;
}

QuadFormResult quadratic_form_check(const ModularFunction& phi, const ModularFunction& psi, double eps,
                                    const QuadFormSpec& qs, const StencilSpec& s) {
  if (phi.k != psi.k) throw std::invalid_argument("quadratic_form_check: weights differ");
  double k = phi.k;
  std::vector<double> yn, yw;
  const int panels = 8;
  for (int p = 0; p < panels; ++p) {
    std::vector<double> t, w;
    double a = qs.y_lo + (qs.y_hi - qs.y_lo) * p / panels, b = qs.y_lo + (qs.y_hi - qs.y_lo) * (p + 1) / panels;
    gauss_legendre(qs.y_nodes / panels, a, b, t, w);
    yn.insert(yn.end(), t.begin(), t.end());
    yw.insert(yw.end(), w.begin(), w.end());
  }
  Field4 F1 = field_xypq(phi), F2 = field_xypq(psi);
  Field4 G1 = field_xyuv(phi), G2 = field_xyuv(psi);
  std::size_t total = yn.size() * qs.x_nodes * qs.p_nodes * qs.q_nodes;
  std::vector<std::array<cplx, 3>> acc(total);
  parallel_for(total, [&](std::size_t idx) {
    std::size_t r = idx;
    int iq = static_cast<int>(r % qs.q_nodes);
    r /= qs.q_nodes;
    int ip = static_cast<int>(r % qs.p_nodes);
    r /= qs.p_nodes;
    int ix = static_cast<int>(r % qs.x_nodes);
    std::size_t iy = r / qs.x_nodes;
    double x = (ix + 0.5) / qs.x_nodes, p = (ip + 0.5) / qs.p_nodes, q = (iq + 0.5) / qs.q_nodes, y = yn[iy];
    JacobiPoint pt = JacobiPoint::from_pq(x, y, p, q);
    double w = yw[iy] / (qs.x_nodes * qs.p_nodes * qs.q_nodes);
    Coord4 cpq{x, y, p, q}, cuv{pt.x, pt.y, pt.u, pt.v};
    auto grad = [&](const Field4& Fpq, const Field4& Guv) {
      std::array<cplx, 4> g;
      auto d = [&](const Field4& F, const Coord4& c, std::array<int, 4> a) {
        return richardson([&](double h) { return partial(F, c, a, steps_for(y, h, s.scale_y)); }, s.h, s.richardson);
      };
      g[0] = d(Fpq, cpq, {1, 0, 0, 0});
      g[1] = d(Fpq, cpq, {0, 1, 0, 0});
      g[2] = d(Guv, cuv, {0, 0, 1, 0});
      g[3] = d(Guv, cuv, {0, 0, 0, 1});
      return g;
    };
    auto g1 = grad(F1, G1), g2 = grad(F2, G2);
    cplx v1 = phi(pt), v2 = psi(pt);
    auto form = [&](const std::array<cplx, 4>& a, const std::array<cplx, 4>& b, cplx bv) {
      return std::pow(y, k) * (a[0] * std::conj(b[0]) + a[1] * std::conj(b[1])) +
             kI * k * std::pow(y, k - 1) * a[0] * std::conj(bv) +
             0.25 * eps * std::pow(y, k - 1) * (a[2] * std::conj(b[2]) + a[3] * std::conj(b[3]));
    };
    cplx lhs = -apply_compound(phi, eps, pt, s) * std::conj(v2) * std::pow(y, k - 2);
    acc[idx] = {w * lhs, w * form(g1, g2, v2), w * form(g2, g1, v1)};
  });
  QuadFormResult out;
  for (const auto& a : acc) {
    out.lhs += a[0];
    out.q_form += a[1];
    out.q_swapped += a[2];
  }
  double scale = std::max(std::abs(out.q_form), 1e-300);
  out.residual = std::abs(out.lhs - out.q_form) / scale;
  out.sym_residual = std::abs(out.q_form - std::conj(out.q_swapped)) / scale;
  return out;
}

}  // namespace strata
