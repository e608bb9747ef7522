#include "strata/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "strata/enveloping.hpp"
#include "strata/heisenberg_fourier.hpp"
#include "strata/operators.hpp"
#include "strata/parallel.hpp"
#include "strata/series.hpp"
#include "strata/siegel_veech.hpp"
#include "strata/special_fn.hpp"
#include "strata/spectral.hpp"

namespace strata {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// rounds to 12 significant digits so that reports do not depend on the last bits
double r12(double v) {
  if (!std::isfinite(v) || v == 0) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::stod(buf);
}

json cj(cplx z) { return json::array({r12(z.real()), r12(z.imag())}); }

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

QuadratureSpec quad(const RunConfig& c) {
  QuadratureSpec q;
  q.nx = c.quad_nx;
  q.nu = c.quad_nu;
  q.nv = c.quad_nv;
  return q;
}

MCSpec mc_spec(const RunConfig& c, const std::string& stream) {
  MCSpec mc;
  mc.samples = c.samples;
  mc.seed = derive_seed(c.seed, stream);
  return mc;
}

ModularFunction generic(int k) {
  return {[](const JacobiPoint& p) {
            return std::exp(cplx(0.3 * p.x - 0.2 * p.y, 0.7 * p.u + 0.1 * p.y)) * (1.0 + p.v * p.v + 0.5 * p.x * p.u) /
                   (1.0 + p.y);
          },
          k};
}

ModularFunction plane_mode(int n, int m, int k = 0) {
  return {[n, m](const JacobiPoint& p) { return e(n * p.x + m * p.v / p.y); }, k};
}

const Gen kGens[] = {Gen::Z, Gen::Xp, Gen::Xm, Gen::Yp, Gen::Ym};

SAff integral(double a, double b, double cc, double d, double m = 0, double n = 0) {
  SAff g;
  g.g = {a, b, cc, d};
  g.w = {m, n};
  return g;
}

}  // namespace

// ---------------------------------------------------------------- algebra

Report verify_algebra(const RunConfig& c) {
  Report r{"algebra", {}, {}};
  PBWElement Cp = casimir_saff(), C = casimir_sl2();
  r.add({"casimir_central", is_central(Cp), "C' = Z Yp Ym - Xp Ym^2 + Xm Yp^2 commutes with all generators", {}});
  r.add({"sl2_casimir_not_central", !is_central(C), "the SL2 Casimir does not commute with Yp, Ym", {}});
  r.add({"symmetrization", symmetrize(Cp) == GaussianRational(6) * Cp, "sigma(C') = 6 C'", {}});

  bool jac = true, hom = true;
  for (Gen a : kGens)
    for (Gen b : kGens) {
      DiffOpPoly ra = euclidean_rep(a), rb = euclidean_rep(b);
      hom = hom && euclidean_rep(bracket(a, b)) == ra * rb - rb * ra;
      for (Gen g3 : kGens) {
        PBWElement A = PBWElement::generator(a), B = PBWElement::generator(b), G = PBWElement::generator(g3);
        jac = jac && (bracket(bracket(A, B), G) + bracket(bracket(B, G), A) + bracket(bracket(G, A), B)).is_zero();
      }
    }
  r.add({"jacobi_identity", jac, "all 125 triples of basis elements", {}});
  r.add({"euclidean_rep_homomorphism", hom, "rep[a, b] = [rep a, rep b] for all basis pairs", {}});

  DiffOpPoly tot = euclidean_rep(GaussianRational(2) * casimir_saff());
  int killed = 0, total = 0;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b, ++total) killed += tot.apply_monomial(a, b).empty();
  r.add({"total_casimir_on_plane", killed == total, fmt("rep(2C') annihilates %d of %d monomials", killed, total),
         {{"killed", killed}, {"monomials", total}}});
  DiffOpPoly D = euler_fol_operator();
  DiffOpPoly fol = euclidean_rep(GaussianRational(8) * C);
  r.add({"foliated_casimir_on_plane", fol == D, "rep(8C) = D1^2 + D1 D2 + D2 D1 + D2^2 + 2 D1 + 2 D2",
         {{"operator", fol.str()}}});

  // reduction to the fundamental domain on sampled points
  auto samples = sample_masur_veech(derive_seed(c.seed, "algebra"), 200, 50.0);
  int inside = 0, consistent = 0;
  for (const auto& s : samples) {
    JacobiPoint far{s.pt.x + 3.0, s.pt.y, s.pt.u - 2.0, s.pt.v + 1.5 * s.pt.y};
    // move off the domain with an integral element before reducing
    SAff g = integral(2, 1, 1, 1, 1, -1);
    JacobiPoint moved = act(g, far);
    auto red = reduce_to_fundamental(moved);
    inside += in_fundamental_domain(red.rep, 1e-9);
    JacobiPoint back = act(red.gamma, moved);
    consistent += std::abs(back.x - red.rep.x) + std::abs(back.y - red.rep.y) + std::abs(back.u - red.rep.u) +
                      std::abs(back.v - red.rep.v) <
                  1e-8;
  }
  r.add({"fundamental_domain_reduction", inside == 200 && consistent == 200,
         fmt("%d/200 representatives inside, %d/200 consistent with the returned element", inside, consistent), {}});
  return r;
}

// ---------------------------------------------------------------- operators

Report verify_operators(const RunConfig& c) {
  Report r{"operators", {}, {}};
  JacobiPoint pt{0.13, 1.21, 0.37, 0.29};
  std::vector<std::pair<int, int>> pairs{{1, 1}, {2, 1}, {1, -3}};
  if (c.n != 0 && c.m != 0 && std::find(pairs.begin(), pairs.end(), std::pair{c.n, c.m}) == pairs.end())
    pairs.push_back({c.n, c.m});
  double worst = 0;
  json vals = json::array();
  for (auto [n, m] : pairs) {
    ModularFunction phi = plane_mode(n, m);
    cplx got = -apply_tot(phi, pt) / phi(pt);
    double expect = 4 * kPi * kPi * kPi * n * m * m;
    worst = std::max(worst, std::abs(got - expect) / std::abs(expect));
    vals.push_back({{"n", n}, {"m", m}, {"measured", r12(got.real())}, {"predicted", r12(expect)}});
  }
  r.add({"total_casimir_eigenvalue", worst < 1e-5, fmt("-Delta_tot e(nx + mv/y) = 4 pi^3 n m^2, max rel err %.1e", worst),
         {{"max_rel_error", r12(worst)}, {"values", vals}}});

  ModularFunction g = generic(c.k);
  cplx f = apply_fol(g, pt);
  double e1 = rel(f, apply_fol_pq(g, pt)), e2 = rel(f, fol_via_maass(g, pt));
  double e3 = rel(apply_tot(g, pt), tot_via_maass(g, pt)), e4 = rel(apply_ver(g, pt), apply_ver_pq(g, pt));
  r.add({"foliated_charts", e1 < 1e-7, fmt("(x,y,u,v) against (x,y,p,q): %.1e", e1), {}});
  r.add({"foliated_factorization", e2 < 1e-7, fmt("Delta_fol = R_{k-2} L_k: %.1e", e2), {}});
  r.add({"total_factorization", e3 < 1e-5, fmt("Delta_tot through Maass operators: %.1e", e3), {}});
  r.add({"vertical_charts", e4 < 1e-8, fmt("Delta_ver in both charts: %.1e", e4), {}});

  KTypeFunction kf{bump_profile(c.k, c.r_lattice, 8), c.k};
  std::vector<JacobiPoint> pts{{0.1, 0.9, 0.2, 0.35}, {-0.3, 1.4, 0.6, 0.1}};
  auto com = sv_commutation_check(kf, c.M, pts);
  r.add({"sv_commutation", com.fol_residual < 1e-6 && com.tot_residual < 1e-5,
         fmt("SV(D f) = 4 (Delta_fol + c_k) SV f: %.1e; Delta_tot SV f: %.1e", com.fol_residual, com.tot_residual),
         {{"fol_residual", r12(com.fol_residual)}, {"tot_residual", r12(com.tot_residual)}}});

  std::vector<double> grid;
  for (int i = 0; i < 24; ++i) grid.push_back(0.3 + 0.15 * i);
  double pw = 0;
  for (int k : {0, 2})
    for (double t : {0.5, 1.0, 2.0}) {
      auto P = [=](double y) { return std::exp(cplx(0.5 * (1 - k), t) * std::log(y)); };
      pw = std::max(pw, std::abs(fit_lambda(k, 0, P, grid).lambda - (t * t + 0.25)));
    }
  r.add({"eigen_fit_power", pw < 1e-6, fmt("n = 0 powers give t^2 + 1/4 within %.1e", pw), {}});
  auto ex = fit_lambda(c.k, 1, [](double y) { return cplx(std::exp(-kTwoPi * y)); }, grid);
  double stated = 0.5 * std::abs(c.k) * (1 - 0.5 * std::abs(c.k));
  r.add({"eigen_fit_exponential", ex.residual < 1e-6,
         fmt("e^{-2 pi y} fits lambda = %.3g (stated %.3g)", r12(ex.lambda.real()), stated),
         {{"lambda", cj(ex.lambda)}, {"stated", stated}, {"residual", r12(ex.residual)}}});
  double t = 1.0;
  auto W = [&](double y) { return std::pow(y, -0.5 * c.k) * whittaker_w({0.5 * c.k, cplx(0, t)}, 4 * kPi * y); };
  auto wf = fit_lambda(c.k, 1, W, grid);
  double wexp = t * t + 0.25 + twist_constant(c.k);
  r.add({"eigen_fit_whittaker", std::abs(wf.lambda - wexp) < 1e-5,
         fmt("W profile at t = 1 fits %.6g; t^2 + 1/4 + (k/2)(k/2 - 1) = %.6g", r12(wf.lambda.real()), wexp),
         {{"lambda", cj(wf.lambda)}, {"t2_plus_quarter", t * t + 0.25}}});

  auto win = [](double y) {
    if (y <= 0.3 || y >= 3.0) return 0.0;
    double s = (y - 0.3) / 2.7;
    return std::exp(-1.0 / (s * (1 - s)) + 4.0);
  };
  ModularFunction phi{[=](const JacobiPoint& p) { return win(p.y) * (e(p.x + p.p()) + 0.5 * e(-p.x)); }, c.k};
  ModularFunction psi{[=](const JacobiPoint& p) { return win(p.y) * p.y * (e(p.x + p.p()) + cplx(0, 0.3)); }, c.k};
  double eps = c.eps.empty() ? 1.0 : c.eps.front();
  auto qf = quadratic_form_check(phi, psi, eps);
  r.add({"quadratic_form", qf.residual < 1e-6 && qf.sym_residual < 1e-10,
         fmt("<-Delta phi, psi> against Q: %.1e; hermitian symmetry %.1e", qf.residual, qf.sym_residual),
         {{"lhs", cj(qf.lhs)}, {"q_form", cj(qf.q_form)}}});
  return r;
}

// ---------------------------------------------------------------- series

Report verify_series(const RunConfig& c) {
  Report r{"series", {}, {}};
  BetaProfile beta = beta_power_exp(2.0, kTwoPi);
  std::string why;
  bool cert = check_certificate(beta, c.k, &why);
  r.add({"certificate", cert, cert ? "y^2 e^{-2 pi y} satisfies both growth bounds" : why, {}});
  double rho = static_cast<double>(c.r_coset);
  int n = c.n, m = c.m == 0 ? 1 : c.m;
  ModularFunction E = eisenstein_function(c.k, m, beta, rho);
  ModularFunction P = poincare_function(c.k, n, m, beta, rho);
  QuadratureSpec q = quad(c);
  int nm = std::max(2, std::abs(n) + 1), mm = std::abs(m) + 1;
  double worst = 0;
  json rows = json::array();
  for (double y : {0.6, 1.0, 1.4}) {
    auto te = coeff_H0_table(E, nm, mm, y, q), tp = coeff_H0_table(P, nm, mm, y, q);
    cplx b = beta(y) / std::sqrt(2.0), sg = std::pow(-1.0, c.k);
    for (int a = -nm; a <= nm; ++a)
      for (int bb = -mm; bb <= mm; ++bb) {
        cplx ee = (a == 0 && bb == m) ? b : (a == 0 && bb == -m) ? sg * b : cplx{};
        cplx pe = (a == n && bb == m) ? b : (a == n && bb == -m) ? sg * b : cplx{};
        worst = std::max({worst, std::abs(te[a + nm][bb + mm] - ee), std::abs(tp[a + nm][bb + mm] - pe)});
      }
    rows.push_back({{"y", y}, {"predicted", r12(std::abs(b))}, {"E", cj(te[nm][m + mm])}, {"P", cj(tp[n + nm][m + mm])}});
  }
  r.add({"coefficients", worst < 1e-8, fmt("c^H0 equals 2^{-1/2} beta(y) at the predicted indices, zero elsewhere: %.1e", worst),
         {{"max_error", r12(worst)}, {"rows", rows}}});

  JacobiPoint pt{0.17, 0.83, 0.31, 0.22};
  auto a = poincare(c.k, n, m, beta, pt, rho), b = poincare(c.k, n, m, beta, pt, 4 * rho);
  double change = std::abs(a.value - b.value);
  r.add({"tail_bound", change <= a.tail_bound, fmt("refinement change %.1e within the bound %.1e", change, a.tail_bound),
         {{"terms", a.terms}, {"tail_bound", r12(a.tail_bound)}}});
  double inv = 0;
  for (const SAff& g : {integral(0, -1, 1, 0), integral(1, 1, 0, 1), integral(1, 0, 0, 1, 1, 1)}) {
    double tb = a.tail_bound + poincare(c.k, n, m, beta, act(g, pt), rho).tail_bound;
    inv = std::max(inv, std::abs(slash(P, g)(pt) - P(pt)) / tb);
  }
  r.add({"invariance", inv <= 1.0, fmt("|P|gamma - P| over the tail bounds: %.2f", inv), {}});

  auto mc = mc_spec(c, "series");
  CEstimate ip = inner_product(E, E, mc);
  double w = weighted_norm2(beta.eval, c.k, 1e-6, 60.0);
  double z = std::abs(ip.value.real() - w) / ip.stderr_;
  r.add({"norm", z < 3, fmt("||E||^2 by Monte Carlo %.6g +- %.1e against %.6g", r12(ip.value.real()), ip.stderr_, w),
         {{"measured", r12(ip.value.real())}, {"stderr", r12(ip.stderr_)}, {"predicted", r12(w)}, {"z", r12(z)}}});

  PsiSpec psi = psi_bump(1.0, 0.5);
  double pn = psi_norm2(psi);
  int nn = n == 0 ? 1 : n;
  double wn = weighted_norm2([&](double y) { return beta_whittaker(c.k, nn, psi, y); }, c.k, 1e-7, 6.0, 600);
  double wpred = pn / (2.0 * nn * nn);
  r.add({"whittaker_family_norm", std::abs(wn / wpred - 1) < 0.01, fmt("ratio %.5f", wn / wpred), {}});
  auto bp = [&](double y) { return beta_ypower(c.k, psi, 1, y); };
  auto bm = [&](double y) { return beta_ypower(c.k, psi, -1, y); };
  double yn = weighted_norm2(bp, c.k, 1e-6, 1e6, 800), yo = std::abs(weighted_inner(bp, bm, c.k, 1e-6, 1e6, 800));
  r.add({"ypower_family_norm", std::abs(yn / (4 * kPi * pn) - 1) < 0.01 && yo < 1e-10 * yn,
         fmt("norm over 4 pi ||psi||^2: %.5f; +/- overlap %.1e", yn / (4 * kPi * pn), yo / yn), {}});

  cplx tau(0.31, 0.9);
  double raw = classical_eisenstein(tau, 2.0, 240).value(), comp = completed_eisenstein(tau, 2.0);
  double fe = std::abs(comp - completed_eisenstein(tau, -1.0)) / comp;
  r.add({"classical_eisenstein", std::abs(xi(4.0) * raw / comp - 1) < 1e-4 && fe < 1e-12,
         fmt("lattice sum against Fourier expansion %.1e; s <-> 1 - s %.1e", std::abs(xi(4.0) * raw / comp - 1), fe), {}});
  return r;
}

// ---------------------------------------------------------------- Siegel-Veech

Report verify_sv(const RunConfig& c) {
  Report r{"sv", {}, {}};
  int M = c.M;
  KTypeFunction f{bump_profile(0, c.r_lattice, 6), 0};
  double I = f.integral().real(), n2 = f.norm2();
  auto mc = mc_spec(c, "sv");

  auto mean = sv_mean_mc(f, M, mc);
  double pm = M * M * I, zm = std::abs(mean.value.real() - pm) / mean.stderr_;
  r.add({"mean", zm < 3, fmt("%.6g +- %.1e against M^2 int f = %.6g", r12(mean.value.real()), mean.stderr_, pm),
         {{"predicted", r12(pm)}, {"measured", r12(mean.value.real())}, {"stderr", r12(mean.stderr_)}, {"z", r12(zm)}}});

  auto s2 = sv_second_moment_mc(f, M, mc);
  double p2 = std::pow(M, 4) * I * I + M * M * n2, z2 = std::abs(s2.value.real() - p2) / s2.stderr_;
  r.add({"second_moment", z2 < 3,
         fmt("%.6g +- %.1e against M^4 (int f)^2 + M^2 int f^2 = %.6g", r12(s2.value.real()), s2.stderr_, p2),
         {{"predicted", r12(p2)},
          {"measured", r12(s2.value.real())},
          {"stderr", r12(s2.stderr_)},
          {"z", r12(z2)},
          {"y_max", r12(s2.y_max)},
          {"tail", r12(s2.tail.real())}}});

  KTypeFunction g{mean_zero_bump_profile(c.r_lattice, 6), 0};
  auto iso = sv_second_moment_mc(g, M, mc);
  double pi2 = M * M * g.norm2(), zi = std::abs(iso.value.real() - pi2) / iso.stderr_;
  double ratio = std::sqrt(iso.value.real() / pi2);
  r.add({"isometry", zi < 3, fmt("||SV g|| / (M ||g||) = %.5f for mean-zero g", ratio),
         {{"ratio", r12(ratio)}, {"z", r12(zi)}}});

  KTypeFunction fk{bump_profile(c.k, c.r_lattice, 8), c.k};
  std::vector<double> ys{0.5, 1.0, 2.0, 4.0};
  QuadratureSpec q = quad(c);
  auto rows = sv_coeffs_check(fk, M, 2, 3 * M, ys, false, q);
  double main = 0, zero = 0;
  for (const auto& row : rows) {
    if (row.n == 0 && row.m == M) main = std::max(main, std::abs(row.measured - row.predicted) / std::abs(row.predicted));
    if (row.n != 0 || row.m % M != 0) zero = std::max(zero, std::abs(row.measured));
  }
  r.add({"coefficients", main < 1e-6 && zero < 1e-8,
         fmt("c^H0(0, M; y) against the Hankel prediction %.1e; off-lattice coefficients %.1e", main, zero), {}});
  // the closed form (mM)^2 (T_M H f0)(y/m^2) differs from the raw lattice sum by y / 2 pi
  json lit = json::array();
  for (double y : ys) {
    cplx raw = std::pow(y, 0.5 * c.k) * sv_coefficient_predicted(fk, M, M, y);
    cplx cf = sv_coefficient_literal(fk, M, M, y);
    lit.push_back({{"y", y}, {"closed_form_over_raw", r12(std::abs(cf / raw))}, {"y_over_2pi", r12(y / kTwoPi)}});
  }
  r.extra["closed_form_comparison"] = lit;

  KTypeFunction f2{bump_profile(0, 0.8 * c.r_lattice, 4), 0};
  auto adj = adjoint_duality_check(f, f2, mc_spec(c, "sv-adjoint"));
  double sig = std::hypot(adj.lhs.stderr_, adj.rhs.stderr_), gap = std::abs(adj.lhs.value - adj.rhs.value);
  r.add({"adjoint", gap < 3 * sig, fmt("<SV f, SV f2> - <f, SV*(SV f2)> = %.1e, 3 sigma = %.1e", gap, 3 * sig),
         {{"lhs", cj(adj.lhs.value)}, {"rhs", cj(adj.rhs.value)}, {"closed_form", cj(adj.closed_form)}}});

  ModularFunction phi = sv_modular(fk, M);
  JacobiPoint pt{0.21, 0.93, 0.37, 0.11};
  double mod = 0;
  for (const SAff& gg : {integral(0, -1, 1, 0), integral(1, 1, 0, 1), integral(1, 0, 0, 1, 0, 1), integral(2, 1, 1, 1, 1, -1)})
    mod = std::max(mod, std::abs(slash(phi, gg)(pt) - phi(pt)));
  r.add({"modular_invariance", mod < 1e-12, fmt("max |SV|gamma - SV| = %.1e", mod), {}});
  return r;
}

// ---------------------------------------------------------------- Fourier and special functions

Report verify_fourier(const RunConfig& c) {
  Report r{"fourier", {}, {}};
  QuadratureSpec q = quad(c);
  ModularFunction phi = sv_modular(KTypeFunction{bump_profile(c.k, 1.2 * c.r_lattice, 8), c.k}, c.M);
  cplx tau(0.3, 1.7);
  auto rel_t = relation_T_H0(phi, 1, tau, 6, q);
  r.add({"torus_against_heisenberg", rel_t.residual < 1e-8, fmt("c^T(m, 0) = sum_n c^H0(n, m) e(nx): %.1e", rel_t.residual),
         {{"lhs", cj(rel_t.lhs)}, {"rhs", cj(rel_t.rhs)}}});
  double eq = 0;
  for (const SL2& g : {SL2{1, 1, 0, 1}, SL2{0, -1, 1, 0}, SL2{-1, 0, 0, -1}})
    eq = std::max(eq, torus_equivariance_check(phi, g, 1, 2, cplx(0.2, 1.1), q).residual);
  r.add({"torus_equivariance", eq < 1e-8, fmt("max residual over S, T, -I: %.1e", eq), {}});
  SAff g = from_iwasawa({0.3, 1.4, 0.2, -0.35, 0.8});
  ModularFunction md = plane_mode(1, 2, c.k);
  double ha = std::abs(heisenberg_average(lift(md), 1, 2, g, q) - heisenberg_average_predicted(md, 1, 2, g, q));
  r.add({"heisenberg_average", ha < 1e-9, fmt("average against e^{ik theta} a^k c^H0 e(nb + m w1): %.1e", ha), {}});

  double ode = 0;
  for (double kappa : {-1.0, 0.0, 0.5, 1.0})
    for (double t : {0.5, 1.0, 2.5})
      for (double z : {0.05, 0.7, 2.0, 5.5, 13.0, 30.0}) {
        WhittakerParams p{kappa, cplx(0, t)};
        ode = std::max(ode, whittaker_ode_residual([&](double x) { return whittaker_w(p, x); }, p, z));
      }
  r.add({"whittaker_ode", ode < 1e-6, fmt("max ODE residual %.1e", ode), {}});
  json slopes = json::array();
  bool sl_ok = true;
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
    double mx = 0, my = 0, sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i] / lx.size(), my += ly[i] / ly.size();
    for (std::size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
    double s = sxy / sxx;
    sl_ok = sl_ok && s >= 0.5 * (3 - k) - 0.2;
    slopes.push_back({{"k", k}, {"slope", r12(s)}, {"expected", 0.5 * (3 - k)}});
  }
  r.add({"whittaker_small_y", sl_ok, "error of the two-term expansion decays like y^{(3-k)/2}", {{"slopes", slopes}}});

  // Sonine pair r^k (1 - r^2)^6 <-> 2^6 6! J_{k+7}(s) / s^7
  double inv = 0;
  for (int k : {0, 1, 2}) {
    auto closed = [k](double s) { return 64.0 * 720.0 * bessel_j(k + 7, s) / std::pow(s, 7); };
    RadialProfile f{[k](double rr) { return cplx(rr < 1 ? std::pow(rr, k) * std::pow(1 - rr * rr, 6) : 0.0); }, 1.0};
    RadialProfile gg{[&](double s) { return cplx(s == 0 ? 0.0 : closed(s)); }, 400.0};
    for (double s : {0.3, 4.0, 17.0}) inv = std::max(inv, std::abs(hankel_transform(k, f, s, 1e-12) - closed(s)));
    double num = 0, den = 0;
    for (double rr = 0.05; rr < 1.0; rr += 0.1) {
      num += std::norm(hankel_transform(k, gg, rr, 1e-12) - f(rr)) * rr;
      den += std::norm(f(rr)) * rr;
    }
    inv = std::max(inv, std::sqrt(num / den));
  }
  r.add({"hankel_involution", inv < 1e-5, fmt("Sonine pair and its inverse: %.1e", inv), {}});
  return r;
}

// ---------------------------------------------------------------- spectrum

namespace {

Report spectrum_report(const RunConfig& c, std::vector<SweepRow>& rows) {
  Report r{"spectrum", {}, {}};
  GridSpec g;
  g.y_min = c.grid_y_min;
  g.y_max = c.grid_y_max;
  g.N = c.grid_n;
  std::vector<double> eps = c.eps;
  std::sort(eps.begin(), eps.end());
  rows = epsilon_sweep(c.k, c.n, c.m, c.eps, c.count, g);
  double worst = 0;
  std::map<double, std::vector<double>> lam;
  for (const auto& row : rows) {
    worst = std::max(worst, row.refinement_delta);
    lam[row.eps].push_back(row.lambda);
  }
  r.add({"grid_stability", worst < 0.005, fmt("max relative change under refinement %.1e", worst), {}});
  bool inc = true;
  for (std::size_t a = 1; a < eps.size(); ++a)
    for (int j = 0; j < c.count; ++j) inc = inc && lam[eps[a - 1]][j] < lam[eps[a]][j];
  r.add({"monotone_in_eps", inc, "each eigenvalue increases strictly with eps", {}});
  bool grows = true;
  json counts = json::array();
  for (double level : {5.0, 20.0, 50.0}) {
    json row = json::array();
    int prev = -1;
    for (auto it = eps.rbegin(); it != eps.rend(); ++it) {
      int n = count_below(build_mode_operator(c.k, c.n, c.m, *it, g), level);
      grows = grows && n >= prev;
      prev = n;
      row.push_back(n);
    }
    counts.push_back({{"level", level}, {"counts_by_decreasing_eps", row}});
  }
  r.add({"counts_grow", grows, "eigenvalue counts below fixed levels do not fall as eps decreases", {{"counts", counts}}});
  json table = json::array();
  for (const auto& row : rows)
    table.push_back({{"eps", row.eps}, {"j", row.j}, {"lambda", r12(row.lambda)}, {"refinement_delta", r12(row.refinement_delta)}});
  r.extra["eigenvalues"] = table;
  return r;
}

}  // namespace

Report verify_spectrum(const RunConfig& c) {
  std::vector<SweepRow> rows;
  return spectrum_report(c, rows);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> s{"algebra", "operators", "series", "sv", "fourier", "spectrum"};
  return s;
}

Report run_suite(const std::string& name, const RunConfig& c) {
  if (name == "algebra") return verify_algebra(c);
  if (name == "operators") return verify_operators(c);
  if (name == "series") return verify_series(c);
  if (name == "sv") return verify_sv(c);
  if (name == "fourier") return verify_fourier(c);
  if (name == "spectrum") return verify_spectrum(c);
  throw std::invalid_argument("unknown suite: " + name);
}

void write_claims_csv(std::ostream& os, const std::vector<Report>& reports) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  os << "suite,id,pass,detail\n";
  for (const auto& r : reports)
    for (const auto& c : r.claims) os << r.suite << ',' << c.id << ',' << (c.pass ? 1 : 0) << ',' << quote(c.detail) << '\n';
}

// ---------------------------------------------------------------- command line

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"strata: verification runner"};
  app.require_subcommand(1);
  std::string config_path, suite, eps, format, output;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  int M = 0, k = 0, n = 0, m = 0, grid_n = 0, count = 0;
  long r_coset = 0;
  double r_lattice = 0;

  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;
  auto common = [&](CLI::App* s) {
    s->add_option("--config", config_path, "key = value configuration file");
    overrides.push_back({s->add_option("--seed", seed, "master seed"), [&](RunConfig& c) { c.seed = seed; }});
    overrides.push_back({s->add_option("--samples", samples, "Monte Carlo samples"), [&](RunConfig& c) { c.samples = samples; }});
    overrides.push_back({s->add_option("--M", M, "level of the relative lattice sum"), [&](RunConfig& c) { c.M = M; }});
    overrides.push_back({s->add_option("--k", k, "weight"), [&](RunConfig& c) { c.k = k; }});
    overrides.push_back({s->add_option("--n", n, "x frequency"), [&](RunConfig& c) { c.n = n; }});
    overrides.push_back({s->add_option("--m", m, "vertical frequency"), [&](RunConfig& c) { c.m = m; }});
    overrides.push_back({s->add_option("--eps", eps, "comma separated eps values"), [&](RunConfig& c) { c.set("eps", eps); }});
    overrides.push_back({s->add_option("--grid-n", grid_n, "interior grid nodes"), [&](RunConfig& c) { c.grid_n = grid_n; }});
    overrides.push_back({s->add_option("--count", count, "eigenvalues per eps"), [&](RunConfig& c) { c.count = count; }});
    overrides.push_back({s->add_option("--r-coset", r_coset, "series truncation radius"), [&](RunConfig& c) { c.r_coset = r_coset; }});
    overrides.push_back({s->add_option("--r-lattice", r_lattice, "support radius of test functions"),
                         [&](RunConfig& c) { c.r_lattice = r_lattice; }});
    overrides.push_back({s->add_option("--output", output, "report path (default stdout)"), [&](RunConfig& c) { c.output = output; }});
    overrides.push_back({s->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"})),
                         [&](RunConfig& c) { c.format = format; }});
  };
  CLI::App* verify = app.add_subcommand("verify", "run one verification suite");
  verify->add_option("suite", suite, "algebra | operators | series | sv | fourier")
      ->required()
      ->check(CLI::IsMember({"algebra", "operators", "series", "sv", "fourier"}));
  common(verify);
  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalue sweep of the mode operator");
  common(spectrum);
  CLI::App* all = app.add_subcommand("all", "every suite");
  common(all);

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  RunConfig cfg;
  bool format_given = false;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot read config file " + config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = RunConfig::from_text(ss.str());
      format_given = ss.str().find("format") != std::string::npos;
    }
    for (auto& [opt, apply] : overrides)
      if (opt->count() > 0) {
        apply(cfg);
        if (opt->get_name() == "--format") format_given = true;
      }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  std::vector<std::string> names;
  if (verify->parsed()) names = {suite};
  if (spectrum->parsed()) {
    names = {"spectrum"};
    if (!format_given) cfg.format = "csv";
  }
  if (all->parsed()) names = suite_names();
  cfg.suite = all->parsed() ? "all" : names.front();

  std::vector<Report> reports(names.size());
  std::vector<SweepRow> sweep;
  std::vector<std::string> errors(names.size());
  parallel_for(names.size(), [&](std::size_t i) {
    try {
      reports[i] = names[i] == "spectrum" ? spectrum_report(cfg, sweep) : run_suite(names[i], cfg);
    } catch (const std::exception& e) {
      reports[i].suite = names[i];
      reports[i].add({"exception", false, e.what(), {}});
    }
  });

  std::ostringstream body;
  if (cfg.format == "json")
    body << combine(reports, cfg.to_json()).dump(2) << "\n";
  else if (names.size() == 1 && names.front() == "spectrum")
    write_sweep_csv(body, sweep);
  else
    write_claims_csv(body, reports);
  if (cfg.output.empty()) {
    out << body.str();
  } else {
    std::ofstream f(cfg.output);
    if (!f) {
      err << "error: cannot write " << cfg.output << "\n";
      return 2;
    }
    f << body.str();
  }

  std::vector<std::string> failing;
  for (const auto& r : reports)
    for (auto& id : r.failing()) failing.push_back(id);
  if (!failing.empty()) {
    err << "failing claims:\n";
    for (auto& id : failing) err << "  " << id << "\n";
    return 1;
  }
  return 0;
}

}  // namespace strata
