#pragma once

#include <array>
#include <functional>
#include <vector>

#include "strata/saff_group.hpp"
#include "strata/siegel_veech.hpp"

namespace strata {

// Central differences of 4th order; one Richardson level lifts the result to 6th order.
struct StencilSpec {
  double h = 2e-3;
  int richardson = 1;
  bool scale_y = true;  // steps in y and v are h * y
};

using Coord4 = std::array<double, 4>;
using Field4 = std::function<cplx(const Coord4&)>;

// mixed partial d^alpha f at p with per-coordinate steps
cplx partial(const Field4& f, const Coord4& p, const std::array<int, 4>& alpha, const Coord4& steps);
// 1D derivative of order 1 or 2 with Richardson
cplx derivative(const std::function<cplx(double)>& f, double x, int order, double h, int richardson = 1);

enum class Maass { L, R, LH, RH };
int maass_weight_shift(Maass which);

// L_k = -2i y^2 (d_taubar + v/y d_zbar), R_k = 2i (d_tau + v/y d_z) + k/y, LH_k = -i y d_zbar, RH_k = i d_z
cplx apply_maass(Maass which, const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s = {});
ModularFunction maass(Maass which, const ModularFunction& phi, const StencilSpec& s = {});

// foliated Laplacian in (x, y, u, v)
cplx apply_fol(const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s = {});
// the same operator in (x, y, p, q): y^2 (dx^2 + dy^2) - i k y (dx + i dy)
cplx apply_fol_pq(const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s = {});
// y d_z d_zbar = (y/4)(du^2 + dv^2)
cplx apply_ver(const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s = {});
// (y/4)(dq^2 + y^-2 (dp - x dq)^2)
cplx apply_ver_pq(const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s = {});
// third-order operator from the cubic Casimir
cplx apply_tot(const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s = {});
cplx apply_compound(const ModularFunction& phi, double eps, const JacobiPoint& pt, const StencilSpec& s = {});

ModularFunction fol(const ModularFunction& phi, const StencilSpec& s = {});
ModularFunction tot(const ModularFunction& phi, const StencilSpec& s = {});
ModularFunction compound(const ModularFunction& phi, double eps, const StencilSpec& s = {});

// R_{k-2} L_k and k RH_{k-1} LH_k - R_{k-2} LH_{k-1} LH_k + L_{k+2} RH_{k+1} RH_k, by nesting stencils
cplx fol_via_maass(const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s = {});
cplx tot_via_maass(const ModularFunction& phi, const JacobiPoint& pt, const StencilSpec& s = {});

// ---- single modes F(y) e(n x + m v/y) ----

// (k/2)(k/2 - 1): the constant picked up when y^{-k/2} is split off
double twist_constant(int k);

// Writing F = y^{-k/2} beta: -Delta_fol(F e(..)) = y^{-k/2} (T beta) e(..) with
// T beta = -y^2 beta'' + 4 pi^2 n^2 y^2 beta - 2 pi k n y beta + (k/2)(k/2 - 1) beta.
// Grid version: y log-spaced, 4th-order differences in log y (one-sided at the ends).
std::vector<cplx> mode_reduce_fol(const std::vector<double>& y, const std::vector<cplx>& beta, int k, int n, int m);
cplx mode_reduce_fol(const std::function<cplx(double)>& beta, int k, int n, double y, double h = 1e-3);
// untwisted U F = -y^2 F'' - k y F' + 4 pi^2 n^2 y^2 F - 2 pi k n y F, so that -Delta_fol(F e(..)) = (U F) e(..)
cplx mode_untwisted(const std::function<cplx(double)>& F, int k, int n, double y, double h = 1e-3);
// vertical mode term: -Delta_ver(F e(n x + m p)) = (pi^2 m^2 / y) F e(..)
double mode_vertical(int m, double y);

// eigen-relations for full profiles F: -Delta_fol (F e(..)) = lambda F e(..)
struct LambdaFit {
  cplx lambda;
  double residual = 0;  // || U F - lambda F || / || F || on the grid
};
double eigen_residual(int k, int n, cplx lambda, const std::function<cplx(double)>& F, const std::vector<double>& grid);
LambdaFit fit_lambda(int k, int n, const std::function<cplx(double)>& F, const std::vector<double>& grid);

// ---- Siegel-Veech commutation ----

struct CommutationResult {
  double fol_residual = 0;  // max |SV(D_eucl f) - 4 Delta_fol SV f| / scale
  double tot_residual = 0;  // max |Delta_tot SV f| / scale
  double scale = 0;
};
// D_eucl = (w.grad)^2 + 2 w.grad; SV is the weight-k function y^{-k/2} sum f
CommutationResult sv_commutation_check(const KTypeFunction& f, int M, const std::vector<JacobiPoint>& pts,
                                       const StencilSpec& s = {});

// ---- quadratic form ----

// <-Delta^(eps) phi, psi> against the Dirichlet form
// Q = int y^k (phi_x psi_x* + phi_y psi_y*) + i k y^{k-1} phi_x psi* + (eps/4) y^{k-1} (phi_u psi_u* + phi_v psi_v*)
// over (x, p, q) in [0, 1]^3 and y in [y_lo, y_hi], measure dx dy dp dq (x, y derivatives at fixed p, q);
// phi and psi vanish near both y ends
struct QuadFormResult {
  cplx lhs, q_form, q_swapped;
  double residual = 0;       // |lhs - Q| / |Q|
  double sym_residual = 0;   // |Q(phi, psi) - conj Q(psi, phi)| / |Q|
};
struct QuadFormSpec {
  double y_lo = 0.3, y_hi = 3.0;
  int y_nodes = 64;
  int x_nodes = 12, p_nodes = 12, q_nodes = 4;
};
QuadFormResult quadratic_form_check(const ModularFunction& phi, const ModularFunction& psi, double eps,
                                    const QuadFormSpec& qs = {}, const StencilSpec& s = {});

}  // namespace strata
