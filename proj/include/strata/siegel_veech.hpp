#pragma once

#include <functional>
#include <vector>

#include "strata/heisenberg_fourier.hpp"
#include "strata/saff_group.hpp"
#include "strata/special_fn.hpp"

namespace strata {

// Plane points are row vectors (w1, w2); as complex numbers they are w2 + i w1,
// so that SV at the section of (tau, z) sums f((z + (a tau + b)/M)/sqrt y).
using PlaneFunction = std::function<cplx(const Vec2&)>;

inline cplx plane_to_complex(const Vec2& w) { return {w[1], w[0]}; }
inline Vec2 complex_to_plane(cplx c) { return {c.imag(), c.real()}; }

// f(w) = f0(|w|) e^{ik theta}, theta = atan2(w2, w1); then f(w k(alpha)) = e^{ik alpha} f(w)
struct KTypeFunction {
  RadialProfile f0;
  int k = 0;
  cplx operator()(const Vec2& w) const;
  PlaneFunction plane() const;
  double support() const { return f0.support; }
  bool mean_zero(double tol = 1e-12) const;
  cplx integral() const;  // over R^2
  double norm2() const;   // L^2(R^2) norm squared
};

// smooth bump r^|k| (1 - r^2/R^2)^nu on [0, R]
RadialProfile bump_profile(int k, double R, int nu = 6);
// radial bump with vanishing integral: (1 - c r^2)(1 - r^2/R^2)^nu, c chosen so that int f0 r dr = 0
RadialProfile mean_zero_bump_profile(double R, int nu = 6);

// Marked torus of a Jacobi point: lattice spanned by tau/sqrt y, 1/sqrt y, relative period z/sqrt y
struct MarkedTorus {
  cplx e1, e2, z;
  static MarkedTorus of(const JacobiPoint& pt);
  double covolume() const { return std::abs((std::conj(e1) * e2).imag()); }
};

// points of z + Lambda/M of norm <= R (complex form)
std::vector<cplx> config_rel_M(const MarkedTorus& t, int M, double R);

// sum over v in Z^2 of f(v g / M + w), for f supported in the ball of radius R
cplx sv_group(const PlaneFunction& f, double R, const SAff& g, int M);
// weight-k modular function y^{-k/2} sum_{a,b} f(plane((z + (a tau + b)/M)/sqrt y))
cplx sv_rel_M(const KTypeFunction& f, const JacobiPoint& pt, int M);
ModularFunction sv_modular(const KTypeFunction& f, int M);
// unnormalised lattice sum at the section (the lift at theta = 0)
cplx sv_rel_M_raw(const PlaneFunction& f, double R, const JacobiPoint& pt, int M);
// sum over primitive vectors (c tau + d)/sqrt y
cplx sv_abs(const PlaneFunction& f, double R, const JacobiPoint& pt);

struct MomentEstimate {
  cplx value;
  double stderr_ = 0;
  cplx truncated;     // Monte-Carlo part over y <= y_max
  cplx tail;          // analytic cusp contribution above y_max
  double y_max = 0;
};

// mean of SV over the probability measure; exact sampling of the cusp
MomentEstimate sv_mean_mc(const KTypeFunction& f, int M, const MCSpec& mc);
// mean of SV(f1) conj SV(f2); truncated at mc.y_max (chosen automatically when 0) plus the cusp tail
MomentEstimate sv_cross_moment_mc(const KTypeFunction& f1, const KTypeFunction& f2, int M, const MCSpec& mc);
MomentEstimate sv_second_moment_mc(const KTypeFunction& f, int M, const MCSpec& mc);
// cusp tail (3/pi) M^3 L 2/sqrt(Y), L = int F1(h) conj F2(h) dh, F(h) = int f(s + ih) ds
cplx sv_cusp_tail(const KTypeFunction& f1, const KTypeFunction& f2, int M, double y_max);

// SV*(h)(xi) = E_{g in SL2(Z)\SL2(R)} h(g, xi - row1(g)), Monte Carlo
CEstimate sv_adjoint(const GroupFunction& h, const Vec2& xi, const MCSpec& mc);
// SV*(SV(f2))(xi) = E_Lambda sum_{lambda in Lambda} f2(xi + lambda), Monte Carlo over lattices
CEstimate sv_adjoint_of_sv(const KTypeFunction& f2, const Vec2& xi, const MCSpec& mc);

struct AdjointCheck {
  CEstimate lhs;  // <SV f, SV f2> on the stratum
  CEstimate rhs;  // <f, SV*(SV f2)> on the plane
  cplx closed_form;  // int f conj f2 + int f conj int f2
  double z_score = 0;
};
AdjointCheck adjoint_duality_check(const KTypeFunction& f, const KTypeFunction& f2, const MCSpec& mc);

struct CoeffCheckRow {
  int n = 0, m = 0;
  double y = 0;
  cplx measured;
  cplx predicted;
  double error = 0;  // relative for nonzero predictions, absolute otherwise
};

// predicted c^H0(SV_M f; 0, mt; y) for the weight-k function y^{-k/2} SV
cplx sv_coefficient_predicted(const KTypeFunction& f, int M, int mt, double y);
// the closed form (mM)^2 (T_M H_k f0)(y/m^2) for mt = m M
cplx sv_coefficient_literal(const KTypeFunction& f, int M, int mt, double y);

// measured against predicted on the grid; literal selects the closed form above and the raw lattice sum
std::vector<CoeffCheckRow> sv_coeffs_check(const KTypeFunction& f, int M, int n_max, int m_max,
                                           const std::vector<double>& y_grid, bool literal = false,
                                           const QuadratureSpec& q = {});

// MC inner product of the weight-k SV transform with a modular function
CEstimate orthogonality_to_cusp(const KTypeFunction& f, int M, const ModularFunction& cusp, const MCSpec& mc);

}  // namespace strata
