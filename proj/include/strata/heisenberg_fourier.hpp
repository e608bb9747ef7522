#pragma once

#include <ostream>
#include <vector>

#include "strata/saff_group.hpp"

namespace strata {

struct QuadratureSpec {
  int nx = 64;  // nodes in x (or p)
  int nu = 64;  // nodes in u (or q)
  int nv = 64;  // nodes in v / y
  double tol = 1e-8;
};

// int int phi(tau, p tau + q) e(-m p - r q) dp dq
cplx coeff_T(const ModularFunction& phi, int m, int r, cplx tau, const QuadratureSpec& q = {});
// int int phi(x + iy, u + iv) e(-n x - r u) dx du, with v = w1 * y
cplx coeff_H(const ModularFunction& phi, int n, int r, double y, double w1, const QuadratureSpec& q = {});
// int_0^1 c^H(n, 0; y, s) e(-m s) ds
cplx coeff_H0(const ModularFunction& phi, int n, int m, double y, const QuadratureSpec& q = {});

// all c^H0(n, m; y) with |n| <= n_max, |m| <= m_max from one FFT; index [n + n_max][m + m_max]
std::vector<std::vector<cplx>> coeff_H0_table(const ModularFunction& phi, int n_max, int m_max, double y,
                                              const QuadratureSpec& q = {});

struct RelationResult {
  cplx lhs, rhs;
  double residual = 0;
};

// c^T(m, 0; tau) against sum_{|n| <= n_max} c^H0(n, m; y) e(n x)
RelationResult relation_T_H0(const ModularFunction& phi, int m, cplx tau, int n_max, const QuadratureSpec& q = {});

// c^T(phi|gamma; m, r; tau) against j(gamma, tau)^{-k} c^T(phi; (m, r) gamma^t; gamma tau)
RelationResult torus_equivariance_check(const ModularFunction& phi, const SL2& gamma, int m, int r, cplx tau,
                                        const QuadratureSpec& q = {});

struct ScalarProductSpec {
  int n_max = 2;
  int m_max = 2;
  double y_min = 0.05;
  double y_max = 20.0;
  int y_nodes = 64;  // Gauss-Legendre nodes in log y
};

// sum_{n, m} int c^H0(phi1) conj(c^H0(phi2)) y^{k-2} dy over [y_min, y_max]
cplx scalar_product_via_coeffs(const ModularFunction& phi1, const ModularFunction& phi2, const ScalarProductSpec& s,
                               const QuadratureSpec& q = {});

// max over |m| <= m_max and the y grid of |c^H0(phi; 0, m; y)| below tol
bool is_cusp_form(const ModularFunction& phi, int m_max, const std::vector<double>& y_grid, double tol,
                  const QuadratureSpec& q = {});

// int over N'(Z)\N'(R) of f(h g) conj(e(n b~ + m w~1)) dh, h = (n(b~), (w~1, w~2))
cplx heisenberg_average(const GroupFunction& f, int n, int m, const SAff& g, const QuadratureSpec& q = {});
// closed form e^{ik theta} a^k c^H0(phi; n, m; a^2) e(n b + m w1) for f = lift(phi)
cplx heisenberg_average_predicted(const ModularFunction& phi, int n, int m, const SAff& g, const QuadratureSpec& q = {});

struct CoefficientRow {
  int n = 0, m = 0;
  double y = 0;
  cplx c;
};

std::vector<CoefficientRow> coefficient_rows(const ModularFunction& phi, int n_max, int m_max,
                                             const std::vector<double>& y_grid, const QuadratureSpec& q = {});
void write_coefficient_csv(std::ostream& os, const std::vector<CoefficientRow>& rows);

}  // namespace strata
