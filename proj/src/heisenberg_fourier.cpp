#include "strata/heisenberg_fourier.hpp"

#include <fftw3.h>

#include <cstdio>
#include <mutex>

#include "strata/parallel.hpp"
#include "strata/special_fn.hpp"

namespace strata {

cplx coeff_T(const ModularFunction& phi, int m, int r, cplx tau, const QuadratureSpec& q) {
  std::vector<cplx> row(q.nx);
  parallel_for(q.nx, [&](std::size_t i) {
    double p = static_cast<double>(i) / q.nx;
    cplx s = 0;
    for (int j = 0; j < q.nu; ++j) {
      double qq = static_cast<double>(j) / q.nu;
      s += phi(JacobiPoint::from_complex(tau, p * tau + qq)) * e(-m * p - r * qq);
    }
    row[i] = s;
  });
  cplx s = 0;
  for (auto& v : row) s += v;
  return s / static_cast<double>(q.nx * q.nu);
}

cplx coeff_H(const ModularFunction& phi, int n, int r, double y, double w1, const QuadratureSpec& q) {
  std::vector<cplx> row(q.nx);
  double v = w1 * y;
  parallel_for(q.nx, [&](std::size_t i) {
    double x = static_cast<double>(i) / q.nx;
    cplx s = 0;
    for (int j = 0; j < q.nu; ++j) {
      double u = static_cast<double>(j) / q.nu;
      s += phi(JacobiPoint{x, y, u, v}) * e(-n * x - r * u);
    }
    row[i] = s;
  });
  cplx s = 0;
  for (auto& c : row) s += c;
  return s / static_cast<double>(q.nx * q.nu);
}

namespace {

// u-averaged samples g[i][l] = mean_u phi(x_i + iy, u + i s_l y)
std::vector<std::vector<cplx>> u_averaged(const ModularFunction& phi, double y, const QuadratureSpec& q) {
  std::vector<std::vector<cplx>> g(q.nx, std::vector<cplx>(q.nv));
  parallel_for(static_cast<std::size_t>(q.nx) * q.nv, [&](std::size_t idx) {
    std::size_t i = idx / q.nv, l = idx % q.nv;
    double x = static_cast<double>(i) / q.nx, s = static_cast<double>(l) / q.nv;
    cplx acc = 0;
    for (int j = 0; j < q.nu; ++j) acc += phi(JacobiPoint{x, y, static_cast<double>(j) / q.nu, s * y});
    g[i][l] = acc / static_cast<double>(q.nu);
  });
  return g;
}

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

cplx coeff_H0(const ModularFunction& phi, int n, int m, double y, const QuadratureSpec& q) {
  auto g = u_averaged(phi, y, q);
  cplx s = 0;
  for (int i = 0; i < q.nx; ++i)
    for (int l = 0; l < q.nv; ++l)
      s += g[i][l] * e(-n * static_cast<double>(i) / q.nx - m * static_cast<double>(l) / q.nv);
  return s / static_cast<double>(q.nx * q.nv);
}

std::vector<std::vector<cplx>> coeff_H0_table(const ModularFunction& phi, int n_max, int m_max, double y,
                                              const QuadratureSpec& q) {
  if (2 * n_max >= q.nx || 2 * m_max >= q.nv) throw std::invalid_argument("coeff_H0_table: too few nodes");
  auto g = u_averaged(phi, y, q);
  std::vector<cplx> buf(static_cast<std::size_t>(q.nx) * q.nv);
  for (int i = 0; i < q.nx; ++i)
    for (int l = 0; l < q.nv; ++l) buf[static_cast<std::size_t>(i) * q.nv + l] = g[i][l];
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan = fftw_plan_dft_2d(q.nx, q.nv, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  double norm = 1.0 / (static_cast<double>(q.nx) * q.nv);
  std::vector<std::vector<cplx>> out(2 * n_max + 1, std::vector<cplx>(2 * m_max + 1));
  for (int n = -n_max; n <= n_max; ++n)
    for (int m = -m_max; m <= m_max; ++m) {
      int i = (n % q.nx + q.nx) % q.nx, l = (m % q.nv + q.nv) % q.nv;
      out[n + n_max][m + m_max] = buf[static_cast<std::size_t>(i) * q.nv + l] * norm;
    }
  return out;
}

RelationResult relation_T_H0(const ModularFunction& phi, int m, cplx tau, int n_max, const QuadratureSpec& q) {
  RelationResult r;
  r.lhs = coeff_T(phi, m, 0, tau, q);
  auto table = coeff_H0_table(phi, n_max, std::abs(m), tau.imag(), q);
  for (int n = -n_max; n <= n_max; ++n) r.rhs += table[n + n_max][m + std::abs(m)] * e(n * tau.real());
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

RelationResult torus_equivariance_check(const ModularFunction& phi, const SL2& gamma, int m, int r, cplx tau,
                                        const QuadratureSpec& q) {
  SAff ga{gamma, {0, 0}};
  RelationResult out;
  out.lhs = coeff_T(slash(phi, ga), m, r, tau, q);
  // (m, r) gamma^t
  int mt = static_cast<int>(std::lround(m * gamma.a + r * gamma.b));
  int rt = static_cast<int>(std::lround(m * gamma.c + r * gamma.d));
  cplx gt = (gamma.a * tau + gamma.b) / (gamma.c * tau + gamma.d);
  out.rhs = std::pow(j_factor(gamma, tau), -phi.k) * coeff_T(phi, mt, rt, gt, q);
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

cplx scalar_product_via_coeffs(const ModularFunction& phi1, const ModularFunction& phi2, const ScalarProductSpec& s,
                               const QuadratureSpec& q) {
  if (phi1.k != phi2.k) throw std::invalid_argument("scalar_product_via_coeffs: weight mismatch");
  std::vector<double> t, w;
  gauss_legendre(s.y_nodes, std::log(s.y_min), std::log(s.y_max), t, w);
  cplx total = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double y = std::exp(t[i]);
    auto c1 = coeff_H0_table(phi1, s.n_max, s.m_max, y, q);
    auto c2 = coeff_H0_table(phi2, s.n_max, s.m_max, y, q);
    cplx acc = 0;
    for (std::size_t a = 0; a < c1.size(); ++a)
      for (std::size_t b = 0; b < c1[a].size(); ++b) acc += c1[a][b] * std::conj(c2[a][b]);
    // dy = y dt
    total += w[i] * acc * std::pow(y, phi1.k - 1);
  }
  return total;
}

bool is_cusp_form(const ModularFunction& phi, int m_max, const std::vector<double>& y_grid, double tol,
                  const QuadratureSpec& q) {
  for (double y : y_grid) {
    auto table = coeff_H0_table(phi, 0, m_max, y, q);
    for (auto& c : table[0])
      if (std::abs(c) >= tol) return false;
  }
  return true;
}

cplx heisenberg_average(const GroupFunction& f, int n, int m, const SAff& g, const QuadratureSpec& q) {
  std::vector<cplx> part(q.nx);
  parallel_for(q.nx, [&](std::size_t i) {
    double b = static_cast<double>(i) / q.nx;
    cplx acc = 0;
    for (int j = 0; j < q.nv; ++j) {
      double w1 = static_cast<double>(j) / q.nv;
      cplx inner = 0;
      for (int l = 0; l < q.nu; ++l) {
        double w2 = static_cast<double>(l) / q.nu;
        SAff h{{1.0, b, 0.0, 1.0}, {w1, w2}};
        inner += f(compose(h, g));
      }
      acc += inner * e(-n * b - m * w1);
    }
    part[i] = acc;
  });
  cplx s = 0;
  for (auto& v : part) s += v;
  return s / (static_cast<double>(q.nx) * q.nv * q.nu);
}

cplx heisenberg_average_predicted(const ModularFunction& phi, int n, int m, const SAff& g, const QuadratureSpec& q) {
  Iwasawa c = iwasawa(g);
  return std::polar(1.0, phi.k * c.theta) * std::pow(c.y, 0.5 * phi.k) * coeff_H0(phi, n, m, c.y, q) *
         e(n * c.x + m * c.w1);
}

std::vector<CoefficientRow> coefficient_rows(const ModularFunction& phi, int n_max, int m_max,
                                             const std::vector<double>& y_grid, const QuadratureSpec& q) {
  std::vector<CoefficientRow> rows;
  for (double y : y_grid) {
    auto table = coeff_H0_table(phi, n_max, m_max, y, q);
    for (int n = -n_max; n <= n_max; ++n)
      for (int m = -m_max; m <= m_max; ++m) rows.push_back({n, m, y, table[n + n_max][m + m_max]});
  }
  return rows;
}

void write_coefficient_csv(std::ostream& os, const std::vector<CoefficientRow>& rows) {
  os << "n,m,y,re,im\n";
  char buf[160];
  for (auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", r.n, r.m, r.y, r.c.real(), r.c.imag());
    os << buf;
  }
}

}  // namespace strata
