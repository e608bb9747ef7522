#include "strata/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "strata/parallel.hpp"

namespace strata {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::vector<double> make_grid(const GridSpec& g) {
  if (!(g.y_min > 0 && g.y_max > g.y_min) || g.N < 8) throw std::invalid_argument("make_grid: bad grid");
  double a = std::log(g.y_min), b = std::log(g.y_max);
  std::vector<double> y(g.N + 2);
  for (int i = 0; i <= g.N + 1; ++i) {
    double t = static_cast<double>(i) / (g.N + 1);
    // graded: t -> t - c sin(2 pi t) / (2 pi) clusters nodes near both ends
    if (g.graded) t -= 0.5 * std::sin(2 * kPi * t) / (2 * kPi);
    y[i] = std::exp(a + (b - a) * t);
  }
  return y;
}

ModeOperator build_mode_operator(int k, int n, int m, double eps, const GridSpec& g) {
  if (eps < 0) throw std::invalid_argument("build_mode_operator: eps must be >= 0");
  if (n == 0 || m == 0) throw std::invalid_argument("build_mode_operator: cusp modes need n, m != 0");
  std::vector<double> y = make_grid(g);
  std::size_t N = y.size() - 2;
  ModeOperator op;
  op.k = k, op.n = n, op.m = m, op.eps = eps;
  op.y.assign(y.begin() + 1, y.end() - 1);
  op.weight.resize(N), op.diag.resize(N), op.off.resize(N - 1), op.potential.resize(N);
  std::vector<double> s(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) s[i] = std::log(y[i]);
  // flux coefficients e^{-s} at the midpoints over the spacing
  std::vector<double> c(y.size() - 1);
  for (std::size_t i = 0; i + 1 < y.size(); ++i) c[i] = std::exp(-0.5 * (s[i] + s[i + 1])) / (s[i + 1] - s[i]);
  double ck = 0.5 * k * (0.5 * k - 1.0);
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t j = i + 1;
    double yy = y[j];
    double V = 4 * kPi * kPi * n * n * yy * yy - 2 * kPi * k * n * yy + ck + eps * kPi * kPi * m * m / yy;
    op.potential[i] = V;
    op.weight[i] = std::exp(-s[j]) * 0.5 * (s[j + 1] - s[j - 1]);
    op.diag[i] = (c[j - 1] + c[j]) / op.weight[i] + V;
  }
  for (std::size_t i = 0; i + 1 < N; ++i) op.off[i] = -c[i + 1] / std::sqrt(op.weight[i] * op.weight[i + 1]);
  return op;
}

std::vector<double> ModeOperator::apply(const std::vector<double>& beta) const {
  std::size_t N = size();
  std::vector<double> out(N);
  // W^{-1} A = W^{-1/2} S W^{1/2}
  for (std::size_t i = 0; i < N; ++i) {
    double acc = diag[i] * beta[i];
    if (i > 0) acc += off[i - 1] * std::sqrt(weight[i - 1] / weight[i]) * beta[i - 1];
    if (i + 1 < N) acc += off[i] * std::sqrt(weight[i + 1] / weight[i]) * beta[i + 1];
    out[i] = acc;
  }
  return out;
}

double ModeOperator::symmetry_residual() const {
  // <u, T v>_W against <T u, v>_W for two fixed probe vectors
  std::size_t N = size();
  std::vector<double> u(N), v(N);
  for (std::size_t i = 0; i < N; ++i) {
    u[i] = std::sin(0.013 * static_cast<double>(i * i) + 1.0);
    v[i] = std::cos(0.7 * static_cast<double>(i)) + 0.3;
  }
  std::vector<double> tu = apply(u), tv = apply(v);
  double a = 0, b = 0, scale = 0;
  for (std::size_t i = 0; i < N; ++i) {
    a += weight[i] * u[i] * tv[i];
    b += weight[i] * tu[i] * v[i];
    scale += weight[i] * std::abs(u[i] * tv[i]);
  }
  return std::abs(a - b) / scale;
}

int count_below(const ModeOperator& op, double lambda) {
  // Sturm sequence via the LDL^T pivots of S - lambda
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < op.size(); ++i) {
    double o2 = i > 0 ? op.off[i - 1] * op.off[i - 1] : 0.0;
    d = op.diag[i] - lambda - (i > 0 ? o2 / d : 0.0);
    if (d == 0.0) d = -std::numeric_limits<double>::epsilon() * (std::abs(op.diag[i]) + std::abs(lambda) + 1.0);
    if (d < 0) ++count;
  }
  return count;
}

namespace {

double eigenvalue_index(const ModeOperator& op, int j, double lo, double hi) {
  // smallest lambda with count_below(lambda) > j
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (count_below(op, mid) > j)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> inverse_iteration(const ModeOperator& op, double lambda) {
  std::size_t N = op.size();
  double shift = lambda + 1e-10 * std::max(1.0, std::abs(lambda));
  std::vector<double> x(N), piv(N), up(N);
  for (std::size_t i = 0; i < N; ++i) x[i] = 1.0 + 0.1 * std::sin(0.37 * static_cast<double>(i));
  // LU of S - shift without pivoting; a vanishing pivot is nudged, which only perturbs the shift
  const double tiny = 1e-300;
  for (std::size_t i = 0; i < N; ++i) {
    double d = op.diag[i] - shift - (i > 0 ? op.off[i - 1] * up[i - 1] : 0.0);
    if (std::abs(d) < tiny) d = tiny;
    piv[i] = d;
    if (i + 1 < N) up[i] = op.off[i] / d;
  }
  for (int it = 0; it < 3; ++it) {
    for (std::size_t i = 0; i < N; ++i) x[i] = (x[i] - (i > 0 ? op.off[i - 1] * x[i - 1] : 0.0)) / piv[i];
    for (std::size_t i = N - 1; i-- > 0;) x[i] -= up[i] * x[i + 1];
    double nrm = 0;
    for (double v : x) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (double& v : x) v /= nrm;
  }
  return x;
}

}  // namespace

std::vector<EigenPair> eigen_solve(const ModeOperator& op, int count, bool vectors) {
  if (count <= 0 || static_cast<std::size_t>(count) > op.size()) throw std::invalid_argument("eigen_solve: bad count");
  // Gershgorin bounds
  double lo = std::numeric_limits<double>::max(), hi = -lo;
  for (std::size_t i = 0; i < op.size(); ++i) {
    double r = (i > 0 ? std::abs(op.off[i - 1]) : 0.0) + (i + 1 < op.size() ? std::abs(op.off[i]) : 0.0);
    lo = std::min(lo, op.diag[i] - r);
    hi = std::max(hi, op.diag[i] + r);
  }
  std::vector<EigenPair> out(count);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t j) {
    out[j].lambda = eigenvalue_index(op, static_cast<int>(j), lo, hi);
    if (!vectors) return;
    std::vector<double> x = inverse_iteration(op, out[j].lambda);
    // back to beta = W^{-1/2} x, unit norm in the weighted product
    double nrm = 0;
    for (std::size_t i = 0; i < x.size(); ++i) nrm += x[i] * x[i];
    for (std::size_t i = 0; i < x.size(); ++i) x[i] /= std::sqrt(op.weight[i] * nrm);
    out[j].beta = std::move(x);
  });
  for (const auto& p : out)
    if (!std::isfinite(p.lambda)) throw std::runtime_error("eigen_solve: convergence failure");
  return out;
}

double rayleigh_quotient(const ModeOperator& op, const std::vector<double>& beta) {
  std::vector<double> t = op.apply(beta);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    num += op.weight[i] * beta[i] * t[i];
    den += op.weight[i] * beta[i] * beta[i];
  }
  return num / den;
}

std::vector<SweepRow> epsilon_sweep(int k, int n, int m, const std::vector<double>& eps, int count, const GridSpec& g) {
  std::vector<SweepRow> rows;
  GridSpec fine = g;
  fine.N = 2 * g.N + 1;  // interior nodes of the halved spacing include the coarse ones
  for (double e : eps) {
    auto coarse = eigen_solve(build_mode_operator(k, n, m, e, g), count, false);
    auto ref = eigen_solve(build_mode_operator(k, n, m, e, fine), count, false);
    for (int j = 0; j < count; ++j)
      rows.push_back({k, n, m, e, j, coarse[j].lambda, std::abs(coarse[j].lambda - ref[j].lambda) / std::abs(ref[j].lambda)});
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "k,n,m,eps,j,lambda,refinement_delta\n";
  os << std::setprecision(12);
  for (const auto& r : rows)
    os << r.k << ',' << r.n << ',' << r.m << ',' << r.eps << ',' << r.j << ',' << r.lambda << ',' << r.refinement_delta
       << '\n';
}

}  // namespace strata
