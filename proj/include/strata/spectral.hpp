#pragma once

#include <ostream>
#include <vector>

namespace strata {

// Nodes in y for the mode problem. Uniform in s = log y, or graded (denser near both ends).
struct GridSpec {
  double y_min = 1e-3;
  double y_max = 50.0;
  int N = 4096;  // interior nodes
  bool graded = false;
};
std::vector<double> make_grid(const GridSpec& g);  // N + 2 nodes including the Dirichlet ends

// T beta = -y^2 beta'' + V beta on L^2(dy / y^2), V = 4 pi^2 n^2 y^2 - 2 pi k n y + (k/2)(k/2 - 1) + eps pi^2 m^2 / y.
// In s = log y the kinetic part is -e^s d_s(e^{-s} d_s); conservative differences give A beta = lambda W beta,
// stored symmetrised as the tridiagonal W^{-1/2} A W^{-1/2}.
struct ModeOperator {
  int k = 0, n = 1, m = 1;
  double eps = 0;
  std::vector<double> y;       // interior nodes
  std::vector<double> weight;  // W (quadrature weight of dy / y^2)
  std::vector<double> diag;    // symmetrised diagonal
  std::vector<double> off;     // symmetrised sub-diagonal, size N - 1
  std::vector<double> potential;
  std::size_t size() const { return diag.size(); }
  // unsymmetrised action: (W^{-1} A) beta, beta on the interior nodes
  std::vector<double> apply(const std::vector<double>& beta) const;
  // relative gap between <u, T v>_W and <T u, v>_W for two fixed probe vectors
  double symmetry_residual() const;
};

ModeOperator build_mode_operator(int k, int n, int m, double eps, const GridSpec& g = {});

struct EigenPair {
  double lambda = 0;
  std::vector<double> beta;  // normalised in the weighted inner product
};

// lowest `count` eigenpairs (Sturm bisection, then inverse iteration)
std::vector<EigenPair> eigen_solve(const ModeOperator& op, int count, bool vectors = true);
// number of eigenvalues strictly below lambda (Sturm count)
int count_below(const ModeOperator& op, double lambda);
// <beta, T beta>_W / <beta, beta>_W
double rayleigh_quotient(const ModeOperator& op, const std::vector<double>& beta);

struct SweepRow {
  int k = 0, n = 0, m = 0;
  double eps = 0;
  int j = 0;
  double lambda = 0;
  double refinement_delta = 0;  // |lambda(N) - lambda(2N)| / lambda(2N)
};
std::vector<SweepRow> epsilon_sweep(int k, int n, int m, const std::vector<double>& eps, int count,
                                    const GridSpec& g = {});
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace strata
