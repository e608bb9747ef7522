#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "strata/enveloping.hpp"
#include "strata/heisenberg_fourier.hpp"
#include "strata/series.hpp"
#include "strata/siegel_veech.hpp"
#include "strata/special_fn.hpp"
#include "strata/spectral.hpp"
#include "strata/verify.hpp"

namespace py = pybind11;
using namespace strata;

namespace {

RunConfig config_from(const std::map<std::string, std::string>& overrides) {
  RunConfig c;
  for (const auto& [k, v] : overrides) c.set(k, v);
  return c;
}

}  // namespace

PYBIND11_MODULE(_strata, m) {
  m.doc() = "Numerical layer for affine-lattice strata: series, lattice sums, operators, spectra";

  m.def("config_defaults", [] { return RunConfig{}.to_map(); });
  m.def(
      "run_suite_json",
      [](const std::string& suite, const std::map<std::string, std::string>& overrides) {
        RunConfig c = config_from(overrides);
        Report r;
        {
          py::gil_scoped_release release;
          r = run_suite(suite, c);
        }
        return combine({r}, c.to_json()).dump();
      },
      py::arg("suite"), py::arg("overrides") = std::map<std::string, std::string>{});
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"strata"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));

  // exact layer
  m.def("casimir_saff", [] { return casimir_saff().str(); });
  m.def("casimir_sl2", [] { return casimir_sl2_ordered().str(); });
  m.def("casimir_saff_is_central", [] { return is_central(casimir_saff()); });

  // special functions
  m.def("whittaker_w", [](double kappa, cplx mu, double z) { return whittaker_w({kappa, mu}, z); }, py::arg("kappa"),
        py::arg("mu"), py::arg("z"));
  m.def("bessel_j", &bessel_j, py::arg("k"), py::arg("x"));
  m.def(
      "hankel_transform",
      [](int k, std::function<double(double)> f, double support, std::vector<double> s) {
        RadialProfile p{[f](double r) { return cplx(f(r)); }, support};
        return hankel_transform(k, p, s);
      },
      py::arg("k"), py::arg("f"), py::arg("support"), py::arg("s"));

  // series
  m.def(
      "eisenstein",
      [](int k, int mm, double a, double c, std::array<double, 4> pt, double rho) {
        auto v = eisenstein(k, mm, beta_power_exp(a, c), {pt[0], pt[1], pt[2], pt[3]}, rho);
        return py::make_tuple(v.value, v.tail_bound, v.terms);
      },
      py::arg("k"), py::arg("m"), py::arg("a"), py::arg("c"), py::arg("point"), py::arg("rho"),
      "E_{k;m,beta} with beta = y^a e^{-c y} at (x, y, u, v): (value, tail bound, terms)");
  m.def(
      "poincare",
      [](int k, int n, int mm, double a, double c, std::array<double, 4> pt, double rho) {
        auto v = poincare(k, n, mm, beta_power_exp(a, c), {pt[0], pt[1], pt[2], pt[3]}, rho);
        return py::make_tuple(v.value, v.tail_bound, v.terms);
      },
      py::arg("k"), py::arg("n"), py::arg("m"), py::arg("a"), py::arg("c"), py::arg("point"), py::arg("rho"));

  // lattice sums
  m.def(
      "sv_value",
      [](int k, double R, int M, std::array<double, 4> pt) {
        return sv_rel_M(KTypeFunction{bump_profile(k, R), k}, {pt[0], pt[1], pt[2], pt[3]}, M);
      },
      py::arg("k"), py::arg("R"), py::arg("M"), py::arg("point"), "weight-k lattice sum of the bump r^|k|(1-r^2/R^2)^6");
  m.def(
      "sv_mean",
      [](double R, int M, std::size_t samples, std::uint64_t seed) {
        MCSpec mc;
        mc.samples = samples;
        mc.seed = seed;
        KTypeFunction f{bump_profile(0, R), 0};
        MomentEstimate est;
        {
          py::gil_scoped_release release;
          est = sv_mean_mc(f, M, mc);
        }
        return py::make_tuple(est.value.real(), est.stderr_, M * M * f.integral().real());
      },
      py::arg("R"), py::arg("M"), py::arg("samples"), py::arg("seed") = 1, "(measured, stderr, predicted M^2 int f)");
  m.def(
      "sv_coefficient",
      [](int k, double R, int M, int mt, double y) {
        KTypeFunction f{bump_profile(k, R, 8), k};
        QuadratureSpec q;
        cplx measured = coeff_H0(sv_modular(f, M), 0, mt, y, q);
        return py::make_tuple(measured, sv_coefficient_predicted(f, M, mt, y));
      },
      py::arg("k"), py::arg("R"), py::arg("M"), py::arg("mt"), py::arg("y"));

  // spectrum
  m.def(
      "mode_eigenvalues",
      [](int k, int n, int mm, double eps, int count, int grid_n) {
        GridSpec g;
        g.N = grid_n;
        std::vector<double> out;
        for (auto& p : eigen_solve(build_mode_operator(k, n, mm, eps, g), count, false)) out.push_back(p.lambda);
        return out;
      },
      py::arg("k"), py::arg("n"), py::arg("m"), py::arg("eps"), py::arg("count") = 5, py::arg("grid_n") = 2048);
}
