#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "emscat/shape_derivative.hpp"

using namespace emscat;

namespace {

std::mt19937_64 rng(59);
Real urand(Real a, Real b) { return std::uniform_real_distribution<Real>(a, b)(rng); }

StarShape bumpy_star(int n_r) {
  StarShape s = StarShape::sphere(n_r, 1.0);
  s.r_coeffs.at(2, 0) += 0.2;
  add_real_mode(s.r_coeffs, 3, 1, Complex(0.04, 0.02));
  return s;
}

ScalarCoeffVector random_real_coeffs(int deg, Real scale) {
  ScalarCoeffVector c(deg);
  for (auto& v : c.coeffs) v = Complex(urand(-scale, scale), urand(-scale, scale));
  make_real_symmetric(c);
  return c;
}

std::unique_ptr<ForwardContext> make_ctx(const StarShape& s, const DielectricConfig& cfg, int n,
                                         int n_far) {
  ForwardOptions opts;
  opts.n = n;
  opts.n_far = n_far;
  return std::make_unique<ForwardContext>(star_to_param(s), cfg, opts);
}

FarFieldSamples far_diff(const FarFieldSamples& a, const FarFieldSamples& b) {
  FarFieldSamples d = a;
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] = a.values[i] - b.values[i];
  return d;
}

}  // namespace

TEST_CASE("derivative boundary data vanishes at zero contrast and zero direction") {
  StarShape s = bumpy_star(4);
  DielectricConfig zero_contrast{pi / 2, pi / 2, 1.0, 1.0};
  auto ctx = make_ctx(s, zero_contrast, 8, 8);
  auto sol = ctx->solve_direct(PlaneWave{{0, 0, 1}, {1, 0, 0}});
  ScalarCoeffVector xi = random_real_coeffs(4, 0.3);
  DerivativeBoundaryData d = derivative_boundary_data(*ctx, sol.u, xi);
  for (const Complex& v : d.gprime.coeffs) CHECK(std::abs(v) == 0.0);
  for (const Complex& v : d.fprime.coeffs) CHECK(std::abs(v) == 0.0);

  DielectricConfig cfg{pi / 2, pi, 1.0, 2.0};
  auto ctx2 = make_ctx(s, cfg, 8, 8);
  auto sol2 = ctx2->solve_direct(PlaneWave{{0, 0, 1}, {1, 0, 0}});
  ScalarCoeffVector zero(4);
  DerivativeBoundaryData d2 = derivative_boundary_data(*ctx2, sol2.u, zero);
  for (const Complex& v : d2.gprime.coeffs) CHECK(std::abs(v) == 0.0);
  for (const Complex& v : d2.fprime.coeffs) CHECK(std::abs(v) == 0.0);
  FarFieldSamples df = apply_Fprime(*ctx2, sol2.u, zero);
  CHECK(farfield_norm(df) == 0.0);
}

TEST_CASE("derivative application is linear") {
  StarShape s = bumpy_star(4);
  DielectricConfig cfg{pi / 2, pi, 1.0, 2.0};
  auto ctx = make_ctx(s, cfg, 8, 8);
  auto sol = ctx->solve_direct(PlaneWave{{0, 0, 1}, {1, 0, 0}});
  ScalarCoeffVector x1 = random_real_coeffs(4, 0.3);
  ScalarCoeffVector x2 = random_real_coeffs(4, 0.3);
  ScalarCoeffVector lin(4);
  for (std::size_t i = 0; i < lin.coeffs.size(); ++i)
    lin.coeffs[i] = 2.0 * x1.coeffs[i] - 0.5 * x2.coeffs[i];
  FarFieldSamples f1 = apply_Fprime(*ctx, sol.u, x1);
  FarFieldSamples f2 = apply_Fprime(*ctx, sol.u, x2);
  FarFieldSamples fl = apply_Fprime(*ctx, sol.u, lin);
  Real scale = farfield_norm(f1) + farfield_norm(f2);
  FarFieldSamples combo = f1;
  for (std::size_t i = 0; i < combo.values.size(); ++i)
    combo.values[i] = Complex(2.0) * f1.values[i] - Complex(0.5) * f2.values[i];
  CHECK(farfield_dist(fl, combo) < 1e-11 * scale);
}

TEST_CASE("taylor remainder of the boundary-to-far-field map is second order") {
  StarShape s = bumpy_star(5);
  DielectricConfig cfg{pi / 2, pi, 1.0, 2.0};
  int n = 10, n_far = 8;
  auto ctx = make_ctx(s, cfg, n, n_far);
  PlaneWave pw{{0, 0, 1}, {1, 0, 0}};
  auto sol = ctx->solve_direct(pw);
  ScalarCoeffVector xi = random_real_coeffs(4, 0.5);
  FarFieldSamples dF = apply_Fprime(*ctx, sol.u, xi);

  std::vector<Real> ts = {1e-2, 1e-3};
  std::vector<Real> errs;
  for (Real t : ts) {
    StarShape pert = s;
    ScalarCoeffVector padded(s.degree());
    for (int l = 0; l <= xi.n; ++l)
      for (int j = -l; j <= l; ++j) padded.at(l, j) = xi.at(l, j);
    for (std::size_t i = 0; i < pert.r_coeffs.coeffs.size(); ++i)
      pert.r_coeffs.coeffs[i] += t * padded.coeffs[i];
    auto ctx_t = make_ctx(pert, cfg, n, n_far);
    auto sol_t = ctx_t->solve_direct(pw);
    FarFieldSamples lin = sol.far;
    for (std::size_t i = 0; i < lin.values.size(); ++i)
      lin.values[i] = sol.far.values[i] + Complex(t) * dF.values[i];
    errs.push_back(farfield_dist(sol_t.far, lin));
  }
  Real slope = std::log10(errs[0] / errs[1]);
  CHECK(slope >= 1.9);
  CHECK(slope <= 2.3);
}

TEST_CASE("adjoint identity in the H^s pairing") {
  StarShape s = bumpy_star(4);
  DielectricConfig cfg{pi / 2, pi, 1.0, 2.0};
  int n = 10, n_far = 10, deg = 4;
  Real sob = 2.5;
  auto ctx = make_ctx(s, cfg, n, n_far);
  PlaneWave pw{{0, 0, 1}, {1, 0, 0}};
  auto sol = ctx->solve_direct(pw);
  QuadratureGrid fg = build_gauss_grid(n_far);
  for (int trial = 0; trial < 3; ++trial) {
    ScalarCoeffVector xi = random_real_coeffs(deg, 0.4);
    FarFieldSamples h;
    h.n_far = n_far;
    h.values.resize(fg.size());
    for (int rho = 0; rho < fg.n_phi(); ++rho)
      for (int tau = 0; tau < fg.n_theta(); ++tau) {
        Vec3 xh = fg.node(rho, tau);
        CVec3 v(Complex(urand(-1, 1), urand(-1, 1)), Complex(urand(-1, 1), urand(-1, 1)),
                Complex(urand(-1, 1), urand(-1, 1)));
        h.values[fg.node_index(rho, tau)] = v - dot(v, xh) * CVec3(xh);
      }
    FarFieldSamples fpx = apply_Fprime(*ctx, sol.u, xi);
    Real lhs = farfield_inner(fpx, h);
    ScalarCoeffVector ah = apply_Fprime_adjoint(*ctx, {sol.u}, {h}, sob, deg);
    Real rhs = std::real(sobolev_inner(xi, ah, sob));
    CHECK(std::abs(lhs - rhs) < 2e-5 * (std::abs(lhs) + std::abs(rhs)));
  }
  // h = 0 maps to zero
  FarFieldSamples zero;
  zero.n_far = n_far;
  zero.values.assign(fg.size(), CVec3{});
  ScalarCoeffVector az = apply_Fprime_adjoint(*ctx, {sol.u}, {zero}, sob, deg);
  for (const Complex& v : az.coeffs) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("adjoint vanishes at zero contrast") {
  StarShape s = bumpy_star(3);
  DielectricConfig cfg{pi / 2, pi / 2, 1.0, 1.0};
  auto ctx = make_ctx(s, cfg, 6, 6);
  auto sol = ctx->solve_direct(PlaneWave{{0, 0, 1}, {1, 0, 0}});
  QuadratureGrid fg = build_gauss_grid(6);
  FarFieldSamples h;
  h.n_far = 6;
  h.values.resize(fg.size());
  for (int rho = 0; rho < fg.n_phi(); ++rho)
    for (int tau = 0; tau < fg.n_theta(); ++tau) {
      Vec3 xh = fg.node(rho, tau);
      CVec3 v(Complex(urand(-1, 1), 0.), Complex(urand(-1, 1), 0.), Complex(urand(-1, 1), 0.));
      h.values[fg.node_index(rho, tau)] = v - dot(v, xh) * CVec3(xh);
    }
  ScalarCoeffVector a = apply_Fprime_adjoint(*ctx, {sol.u}, {h}, 2.5, 3);
  for (const Complex& v : a.coeffs) CHECK(std::abs(v) == 0.0);
}
