#include <cmath>
#include <random>

#include "doctest.h"
#include "emscat/quadrature.hpp"
#include "emscat/spherical_harmonics.hpp"

using namespace emscat;

namespace {

std::mt19937_64 rng(42);

Real urand(Real a, Real b) {
  std::uniform_real_distribution<Real> d(a, b);
  return d(rng);
}

}  // namespace

TEST_CASE("scalar harmonic fixed values") {
  CHECK(std::abs(eval_scalar_harmonic({0, 0, 1}, 0.7, 1.3) - 1.0 / std::sqrt(4 * pi)) < 1e-15);
  CHECK(std::abs(eval_scalar_harmonic({1, 0, 1}, 0.0, 0.0) - std::sqrt(3 / (4 * pi))) < 1e-14);
}

TEST_CASE("conjugation symmetry of scalar harmonics") {
  for (int trial = 0; trial < 50; ++trial) {
    int l = static_cast<int>(urand(0, 6.99));
    int j = static_cast<int>(urand(Real(-l), Real(l) + 0.99));
    Real th = urand(0.05, pi - 0.05), ph = urand(0, 2 * pi);
    Complex a = std::conj(eval_scalar_harmonic({l, j, 1}, th, ph));
    Complex b = Real((j % 2 == 0) ? 1 : -1) * eval_scalar_harmonic({l, -j, 1}, th, ph);
    CHECK(std::abs(a - b) < 1e-13);
  }
}

TEST_CASE("associated legendre theta-derivative against finite differences") {
  for (int l = 1; l <= 8; ++l)
    for (int m = 0; m <= l; ++m)
      for (Real th : {0.3, 1.1, 2.7}) {
        std::vector<Real> plm;
        assoc_legendre_table(l + 1, std::cos(th), std::sin(th), plm);
        Real d = assoc_legendre_dtheta(l, m, std::cos(th), plm);
        Real h = 1e-6;
        std::vector<Real> pp, pm;
        assoc_legendre_table(l, std::cos(th + h), std::sin(th + h), pp);
        assoc_legendre_table(l, std::cos(th - h), std::sin(th - h), pm);
        Real fd = (pp[plm_index(l, m)] - pm[plm_index(l, m)]) / (2 * h);
        CHECK(d == doctest::Approx(fd).epsilon(1e-7));
      }
}

TEST_CASE("vector harmonics are tangential and related by the quarter turn") {
  for (int trial = 0; trial < 30; ++trial) {
    int l = 1 + static_cast<int>(urand(0, 4.99));
    int j = static_cast<int>(urand(Real(-l), Real(l) + 0.99));
    Real th = urand(0.05, pi - 0.05), ph = urand(0, 2 * pi);
    Vec3 xh = unit_from_angles(th, ph);
    CVec3 y1 = eval_vector_harmonic({l, j, 1}, th, ph);
    CVec3 y2 = eval_vector_harmonic({l, j, 2}, th, ph);
    CHECK(std::abs(dot(y1, xh)) < 1e-13);
    CHECK(std::abs(dot(y2, xh)) < 1e-13);
    CVec3 want = cross(y1, xh);  // Y^(2) = Y^(1) x x̂
    CHECK(norm(want - y2) < 1e-13);
  }
}

TEST_CASE("pole branch matches the limit of the smooth branch") {
  for (int l : {1, 2, 5})
    for (int j : {-1, 1})
      for (int kind : {1, 2}) {
        CVec3 at_pole = eval_vector_harmonic({l, j, kind}, 0.0, 0.0);
        CVec3 near_pole = eval_vector_harmonic({l, j, kind}, 1e-6, 0.0);
        CHECK(norm(at_pole - near_pole) < 1e-5);
        CVec3 at_south = eval_vector_harmonic({l, j, kind}, pi, 0.0);
        CVec3 near_south = eval_vector_harmonic({l, j, kind}, pi - 1e-6, 0.0);
        CHECK(norm(at_south - near_south) < 1e-5);
      }
  // other orders vanish at the poles
  CHECK(norm(eval_vector_harmonic({3, 2, 1}, 0.0, 0.0)) == 0.0);
}

TEST_CASE("discrete gram matrix of the vector harmonics is the identity") {
  int n = 4;
  QuadratureGrid g = build_gauss_grid(n);
  HarmonicTables t = build_harmonic_tables(g.theta_nodes, n);
  for (int kind = 1; kind <= 2; ++kind)
    for (int l = 1; l <= n; ++l)
      for (int j = -l; j <= l; ++j) {
        VshCoeffVector c(n);
        c.at(kind, l, j) = 1.0;
        TangentialSamples s = synthesize_tangential(g, t, c);
        VshCoeffVector back = project_tangential(g, t, s);
        for (int k2 = 1; k2 <= 2; ++k2)
          for (int l2 = 1; l2 <= n; ++l2)
            for (int j2 = -l2; j2 <= l2; ++j2) {
              Complex want = (k2 == kind && l2 == l && j2 == j) ? 1.0 : 0.0;
              CHECK(std::abs(back.at(k2, l2, j2) - want) < 1e-12);
            }
      }
}

TEST_CASE("scalar projection: exactness, zero input, roundtrip") {
  int n = 4;
  QuadratureGrid g = build_gauss_grid(n);
  HarmonicTables t = build_harmonic_tables(g.theta_nodes, n);
  std::vector<CVec3> samples(g.size());
  for (int rho = 0; rho < g.n_phi(); ++rho)
    for (int tau = 0; tau < g.n_theta(); ++tau)
      samples[g.node_index(rho, tau)] =
          CVec3(eval_scalar_harmonic({2, 1, 1}, g.theta_nodes[tau], g.phi_nodes[rho]), 0.0, 0.0);
  auto c = project_scalar(g, t, samples);
  for (int l = 0; l <= n; ++l)
    for (int j = -l; j <= l; ++j) {
      Complex want = (l == 2 && j == 1) ? 1.0 : 0.0;
      CHECK(std::abs(c[0].at(l, j) - want) < 1e-12);
      CHECK(std::abs(c[1].at(l, j)) < 1e-14);
      CHECK(std::abs(c[2].at(l, j)) < 1e-14);
    }

  std::vector<Complex> zero(g.size(), Complex{});
  ScalarCoeffVector z = project_scalar_field(g, t, zero);
  for (const Complex& v : z.coeffs) CHECK(std::abs(v) == 0.0);

  // random degree-n scalar synthesized then projected reproduces itself
  ScalarCoeffVector rc(n);
  for (auto& v : rc.coeffs) v = Complex(urand(-1, 1), urand(-1, 1));
  std::vector<Complex> f = synthesize_scalar(g, t, rc);
  ScalarCoeffVector back = project_scalar_field(g, t, f);
  for (std::size_t i = 0; i < rc.coeffs.size(); ++i)
    CHECK(std::abs(back.coeffs[i] - rc.coeffs[i]) < 1e-12);
}

TEST_CASE("tangential projection kills the normal field and is linear") {
  int n = 3;
  QuadratureGrid g = build_gauss_grid(n);
  HarmonicTables t = build_harmonic_tables(g.theta_nodes, n);
  std::vector<CVec3> radial(g.size());
  for (int rho = 0; rho < g.n_phi(); ++rho)
    for (int tau = 0; tau < g.n_theta(); ++tau)
      radial[g.node_index(rho, tau)] = CVec3(g.node(rho, tau));
  VshCoeffVector c = project_tangential(g, t, radial);
  for (const Complex& v : c.coeffs) CHECK(std::abs(v) < 1e-12);

  // projection of Y^(2)_{3,-2} hits exactly that coefficient
  std::vector<CVec3> f(g.size());
  for (int rho = 0; rho < g.n_phi(); ++rho)
    for (int tau = 0; tau < g.n_theta(); ++tau)
      f[g.node_index(rho, tau)] =
          eval_vector_harmonic({3, -2, 2}, g.theta_nodes[tau], g.phi_nodes[rho]);
  VshCoeffVector c2 = project_tangential(g, t, f);
  CHECK(std::abs(c2.at(2, 3, -2) - 1.0) < 1e-12);
  c2.at(2, 3, -2) = 0.0;
  for (const Complex& v : c2.coeffs) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("spectral surface operators") {
  int n = 5;
  // div of curl of any scalar vanishes
  ScalarCoeffVector rc(n);
  for (auto& v : rc.coeffs) v = Complex(urand(-1, 1), urand(-1, 1));
  ScalarCoeffVector dc = surface_div(surface_curl(rc, n));
  for (const Complex& v : dc.coeffs) CHECK(std::abs(v) == 0.0);
  // div Y^(1)_{1,0} = -sqrt(2) Y_{1,0}
  VshCoeffVector u(n);
  u.at(1, 1, 0) = 1.0;
  ScalarCoeffVector d = surface_div(u);
  CHECK(std::abs(d.at(1, 0) + std::sqrt(2.0)) < 1e-15);
  // grad of the constant mode vanishes
  ScalarCoeffVector c0(n);
  c0.at(0, 0) = 3.7;
  VshCoeffVector gz = surface_grad(c0, n);
  for (const Complex& v : gz.coeffs) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("sobolev norm and embedding adjoint") {
  ScalarCoeffVector c(6);
  c.at(3, -2) = 1.0;
  CHECK(sobolev_norm(c, 1.5) == doctest::Approx(std::pow(10.0, 0.75)).epsilon(1e-14));
  CHECK(sobolev_norm(c, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (auto& v : c.coeffs) v *= 2.0;
  CHECK(sobolev_norm(c, 1.5) == doctest::Approx(2 * std::pow(10.0, 0.75)).epsilon(1e-14));
  ScalarCoeffVector e = sobolev_embed_adjoint(c, 1.5);
  CHECK(std::abs(e.at(3, -2) - c.at(3, -2) / std::pow(10.0, 1.5)) < 1e-14);
}

TEST_CASE("real-symmetry helpers") {
  ScalarCoeffVector c(3);
  add_real_mode(c, 2, 1, Complex(0.3, -0.4));
  add_real_mode(c, 0, 0, 1.0);
  CHECK(is_real_symmetric(c, 1e-14));
  // corresponding grid samples are real
  QuadratureGrid g = build_gauss_grid(3);
  HarmonicTables t = build_harmonic_tables(g.theta_nodes, 3);
  for (const Complex& v : synthesize_scalar(g, t, c)) CHECK(std::abs(std::imag(v)) < 1e-14);
  c.at(2, -1) = Complex(0.2, 0.4);
  CHECK(!is_real_symmetric(c, 1e-14));
  make_real_symmetric(c);
  CHECK(is_real_symmetric(c, 1e-14));
}
