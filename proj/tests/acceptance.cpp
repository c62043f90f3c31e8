// Acceptance suite: one pass/fail line per criterion with the measured
// values. Exit status is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <vector>

#include "emscat/irgnm.hpp"
#include "emscat/shape_derivative.hpp"

using namespace emscat;

namespace {

int failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", idx, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

using accl_clock = std::chrono::steady_clock;
double secs_since(accl_clock::time_point t0) {
  return std::chrono::duration<double>(accl_clock::now() - t0).count();
}

std::mt19937_64 rng(2024);
Real urand(Real a, Real b) { return std::uniform_real_distribution<Real>(a, b)(rng); }

std::vector<PlaneWave> axis_waves() {
  return {{{0, 0, 1}, {1, 0, 0}}, {{0, 0, -1}, {1, 0, 0}}, {{1, 0, 0}, {0, 1, 0}},
          {{-1, 0, 0}, {0, 1, 0}}, {{0, 1, 0}, {0, 0, 1}}, {{0, -1, 0}, {0, 0, 1}}};
}

FarFieldSamples random_tangential_far(int n_far) {
  QuadratureGrid fg = build_gauss_grid(n_far);
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
  return h;
}

// ---------------------------------------------------------------- 1, 2, 3
void table_columns() {
  auto t0 = accl_clock::now();
  DielectricConfig peanut_cfg{pi / 2, pi, 1.0, 2.0};
  auto rows = convergence_experiment(make_shape("peanut"), peanut_cfg, {5, 10, 15, 20}, 25);
  double t_peanut = secs_since(t0);

  const Real ref[4] = {2.0487e-03, 4.2497e-05, 2.5742e-07, 1.9720e-09};
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 4; ++i) {
    Real ratio = rows[i].err_ps / ref[i];
    ok = ok && ratio < 10.0 && ratio > 0.1;
    detail += fmt("n=%d: %.4e (ref %.4e)  ", rows[i].n, rows[i].err_ps, ref[i]);
  }
  ok = ok && rows[3].err_ps <= 1e-8;
  ok = ok && t_peanut <= 300.0;
  detail += fmt("n20<=1e-8: %s, %.0fs<=300s", rows[3].err_ps <= 1e-8 ? "yes" : "no", t_peanut);
  report(1, "peanut point-source column", ok, detail);

  Real re_err = std::abs(rows[3].re_pw - 0.928048382);
  Real im_err = std::abs(rows[3].im_pw - 0.389255828);
  report(2, "peanut plane-wave values at n=20", re_err <= 5e-7 && im_err <= 5e-7,
         fmt("Re=%.9f (|d|=%.1e), Im=%.9f (|d|=%.1e), tol 5e-7", rows[3].re_pw, re_err,
             rows[3].im_pw, im_err));

  DielectricConfig tetra_cfg{pi / 4, pi / 2, 1.0, 2.0};
  auto trows =
      convergence_experiment(make_shape("rounded_tetrahedron"), tetra_cfg, {10, 15, 20, 25}, 25);
  const Real tref[4] = {2.7042e-04, 2.7724e-05, 4.8104e-06, 5.1661e-07};
  bool tok = true;
  std::string tdetail;
  for (int i = 0; i < 4; ++i) {
    Real ratio = trows[i].err_ps / tref[i];
    tok = tok && ratio < 10.0 && ratio > 0.1;
    if (i > 0) tok = tok && trows[i].err_ps < trows[i - 1].err_ps;
    tdetail += fmt("n=%d: %.4e (ref %.4e)  ", trows[i].n, trows[i].err_ps, tref[i]);
  }
  report(3, "rounded tetrahedron point-source column", tok, tdetail);
}

// ------------------------------------------------------------------- 4
void zero_contrast() {
  bool ok = true;
  std::string detail;
  struct Case {
    const char* label;
    Real ke;
    int n;
  };
  for (Case c : {Case{"sphere", pi / 2, 12}, Case{"peanut", pi / 2, 25},
                 Case{"rounded_tetrahedron", pi / 4, 25}}) {
    DielectricConfig cfg{c.ke, c.ke, 1.0, 1.0};
    ForwardOptions o;
    o.n = c.n;
    o.n_far = 12;
    ForwardContext ctx(make_shape(c.label), cfg, o);
    Real kerr = 0;
    for (int i = 0; i < ctx.kdm().rows; ++i)
      for (int j = 0; j < ctx.kdm().cols; ++j)
        kerr = std::max(kerr, std::abs(ctx.kdm()(i, j) - (i == j ? 2.0 : 0.0)));
    Real worst = 0;
    for (const PlaneWave& pw :
         {PlaneWave{{0, 0, 1}, {1, 0, 0}}, PlaneWave{{0, 1, 0}, {0, 0, 1}}}) {
      auto sol = ctx.solve_direct(pw);
      Real unorm = 0;
      for (const Complex& v : sol.u) unorm = std::max(unorm, std::abs(v));
      worst = std::max(worst, farfield_norm(sol.far) / unorm);
    }
    ok = ok && kerr < 1e-14 && worst <= 1e-10;
    detail += fmt("%s(n=%d): |KDM-2I|=%.1e far=%.1e  ", c.label, c.n, kerr, worst);
  }
  {
    StarShape s = StarShape::sphere(4, 1.0);
    s.r_coeffs.at(2, 0) += 0.2;
    DielectricConfig cfg{pi / 2, pi / 2, 1.0, 1.0};
    ForwardOptions o;
    o.n = 18;
    o.n_far = 12;
    ForwardContext ctx(star_to_param(s), cfg, o);
    auto sol = ctx.solve_direct(PlaneWave{{0, 0, 1}, {1, 0, 0}});
    Real unorm = 0;
    for (const Complex& v : sol.u) unorm = std::max(unorm, std::abs(v));
    Real rel = farfield_norm(sol.far) / unorm;
    ok = ok && rel <= 1e-10;
    detail += fmt("star(n=18): far=%.1e", rel);
  }
  report(4, "zero-contrast collapse (plane waves; tetrahedron capped by its C^4 geometry)", ok,
         detail);
}

// ------------------------------------------------------------------- 5
void basis_suite() {
  bool ok = true;
  std::string detail;
  {
    int n = 10;
    QuadratureGrid g = build_gauss_grid(n);
    Real worst = 0;
    for (int l = 1; l <= 2 * n + 1; l += 2)
      for (int j : {0, -1, std::min(l, 3)}) {
        Complex acc{};
        for (int rho = 0; rho < g.n_phi(); ++rho)
          for (int tau = 0; tau < g.n_theta(); ++tau)
            acc += g.weight(rho, tau) *
                   eval_scalar_harmonic({l, j, 1}, g.theta_nodes[tau], g.phi_nodes[rho]);
        worst = std::max(worst, std::abs(acc));
      }
    ok = ok && worst <= 1e-12;
    detail += fmt("exactness(n=10): %.1e  ", worst);
  }
  {
    int n = 20;
    QuadratureGrid g = build_gauss_grid(n);
    HarmonicTables t = build_harmonic_tables(g.theta_nodes, n);
    Real worst = 0;
    std::vector<std::pair<int, int>> probes = {{1, 0}, {5, -3}, {12, 7}, {20, 20}, {20, -11}};
    for (auto [l, j] : probes)
      for (int kind : {1, 2}) {
        VshCoeffVector c(n);
        c.at(kind, l, j) = 1.0;
        VshCoeffVector back = project_tangential(g, t, synthesize_tangential(g, t, c));
        for (std::size_t i = 0; i < back.coeffs.size(); ++i)
          worst = std::max(worst, std::abs(back.coeffs[i] - c.coeffs[i]));
      }
    ok = ok && worst <= 1e-12;
    detail += fmt("orthonormality(n=20): %.1e  ", worst);
  }
  {
    int n = 20, npr = 2 * n + 1;
    QuadratureGrid outer = build_gauss_grid(n), inner = build_gauss_grid(npr);
    std::vector<Real> alpha = singular_weights(inner, npr);
    Real worst = 0;
    for (int l = 0; l <= n; l += 2) {
      int j = std::min(l, 2);
      for (int tau : {0, 7, 14, 20}) {
        Real th = outer.theta_nodes[tau], ph = outer.phi_nodes[5];
        Mat3 T = rotation_to_north(th, ph);
        Complex acc{};
        for (int r2 = 0; r2 < inner.n_phi(); ++r2)
          for (int t2 = 0; t2 < inner.n_theta(); ++t2) {
            SphCoord sy = angles_from_unit(T.apply_t(inner.node(r2, t2)));
            acc += inner.weight(r2, t2) * alpha[t2] *
                   eval_scalar_harmonic({l, j, 1}, sy.theta, sy.phi);
          }
        worst = std::max(
            worst,
            std::abs(acc - 4 * pi / (2 * l + 1) * eval_scalar_harmonic({l, j, 1}, th, ph)));
      }
    }
    ok = ok && worst <= 1e-8;
    detail += fmt("single-layer eigenrelation(n=20): %.1e", worst);
  }
  report(5, "quadrature and basis suite", ok, detail);
}

// ------------------------------------------------------------------- 6
void transpose_relation() {
  DielectricConfig cfg{pi / 2, pi, 1.0, 2.0};
  int n = 10;
  auto peanut = make_shape("peanut");
  TransmissionBlocks b = assemble_transmission_blocks(*peanut, cfg, n, 2 * n + 1);
  ZMatrix kdm = assemble_KDM(cfg, b.M_ext, b.M_int, b.Cdiff);
  ZMatrix kim = assemble_KIM(cfg, b.M_ext, b.M_int, b.Cdiff);
  ZMatrix rel = kim_from_kdm_transpose(n, kdm);
  ZMatrix diff = kim;
  for (std::size_t i = 0; i < diff.a.size(); ++i) diff.a[i] -= rel.a[i];
  Real rel_err = frobenius_norm(diff) / frobenius_norm(kim);

  LuFactor lu(kdm);
  int side = kdm.rows;
  std::vector<Complex> rhs(side);
  for (auto& v : rhs) v = Complex(urand(-1, 1), urand(-1, 1));
  std::vector<Complex> z1 = solve_kim_with_kdm_lu(n, lu, rhs);
  LuFactor lu2(rel);
  std::vector<Complex> z2 = lu2.solve(rhs);
  Real zerr = 0, zs = 0;
  for (int i = 0; i < side; ++i) {
    zerr = std::max(zerr, std::abs(z1[i] - z2[i]));
    zs = std::max(zs, std::abs(z2[i]));
  }
  bool ok = rel_err <= 1e-10 && zerr <= 1e-12 * std::max(1.0, zs);
  report(6, "transpose relation and one-LU reuse", ok,
         fmt("block-assembled KIM vs -(R+R)G KDM^T G(R+R): %.3e (tol 1e-10; independently "
             "assembled systems agree only to the entrywise discretization error) | reuse vs "
             "fresh transposed solve: %.1e (tol 1e-12)",
             rel_err, zerr));
}

// ------------------------------------------------------------------- 7
void derivative_suite() {
  StarShape s = StarShape::sphere(6, 1.0);
  s.r_coeffs.at(2, 0) += 0.2;
  add_real_mode(s.r_coeffs, 3, 1, Complex(0.04, 0.02));
  DielectricConfig cfg{pi / 2, pi, 1.0, 2.0};
  ForwardOptions o;
  o.n = 12;
  o.n_far = 12;
  ForwardContext ctx(star_to_param(s), cfg, o);
  PlaneWave pw{{0, 0, 1}, {1, 0, 0}};
  auto sol = ctx.solve_direct(pw);

  ScalarCoeffVector xi(4);
  xi.at(1, 0) = 0.3;
  add_real_mode(xi, 2, 1, Complex(0.1, 0.05));
  FarFieldSamples dF = apply_Fprime(ctx, sol.u, xi);
  std::vector<Real> errs;
  for (Real t : {1e-2, 1e-3}) {
    StarShape pert = s;
    for (int l = 0; l <= xi.n; ++l)
      for (int j = -l; j <= l; ++j) pert.r_coeffs.at(l, j) += t * xi.at(l, j);
    ForwardContext ctxt(star_to_param(pert), cfg, o);
    auto solt = ctxt.solve_direct(pw);
    FarFieldSamples lin = sol.far;
    for (std::size_t i = 0; i < lin.values.size(); ++i)
      lin.values[i] = sol.far.values[i] + Complex(t) * dF.values[i];
    errs.push_back(farfield_dist(solt.far, lin));
  }
  Real slope = std::log10(errs[0] / errs[1]);

  Real sob = 2.5;
  Real worst_adj = 0;
  for (int trial = 0; trial < 10; ++trial) {
    ScalarCoeffVector x(4);
    for (auto& v : x.coeffs) v = Complex(urand(-1, 1), urand(-1, 1));
    make_real_symmetric(x);
    FarFieldSamples h = random_tangential_far(o.n_far);
    Real lhs = farfield_inner(apply_Fprime(ctx, sol.u, x), h);
    ScalarCoeffVector ah = apply_Fprime_adjoint(ctx, {sol.u}, {h}, sob, 4);
    Real rhs = std::real(sobolev_inner(x, ah, sob));
    worst_adj = std::max(worst_adj, std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs)));
  }

  std::vector<Real> zero_disp(ctx.product_grid().size(), 0.0);
  DerivativeBoundaryData dz = derivative_boundary_data_from_displacement(ctx, sol.u, zero_disp);
  Real tang = 0;
  for (const Complex& v : dz.gprime.coeffs) tang = std::max(tang, std::abs(v));
  for (const Complex& v : dz.fprime.coeffs) tang = std::max(tang, std::abs(v));

  DielectricConfig zc{pi / 2, pi / 2, 1.0, 1.0};
  ForwardContext ctx0(star_to_param(s), zc, o);
  auto sol0 = ctx0.solve_direct(pw);
  ScalarCoeffVector xr(4);
  for (auto& v : xr.coeffs) v = Complex(urand(-1, 1), urand(-1, 1));
  make_real_symmetric(xr);
  DerivativeBoundaryData d0 = derivative_boundary_data(ctx0, sol0.u, xr);
  Real zcmax = 0;
  for (const Complex& v : d0.gprime.coeffs) zcmax = std::max(zcmax, std::abs(v));
  for (const Complex& v : d0.fprime.coeffs) zcmax = std::max(zcmax, std::abs(v));

  bool ok = slope >= 1.9 && worst_adj <= 1e-6 && tang == 0.0 && zcmax == 0.0;
  report(7, "derivative suite", ok,
         fmt("taylor slope %.3f (>=1.9), adjoint identity %.2e (<=1e-6), tangential-xi data "
             "%.1e, zero-contrast data %.1e (both exactly 0)",
             slope, worst_adj, tang, zcmax));
}

// ------------------------------------------------------------------- 8
namespace {
Real measurement_norm(const MeasurementSet& m) {
  Real acc = 0;
  for (const auto& d : m.data) {
    Real v = farfield_norm(d);
    acc += v * v;
  }
  return std::sqrt(acc);
}
}  // namespace

void inverse_suite() {
  DielectricConfig cfg{pi / 2, pi, 1.0, 2.0};
  auto waves = axis_waves();
  IrgnmConfig icfg;
  icfg.n_fwd = 12;
  icfg.n_far = 25;
  icfg.s = 2.5;
  icfg.tau = 4.0;
  icfg.max_newton = 12;
  icfg.cg_max = 60;

  bool ok_a;
  std::string det_a;
  {
    auto t0 = accl_clock::now();
    StarShape truth = StarShape::sphere(2, 1.3);
    MeasurementSet meas = synthesize_data(truth, cfg, waves, 0.0, 11, icfg.n_fwd + 5, icfg.n_far);
    IrgnmConfig c = icfg;
    c.n_inv = 4;
    c.max_newton = 10;
    IrgnmResult res = run_irgnm(meas, c, cfg, StarShape::sphere(4, 1.0));
    Real r_rec = std::real(res.final_shape.r_coeffs.at(0, 0)) / std::sqrt(4 * pi);
    double el = secs_since(t0);
    ok_a = std::abs(r_rec - 1.3) / 1.3 <= 1e-3 && res.history.size() <= 11 && el <= 900;
    det_a = fmt("(a) r=%.6f (want 1.3, 1e-3 rel), %zu iterates, %s, %.0fs", r_rec,
                res.history.size(), res.stop_reason.c_str(), el);
  }

  bool ok_b;
  std::string det_b;
  {
    auto t0 = accl_clock::now();
    StarShape truth = StarShape::sphere(4, 1.15);
    truth.r_coeffs.at(2, 0) += 0.25;
    add_real_mode(truth.r_coeffs, 2, 2, Complex(0.08, 0.05));
    Real rt = 1 / std::sqrt(2.0);
    std::vector<PlaneWave> waves_b = waves;
    waves_b.push_back({{rt, rt, 0}, {0, 0, 1}});
    waves_b.push_back({{-rt, -rt, 0}, {0, 0, 1}});
    waves_b.push_back({{0, rt, rt}, {1, 0, 0}});
    waves_b.push_back({{0, -rt, -rt}, {1, 0, 0}});
    waves_b.push_back({{rt, 0, rt}, {0, 1, 0}});
    waves_b.push_back({{-rt, 0, -rt}, {0, 1, 0}});
    MeasurementSet meas =
        synthesize_data(truth, cfg, waves_b, 0.01, 13, icfg.n_fwd + 5, icfg.n_far);
    IrgnmConfig c = icfg;
    c.n_inv = 4;
    c.max_newton = 20;
    c.alpha0 = 0.02 * measurement_norm(meas) * measurement_norm(meas);
    IrgnmResult res = run_irgnm(meas, c, cfg, StarShape::sphere(4, 1.0));
    bool monotone = true;
    for (std::size_t i = 1; i < res.history.size(); ++i)
      monotone = monotone && res.history[i].residual <= res.history[i - 1].residual * (1 + 1e-12);
    auto l2err = [&](const ScalarCoeffVector& r) {
      Real acc = 0;
      for (int l = 0; l <= truth.degree(); ++l)
        for (int j = -l; j <= l; ++j) {
          Complex have = (l <= r.n) ? r.at(l, j) : Complex{};
          acc += std::norm(have - truth.r_coeffs.at(l, j));
        }
      return std::sqrt(acc);
    };
    Real e0 = l2err(res.history.front().r_coeffs);
    Real ef = l2err(res.final_shape.r_coeffs);
    double el = secs_since(t0);
    ok_b = monotone && res.stop_reason == "discrepancy" && ef <= 0.2 * e0 && el <= 900;
    det_b = fmt("(b) stop=%s after %zu iterates, monotone=%s, radial L2 error %.2e -> %.2e "
                "(<=20%%), %.0fs",
                res.stop_reason.c_str(), res.history.size(), monotone ? "yes" : "no", e0, ef, el);
  }

  bool ok_c;
  std::string det_c;
  {
    StarShape truth = StarShape::sphere(4, 1.15);
    truth.r_coeffs.at(2, 0) += 0.25;
    IrgnmConfig c = icfg;
    c.n_inv = 4;
    c.max_newton = 25;
    std::vector<int> stops;
    det_c = "(c) stop index per noise level:";
    for (Real lvl : {0.005, 0.01, 0.02, 0.04}) {
      MeasurementSet meas =
          synthesize_data(truth, cfg, waves, lvl, 17, icfg.n_fwd + 5, icfg.n_far);
      c.alpha0 = 0.02 * measurement_norm(meas) * measurement_norm(meas);
      IrgnmResult res = run_irgnm(meas, c, cfg, StarShape::sphere(4, 1.0));
      int stop = res.stop_reason == "discrepancy" ? res.history.back().N : -1;
      stops.push_back(stop);
      det_c += fmt(" %.3f->%d", lvl, stop);
    }
    ok_c = true;
    for (std::size_t i = 0; i + 1 < stops.size(); ++i)
      ok_c = ok_c && stops[i] >= 0 && stops[i + 1] >= 0 && stops[i] >= stops[i + 1];
    det_c += " (nonincreasing in delta)";
  }
  report(8, "inverse suite", ok_a && ok_b && ok_c, det_a + " | " + det_b + " | " + det_c);
}

// ------------------------------------------------------------------- 9
void cross_method() {
  DielectricConfig cfg{pi / 2, pi, 1.0, 2.0};
  ForwardOptions o;
  o.n = 15;
  o.n_far = 25;
  ForwardContext ctx(make_shape("peanut"), cfg, o);
  PlaneWave pw{{0, 0, 1}, {1, 0, 0}};
  auto direct = ctx.solve_direct(pw);
  std::vector<Complex> gf = jump_rhs_from_incident(ctx, pw);
  FarFieldSamples far_ind = ctx.far().from_indirect(ctx.solve_indirect(gf, true));
  Real err = farfield_max_error(far_ind, direct.far);
  report(9, "direct/indirect cross-method agreement at n=15", err <= 1e-8,
         fmt("max pointwise difference %.3e (tol 1e-8; both methods carry ~1e-6 discretization "
             "error at n=15; agreement reaches 1e-8 near n=21)",
             err));
}

}  // namespace

int main(int argc, char** argv) {
  // optional arguments select individual criteria (1-9); default runs all
  std::vector<bool> want(10, argc <= 1);
  for (int i = 1; i < argc; ++i) {
    int k = std::atoi(argv[i]);
    if (k >= 1 && k <= 9) want[k] = true;
  }
  std::printf("acceptance suite\n================\n");
  auto t0 = accl_clock::now();
  if (want[1] || want[2] || want[3]) table_columns();
  if (want[4]) zero_contrast();
  if (want[5]) basis_suite();
  if (want[6]) transpose_relation();
  if (want[7]) derivative_suite();
  if (want[8]) inverse_suite();
  if (want[9]) cross_method();
  std::printf("================\n%d criterion(s) failed, total %.0fs\n", failures,
              secs_since(t0));
  return failures;
}
