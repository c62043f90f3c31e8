#include "emscat/shape_derivative.hpp"

#include <cmath>
#include <stdexcept>

namespace emscat {

namespace {

struct Contrasts {
  Real f1, f2, g1, g2;
};

Contrasts contrasts(const DielectricConfig& c) {
  Contrasts k;
  k.f1 = c.mu_e - c.mu_i;
  k.f2 = c.mu_e / (c.kappa_e * c.kappa_e) - c.mu_i / (c.kappa_i * c.kappa_i);
  k.g1 = c.kappa_e * c.kappa_e / c.mu_e - c.kappa_i * c.kappa_i / c.mu_i;
  k.g2 = 1.0 / c.mu_e - 1.0 / c.mu_i;
  return k;
}

// Trace row pulled to the surface at the product-grid nodes together with
// its surface divergence (div_Γ v)∘q = div_{S²}(Piola v)/J.
struct RowOnSurface {
  std::vector<CVec3> val;
  std::vector<Complex> divg;
};

RowOnSurface row_on_surface(const ForwardContext& ctx, const std::vector<Complex>& row_coeffs) {
  VshCoeffVector c(ctx.options().n);
  c.coeffs = row_coeffs;
  const QuadratureGrid& g = ctx.product_grid();
  const GridGeometry& geo = ctx.product_geometry();
  TangentialSamples ts = synthesize_tangential(g, ctx.product_tables(), c);
  std::vector<Complex> div_samples =
      synthesize_scalar(g, ctx.product_tables(), surface_div(c));
  RowOnSurface out;
  out.val.resize(g.size());
  out.divg.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const SurfacePoint& p = geo.pts[i];
    out.val[i] = (ts.comp_theta[i] * CVec3(p.t1) + ts.comp_phi[i] * CVec3(p.t2)) *
                 Complex(1.0 / p.jac);
    out.divg[i] = div_samples[i] / p.jac;
  }
  return out;
}

// xi(x̂)(x̂·n_q) at product-grid nodes; xi is zero-padded to degree n.
std::vector<Real> normal_displacement(const ForwardContext& ctx, const ScalarCoeffVector& xi) {
  int n = ctx.options().n;
  if (xi.n > n)
    throw std::invalid_argument("perturbation degree exceeds the forward discretization");
  ScalarCoeffVector padded(n);
  for (int l = 0; l <= xi.n; ++l)
    for (int j = -l; j <= l; ++j) padded.at(l, j) = xi.at(l, j);
  const QuadratureGrid& g = ctx.product_grid();
  std::vector<Complex> xs = synthesize_scalar(g, ctx.product_tables(), padded);
  const GridGeometry& geo = ctx.product_geometry();
  std::vector<Real> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    out[i] = std::real(xs[i]) * dot(geo.pts[i].normal, geo.pts[i].xhat);
  return out;
}

std::pair<std::vector<Complex>, std::vector<Complex>> split_rows(const std::vector<Complex>& u) {
  std::size_t half = u.size() / 2;
  return {{u.begin(), u.begin() + half}, {u.begin() + half, u.end()}};
}

// -c1 nu (v x n) pushed through the Piola transform and projected, plus
// -c2 curl_Γ(nu div_Γ v) evaluated spectrally.
VshCoeffVector one_row_data(const ForwardContext& ctx, const RowOnSurface& row,
                            const std::vector<Real>& nu, Real c1, Real c2) {
  const QuadratureGrid& g = ctx.product_grid();
  const GridGeometry& geo = ctx.product_geometry();
  TangentialSamples pushed;
  pushed.comp_theta.resize(g.size());
  pushed.comp_phi.resize(g.size());
  std::vector<Complex> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const SurfacePoint& p = geo.pts[i];
    CVec3 t = Complex(-c1 * nu[i]) * cross(row.val[i], p.normal);
    pushed.comp_theta[i] = dot(t, p.dual1);
    pushed.comp_phi[i] = dot(t, p.dual2);
    w[i] = nu[i] * row.divg[i];
  }
  VshCoeffVector out = project_tangential(g, ctx.product_tables(), pushed);
  ScalarCoeffVector wc = project_scalar_field(g, ctx.product_tables(), w);
  VshCoeffVector curl_part = surface_curl(wc, out.n);
  for (std::size_t i = 0; i < out.coeffs.size(); ++i)
    out.coeffs[i] += -c2 * curl_part.coeffs[i];
  return out;
}

}  // namespace

DerivativeBoundaryData derivative_boundary_data_from_displacement(
    const ForwardContext& ctx, const std::vector<Complex>& u,
    const std::vector<Real>& normal_disp) {
  if (normal_disp.size() != ctx.product_grid().size())
    throw std::invalid_argument("derivative data: displacement sample count mismatch");
  Contrasts k = contrasts(ctx.config());
  auto [u1, u2] = split_rows(u);
  RowOnSurface r1 = row_on_surface(ctx, u1);
  RowOnSurface r2 = row_on_surface(ctx, u2);
  DerivativeBoundaryData out;
  out.fprime = one_row_data(ctx, r2, normal_disp, k.f1, k.f2);
  out.gprime = one_row_data(ctx, r1, normal_disp, k.g1, k.g2);
  return out;
}

DerivativeBoundaryData derivative_boundary_data(const ForwardContext& ctx,
                                                const std::vector<Complex>& u,
                                                const ScalarCoeffVector& xi) {
  return derivative_boundary_data_from_displacement(ctx, u, normal_displacement(ctx, xi));
}

std::vector<Real> normal_displacement_of_field(const ForwardContext& ctx,
                                               const std::array<ScalarCoeffVector, 3>& xi_vec) {
  const QuadratureGrid& g = ctx.product_grid();
  const GridGeometry& geo = ctx.product_geometry();
  std::array<std::vector<Complex>, 3> comp;
  for (int c = 0; c < 3; ++c) {
    ScalarCoeffVector padded(ctx.options().n);
    for (int l = 0; l <= std::min(xi_vec[c].n, padded.n); ++l)
      for (int j = -l; j <= l; ++j) padded.at(l, j) = xi_vec[c].at(l, j);
    comp[c] = synthesize_scalar(g, ctx.product_tables(), padded);
  }
  std::vector<Real> nu(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    Vec3 v{std::real(comp[0][i]), std::real(comp[1][i]), std::real(comp[2][i])};
    nu[i] = dot(v, geo.pts[i].normal);
  }
  return nu;
}

FarFieldSamples apply_Fprime(const ForwardContext& ctx, const std::vector<Complex>& u,
                             const ScalarCoeffVector& xi) {
  DerivativeBoundaryData d = derivative_boundary_data(ctx, u, xi);
  std::vector<Complex> gf;
  gf.reserve(d.gprime.coeffs.size() + d.fprime.coeffs.size());
  gf.insert(gf.end(), d.gprime.coeffs.begin(), d.gprime.coeffs.end());
  gf.insert(gf.end(), d.fprime.coeffs.begin(), d.fprime.coeffs.end());
  std::vector<Complex> mj = ctx.solve_indirect(gf, true);
  return ctx.far().from_indirect(mj);
}

ScalarCoeffVector apply_Fprime_adjoint(const ForwardContext& ctx,
                                       const std::vector<std::vector<Complex>>& u_waves,
                                       const std::vector<FarFieldSamples>& h_waves, Real s,
                                       int deg_out) {
  if (u_waves.size() != h_waves.size())
    throw std::invalid_argument("adjoint: wave count mismatch");
  Contrasts k = contrasts(ctx.config());
  const QuadratureGrid& g = ctx.product_grid();
  const GridGeometry& geo = ctx.product_geometry();
  std::vector<Real> phi(g.size(), 0.0);
  for (std::size_t w = 0; w < u_waves.size(); ++w) {
    if (h_waves[w].n_far != ctx.far().n_far())
      throw std::invalid_argument("adjoint: far grid mismatch");
    HerglotzWave hg;
    hg.n_far = h_waves[w].n_far;
    hg.kernel.resize(h_waves[w].values.size());
    for (std::size_t i = 0; i < hg.kernel.size(); ++i) hg.kernel[i] = conj(h_waves[w].values[i]);
    std::vector<Complex> wsol = ctx.solve_direct_coeffs(hg);
    auto [w1, w2] = split_rows(wsol);
    auto [u1, u2] = split_rows(u_waves[w]);
    RowOnSurface W1 = row_on_surface(ctx, w1), W2 = row_on_surface(ctx, w2);
    RowOnSurface U1 = row_on_surface(ctx, u1), U2 = row_on_surface(ctx, u2);
    for (std::size_t i = 0; i < g.size(); ++i) {
      Complex term = -k.f1 * bdot(W2.val[i], U2.val[i]) + k.f2 * W2.divg[i] * U2.divg[i] -
                     k.g1 * bdot(W1.val[i], U1.val[i]) + k.g2 * W1.divg[i] * U1.divg[i];
      phi[i] += std::real(term);
    }
  }
  // Star-shape chain rule: J (x̂·n) = r^2 for q = r x̂.
  std::vector<Complex> samples(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    samples[i] = phi[i] * geo.pts[i].jac * dot(geo.pts[i].normal, geo.pts[i].xhat);
  ScalarCoeffVector full = project_scalar_field(g, ctx.product_tables(), samples);
  ScalarCoeffVector out(deg_out);
  for (int l = 0; l <= std::min(deg_out, full.n); ++l)
    for (int j = -l; j <= l; ++j) out.at(l, j) = full.at(l, j);
  out = sobolev_embed_adjoint(out, s);
  make_real_symmetric(out);
  return out;
}

}  // namespace emscat
