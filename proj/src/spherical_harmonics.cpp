#include "emscat/spherical_harmonics.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace emscat {

void assoc_legendre_table(int lmax, Real x, Real sx, std::vector<Real>& out) {
  out.assign((lmax + 1) * (lmax + 2) / 2, 0.0);
  // P_m^m = (2m-1)!! sin^m(theta), built as an interleaved product to avoid
  // overflow/underflow of the two factors separately.
  Real pmm = 1.0;
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) pmm *= (2 * m - 1) * sx;
    out[plm_index(m, m)] = pmm;
    if (m + 1 <= lmax) out[plm_index(m + 1, m)] = (2 * m + 1) * x * pmm;
    for (int l = m + 2; l <= lmax; ++l)
      out[plm_index(l, m)] =
          ((2 * l - 1) * x * out[plm_index(l - 1, m)] - (l + m - 1) * out[plm_index(l - 2, m)]) /
          (l - m);
  }
}

Real assoc_legendre_dtheta(int l, int m, Real x, const std::vector<Real>& plm) {
  (void)x;
  if (m == 0) return -plm[plm_index(l, 1)];
  Real upper = (m + 1 <= l) ? plm[plm_index(l, m + 1)] : 0.0;
  return 0.5 * ((l + m) * (l - m + 1) * plm[plm_index(l, m - 1)] - upper);
}

Real harmonic_norm_factor(int l, int j) {
  int aj = std::abs(j);
  Real phase = (j >= 0 && (j % 2 != 0)) ? -1.0 : 1.0;  // (-1)^{(|j|+j)/2}
  Real lg = 0.5 * (std::lgamma(l - aj + 1.0) - std::lgamma(l + aj + 1.0));
  return phase * std::sqrt((2 * l + 1) / (4 * pi)) * std::exp(lg);
}

Complex eval_scalar_harmonic(const HarmonicIndex& idx, Real theta, Real phi) {
  int l = idx.l, j = idx.j, aj = std::abs(j);
  if (aj > l) throw std::invalid_argument("eval_scalar_harmonic: |j| > l");
  std::vector<Real> plm;
  assoc_legendre_table(l, std::cos(theta), std::sin(theta), plm);
  return harmonic_norm_factor(l, j) * plm[plm_index(l, aj)] * std::exp(iu * Real(j) * phi);
}

CVec3 eval_vector_harmonic(const HarmonicIndex& idx, Real theta, Real phi) {
  int l = idx.l, j = idx.j, aj = std::abs(j);
  if (l < 1 || aj > l) throw std::invalid_argument("eval_vector_harmonic: bad index");
  if (idx.kind != 1 && idx.kind != 2) throw std::invalid_argument("eval_vector_harmonic: kind");
  Vec3 eth = e_theta_at(theta, phi), eph = e_phi_at(phi);
  Real st = std::sin(theta);
  Real ll = std::sqrt(Real(l) * (l + 1));
  Complex comp_theta, comp_phi;
  if (std::abs(st) < 1e-14) {
    // Pole branch: nonzero only for |j| = 1.
    if (aj != 1) return {};
    Real ct = std::cos(theta);
    Real ctl = std::pow(ct, l);
    Real phase = (j == 1) ? -1.0 : 1.0;
    Real fac = phase * std::sqrt((2 * l + 1) / (16 * pi));
    comp_theta = fac * ctl;
    comp_phi = iu * Real(j) * fac * ctl * ct;
  } else {
    std::vector<Real> plm;
    Real x = std::cos(theta);
    assoc_legendre_table(l, x, st, plm);
    Real c = harmonic_norm_factor(l, j);
    Complex e = std::exp(iu * Real(j) * phi);
    comp_theta = c * assoc_legendre_dtheta(l, aj, x, plm) / ll * e;
    comp_phi = iu * Real(j) * c * plm[plm_index(l, aj)] / (st * ll) * e;
  }
  if (idx.kind == 2) {
    // Y^(2) = Y^(1) x x̂: (a, b) -> (b, -a) in the (e_theta, e_phi) frame.
    Complex t = comp_theta;
    comp_theta = comp_phi;
    comp_phi = -t;
  }
  return CVec3(eth) * comp_theta + CVec3(eph) * comp_phi;
}

HarmonicTables build_harmonic_tables(const std::vector<Real>& thetas, int deg) {
  HarmonicTables t;
  t.deg = deg;
  t.n_theta = static_cast<int>(thetas.size());
  int sc = scalar_count(deg), vc = vector_count(deg);
  t.S.resize(static_cast<std::size_t>(t.n_theta) * sc);
  t.A.resize(static_cast<std::size_t>(t.n_theta) * vc);
  t.B.resize(static_cast<std::size_t>(t.n_theta) * vc);
  std::vector<Real> plm;
  for (int it = 0; it < t.n_theta; ++it) {
    Real x = std::cos(thetas[it]), st = std::sin(thetas[it]);
    assoc_legendre_table(deg, x, st, plm);
    for (int l = 0; l <= deg; ++l) {
      Real ll = (l >= 1) ? std::sqrt(Real(l) * (l + 1)) : 1.0;
      for (int j = -l; j <= l; ++j) {
        int aj = std::abs(j);
        Real c = harmonic_norm_factor(l, j);
        t.S[static_cast<std::size_t>(it) * sc + scalar_index(l, j)] = c * plm[plm_index(l, aj)];
        if (l >= 1) {
          t.A[static_cast<std::size_t>(it) * vc + vector_index(l, j)] =
              c * assoc_legendre_dtheta(l, aj, x, plm) / ll;
          t.B[static_cast<std::size_t>(it) * vc + vector_index(l, j)] =
              c * j * plm[plm_index(l, aj)] / (st * ll);
        }
      }
    }
  }
  return t;
}

namespace {

// Azimuthal transforms shared by projection and synthesis. fwd[j+deg][tau] =
// sum_rho mu e^{-ij phi_rho} f(rho,tau).
void phi_analysis(const QuadratureGrid& grid, int deg, const std::vector<Complex>& f,
                  std::vector<Complex>& out) {
  int nth = grid.n_theta(), nph = grid.n_phi();
  out.assign(static_cast<std::size_t>(2 * deg + 1) * nth, Complex{});
  for (int j = -deg; j <= deg; ++j) {
    for (int rho = 0; rho < nph; ++rho) {
      Complex w = grid.mu_weight * std::exp(-iu * Real(j) * grid.phi_nodes[rho]);
      const Complex* frow = f.data() + grid.node_index(rho, 0);
      Complex* orow = out.data() + static_cast<std::size_t>(j + deg) * nth;
      for (int tau = 0; tau < nth; ++tau) orow[tau] += w * frow[tau];
    }
  }
}

void phi_synthesis(const QuadratureGrid& grid, int deg, const std::vector<Complex>& modes,
                   std::vector<Complex>& f) {
  int nth = grid.n_theta(), nph = grid.n_phi();
  f.assign(grid.size(), Complex{});
  for (int j = -deg; j <= deg; ++j) {
    const Complex* mrow = modes.data() + static_cast<std::size_t>(j + deg) * nth;
    for (int rho = 0; rho < nph; ++rho) {
      Complex w = std::exp(iu * Real(j) * grid.phi_nodes[rho]);
      Complex* frow = f.data() + grid.node_index(rho, 0);
      for (int tau = 0; tau < nth; ++tau) frow[tau] += w * mrow[tau];
    }
  }
}

}  // namespace

ScalarCoeffVector project_scalar_field(const QuadratureGrid& grid, const HarmonicTables& tables,
                                       const std::vector<Complex>& samples) {
  if (samples.size() != grid.size())
    throw std::invalid_argument("project_scalar_field: sample count does not match grid");
  int deg = tables.deg, nth = grid.n_theta();
  std::vector<Complex> modes;
  phi_analysis(grid, deg, samples, modes);
  ScalarCoeffVector c(deg);
  for (int l = 0; l <= deg; ++l)
    for (int j = -l; j <= l; ++j) {
      Complex acc{};
      const Complex* mrow = modes.data() + static_cast<std::size_t>(j + deg) * nth;
      for (int tau = 0; tau < nth; ++tau)
        acc += grid.nu_weights[tau] * tables.s(tau, l, j) * mrow[tau];
      c.at(l, j) = acc;
    }
  return c;
}

std::array<ScalarCoeffVector, 3> project_scalar(const QuadratureGrid& grid,
                                                const HarmonicTables& tables,
                                                const std::vector<CVec3>& samples) {
  if (samples.size() != grid.size())
    throw std::invalid_argument("project_scalar: sample count does not match grid");
  std::vector<Complex> comp(grid.size());
  std::array<ScalarCoeffVector, 3> out;
  for (int k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < samples.size(); ++i)
      comp[i] = (k == 0) ? samples[i].x : (k == 1 ? samples[i].y : samples[i].z);
    out[k] = project_scalar_field(grid, tables, comp);
  }
  return out;
}

VshCoeffVector project_tangential(const QuadratureGrid& grid, const HarmonicTables& tables,
                                  const TangentialSamples& samples) {
  if (samples.comp_theta.size() != grid.size() || samples.comp_phi.size() != grid.size())
    throw std::invalid_argument("project_tangential: sample count does not match grid");
  int deg = tables.deg, nth = grid.n_theta();
  std::vector<Complex> mth, mph;
  phi_analysis(grid, deg, samples.comp_theta, mth);
  phi_analysis(grid, deg, samples.comp_phi, mph);
  VshCoeffVector c(deg);
  for (int l = 1; l <= deg; ++l)
    for (int j = -l; j <= l; ++j) {
      Complex acc1{}, acc2{};
      const Complex* rth = mth.data() + static_cast<std::size_t>(j + deg) * nth;
      const Complex* rph = mph.data() + static_cast<std::size_t>(j + deg) * nth;
      for (int tau = 0; tau < nth; ++tau) {
        Real a = tables.a(tau, l, j), b = tables.b(tau, l, j), nu = grid.nu_weights[tau];
        // conj(Y^(1)) = e^{-ij phi}(A e_th - iB e_ph); conj(Y^(2)) = e^{-ij phi}(-iB e_th - A e_ph)
        acc1 += nu * (a * rth[tau] - iu * b * rph[tau]);
        acc2 += nu * (-iu * b * rth[tau] - a * rph[tau]);
      }
      c.at(1, l, j) = acc1;
      c.at(2, l, j) = acc2;
    }
  return c;
}

VshCoeffVector project_tangential(const QuadratureGrid& grid, const HarmonicTables& tables,
                                  const std::vector<CVec3>& samples) {
  TangentialSamples ts;
  ts.comp_theta.resize(grid.size());
  ts.comp_phi.resize(grid.size());
  for (int rho = 0; rho < grid.n_phi(); ++rho)
    for (int tau = 0; tau < grid.n_theta(); ++tau) {
      std::size_t i = grid.node_index(rho, tau);
      Vec3 eth = e_theta_at(grid.theta_nodes[tau], grid.phi_nodes[rho]);
      Vec3 eph = e_phi_at(grid.phi_nodes[rho]);
      ts.comp_theta[i] = dot(samples[i], eth);
      ts.comp_phi[i] = dot(samples[i], eph);
    }
  return project_tangential(grid, tables, ts);
}

std::vector<Complex> synthesize_scalar(const QuadratureGrid& grid, const HarmonicTables& tables,
                                       const ScalarCoeffVector& c) {
  int deg = tables.deg, nth = grid.n_theta();
  if (c.n != deg) throw std::invalid_argument("synthesize_scalar: degree mismatch");
  std::vector<Complex> modes(static_cast<std::size_t>(2 * deg + 1) * nth, Complex{});
  for (int l = 0; l <= deg; ++l)
    for (int j = -l; j <= l; ++j) {
      Complex cc = c.at(l, j);
      if (cc == Complex{}) continue;
      Complex* mrow = modes.data() + static_cast<std::size_t>(j + deg) * nth;
      for (int tau = 0; tau < nth; ++tau) mrow[tau] += cc * tables.s(tau, l, j);
    }
  std::vector<Complex> f;
  phi_synthesis(grid, deg, modes, f);
  return f;
}

TangentialSamples synthesize_tangential(const QuadratureGrid& grid, const HarmonicTables& tables,
                                        const VshCoeffVector& c) {
  int deg = tables.deg, nth = grid.n_theta();
  if (c.n != deg) throw std::invalid_argument("synthesize_tangential: degree mismatch");
  std::vector<Complex> mth(static_cast<std::size_t>(2 * deg + 1) * nth, Complex{});
  std::vector<Complex> mph = mth;
  for (int l = 1; l <= deg; ++l)
    for (int j = -l; j <= l; ++j) {
      Complex c1 = c.at(1, l, j), c2 = c.at(2, l, j);
      Complex* rth = mth.data() + static_cast<std::size_t>(j + deg) * nth;
      Complex* rph = mph.data() + static_cast<std::size_t>(j + deg) * nth;
      for (int tau = 0; tau < nth; ++tau) {
        Real a = tables.a(tau, l, j), b = tables.b(tau, l, j);
        rth[tau] += c1 * a + c2 * iu * b;
        rph[tau] += c1 * iu * b - c2 * a;
      }
    }
  TangentialSamples out;
  phi_synthesis(grid, deg, mth, out.comp_theta);
  phi_synthesis(grid, deg, mph, out.comp_phi);
  return out;
}

ScalarCoeffVector surface_div(const VshCoeffVector& c) {
  ScalarCoeffVector out(c.n);
  for (int l = 1; l <= c.n; ++l)
    for (int j = -l; j <= l; ++j)
      out.at(l, j) = -std::sqrt(Real(l) * (l + 1)) * c.at(1, l, j);
  return out;
}

VshCoeffVector surface_grad(const ScalarCoeffVector& c, int deg_out) {
  VshCoeffVector out(deg_out);
  int lm = std::min(c.n, deg_out);
  for (int l = 1; l <= lm; ++l)
    for (int j = -l; j <= l; ++j)
      out.at(1, l, j) = std::sqrt(Real(l) * (l + 1)) * c.at(l, j);
  return out;
}

VshCoeffVector surface_curl(const ScalarCoeffVector& c, int deg_out) {
  VshCoeffVector out(deg_out);
  int lm = std::min(c.n, deg_out);
  for (int l = 1; l <= lm; ++l)
    for (int j = -l; j <= l; ++j)
      out.at(2, l, j) = std::sqrt(Real(l) * (l + 1)) * c.at(l, j);
  return out;
}

VshCoeffVector vsh_rotate90(const VshCoeffVector& c) {
  VshCoeffVector out(c.n);
  for (int l = 1; l <= c.n; ++l)
    for (int j = -l; j <= l; ++j) {
      out.at(1, l, j) = c.at(2, l, j);
      out.at(2, l, j) = -c.at(1, l, j);
    }
  return out;
}

VshCoeffVector vsh_conjugate(const VshCoeffVector& c) {
  VshCoeffVector out(c.n);
  for (int k = 1; k <= 2; ++k)
    for (int l = 1; l <= c.n; ++l)
      for (int j = -l; j <= l; ++j) {
        Real sgn = (j % 2 == 0) ? 1.0 : -1.0;
        out.at(k, l, j) = sgn * std::conj(c.at(k, l, -j));
      }
  return out;
}

Real sobolev_norm(const ScalarCoeffVector& c, Real s) {
  Real acc = 0;
  for (int l = 0; l <= c.n; ++l) {
    Real w = std::pow(1.0 + Real(l) * l, s);
    for (int j = -l; j <= l; ++j) acc += w * std::norm(c.at(l, j));
  }
  return std::sqrt(acc);
}

Complex sobolev_inner(const ScalarCoeffVector& a, const ScalarCoeffVector& b, Real s) {
  if (a.n != b.n) throw std::invalid_argument("sobolev_inner: degree mismatch");
  Complex acc{};
  for (int l = 0; l <= a.n; ++l) {
    Real w = std::pow(1.0 + Real(l) * l, s);
    for (int j = -l; j <= l; ++j) acc += w * a.at(l, j) * std::conj(b.at(l, j));
  }
  return acc;
}

ScalarCoeffVector sobolev_embed_adjoint(const ScalarCoeffVector& c, Real s) {
  ScalarCoeffVector out(c.n);
  for (int l = 0; l <= c.n; ++l) {
    Real w = std::pow(1.0 + Real(l) * l, -s);
    for (int j = -l; j <= l; ++j) out.at(l, j) = w * c.at(l, j);
  }
  return out;
}

void make_real_symmetric(ScalarCoeffVector& c) {
  // conj(Y_{l,j}) = (-1)^j Y_{l,-j}, so a real function has
  // c_{l,-j} = (-1)^j conj(c_{l,j}).
  for (int l = 0; l <= c.n; ++l)
    for (int j = 0; j <= l; ++j) {
      Real sgn = (j % 2 == 0) ? 1.0 : -1.0;
      Complex avg = 0.5 * (c.at(l, j) + sgn * std::conj(c.at(l, -j)));
      c.at(l, j) = avg;
      c.at(l, -j) = sgn * std::conj(avg);
    }
}

bool is_real_symmetric(const ScalarCoeffVector& c, Real tol) {
  for (int l = 0; l <= c.n; ++l)
    for (int j = 0; j <= l; ++j) {
      Real sgn = (j % 2 == 0) ? 1.0 : -1.0;
      if (std::abs(c.at(l, j) - sgn * std::conj(c.at(l, -j))) > tol) return false;
    }
  return true;
}

void add_real_mode(ScalarCoeffVector& c, int l, int j, Complex amplitude) {
  c.at(l, j) += amplitude;
  if (j != 0) {
    Real sgn = (j % 2 == 0) ? 1.0 : -1.0;
    c.at(l, -j) += sgn * std::conj(amplitude);
  }
}

}  // namespace emscat
