#include "emscat/assembly.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace emscat {

void DielectricConfig::validate() const {
  if (!(kappa_e > 0 && kappa_i > 0 && mu_e > 0 && mu_i > 0))
    throw std::invalid_argument("DielectricConfig: all constants must be positive");
}

VshCoeffVector BlockOperator::apply(const VshCoeffVector& x) const {
  if (x.n != n) throw std::invalid_argument("BlockOperator::apply: degree mismatch");
  VshCoeffVector y(n);
  y.coeffs = mat.apply(x.coeffs);
  return y;
}

int default_inner_order(int n) { return std::max(2 * n + 1, n + 4); }

void validate_inner_order(int n, int nprime) {
  if (nprime - n <= 3)
    throw std::invalid_argument("inner projection order must exceed n by more than 3");
}

std::vector<Real> singular_weights(const QuadratureGrid& inner, int nprime) {
  std::vector<Real> alpha(inner.n_theta());
  std::vector<Real> pl;
  for (int tau = 0; tau < inner.n_theta(); ++tau) {
    legendre_all(nprime, std::cos(inner.theta_nodes[tau]), pl);
    Real s = 0;
    for (int l = 0; l <= nprime; ++l) s += pl[l];
    alpha[tau] = s;
  }
  return alpha;
}

namespace {

// Shared precomputed data for one assembly sweep.
struct PipelineData {
  QuadratureGrid outer, inner;
  GridGeometry geo_out;
  RotationTable rot;
  HarmonicTables tabs_out, tabs_in;  // degree n at the outer/inner colatitudes
  std::vector<Real> alpha;
  std::vector<Vec3> z_nodes, z_eth, z_eph;  // inner grid nodes and frames
  std::vector<Complex> phase_in;            // e^{+i j phi'_rho'}, [rho'][j+n]
  std::vector<Complex> phase_out;           // e^{-i j phi_rho},  [rho][j+n]
};

PipelineData prepare_pipeline(const SurfaceParametrization& param, int n, int nprime) {
  validate_inner_order(n, nprime);
  PipelineData d;
  d.outer = build_gauss_grid(n);
  d.inner = build_gauss_grid(nprime);
  d.geo_out = build_grid_geometry(param, d.outer);
  d.rot = build_rotation_table(n, d.outer);
  d.tabs_out = build_harmonic_tables(d.outer.theta_nodes, n);
  d.tabs_in = build_harmonic_tables(d.inner.theta_nodes, n);
  d.alpha = singular_weights(d.inner, nprime);
  d.z_nodes.resize(d.inner.size());
  d.z_eth.resize(d.inner.size());
  d.z_eph.resize(d.inner.size());
  for (int rho = 0; rho < d.inner.n_phi(); ++rho)
    for (int tau = 0; tau < d.inner.n_theta(); ++tau) {
      std::size_t i = d.inner.node_index(rho, tau);
      d.z_nodes[i] = d.inner.node(rho, tau);
      d.z_eth[i] = e_theta_at(d.inner.theta_nodes[tau], d.inner.phi_nodes[rho]);
      d.z_eph[i] = e_phi_at(d.inner.phi_nodes[rho]);
    }
  d.phase_in.resize(d.inner.size() / d.inner.n_theta() * (2 * n + 1));
  for (int rho = 0; rho < d.inner.n_phi(); ++rho)
    for (int j = -n; j <= n; ++j)
      d.phase_in[static_cast<std::size_t>(rho) * (2 * n + 1) + j + n] =
          std::exp(iu * Real(j) * d.inner.phi_nodes[rho]);
  d.phase_out.resize(static_cast<std::size_t>(d.outer.n_phi()) * (2 * n + 1));
  for (int rho = 0; rho < d.outer.n_phi(); ++rho)
    for (int j = -n; j <= n; ++j)
      d.phase_out[static_cast<std::size_t>(rho) * (2 * n + 1) + j + n] =
          std::exp(-iu * Real(j) * d.outer.phi_nodes[rho]);
  return d;
}

// Steps 1-4 of the discrete operator construction for NCH kernel channels at
// once. `kfn(px, py, alpha_tau, K)` fills K[ch][r][c] with the rotated-kernel
// matrix (alpha R M1 + i M2 composition done by the caller-supplied functor).
template <int NCH, class KernelFn>
void run_pipeline(const SurfaceParametrization& param, const PipelineData& d, KernelFn&& kfn,
                  ExecPolicy policy, std::array<ZMatrix, NCH>& out) {
  const int n = d.outer.n;
  const int L = vector_count(n);
  const int side = 2 * L;
  const int n_out = static_cast<int>(d.outer.size());
  const int nth_in = d.inner.n_theta(), nph_in = d.inner.n_phi();
  const int nth_out = d.outer.n_theta(), nph_out = d.outer.n_phi();
  const int nj = 2 * n + 1;
  const bool par = policy == ExecPolicy::parallel;

  for (int ch = 0; ch < NCH; ++ch) out[ch] = ZMatrix(side, side);

  // Per outer node and output component s, the column responses C[col].
  std::vector<Complex> Cout(static_cast<std::size_t>(NCH) * n_out * 2 * side);
  auto cslot = [&](int ch, int node, int s) {
    return Cout.data() +
           ((static_cast<std::size_t>(ch) * n_out + node) * 2 + s) * side;
  };

#pragma omp parallel if (par)
  {
    std::vector<Complex> E(static_cast<std::size_t>(NCH) * 4 * nth_in * nj);
    auto eslot = [&](int ch, int s, int c) {
      return E.data() + ((static_cast<std::size_t>(ch) * 2 + s) * 2 + c) * nth_in * nj;
    };
    std::vector<Complex> D(static_cast<std::size_t>(nj)), Dt(nj);

#pragma omp for schedule(dynamic, 1)
    for (int node = 0; node < n_out; ++node) {
      int rho = node / nth_out, tau = node % nth_out;
      std::size_t X = d.outer.node_index(rho, tau);
      const SurfacePoint& px = d.geo_out.pts[X];
      Mat3 T = rotation_to_north(d.outer.theta_nodes[tau], d.outer.phi_nodes[rho]);
      std::fill(E.begin(), E.end(), Complex{});

      Complex K[NCH][2][2], KT[NCH][2][2];
      for (int tin = 0; tin < nth_in; ++tin) {
        Real alpha = d.alpha[tin];
        for (int rin = 0; rin < nph_in; ++rin) {
          std::size_t zi = d.inner.node_index(rin, tin);
          Vec3 ystar = T.apply_t(d.z_nodes[zi]);
          SphCoord sc = angles_from_unit(ystar);
          SurfacePoint py = param.at(sc.theta, sc.phi);
          Vec3 uth = T.apply_t(d.z_eth[zi]), uph = T.apply_t(d.z_eph[zi]);
          Vec3 es_th = e_theta_at(sc.theta, sc.phi), es_ph = e_phi_at(sc.phi);
          Real th[2][2] = {{dot(es_th, uth), dot(es_th, uph)},
                           {dot(es_ph, uth), dot(es_ph, uph)}};
          kfn(px, py, alpha, K);
          for (int ch = 0; ch < NCH; ++ch)
            for (int r = 0; r < 2; ++r)
              for (int c = 0; c < 2; ++c)
                KT[ch][r][c] = K[ch][r][0] * th[0][c] + K[ch][r][1] * th[1][c];
          const Complex* ph = d.phase_in.data() + static_cast<std::size_t>(rin) * nj;
          Real w = d.inner.mu_weight;
          for (int ch = 0; ch < NCH; ++ch)
            for (int r = 0; r < 2; ++r)
              for (int c = 0; c < 2; ++c) {
                Complex v = w * KT[ch][r][c];
                Complex* erow = eslot(ch, r, c) + static_cast<std::size_t>(tin) * nj;
                for (int j = 0; j < nj; ++j) erow[j] += v * ph[j];
              }
        }
      }

      // Colatitude projection of the rotated input harmonics, rotation back
      // by the F table, and azimuthal re-phasing.
      const Complex* pho = d.phase_out.data() + static_cast<std::size_t>(rho) * nj;
      for (int ch = 0; ch < NCH; ++ch)
        for (int s = 0; s < 2; ++s) {
          Complex* cdst = cslot(ch, node, s);
          for (int kind = 1; kind <= 2; ++kind)
            for (int l = 1; l <= n; ++l) {
              for (int jt = -l; jt <= l; ++jt) {
                Complex acc{};
                const Complex* e0 = eslot(ch, s, 0);
                const Complex* e1 = eslot(ch, s, 1);
                for (int tin = 0; tin < nth_in; ++tin) {
                  Real a = d.tabs_in.a(tin, l, jt), b = d.tabs_in.b(tin, l, jt);
                  Real nu = d.inner.nu_weights[tin];
                  Complex eth_v = e0[static_cast<std::size_t>(tin) * nj + jt + n];
                  Complex eph_v = e1[static_cast<std::size_t>(tin) * nj + jt + n];
                  if (kind == 1)
                    acc += nu * (a * eth_v + iu * b * eph_v);
                  else
                    acc += nu * (iu * b * eth_v - a * eph_v);
                }
                D[jt + l] = acc;
                // e^{-i jt phi_rho}: phase_out holds e^{-i j phi}
                Dt[jt + l] = acc * pho[jt + n];
              }
              for (int j = -l; j <= l; ++j) {
                Complex acc{};
                for (int jt = -l; jt <= l; ++jt) acc += d.rot.f(tau, l, jt, j) * Dt[jt + l];
                // e^{+i j phi_rho} = conj(phase_out)
                acc *= std::conj(pho[j + n]);
                cdst[(kind - 1) * L + vector_index(l, j)] = acc;
              }
            }
        }
    }
  }

  // Outer projection: azimuthal transform then the colatitude sum, column
  // blocks in parallel, tau accumulated in fixed order.
  std::vector<Complex> Btau(static_cast<std::size_t>(NCH) * 2 * nj * side);
  auto bslot = [&](int ch, int s, int j) {
    return Btau.data() + ((static_cast<std::size_t>(ch) * 2 + s) * nj + j) * side;
  };
  for (int tau = 0; tau < nth_out; ++tau) {
    std::fill(Btau.begin(), Btau.end(), Complex{});
#pragma omp parallel for schedule(static) if (par)
    for (int col = 0; col < side; ++col) {
      for (int ch = 0; ch < NCH; ++ch)
        for (int s = 0; s < 2; ++s)
          for (int rho = 0; rho < nph_out; ++rho) {
            const Complex* csrc = cslot(ch, rho * nth_out + tau, s);
            const Complex* pho = d.phase_out.data() + static_cast<std::size_t>(rho) * nj;
            Complex v = d.outer.mu_weight * csrc[col];
            for (int j = 0; j < nj; ++j) bslot(ch, s, j)[col] += v * pho[j];
          }
    }
    Real nu = d.outer.nu_weights[tau];
#pragma omp parallel for schedule(static) if (par)
    for (int col = 0; col < side; ++col) {
      for (int ch = 0; ch < NCH; ++ch)
        for (int lp = 1; lp <= n; ++lp)
          for (int jp = -lp; jp <= lp; ++jp) {
            Real a = d.tabs_out.a(tau, lp, jp), b = d.tabs_out.b(tau, lp, jp);
            Complex bth = bslot(ch, 0, jp + n)[col];
            Complex bph = bslot(ch, 1, jp + n)[col];
            int row1 = vector_index(lp, jp);
            out[ch](row1, col) += nu * (a * bth - iu * b * bph);
            out[ch](L + row1, col) += nu * (-iu * b * bth - a * bph);
          }
    }
  }
}

}  // namespace

BlockOperator assemble_M(const SurfaceParametrization& param, Real kappa, int n, int nprime,
                         ExecPolicy policy) {
  PipelineData d = prepare_pipeline(param, n, nprime);
  std::array<ZMatrix, 1> out;
  run_pipeline<1>(
      param, d,
      [kappa](const SurfacePoint& px, const SurfacePoint& py, Real alpha, Complex K[][2][2]) {
        Frame22 M1, M2;
        eval_M_kernels(px, py, kappa, M1, M2);
        SmoothFactors f = eval_smooth_factors(px, py, kappa);
        Real ar = alpha * f.R;
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) K[0][r][c] = Complex(ar * M1.m[r][c], M2.m[r][c]);
      },
      policy, out);
  BlockOperator op;
  op.n = n;
  op.nprime = nprime;
  op.shape_label = param.label();
  op.kappa_a = kappa;
  op.mat = std::move(out[0]);
  return op;
}

BlockOperator assemble_Cdiff(const SurfaceParametrization& param, Real kappa_e, Real kappa_i,
                             int n, int nprime, ExecPolicy policy) {
  PipelineData d = prepare_pipeline(param, n, nprime);
  std::array<ZMatrix, 1> out;
  run_pipeline<1>(
      param, d,
      [kappa_e, kappa_i](const SurfacePoint& px, const SurfacePoint& py, Real alpha,
                         Complex K[][2][2]) {
        Frame22 C1, C2;
        eval_Cdiff_kernels(px, py, kappa_e, kappa_i, C1, C2);
        SmoothFactors f = eval_smooth_factors(px, py, kappa_e);
        Real ar = alpha * f.R;
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) K[0][r][c] = Complex(ar * C1.m[r][c], C2.m[r][c]);
      },
      policy, out);
  BlockOperator op;
  op.n = n;
  op.nprime = nprime;
  op.shape_label = param.label();
  op.kappa_a = kappa_e;
  op.kappa_b = kappa_i;
  op.mat = std::move(out[0]);
  return op;
}

TransmissionBlocks assemble_transmission_blocks(const SurfaceParametrization& param,
                                                const DielectricConfig& cfg, int n, int nprime,
                                                ExecPolicy policy) {
  cfg.validate();
  PipelineData d = prepare_pipeline(param, n, nprime);
  std::array<ZMatrix, 3> out;
  Real ke = cfg.kappa_e, ki = cfg.kappa_i;
  run_pipeline<3>(
      param, d,
      [ke, ki](const SurfacePoint& px, const SurfacePoint& py, Real alpha, Complex K[][2][2]) {
        TransmissionKernels t = eval_transmission_kernels(px, py, ke, ki);
        Real ar = alpha * t.Rratio;
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) {
            K[0][r][c] = Complex(ar * t.M1e.m[r][c], t.M2e.m[r][c]);
            K[1][r][c] = Complex(ar * t.M1i.m[r][c], t.M2i.m[r][c]);
            K[2][r][c] = Complex(ar * t.C1d.m[r][c], t.C2d.m[r][c]);
          }
      },
      policy, out);
  TransmissionBlocks b;
  auto fill = [&](BlockOperator& op, ZMatrix&& m, Real ka, Real kb) {
    op.n = n;
    op.nprime = nprime;
    op.shape_label = param.label();
    op.kappa_a = ka;
    op.kappa_b = kb;
    op.mat = std::move(m);
  };
  fill(b.M_ext, std::move(out[0]), ke, 0);
  fill(b.M_int, std::move(out[1]), ki, 0);
  fill(b.Cdiff, std::move(out[2]), ke, ki);
  return b;
}

namespace {

ZMatrix combine_system(const DielectricConfig& cfg, const BlockOperator& Me,
                       const BlockOperator& Mi, const BlockOperator& Cd, bool direct) {
  cfg.validate();
  int n = Me.n;
  if (Mi.n != n || Cd.n != n) throw std::invalid_argument("system assembly: degree mismatch");
  int side2 = 2 * vector_count(n);
  ZMatrix K(2 * side2, 2 * side2);
  Real rm = cfg.rho_m(), rj = cfg.rho_j();
  Real sgn = direct ? 1.0 : -1.0;
  Real c_top = cfg.mu_e / (cfg.kappa_e * cfg.kappa_e);
  Real c_bot = 1.0 / cfg.mu_e;
  if (!direct) std::swap(c_top, c_bot);
  for (int j = 0; j < side2; ++j)
    for (int i = 0; i < side2; ++i) {
      Complex me = Me.mat(i, j), mi = Mi.mat(i, j), cd = Cd.mat(i, j);
      K(i, j) = sgn * (me - rm * mi);
      K(i, side2 + j) = sgn * c_top * cd;
      K(side2 + i, j) = sgn * c_bot * cd;
      K(side2 + i, side2 + j) = sgn * (me - rj * mi);
    }
  for (int i = 0; i < side2; ++i) {
    K(i, i) += 1 + rm;
    K(side2 + i, side2 + i) += 1 + rj;
  }
  return K;
}

}  // namespace

ZMatrix assemble_KDM(const DielectricConfig& cfg, const BlockOperator& M_ext,
                     const BlockOperator& M_int, const BlockOperator& Cdiff) {
  return combine_system(cfg, M_ext, M_int, Cdiff, true);
}

ZMatrix assemble_KIM(const DielectricConfig& cfg, const BlockOperator& M_ext,
                     const BlockOperator& M_int, const BlockOperator& Cdiff) {
  return combine_system(cfg, M_ext, M_int, Cdiff, false);
}

std::pair<int, Real> transpose_partner(int n, int idx) {
  int L = vector_count(n);
  int trace = idx / (2 * L);
  int within = idx % (2 * L);
  int kind = within / L;  // 0 or 1
  int v = within % L;
  int l = static_cast<int>(std::sqrt(Real(v + 1)));
  while ((l + 1) * (l + 1) <= v + 1) ++l;
  while (l * l > v + 1) --l;
  int j = v + 1 - l * l - l;
  Real sign = ((j % 2) == 0 ? 1.0 : -1.0) * (kind == 0 ? 1.0 : -1.0);
  int pidx = trace * 2 * L + (1 - kind) * L + vector_index(l, -j);
  return {pidx, sign};
}

std::vector<Complex> apply_transpose_map(int n, const std::vector<Complex>& x) {
  std::vector<Complex> y(x.size());
  for (int i = 0; i < static_cast<int>(x.size()); ++i) {
    auto [p, s] = transpose_partner(n, i);
    y[i] = s * x[p];
  }
  return y;
}

ZMatrix kim_from_kdm_transpose(int n, const ZMatrix& kdm) {
  ZMatrix out(kdm.rows, kdm.cols);
  for (int q = 0; q < kdm.cols; ++q) {
    auto [qs, sq] = transpose_partner(n, q);
    for (int p = 0; p < kdm.rows; ++p) {
      auto [ps, sp] = transpose_partner(n, p);
      // S[q*][q] = -S[q][q*]; the two minus signs fold into +sp*sq.
      out(p, q) = sp * sq * kdm(qs, ps);
    }
  }
  return out;
}

std::vector<Complex> solve_kim_with_kdm_lu(int n, const LuFactor& kdm_lu,
                                           const std::vector<Complex>& b) {
  std::vector<Complex> w = apply_transpose_map(n, b);
  std::vector<Complex> y = kdm_lu.solve(std::move(w), true);
  std::vector<Complex> z = apply_transpose_map(n, y);
  for (Complex& v : z) v = -v;
  return z;
}

std::vector<Complex> project_incident_traces(const QuadratureGrid& grid, const GridGeometry& geo,
                                             const HarmonicTables& tables,
                                             const TraceSamples& traces) {
  VshCoeffVector row1 = project_tangential(grid, tables, piola_push(geo, traces.electric));
  VshCoeffVector row2 = project_tangential(grid, tables, piola_push(geo, traces.magnetic));
  std::vector<Complex> out;
  out.reserve(row1.coeffs.size() + row2.coeffs.size());
  out.insert(out.end(), row1.coeffs.begin(), row1.coeffs.end());
  out.insert(out.end(), row2.coeffs.begin(), row2.coeffs.end());
  return out;
}

namespace {

void write_bytes(std::ostream& os, const void* p, std::size_t nb) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(nb));
}
void read_bytes(std::istream& is, void* p, std::size_t nb) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(nb));
  if (!is) throw std::runtime_error("block operator read: truncated stream");
}

}  // namespace

void write_block_operator(std::ostream& os, const BlockOperator& op) {
  const char magic[8] = {'E', 'M', 'S', 'C', 'B', 'L', 'K', '1'};
  write_bytes(os, magic, 8);
  std::int32_t n = op.n, np = op.nprime, rows = op.mat.rows, cols = op.mat.cols,
               lab = static_cast<std::int32_t>(op.shape_label.size());
  write_bytes(os, &n, 4);
  write_bytes(os, &np, 4);
  write_bytes(os, &op.kappa_a, 8);
  write_bytes(os, &op.kappa_b, 8);
  write_bytes(os, &lab, 4);
  write_bytes(os, op.shape_label.data(), op.shape_label.size());
  write_bytes(os, &rows, 4);
  write_bytes(os, &cols, 4);
  for (int i = 0; i < op.mat.rows; ++i)
    for (int j = 0; j < op.mat.cols; ++j) {
      Complex v = op.mat(i, j);
      write_bytes(os, &v, sizeof(Complex));
    }
}

BlockOperator read_block_operator(std::istream& is) {
  char magic[8];
  read_bytes(is, magic, 8);
  if (std::memcmp(magic, "EMSCBLK1", 8) != 0)
    throw std::runtime_error("block operator read: bad magic");
  BlockOperator op;
  std::int32_t n, np, rows, cols, lab;
  read_bytes(is, &n, 4);
  read_bytes(is, &np, 4);
  read_bytes(is, &op.kappa_a, 8);
  read_bytes(is, &op.kappa_b, 8);
  read_bytes(is, &lab, 4);
  op.shape_label.resize(lab);
  read_bytes(is, op.shape_label.data(), lab);
  read_bytes(is, &rows, 4);
  read_bytes(is, &cols, 4);
  op.n = n;
  op.nprime = np;
  op.mat = ZMatrix(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      Complex v;
      read_bytes(is, &v, sizeof(Complex));
      op.mat(i, j) = v;
    }
  return op;
}

}  // namespace emscat
