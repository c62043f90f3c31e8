#include "emscat/farfield.hpp"

#include <cmath>
#include <stdexcept>

namespace emscat {

Real farfield_norm(const FarFieldSamples& f) {
  QuadratureGrid g = build_gauss_grid(f.n_far);
  Real acc = 0;
  for (int rho = 0; rho < g.n_phi(); ++rho)
    for (int tau = 0; tau < g.n_theta(); ++tau) {
      const CVec3& v = f.values[g.node_index(rho, tau)];
      acc += g.weight(rho, tau) * std::real(hdot(v, v));
    }
  return std::sqrt(acc);
}

Real farfield_dist(const FarFieldSamples& a, const FarFieldSamples& b) {
  if (a.n_far != b.n_far || a.values.size() != b.values.size())
    throw std::invalid_argument("farfield_dist: grids differ");
  FarFieldSamples d = a;
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] = a.values[i] - b.values[i];
  return farfield_norm(d);
}

Real farfield_max_error(const FarFieldSamples& a, const FarFieldSamples& b) {
  if (a.values.size() != b.values.size())
    throw std::invalid_argument("farfield_max_error: grids differ");
  Real m = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, norm(a.values[i] - b.values[i]));
  return m;
}

Real farfield_inner(const FarFieldSamples& a, const FarFieldSamples& b) {
  if (a.n_far != b.n_far) throw std::invalid_argument("farfield_inner: grids differ");
  QuadratureGrid g = build_gauss_grid(a.n_far);
  Complex acc{};
  for (int rho = 0; rho < g.n_phi(); ++rho)
    for (int tau = 0; tau < g.n_theta(); ++tau) {
      std::size_t i = g.node_index(rho, tau);
      acc += g.weight(rho, tau) * hdot(a.values[i], b.values[i]);
    }
  return std::real(acc);
}

Real max_radial_component(const FarFieldSamples& f) {
  QuadratureGrid g = build_gauss_grid(f.n_far);
  Real m = 0;
  for (int rho = 0; rho < g.n_phi(); ++rho)
    for (int tau = 0; tau < g.n_theta(); ++tau)
      m = std::max(m, std::abs(dot(f.values[g.node_index(rho, tau)], g.node(rho, tau))));
  return m;
}

FarFieldEvaluator::FarFieldEvaluator(const QuadratureGrid& grid, const GridGeometry& geo,
                                     const HarmonicTables& tables, Real kappa_e, Real mu_e,
                                     int n_far)
    : grid_(&grid), geo_(&geo), tables_(&tables), kappa_e_(kappa_e), mu_e_(mu_e),
      far_grid_(build_gauss_grid(n_far)) {
  far_nodes_.resize(far_grid_.size());
  for (int rho = 0; rho < far_grid_.n_phi(); ++rho)
    for (int tau = 0; tau < far_grid_.n_theta(); ++tau)
      far_nodes_[far_grid_.node_index(rho, tau)] = far_grid_.node(rho, tau);
}

std::vector<CVec3> FarFieldEvaluator::surface_currents(const std::vector<Complex>& row) const {
  VshCoeffVector c(grid_->n);
  if (row.size() != c.coeffs.size())
    throw std::invalid_argument("far field: coefficient block size mismatch");
  c.coeffs = row;
  TangentialSamples ts = synthesize_tangential(*grid_, *tables_, c);
  std::vector<CVec3> w(grid_->size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = ts.comp_theta[i] * CVec3(geo_->pts[i].t1) + ts.comp_phi[i] * CVec3(geo_->pts[i].t2);
  return w;
}

FarFieldSamples FarFieldEvaluator::evaluate(const std::vector<Complex>& j_row,
                                            const std::vector<Complex>& m_row) const {
  std::vector<CVec3> wj = surface_currents(j_row);
  std::vector<CVec3> wm = surface_currents(m_row);
  FarFieldSamples out;
  out.n_far = far_grid_.n;
  out.values.assign(far_grid_.size(), CVec3{});
  const Complex cj = iu * kappa_e_ / (4 * pi);
  const Real cm = mu_e_ / (4 * pi);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < static_cast<std::ptrdiff_t>(far_nodes_.size()); ++f) {
    const Vec3& xh = far_nodes_[f];
    CVec3 acc_j, acc_m;
    for (int rho = 0; rho < grid_->n_phi(); ++rho)
      for (int tau = 0; tau < grid_->n_theta(); ++tau) {
        std::size_t i = grid_->node_index(rho, tau);
        Complex ph =
            grid_->weight(rho, tau) * std::exp(-iu * kappa_e_ * dot(xh, geo_->pts[i].q));
        acc_j += ph * wj[i];
        acc_m += ph * wm[i];
      }
    CVec3 v = cj * cross(xh, acc_j) + cm * cross(cross(xh, acc_m), xh);
    out.values[f] = v;
  }
  return out;
}

FarFieldSamples FarFieldEvaluator::from_direct(const std::vector<Complex>& u) const {
  std::size_t half = u.size() / 2;
  return evaluate({u.begin(), u.begin() + half}, {u.begin() + half, u.end()});
}

FarFieldSamples FarFieldEvaluator::from_indirect(const std::vector<Complex>& mj) const {
  std::size_t half = mj.size() / 2;
  return evaluate({mj.begin() + half, mj.end()}, {mj.begin(), mj.begin() + half});
}

CVec3 FarFieldEvaluator::at_direction(const Vec3& xhat, const std::vector<Complex>& u) const {
  std::size_t half = u.size() / 2;
  std::vector<CVec3> wj = surface_currents({u.begin(), u.begin() + half});
  std::vector<CVec3> wm = surface_currents({u.begin() + half, u.end()});
  CVec3 acc_j, acc_m;
  for (int rho = 0; rho < grid_->n_phi(); ++rho)
    for (int tau = 0; tau < grid_->n_theta(); ++tau) {
      std::size_t i = grid_->node_index(rho, tau);
      Complex ph = grid_->weight(rho, tau) * std::exp(-iu * kappa_e_ * dot(xhat, geo_->pts[i].q));
      acc_j += ph * wj[i];
      acc_m += ph * wm[i];
    }
  return iu * kappa_e_ / (4 * pi) * cross(xhat, acc_j) +
         mu_e_ / (4 * pi) * cross(cross(xhat, acc_m), xhat);
}

ZMatrix FarFieldEvaluator::dense_matrix() const {
  int L = vector_count(grid_->n);
  ZMatrix F(static_cast<int>(3 * far_nodes_.size()), 4 * L);
  std::vector<Complex> e(4 * L, Complex{});
  for (int col = 0; col < 4 * L; ++col) {
    e[col] = 1.0;
    FarFieldSamples s = from_direct(e);
    e[col] = 0.0;
    for (std::size_t f = 0; f < s.values.size(); ++f) {
      F(static_cast<int>(3 * f + 0), col) = s.values[f].x;
      F(static_cast<int>(3 * f + 1), col) = s.values[f].y;
      F(static_cast<int>(3 * f + 2), col) = s.values[f].z;
    }
  }
  return F;
}

FarFieldSamples exact_point_source_farfield(Real kappa_e, const Vec3& s, const Vec3& p,
                                            const QuadratureGrid& far_grid) {
  FarFieldSamples out;
  out.n_far = far_grid.n;
  out.values.resize(far_grid.size());
  for (int rho = 0; rho < far_grid.n_phi(); ++rho)
    for (int tau = 0; tau < far_grid.n_theta(); ++tau) {
      Vec3 xh = far_grid.node(rho, tau);
      out.values[far_grid.node_index(rho, tau)] =
          -iu * kappa_e / (4 * pi) * std::exp(-iu * kappa_e * dot(xh, s)) * CVec3(cross(xh, p));
    }
  return out;
}

}  // namespace emscat
