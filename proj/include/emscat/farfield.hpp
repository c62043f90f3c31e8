#ifndef EMSCAT_FARFIELD_HPP
#define EMSCAT_FARFIELD_HPP

#include <vector>

#include "emscat/assembly.hpp"
#include "emscat/geometry.hpp"
#include "emscat/spherical_harmonics.hpp"

namespace emscat {

// Tangential far-field pattern sampled at the 2(n_far+1)^2 nodes of the far
// Gauss grid.
struct FarFieldSamples {
  int n_far = 0;
  std::vector<CVec3> values;
};

Real farfield_norm(const FarFieldSamples& f);
Real farfield_dist(const FarFieldSamples& a, const FarFieldSamples& b);
Real farfield_max_error(const FarFieldSamples& a, const FarFieldSamples& b);
// Re <a, b>_{L^2_t(S^2)} with the far-grid quadrature.
Real farfield_inner(const FarFieldSamples& a, const FarFieldSamples& b);
Real max_radial_component(const FarFieldSamples& f);

// Far-field operator of the transported densities: the electric-current row
// enters with (i kappa_e/4pi) x̂ x [Dq]j, the magnetic row with
// (mu_e/4pi) x̂ x [Dq]m x x̂.
class FarFieldEvaluator {
 public:
  FarFieldEvaluator() = default;
  FarFieldEvaluator(const QuadratureGrid& grid, const GridGeometry& geo,
                    const HarmonicTables& tables, Real kappa_e, Real mu_e, int n_far);

  // Stacked solution of the direct system: (j; m) = (electric; magnetic) rows.
  FarFieldSamples from_direct(const std::vector<Complex>& u) const;
  // Stacked solution of the indirect system: (m; j).
  FarFieldSamples from_indirect(const std::vector<Complex>& mj) const;
  CVec3 at_direction(const Vec3& xhat, const std::vector<Complex>& u_direct) const;

  // Dense blocks [F1 F2] mapping the stacked direct solution to the far
  // values (3 components per far node).
  ZMatrix dense_matrix() const;

  const QuadratureGrid& far_grid() const { return far_grid_; }
  int n_far() const { return far_grid_.n; }

 private:
  FarFieldSamples evaluate(const std::vector<Complex>& j_row,
                           const std::vector<Complex>& m_row) const;
  std::vector<CVec3> surface_currents(const std::vector<Complex>& row) const;

  const QuadratureGrid* grid_ = nullptr;
  const GridGeometry* geo_ = nullptr;
  const HarmonicTables* tables_ = nullptr;
  Real kappa_e_ = 0, mu_e_ = 0;
  QuadratureGrid far_grid_;
  std::vector<Vec3> far_nodes_;
};

// Closed-form far field of an interior point source: the total exterior wave
// vanishes, so the scattered pattern is the negative of the incident one.
FarFieldSamples exact_point_source_farfield(Real kappa_e, const Vec3& s, const Vec3& p,
                                            const QuadratureGrid& far_grid);

}  // namespace emscat

#endif
