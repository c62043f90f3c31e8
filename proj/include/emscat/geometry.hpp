#ifndef EMSCAT_GEOMETRY_HPP
#define EMSCAT_GEOMETRY_HPP

#include <memory>
#include <string>
#include <vector>

#include "emscat/spherical_harmonics.hpp"
#include "emscat/types.hpp"

namespace emscat {

// Pointwise data of a parametrization q: S² -> Γ.
//   t1 = d(q∘ψ)/dθ, t2 = (1/sinθ) d(q∘ψ)/dφ, jac = |t1 x t2|,
//   normal = (t1 x t2)/jac, dual1 = t2 x normal, dual2 = normal x t1.
// dual1/dual2 are the cotangent vectors scaled by jac; the Piola pushforward
// of a tangential field j is (dual1·j, dual2·j) in the (e_theta, e_phi)
// frame of S².
struct SurfacePoint {
  Vec3 xhat;  // preimage point on S²
  Vec3 q, t1, t2, normal, dual1, dual2;
  Real jac = 0;
};

class SurfaceParametrization {
 public:
  virtual ~SurfaceParametrization() = default;
  virtual SurfacePoint at(Real theta, Real phi) const = 0;
  virtual std::string label() const = 0;
  // Radial shapes expose q(x̂) = rho(x̂) x̂ for containment checks.
  virtual bool is_radial() const { return false; }
  virtual Real radial(Real /*theta*/, Real /*phi*/) const { return 0; }
};

// Star-shaped boundary given by a truncated harmonic expansion of the radial
// function r > 0; coefficients satisfy c_{l,j} = conj(c_{l,-j}).
struct StarShape {
  ScalarCoeffVector r_coeffs;

  int degree() const { return r_coeffs.n; }
  static StarShape sphere(int n_r, Real radius);
};

std::unique_ptr<SurfaceParametrization> make_shape(const std::string& label, Real radius = 1.0);
std::unique_ptr<SurfaceParametrization> star_to_param(const StarShape& shape);

std::string star_to_json(const StarShape& shape);
StarShape star_from_json(const std::string& text);

// Surface data cached at the nodes of a quadrature grid, phi-major like the
// grid itself.
struct GridGeometry {
  std::vector<SurfacePoint> pts;
  std::vector<Vec3> e_th, e_ph;
};

GridGeometry build_grid_geometry(const SurfaceParametrization& param, const QuadratureGrid& grid);

// Piola transform between tangential fields on Γ (ambient 3-vectors at the
// mapped grid nodes) and tangential fields on S² (frame components).
TangentialSamples piola_push(const GridGeometry& geo, const std::vector<CVec3>& on_surface);
std::vector<CVec3> piola_pull(const GridGeometry& geo, const TangentialSamples& on_sphere);

// Finite-difference surface data (five-point central differences of q∘ψ);
// test oracle for the analytic/spectral tangents.
SurfacePoint fd_surface_point(const SurfaceParametrization& param, Real theta, Real phi,
                              Real h = 1e-3);

}  // namespace emscat

#endif
