#ifndef EMSCAT_ROTATION_HPP
#define EMSCAT_ROTATION_HPP

#include <vector>

#include "emscat/quadrature.hpp"
#include "emscat/types.hpp"

namespace emscat {

// Orthogonal map T = P(phi) Q(-theta) P(-phi) taking the unit vector with
// spherical coordinates (theta, phi) onto the north pole. P is the rotation
// about the z-axis, Q the rotation about the y-axis.
Mat3 rotation_to_north(Real theta, Real phi);
Mat3 rotation_to_north(const Vec3& xhat);

// Wigner small-d matrices at beta = pi/2, d^l_{mn}(pi/2) for l <= lmax.
// Built by the three-term recurrence upward in l (the closed-form Jacobi sum
// cancels badly already around l ~ 20).
struct WignerHalfPi {
  int lmax = 0;
  std::vector<Real> d;
  std::vector<std::size_t> offset;  // offset[l] of the (2l+1)x(2l+1) block

  Real at(int l, int m, int n) const { return d[offset[l] + (m + l) * (2 * l + 1) + (n + l)]; }
};

WignerHalfPi build_wigner_half_pi(int lmax);

// Azimuthal expansion coefficients of a rotated harmonic at the grid
// colatitudes theta_tau:
//   Y^(k)_{l,j}(T^{-1} ẑ) = sum_{j̃} F(tau,l,j̃,j) e^{i(j-j̃)phi_rho}
//                            T^{-1} Y^(k)_{l,j̃}(ẑ)
// where T maps the grid node (theta_tau, phi_rho) to the north pole and
//   F(tau,l,j̃,j) = e^{i(j̃-j)pi/2} sum_{l̃} d^l_{j,l̃} d^l_{j̃,l̃} e^{-i l̃ theta_tau}.
struct RotationTable {
  int n = 0;                    // max degree
  std::vector<Real> thetas;     // outer colatitudes
  WignerHalfPi dhalf;
  std::vector<Complex> F;
  std::vector<std::size_t> offset_l;  // block offset per l, per theta

  Complex f(int tau, int l, int jt, int j) const {
    return F[static_cast<std::size_t>(tau) * per_theta + offset_l[l] + (jt + l) * (2 * l + 1) +
             (j + l)];
  }
  std::size_t per_theta = 0;
};

RotationTable build_rotation_table(int n, const QuadratureGrid& grid);

}  // namespace emscat

#endif
