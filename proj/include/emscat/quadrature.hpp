#ifndef EMSCAT_QUADRATURE_HPP
#define EMSCAT_QUADRATURE_HPP

#include <cstddef>
#include <vector>

#include "emscat/types.hpp"

namespace emscat {

// Product quadrature on S²: Gauss–Legendre in cos(theta) times a uniform
// azimuthal rule. Exact for spherical polynomials of degree <= 2n+1.
//
// theta_tau = arccos(zeta_tau) for the n+1 zeros zeta_tau of P_{n+1},
// nu_tau the Gauss–Legendre weights, phi_rho = rho*pi/(n+1) for
// rho = 0..2n+1 and the uniform weight mu = pi/(n+1).
struct QuadratureGrid {
  int n = 0;
  std::vector<Real> theta_nodes;   // size n+1, all strictly inside (0,pi)
  std::vector<Real> nu_weights;    // size n+1, sums to 2
  std::vector<Real> phi_nodes;     // size 2n+2
  Real mu_weight = 0;

  int n_theta() const { return static_cast<int>(theta_nodes.size()); }
  int n_phi() const { return static_cast<int>(phi_nodes.size()); }
  std::size_t size() const { return theta_nodes.size() * phi_nodes.size(); }

  // Nodes are enumerated phi-major: node(rho, tau) = rho * (n+1) + tau.
  std::size_t node_index(int rho, int tau) const {
    return static_cast<std::size_t>(rho) * theta_nodes.size() + tau;
  }
  Vec3 node(int rho, int tau) const { return unit_from_angles(theta_nodes[tau], phi_nodes[rho]); }
  Real weight(int rho, int tau) const {
    (void)rho;
    return mu_weight * nu_weights[tau];
  }
};

QuadratureGrid build_gauss_grid(int n);

// Legendre polynomial P_l(x) and all of P_0..P_lmax(x).
Real legendre_p(int l, Real x);
void legendre_all(int lmax, Real x, std::vector<Real>& out);

}  // namespace emscat

#endif
