#ifndef EMSCAT_SHAPE_DERIVATIVE_HPP
#define EMSCAT_SHAPE_DERIVATIVE_HPP

#include "emscat/forward.hpp"

namespace emscat {

// Radial perturbation of a star-shaped boundary, xi: S² -> R as a
// real-symmetric coefficient vector; the boundary moves by xi(x̂) x̂.
struct PerturbationField {
  ScalarCoeffVector xi;
};

// Jump data (g', f') of the linearized transmission problem, pushed to S².
struct DerivativeBoundaryData {
  VshCoeffVector gprime, fprime;
};

// Builds (g', f') from the saved direct-method solution u of one incident
// wave. Pointwise products are formed on the finer product grid and
// projected back to degree n.
DerivativeBoundaryData derivative_boundary_data(const ForwardContext& ctx,
                                                const std::vector<Complex>& u,
                                                const ScalarCoeffVector& xi);

// Same, but with the normal displacement (xi∘q^{-1}·n_q) given as samples on
// the product grid; every term of the jump data carries this factor, so a
// tangential perturbation (vanishing samples) yields exactly zero data.
DerivativeBoundaryData derivative_boundary_data_from_displacement(
    const ForwardContext& ctx, const std::vector<Complex>& u,
    const std::vector<Real>& normal_displacement);

// Normal displacement of a general vector perturbation given by three
// real-symmetric component coefficient vectors on the reference sphere.
std::vector<Real> normal_displacement_of_field(const ForwardContext& ctx,
                                               const std::array<ScalarCoeffVector, 3>& xi_vec);

// Far field of the derivative: indirect solve with right-hand side (g'; f')
// through the reused direct-system factorization.
FarFieldSamples apply_Fprime(const ForwardContext& ctx, const std::vector<Complex>& u,
                             const ScalarCoeffVector& xi);

// Adjoint applied to one far-field function per incident wave, summed over
// the waves; returns a real-symmetric coefficient vector of degree deg_out in
// the H^s space (the embedding adjoint is included).
ScalarCoeffVector apply_Fprime_adjoint(const ForwardContext& ctx,
                                       const std::vector<std::vector<Complex>>& u_waves,
                                       const std::vector<FarFieldSamples>& h_waves, Real s,
                                       int deg_out);

}  // namespace emscat

#endif
