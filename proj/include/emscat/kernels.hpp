#ifndef EMSCAT_KERNELS_HPP
#define EMSCAT_KERNELS_HPP

#include "emscat/geometry.hpp"
#include "emscat/types.hpp"

namespace emscat {

// Split-kernel factors with d = |q(x̂) - q(ŷ)|:
//   S1 = cos(kappa d)/(2 pi),  S2 = sin(kappa d)/(2 pi d)  (= kappa/(2 pi) at
//   coincidence),  R = |x̂ - ŷ| / d.
struct SmoothFactors {
  Real S1 = 0, S2 = 0, R = 0;
};

SmoothFactors eval_smooth_factors(const SurfacePoint& px, const SurfacePoint& py, Real kappa);

// 2x2 kernel blocks in the tangential frames: rows are the Piola-output
// components at x̂ (contractions with t2 x n and n x t1 folded in), columns
// act on the (t1, t2) decomposition of the input at ŷ. All blocks are real;
// the imaginary unit multiplying the smooth part sits in the assembly.
struct Frame22 {
  Real m[2][2] = {{0, 0}, {0, 0}};
};

struct KernelSample {
  Real Rratio = 0;
  Frame22 M1, M2;        // double-layer split: (R/|x̂-ŷ|) M1 + i M2
  Frame22 C1diff, C2diff;  // kappa_e C - kappa_i C difference, same split
};

// Double-layer split matrices at a single wavenumber.
void eval_M_kernels(const SurfacePoint& px, const SurfacePoint& py, Real kappa, Frame22& M1,
                    Frame22& M2);

// Single-layer-family difference kernels.
void eval_Cdiff_kernels(const SurfacePoint& px, const SurfacePoint& py, Real kappa_e, Real kappa_i,
                        Frame22& C1, Frame22& C2);

// Everything at once; shares the geometric contractions.
KernelSample eval_kernel_sample(const SurfacePoint& px, const SurfacePoint& py, Real kappa_e,
                                Real kappa_i);

// Both double-layer kernels plus the difference kernels in one evaluation,
// for the transmission-system assembly.
struct TransmissionKernels {
  Real Rratio = 0;
  Frame22 M1e, M2e, M1i, M2i, C1d, C2d;
};

TransmissionKernels eval_transmission_kernels(const SurfacePoint& px, const SurfacePoint& py,
                                              Real kappa_e, Real kappa_i);

}  // namespace emscat

#endif
