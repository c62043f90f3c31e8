#include "emscat/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace emscat {

namespace {

constexpr Real two_pi = 2 * pi;

struct PairGeometry {
  Vec3 dv;  // q(x̂) - q(ŷ)
  Real d = 0, d2 = 0;
  Real R = 0;
  Real V[2][2], V1[2][2], V2[2][2];
};

// Rows contract with t2(x̂) and -t1(x̂) (the Piola-output frame), columns
// with t1(ŷ), t2(ŷ).
PairGeometry pair_geometry(const SurfacePoint& px, const SurfacePoint& py) {
  PairGeometry g;
  g.dv = px.q - py.q;
  g.d2 = dot(g.dv, g.dv);
  g.d = std::sqrt(g.d2);
  Real scale = norm(px.q) + norm(py.q);
  if (g.d < 1e-12 * scale)
    throw std::runtime_error("kernel evaluation at (near-)coincident points");
  g.R = norm(px.xhat - py.xhat) / g.d;
  const Vec3 rv[2] = {px.t2, -px.t1};
  const Vec3 cv[2] = {py.t1, py.t2};
  for (int r = 0; r < 2; ++r) {
    Real rd = dot(rv[r], g.dv);
    for (int c = 0; c < 2; ++c) {
      g.V[r][c] = dot(rv[r], cross(cv[c], g.dv));
      g.V1[r][c] = dot(rv[r], cv[c]);
      g.V2[r][c] = rd * dot(cv[c], g.dv);
    }
  }
  return g;
}

// (S2 - kappa S1)/d^2 = kappa^3/(2 pi) (sin u - u cos u)/u^3 with u = kappa d;
// the series branch avoids cancellation for small u.
Real m2_factor(Real kappa, Real d, Real S1, Real S2) {
  Real u = kappa * d;
  if (std::abs(u) < 0.1) {
    Real u2 = u * u;
    return kappa * kappa * kappa / two_pi *
           (1.0 / 3.0 - u2 / 30.0 + u2 * u2 / 840.0 - u2 * u2 * u2 / 45360.0);
  }
  return (S2 - kappa * S1) / (d * d);
}

void m_factors(const PairGeometry& g, Real kappa, Real& f1, Real& f2) {
  Real S1 = std::cos(kappa * g.d) / two_pi;
  Real S2 = std::sin(kappa * g.d) / (two_pi * g.d);
  f1 = S1 / g.d2 + kappa * S2;
  f2 = m2_factor(kappa, g.d, S1, S2);
}

// Difference factors of kappa_e C_{kappa_e} - kappa_i C_{kappa_i}, grouped so
// the kappa-differences are taken before any division by powers of d:
//   C1(kappa) = (k^2 S1 - S1/d^2 - k S2) V1 + ((3 S1/d^2 - k^2 S1)/d^2 + 3 k S2/d^2) V2
//   C2(kappa) = (k^2 S2 - g) V1 + (3 g - k^2 S2)/d^2 V2,   g = (S2 - k S1)/d^2.
void cdiff_factors(const PairGeometry& g, Real ke, Real ki, Real& a1, Real& a2, Real& b1,
                   Real& b2) {
  Real S1e = std::cos(ke * g.d) / two_pi, S2e = std::sin(ke * g.d) / (two_pi * g.d);
  Real S1i = std::cos(ki * g.d) / two_pi, S2i = std::sin(ki * g.d) / (two_pi * g.d);
  Real dS1 = S1e - S1i;
  Real dK2S1 = ke * ke * S1e - ki * ki * S1i;
  Real dKS2 = ke * S2e - ki * S2i;
  Real dK2S2 = ke * ke * S2e - ki * ki * S2i;
  Real dg = m2_factor(ke, g.d, S1e, S2e) - m2_factor(ki, g.d, S1i, S2i);
  a1 = dK2S1 - dS1 / g.d2 - dKS2;
  a2 = (3 * dS1 / g.d2 - dK2S1) / g.d2 + 3 * dKS2 / g.d2;
  b1 = dK2S2 - dg;
  b2 = (3 * dg - dK2S2) / g.d2;
}

void scale_into(const Real src[2][2], Real f, Frame22& dst) {
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) dst.m[r][c] = f * src[r][c];
}

}  // namespace

SmoothFactors eval_smooth_factors(const SurfacePoint& px, const SurfacePoint& py, Real kappa) {
  SmoothFactors f;
  Vec3 dv = px.q - py.q;
  Real d = norm(dv);
  f.S1 = std::cos(kappa * d) / two_pi;
  if (d == 0) {
    f.S2 = kappa / two_pi;
    f.R = 0;  // R is undefined at coincidence; callers must not use it
    return f;
  }
  f.S2 = std::sin(kappa * d) / (two_pi * d);
  f.R = norm(px.xhat - py.xhat) / d;
  return f;
}

void eval_M_kernels(const SurfacePoint& px, const SurfacePoint& py, Real kappa, Frame22& M1,
                    Frame22& M2) {
  PairGeometry g = pair_geometry(px, py);
  Real f1, f2;
  m_factors(g, kappa, f1, f2);
  scale_into(g.V, f1, M1);
  scale_into(g.V, f2, M2);
}

void eval_Cdiff_kernels(const SurfacePoint& px, const SurfacePoint& py, Real kappa_e, Real kappa_i,
                        Frame22& C1, Frame22& C2) {
  PairGeometry g = pair_geometry(px, py);
  Real a1, a2, b1, b2;
  cdiff_factors(g, kappa_e, kappa_i, a1, a2, b1, b2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      C1.m[r][c] = a1 * g.V1[r][c] + a2 * g.V2[r][c];
      C2.m[r][c] = b1 * g.V1[r][c] + b2 * g.V2[r][c];
    }
}

TransmissionKernels eval_transmission_kernels(const SurfacePoint& px, const SurfacePoint& py,
                                              Real kappa_e, Real kappa_i) {
  PairGeometry g = pair_geometry(px, py);
  TransmissionKernels s;
  s.Rratio = g.R;
  Real f1, f2;
  m_factors(g, kappa_e, f1, f2);
  scale_into(g.V, f1, s.M1e);
  scale_into(g.V, f2, s.M2e);
  m_factors(g, kappa_i, f1, f2);
  scale_into(g.V, f1, s.M1i);
  scale_into(g.V, f2, s.M2i);
  Real a1, a2, b1, b2;
  cdiff_factors(g, kappa_e, kappa_i, a1, a2, b1, b2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      s.C1d.m[r][c] = a1 * g.V1[r][c] + a2 * g.V2[r][c];
      s.C2d.m[r][c] = b1 * g.V1[r][c] + b2 * g.V2[r][c];
    }
  return s;
}

KernelSample eval_kernel_sample(const SurfacePoint& px, const SurfacePoint& py, Real kappa_e,
                                Real kappa_i) {
  PairGeometry g = pair_geometry(px, py);
  KernelSample s;
  s.Rratio = g.R;
  Real f1, f2;
  m_factors(g, kappa_e, f1, f2);
  scale_into(g.V, f1, s.M1);
  scale_into(g.V, f2, s.M2);
  Real a1, a2, b1, b2;
  cdiff_factors(g, kappa_e, kappa_i, a1, a2, b1, b2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      s.C1diff.m[r][c] = a1 * g.V1[r][c] + a2 * g.V2[r][c];
      s.C2diff.m[r][c] = b1 * g.V1[r][c] + b2 * g.V2[r][c];
    }
  return s;
}

}  // namespace emscat
