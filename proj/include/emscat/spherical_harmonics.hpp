#ifndef EMSCAT_SPHERICAL_HARMONICS_HPP
#define EMSCAT_SPHERICAL_HARMONICS_HPP

#include <vector>

#include "emscat/quadrature.hpp"
#include "emscat/types.hpp"

namespace emscat {

// Scalar harmonics Y_{l,j} are indexed by degree l >= 0 and order |j| <= l.
// Tangential vector harmonics Y^(1)_{l,j} = grad_{S2} Y_{l,j} / sqrt(l(l+1))
// and Y^(2)_{l,j} = Y^(1)_{l,j} x x̂ start at l = 1.
struct HarmonicIndex {
  int l = 0;
  int j = 0;
  int kind = 1;  // 1 or 2, meaningful for vector harmonics only
};

inline int scalar_index(int l, int j) { return l * l + j + l; }
inline int scalar_count(int n) { return (n + 1) * (n + 1); }
inline int vector_index(int l, int j) { return l * l - 1 + j + l; }  // l >= 1
inline int vector_count(int n) { return (n + 1) * (n + 1) - 1; }

// Coefficients over Y_{l,j}, 0 <= l <= n, length (n+1)^2.
struct ScalarCoeffVector {
  int n = 0;
  std::vector<Complex> coeffs;

  ScalarCoeffVector() = default;
  explicit ScalarCoeffVector(int n_) : n(n_), coeffs(scalar_count(n_)) {}
  Complex& at(int l, int j) { return coeffs[scalar_index(l, j)]; }
  Complex at(int l, int j) const { return coeffs[scalar_index(l, j)]; }
};

// Coefficients over {Y^(1), Y^(2)}, 1 <= l <= n; kind-1 block then kind-2
// block, total length 2((n+1)^2 - 1).
struct VshCoeffVector {
  int n = 0;
  std::vector<Complex> coeffs;

  VshCoeffVector() = default;
  explicit VshCoeffVector(int n_) : n(n_), coeffs(2 * vector_count(n_)) {}
  Complex& at(int kind, int l, int j) {
    return coeffs[(kind - 1) * vector_count(n) + vector_index(l, j)];
  }
  Complex at(int kind, int l, int j) const {
    return coeffs[(kind - 1) * vector_count(n) + vector_index(l, j)];
  }
};

// Ferrers associated Legendre functions P_l^m (no Condon-Shortley factor)
// for all 0 <= m <= l <= lmax at x = cos(theta), sx = sin(theta) passed
// explicitly (sqrt(1-x^2) cancels badly near the poles); out[idx] with
// idx = l(l+1)/2 + m. Stable upward recurrence in l at fixed m.
void assoc_legendre_table(int lmax, Real x, Real sx, std::vector<Real>& out);
inline int plm_index(int l, int m) { return l * (l + 1) / 2 + m; }

// d/dtheta of P_l^m(cos theta), from the P table at the same x = cos(theta).
Real assoc_legendre_dtheta(int l, int m, Real x, const std::vector<Real>& plm);

// Normalization of Y_{l,j}: prefactor (-1)^{(|j|+j)/2} sqrt((2l+1)/(4pi)
// (l-|j|)!/(l+|j|)!).
Real harmonic_norm_factor(int l, int j);

Complex eval_scalar_harmonic(const HarmonicIndex& idx, Real theta, Real phi);
// Tangential vector harmonic as an ambient complex 3-vector, including the
// sin(theta) = 0 pole branches.
CVec3 eval_vector_harmonic(const HarmonicIndex& idx, Real theta, Real phi);

// Colatitude factors of the basis at fixed theta:
//   Y_{l,j}        = S_{lj}(theta) e^{ij phi}
//   Y^(1)_{l,j}    = e^{ij phi} (A_{lj} e_theta + i B_{lj} e_phi)
//   Y^(2)_{l,j}    = e^{ij phi} (i B_{lj} e_theta - A_{lj} e_phi)
// with real S, A, B. Precomputed per grid colatitude, for degrees <= deg.
struct HarmonicTables {
  int deg = 0;
  int n_theta = 0;
  std::vector<Real> S;  // [t * scalar_count(deg) + scalar_index]
  std::vector<Real> A;  // [t * vector_count(deg) + vector_index]
  std::vector<Real> B;

  Real s(int t, int l, int j) const { return S[t * scalar_count(deg) + scalar_index(l, j)]; }
  Real a(int t, int l, int j) const { return A[t * vector_count(deg) + vector_index(l, j)]; }
  Real b(int t, int l, int j) const { return B[t * vector_count(deg) + vector_index(l, j)]; }
};

HarmonicTables build_harmonic_tables(const std::vector<Real>& thetas, int deg);

// Tangential field samples on a grid, stored as frame components.
struct TangentialSamples {
  std::vector<Complex> comp_theta, comp_phi;  // one entry per grid node
};

// Discrete projections with the grid's quadrature; exact for degrees covered
// by the rule. `tables` must be built on the grid colatitudes for the target
// degree.
ScalarCoeffVector project_scalar_field(const QuadratureGrid& grid, const HarmonicTables& tables,
                                       const std::vector<Complex>& samples);
std::array<ScalarCoeffVector, 3> project_scalar(const QuadratureGrid& grid,
                                                const HarmonicTables& tables,
                                                const std::vector<CVec3>& samples);
VshCoeffVector project_tangential(const QuadratureGrid& grid, const HarmonicTables& tables,
                                  const TangentialSamples& samples);
VshCoeffVector project_tangential(const QuadratureGrid& grid, const HarmonicTables& tables,
                                  const std::vector<CVec3>& samples);

// Pointwise synthesis at the grid nodes.
std::vector<Complex> synthesize_scalar(const QuadratureGrid& grid, const HarmonicTables& tables,
                                       const ScalarCoeffVector& c);
TangentialSamples synthesize_tangential(const QuadratureGrid& grid, const HarmonicTables& tables,
                                        const VshCoeffVector& c);

// Surface differential operators, diagonal in coefficient space:
//   div Y^(1)_{l,j} = -sqrt(l(l+1)) Y_{l,j},   div Y^(2)_{l,j} = 0,
//   grad Y_{l,j}    =  sqrt(l(l+1)) Y^(1)_{l,j},
//   curl Y_{l,j}    =  sqrt(l(l+1)) Y^(2)_{l,j}   (curl u = grad u x x̂).
ScalarCoeffVector surface_div(const VshCoeffVector& c);
VshCoeffVector surface_grad(const ScalarCoeffVector& c, int deg_out);
VshCoeffVector surface_curl(const ScalarCoeffVector& c, int deg_out);

// Coefficient maps used by the transposed-system identities:
// rotate90: f -> x̂ x f, i.e. Y^(1) -> -Y^(2), Y^(2) -> Y^(1);
// conjugate: f -> conj(f) using conj(Y^(k)_{l,j}) = (-1)^j Y^(k)_{l,-j}.
VshCoeffVector vsh_rotate90(const VshCoeffVector& c);
VshCoeffVector vsh_conjugate(const VshCoeffVector& c);

// H^s norm: ||q||^2 = sum (1+l^2)^s |c_{lj}|^2, and the corresponding inner
// product (sesquilinear; real part is the real Hilbert-space product).
Real sobolev_norm(const ScalarCoeffVector& c, Real s);
Complex sobolev_inner(const ScalarCoeffVector& a, const ScalarCoeffVector& b, Real s);
// Adjoint of the embedding H^s -> L^2: divide c_{lj} by (1+l^2)^s.
ScalarCoeffVector sobolev_embed_adjoint(const ScalarCoeffVector& c, Real s);

// Real-valued functions satisfy c_{l,-j} = (-1)^j conj(c_{l,j}) in this
// basis (the explicit Condon-Shortley phase moves the sign into the
// coefficient symmetry).
void make_real_symmetric(ScalarCoeffVector& c);
bool is_real_symmetric(const ScalarCoeffVector& c, Real tol);
// Adds amplitude*Y_{l,j} plus its mirror term so the sum stays real.
void add_real_mode(ScalarCoeffVector& c, int l, int j, Complex amplitude);

}  // namespace emscat

#endif
