#ifndef EMSCAT_ASSEMBLY_HPP
#define EMSCAT_ASSEMBLY_HPP

#include <iosfwd>
#include <string>

#include "emscat/dense.hpp"
#include "emscat/geometry.hpp"
#include "emscat/kernels.hpp"
#include "emscat/rotation.hpp"
#include "emscat/spherical_harmonics.hpp"

namespace emscat {

struct DielectricConfig {
  Real kappa_e = 1, kappa_i = 1, mu_e = 1, mu_i = 1;

  Real rho_m() const { return mu_e * kappa_i * kappa_i / (mu_i * kappa_e * kappa_e); }
  Real rho_j() const { return mu_i / mu_e; }
  void validate() const;
  bool zero_contrast() const { return kappa_e == kappa_i && mu_e == mu_i; }
};

// The parallel path and the serial path produce bitwise-identical matrices;
// the serial one is the reference kept for testing and benchmarking.
enum class ExecPolicy { serial, parallel };

// Discrete operator on stacked (kind-1, kind-2) coefficient blocks, side
// 2((n+1)^2 - 1).
struct BlockOperator {
  int n = 0, nprime = 0;
  std::string shape_label;
  Real kappa_a = 0, kappa_b = 0;  // wavenumber(s) the blocks were built at
  ZMatrix mat;

  VshCoeffVector apply(const VshCoeffVector& x) const;
};

void write_block_operator(std::ostream& os, const BlockOperator& op);
BlockOperator read_block_operator(std::istream& is);

int default_inner_order(int n);
void validate_inner_order(int n, int nprime);

// alpha_{tau'} = sum_{l<=nprime} P_l(zeta_{tau'}) on the inner colatitudes.
std::vector<Real> singular_weights(const QuadratureGrid& inner, int nprime);

BlockOperator assemble_M(const SurfaceParametrization& param, Real kappa, int n, int nprime,
                         ExecPolicy policy = ExecPolicy::parallel);
BlockOperator assemble_Cdiff(const SurfaceParametrization& param, Real kappa_e, Real kappa_i,
                             int n, int nprime, ExecPolicy policy = ExecPolicy::parallel);

// All three operator blocks of the transmission systems in one sweep over
// the node pairs (the kernels share their geometric contractions).
struct TransmissionBlocks {
  BlockOperator M_ext, M_int, Cdiff;
};

TransmissionBlocks assemble_transmission_blocks(const SurfaceParametrization& param,
                                                const DielectricConfig& cfg, int n, int nprime,
                                                ExecPolicy policy = ExecPolicy::parallel);

// Full 4L x 4L systems on stacked trace rows (electric row, scaled magnetic
// row), each row a stacked (kind-1, kind-2) coefficient pair.
ZMatrix assemble_KDM(const DielectricConfig& cfg, const BlockOperator& M_ext,
                     const BlockOperator& M_int, const BlockOperator& Cdiff);
ZMatrix assemble_KIM(const DielectricConfig& cfg, const BlockOperator& M_ext,
                     const BlockOperator& M_int, const BlockOperator& Cdiff);

// Signed permutation S = G∘(n x ·) on the stacked coefficient vector: entry
// idx maps to partner(idx) with sign. S^2 = -I.
std::pair<int, Real> transpose_partner(int n, int idx);
std::vector<Complex> apply_transpose_map(int n, const std::vector<Complex>& x);
// The matrix -S KDM^T S, algebraically the indirect-system matrix the
// one-LU reuse path solves.
ZMatrix kim_from_kdm_transpose(int n, const ZMatrix& kdm);
// Solve KIM z = b reusing the LU of KDM: z = -S (KDM^T)^{-1} S b.
std::vector<Complex> solve_kim_with_kdm_lu(int n, const LuFactor& kdm_lu,
                                           const std::vector<Complex>& b);

// Right-hand-side projection: push both incident trace rows through the
// Piola transform and project onto the vector harmonics. Rows are sampled at
// the mapped grid nodes.
struct TraceSamples {
  std::vector<CVec3> electric;  // n x E at q(grid nodes)
  std::vector<CVec3> magnetic;  // (1/mu_e) n x curl E at q(grid nodes)
};

std::vector<Complex> project_incident_traces(const QuadratureGrid& grid, const GridGeometry& geo,
                                             const HarmonicTables& tables,
                                             const TraceSamples& traces);

}  // namespace emscat

#endif
