#ifndef EMSCAT_FORWARD_HPP
#define EMSCAT_FORWARD_HPP

#include <memory>
#include <string>
#include <vector>

#include "emscat/assembly.hpp"
#include "emscat/farfield.hpp"
#include "emscat/incident.hpp"

namespace emscat {

struct ForwardOptions {
  int n = 10;
  int nprime = 0;  // 0 selects default_inner_order(n)
  int n_far = 25;
  ExecPolicy policy = ExecPolicy::parallel;
};

// Frozen discretization of one interface: grids, assembled operator blocks,
// the direct-system factorization, and the far-field operator. Multiple
// right-hand sides share the factorization.
class ForwardContext {
 public:
  ForwardContext(std::shared_ptr<const SurfaceParametrization> param, DielectricConfig cfg,
                 ForwardOptions opts);
  ForwardContext(const ForwardContext&) = delete;
  ForwardContext& operator=(const ForwardContext&) = delete;

  struct DirectSolution {
    std::vector<Complex> u;  // stacked coefficients of the total exterior traces
    FarFieldSamples far;
  };

  DirectSolution solve_direct(const IncidentField& inc) const;
  // Same solve without the far-field evaluation (adjoint path).
  std::vector<Complex> solve_direct_coeffs(const IncidentField& inc) const;
  // Solves the indirect system with right-hand side 2(g; f); returns the
  // stacked densities (m; j). With reuse enabled the direct-system LU is
  // used through the transposed-matrix identity.
  std::vector<Complex> solve_indirect(const std::vector<Complex>& gf, bool reuse_kdm_lu = true) const;

  const SurfaceParametrization& param() const { return *param_; }
  const DielectricConfig& config() const { return cfg_; }
  const ForwardOptions& options() const { return opts_; }
  const QuadratureGrid& grid() const { return grid_; }
  const QuadratureGrid& product_grid() const { return product_grid_; }
  const GridGeometry& geometry() const { return geo_; }
  const GridGeometry& product_geometry() const { return product_geo_; }
  const HarmonicTables& tables() const { return tables_; }
  const HarmonicTables& product_tables() const { return product_tables_; }
  const FarFieldEvaluator& far() const { return far_; }
  const TransmissionBlocks& blocks() const { return blocks_; }
  const ZMatrix& kdm() const { return kdm_; }
  const LuFactor& kdm_lu() const { return kdm_lu_; }
  ZMatrix assemble_kim() const;

 private:
  std::shared_ptr<const SurfaceParametrization> param_;
  DielectricConfig cfg_;
  ForwardOptions opts_;
  QuadratureGrid grid_, product_grid_;
  GridGeometry geo_, product_geo_;
  HarmonicTables tables_, product_tables_;
  TransmissionBlocks blocks_;
  ZMatrix kdm_;
  LuFactor kdm_lu_;
  FarFieldEvaluator far_;
};

// Right-hand side (g; f) of the indirect transmission problem whose exact
// exterior solution is the negative of the incident field: f = -n x E_inc,
// g = -(1/mu_e) n x curl E_inc.
std::vector<Complex> jump_rhs_from_incident(const ForwardContext& ctx, const IncidentField& inc);

struct ConvergenceRow {
  std::string shape;
  int n = 0;
  Real err_ps = 0;   // max far-field error against the exact point-source pattern
  Real re_pw = 0;    // Re [E_inf(d)]·p for the plane wave
  Real im_pw = 0;
  Real assembly_seconds = 0;
  Real solve_seconds = 0;
};

// Point-source and plane-wave runs tabulated over a list of orders.
std::vector<ConvergenceRow> convergence_experiment(
    std::shared_ptr<const SurfaceParametrization> param, const DielectricConfig& cfg,
    const std::vector<int>& orders, int n_far = 25, ExecPolicy policy = ExecPolicy::parallel);

std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace emscat

#endif
