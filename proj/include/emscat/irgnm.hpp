#ifndef EMSCAT_IRGNM_HPP
#define EMSCAT_IRGNM_HPP

#include <cstdint>
#include <functional>
#include <string>

#include "emscat/shape_derivative.hpp"

namespace emscat {

struct IrgnmConfig {
  Real alpha0 = 0;  // 0 selects 0.1 * ||data||^2
  Real decay = 2.0 / 3.0;
  Real tau = 4.0;
  Real s = 2.5;  // Sobolev index of the radial space, > 2
  int max_newton = 20;
  Real cg_tol = 1e-8;
  int cg_max = 200;
  int n_fwd = 12;
  int n_inv = 8;  // truncation degree of the reconstructed radial function
  int n_far = 25;
  Real delta_floor_rel = 1e-8;  // effective-noise floor for exact data
  bool debug_probes = false;
  ExecPolicy policy = ExecPolicy::parallel;

  void validate() const;
};

struct MeasurementSet {
  std::vector<PlaneWave> incidents;
  std::vector<FarFieldSamples> data;
  Real delta = 0;
  Real noise_level = 0;
  int n_far = 25;
  int n_synth = 0;
  std::uint64_t seed = 0;
};

std::string measurements_to_json(const MeasurementSet& m);
MeasurementSet measurements_from_json(const std::string& text);

// Forward-solves every incident wave at order n_synth and adds tangential
// pseudorandom noise scaled so the summed squared error equals
// (noise_level * ||clean data||)^2; deterministic under the seed.
MeasurementSet synthesize_data(const StarShape& truth, const DielectricConfig& cfg,
                               const std::vector<PlaneWave>& incidents, Real noise_level,
                               std::uint64_t seed, int n_synth, int n_far = 25,
                               ExecPolicy policy = ExecPolicy::parallel);

// One linearization: the frozen forward state at the current iterate.
struct NewtonLinearization {
  const ForwardContext* ctx = nullptr;
  const MeasurementSet* meas = nullptr;
  std::vector<std::vector<Complex>> u_waves;
  std::vector<FarFieldSamples> residuals;  // data_k - F_k(q)
  Real residual_norm = 0;
};

// Tikhonov-regularized Gauss-Newton update by conjugate gradients on
// (alpha I + sum_k F'_k* F'_k) dq = sum_k F'_k*(residual_k) + alpha (q0 - qN)
// in the H^s inner product.
ScalarCoeffVector cg_normal_step(const NewtonLinearization& lin, const ScalarCoeffVector& qN,
                                 const ScalarCoeffVector& q0, Real alpha,
                                 const IrgnmConfig& cfg);

struct IrgnmIterate {
  int N = 0;
  Real alpha = 0;
  Real residual = 0;
  ScalarCoeffVector r_coeffs;
};

struct IrgnmResult {
  std::vector<IrgnmIterate> history;
  StarShape final_shape;
  std::string stop_reason;  // discrepancy | max_newton | stagnation | forward_failure
  int non_monotone_steps = 0;
};

using IrgnmObserver = std::function<void(const IrgnmIterate&)>;

IrgnmResult run_irgnm(const MeasurementSet& meas, const IrgnmConfig& cfg,
                      const DielectricConfig& diel, const StarShape& q0,
                      const IrgnmObserver& observer = {});

}  // namespace emscat

#endif
