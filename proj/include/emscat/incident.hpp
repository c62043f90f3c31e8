#ifndef EMSCAT_INCIDENT_HPP
#define EMSCAT_INCIDENT_HPP

#include <variant>
#include <vector>

#include "emscat/assembly.hpp"
#include "emscat/geometry.hpp"
#include "emscat/types.hpp"

namespace emscat {

struct PlaneWave {
  Vec3 d, p;  // unit direction and polarization, d·p = 0
};

struct PointSource {
  Vec3 s;  // source location, strictly inside the obstacle
  Vec3 p;  // unit vector
};

// Superposition of plane waves with a tangential kernel on the far grid:
// E(y) = (mu_e/4pi) sum of e^{-i kappa_e x̂·y} h(x̂) over the far quadrature.
struct HerglotzWave {
  int n_far = 0;
  std::vector<CVec3> kernel;
};

using IncidentField = std::variant<PlaneWave, PointSource, HerglotzWave>;

void validate_incident(const IncidentField& inc);

CVec3 incident_field(const IncidentField& inc, Real kappa_e, Real mu_e, const Vec3& x);
CVec3 incident_curl(const IncidentField& inc, Real kappa_e, Real mu_e, const Vec3& x);

// (n x E, (1/mu_e) n x curl E) at the mapped grid nodes. The point-source
// containment check runs for radial shapes only.
TraceSamples eval_incident_traces(const IncidentField& inc, const SurfaceParametrization& param,
                                  const GridGeometry& geo, Real kappa_e, Real mu_e);

}  // namespace emscat

#endif
