#include "emscat/incident.hpp"

#include <cmath>
#include <stdexcept>

namespace emscat {

namespace {

CVec3 herglotz_field_on(const QuadratureGrid& g, const HerglotzWave& h, Real kappa_e, Real mu_e,
                        const Vec3& x, bool curl) {
  if (h.kernel.size() != g.size())
    throw std::invalid_argument("herglotz kernel size does not match its far grid");
  CVec3 acc;
  for (int rho = 0; rho < g.n_phi(); ++rho)
    for (int tau = 0; tau < g.n_theta(); ++tau) {
      std::size_t i = g.node_index(rho, tau);
      Vec3 xh = g.node(rho, tau);
      Complex ph = g.weight(rho, tau) * std::exp(-iu * kappa_e * dot(xh, x));
      if (curl)
        acc += ph * (-iu * kappa_e) * cross(xh, h.kernel[i]);
      else
        acc += ph * h.kernel[i];
    }
  return mu_e / (4 * pi) * acc;
}

CVec3 herglotz_field(const HerglotzWave& h, Real kappa_e, Real mu_e, const Vec3& x, bool curl) {
  return herglotz_field_on(build_gauss_grid(h.n_far), h, kappa_e, mu_e, x, curl);
}

}  // namespace

void validate_incident(const IncidentField& inc) {
  if (const auto* pw = std::get_if<PlaneWave>(&inc)) {
    if (std::abs(norm(pw->d) - 1) > 1e-12 || std::abs(norm(pw->p) - 1) > 1e-12)
      throw std::invalid_argument("plane wave: d and p must be unit vectors");
    if (std::abs(dot(pw->d, pw->p)) > 1e-14)
      throw std::invalid_argument("plane wave: polarization must be orthogonal to direction");
  } else if (const auto* ps = std::get_if<PointSource>(&inc)) {
    if (std::abs(norm(ps->p) - 1) > 1e-12)
      throw std::invalid_argument("point source: p must be a unit vector");
  }
}

CVec3 incident_field(const IncidentField& inc, Real kappa_e, Real mu_e, const Vec3& x) {
  if (const auto* pw = std::get_if<PlaneWave>(&inc)) {
    return std::exp(iu * kappa_e * dot(x, pw->d)) * CVec3(pw->p);
  }
  if (const auto* ps = std::get_if<PointSource>(&inc)) {
    // grad Phi(x - s) x p
    Vec3 rv = x - ps->s;
    Real r = norm(rv);
    Complex phi = std::exp(iu * kappa_e * r) / (4 * pi * r);
    Complex dphi = (iu * kappa_e - 1.0 / r) * phi;
    return dphi * cross(rv / r, CVec3(ps->p));
  }
  return herglotz_field(std::get<HerglotzWave>(inc), kappa_e, mu_e, x, false);
}

CVec3 incident_curl(const IncidentField& inc, Real kappa_e, Real mu_e, const Vec3& x) {
  if (const auto* pw = std::get_if<PlaneWave>(&inc)) {
    return iu * kappa_e * std::exp(iu * kappa_e * dot(x, pw->d)) * CVec3(cross(pw->d, pw->p));
  }
  if (const auto* ps = std::get_if<PointSource>(&inc)) {
    // curl(grad Phi x p) = kappa^2 Phi p + Hess(Phi) p
    Vec3 rv = x - ps->s;
    Real r = norm(rv);
    Vec3 rh = rv / r;
    Complex phi = std::exp(iu * kappa_e * r) / (4 * pi * r);
    Complex dphi = (iu * kappa_e - 1.0 / r) * phi;
    Complex ddphi = ((iu * kappa_e - 1.0 / r) * (iu * kappa_e - 1.0 / r) + 1.0 / (r * r)) * phi;
    Real pr = dot(ps->p, rh);
    return (kappa_e * kappa_e * phi + dphi / r) * CVec3(ps->p) +
           (ddphi - dphi / r) * pr * CVec3(rh);
  }
  return herglotz_field(std::get<HerglotzWave>(inc), kappa_e, mu_e, x, true);
}

TraceSamples eval_incident_traces(const IncidentField& inc, const SurfaceParametrization& param,
                                  const GridGeometry& geo, Real kappa_e, Real mu_e) {
  validate_incident(inc);
  if (const auto* ps = std::get_if<PointSource>(&inc)) {
    if (param.is_radial()) {
      Real r = norm(ps->s);
      if (r > 0) {
        SphCoord sc = angles_from_unit(ps->s / r);
        if (r >= param.radial(sc.theta, sc.phi))
          throw std::invalid_argument("point source lies outside the obstacle");
      }
    }
  }
  TraceSamples t;
  t.electric.resize(geo.pts.size());
  t.magnetic.resize(geo.pts.size());
  if (const auto* hg = std::get_if<HerglotzWave>(&inc)) {
    QuadratureGrid far = build_gauss_grid(hg->n_far);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(geo.pts.size()); ++i) {
      const SurfacePoint& sp = geo.pts[i];
      t.electric[i] = cross(sp.normal, herglotz_field_on(far, *hg, kappa_e, mu_e, sp.q, false));
      t.magnetic[i] =
          (1.0 / mu_e) * cross(sp.normal, herglotz_field_on(far, *hg, kappa_e, mu_e, sp.q, true));
    }
    return t;
  }
  for (std::size_t i = 0; i < geo.pts.size(); ++i) {
    const SurfacePoint& sp = geo.pts[i];
    t.electric[i] = cross(sp.normal, incident_field(inc, kappa_e, mu_e, sp.q));
    t.magnetic[i] = (1.0 / mu_e) * cross(sp.normal, incident_curl(inc, kappa_e, mu_e, sp.q));
  }
  return t;
}

}  // namespace emscat
