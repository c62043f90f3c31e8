#include "emscat/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace emscat {

namespace {

SurfacePoint finish_point(const Vec3& xhat, const Vec3& q, const Vec3& t1, const Vec3& t2) {
  SurfacePoint p;
  p.xhat = xhat;
  p.q = q;
  p.t1 = t1;
  p.t2 = t2;
  Vec3 c = cross(t1, t2);
  p.jac = norm(c);
  if (!(p.jac > 0)) throw std::runtime_error("surface parametrization: degenerate Jacobian");
  p.normal = c / p.jac;
  p.dual1 = cross(t2, p.normal);
  p.dual2 = cross(p.normal, t1);
  return p;
}

// q(x̂) = rho(x̂) x̂ with tangential gradient grad_rho = gth e_theta + gph e_phi:
// t1 = gth x̂ + rho e_theta, t2 = gph x̂ + rho e_phi.
SurfacePoint radial_point(Real theta, Real phi, Real rho, Real gth, Real gph) {
  if (!(rho > 0)) throw std::runtime_error("radial parametrization: nonpositive radius");
  Vec3 xh = unit_from_angles(theta, phi);
  Vec3 eth = e_theta_at(theta, phi), eph = e_phi_at(phi);
  return finish_point(xh, xh * rho, xh * gth + eth * rho, xh * gph + eph * rho);
}

class SphereShape final : public SurfaceParametrization {
 public:
  explicit SphereShape(Real radius) : radius_(radius) {
    if (!(radius > 0)) throw std::invalid_argument("sphere: radius must be positive");
  }
  SurfacePoint at(Real theta, Real phi) const override {
    return radial_point(theta, phi, radius_, 0, 0);
  }
  std::string label() const override { return "sphere"; }
  bool is_radial() const override { return true; }
  Real radial(Real, Real) const override { return radius_; }

 private:
  Real radius_;
};

class PeanutShape final : public SurfaceParametrization {
 public:
  SurfacePoint at(Real theta, Real phi) const override {
    Real c2 = std::cos(2 * theta), s2 = std::sin(2 * theta);
    Real w = std::sqrt(1 + c2 * c2);
    Real r = std::sqrt((c2 + w) / (1 + std::sqrt(2.0)));
    Real dr = -s2 * (1 + c2 / w) / (r * (1 + std::sqrt(2.0)));
    Vec3 xh = unit_from_angles(theta, phi);
    Vec3 eth = e_theta_at(theta, phi), eph = e_phi_at(phi);
    auto stretch = [](const Vec3& v) { return Vec3{v.x, 2 * v.y, v.z}; };
    return finish_point(xh, stretch(xh) * r, stretch(xh) * dr + stretch(eth) * r,
                        stretch(eph) * r);
  }
  std::string label() const override { return "peanut"; }
};

class RoundedTetrahedron final : public SurfaceParametrization {
 public:
  SurfacePoint at(Real theta, Real phi) const override {
    Vec3 xh = unit_from_angles(theta, phi);
    Real g = 0, gx = 0, gy = 0, gz = 0;
    auto add = [&](Real a, Real b, Real c, Real scale) {
      Real u = a * xh.x + b * xh.y + c * xh.z;
      if (u >= 0) return;
      Real h = -u;
      Real h4 = h * h * h * h;
      g += scale * h4 * h;
      // grad of max(0,-u)^5 along the sphere: -5 h^4 (w - (w·x̂)x̂)
      Real f = -5 * scale * h4;
      gx += f * (a - u * xh.x);
      gy += f * (b - u * xh.y);
      gz += f * (c - u * xh.z);
    };
    const Real ga = 1.0 / std::sqrt(3.0);
    add(ga, ga, ga, 1.0);
    add(-ga, -ga, ga, 1.0);
    add(-ga, ga, -ga, 1.0);
    add(ga, -ga, -ga, 1.0);
    const Real s = std::pow(5.0, -3.0);
    add(-ga, -ga, -ga, s);
    add(ga, ga, -ga, s);
    add(ga, -ga, ga, s);
    add(-ga, ga, ga, s);
    Real rho = std::pow(g, -0.2);
    Real f = -0.2 * std::pow(g, -1.2);
    Vec3 grad{f * gx, f * gy, f * gz};
    Vec3 eth = e_theta_at(theta, phi), eph = e_phi_at(phi);
    return radial_point(theta, phi, rho, dot(grad, eth), dot(grad, eph));
  }
  std::string label() const override { return "rounded_tetrahedron"; }
  bool is_radial() const override { return true; }
  Real radial(Real theta, Real phi) const override { return norm(at(theta, phi).q); }
};

class StarParametrization final : public SurfaceParametrization {
 public:
  explicit StarParametrization(StarShape shape) : shape_(std::move(shape)) {
    if (!is_real_symmetric(shape_.r_coeffs, 1e-8))
      throw std::invalid_argument("star shape: coefficients are not real-symmetric");
  }

  SurfacePoint at(Real theta, Real phi) const override {
    auto [rho, gth, gph] = eval(theta, phi);
    return radial_point(theta, phi, rho, gth, gph);
  }
  std::string label() const override { return "star"; }
  bool is_radial() const override { return true; }
  Real radial(Real theta, Real phi) const override { return std::get<0>(eval(theta, phi)); }
  const StarShape& shape() const { return shape_; }

 private:
  // rho(θ,φ) and the frame components of grad_{S²} rho, summed directly from
  // the coefficients. Real by the coefficient symmetry; imaginary parts are
  // dropped.
  std::tuple<Real, Real, Real> eval(Real theta, Real phi) const {
    const auto& c = shape_.r_coeffs;
    int n = c.n;
    Real x = std::cos(theta), st = std::sin(theta);
    std::vector<Real> plm;
    assoc_legendre_table(n, x, st, plm);
    Complex val{}, gth{}, gph{};
    Complex eip = std::exp(iu * phi);
    // e^{ijφ} built by recurrence over j >= 0; j<0 terms are conjugate pairs.
    for (int l = 0; l <= n; ++l) {
      Complex ph{1.0, 0.0};
      for (int j = 0; j <= l; ++j) {
        Real nf = harmonic_norm_factor(l, j);
        Real p = plm[plm_index(l, j)];
        Real dp = (l >= 1) ? assoc_legendre_dtheta(l, j, x, plm) : 0.0;
        Complex y = nf * p * ph;
        Complex yt = nf * dp * ph;
        Complex yp = iu * Real(j) * nf * p / st * ph;
        if (j == 0) {
          val += c.at(l, 0) * y;
          gth += c.at(l, 0) * yt;
          gph += c.at(l, 0) * yp;
        } else {
          // c_{l,-j} Y_{l,-j} = conj(c_{l,j} Y_{l,j}) for real-symmetric c
          val += c.at(l, j) * y + std::conj(c.at(l, j) * y);
          gth += c.at(l, j) * yt + std::conj(c.at(l, j) * yt);
          gph += c.at(l, j) * yp + std::conj(c.at(l, j) * yp);
        }
        ph *= eip;
      }
    }
    return {std::real(val), std::real(gth), std::real(gph)};
  }

  StarShape shape_;
};

}  // namespace

StarShape StarShape::sphere(int n_r, Real radius) {
  StarShape s;
  s.r_coeffs = ScalarCoeffVector(n_r);
  s.r_coeffs.at(0, 0) = radius * std::sqrt(4 * pi);
  return s;
}

std::unique_ptr<SurfaceParametrization> make_shape(const std::string& label, Real radius) {
  if (label == "sphere") return std::make_unique<SphereShape>(radius);
  if (label == "peanut") return std::make_unique<PeanutShape>();
  if (label == "rounded_tetrahedron") return std::make_unique<RoundedTetrahedron>();
  throw std::invalid_argument("make_shape: unknown label '" + label + "'");
}

std::unique_ptr<SurfaceParametrization> star_to_param(const StarShape& shape) {
  auto p = std::make_unique<StarParametrization>(shape);
  // Positivity probe on a grid fine enough for the stored degree.
  QuadratureGrid g = build_gauss_grid(std::max(2 * shape.degree() + 2, 8));
  for (int tau = 0; tau < g.n_theta(); ++tau)
    for (int rho = 0; rho < g.n_phi(); ++rho)
      if (!(p->radial(g.theta_nodes[tau], g.phi_nodes[rho]) > 0))
        throw std::invalid_argument("star_to_param: radial function is not positive");
  return p;
}

std::string star_to_json(const StarShape& shape) {
  nlohmann::json j;
  j["n_r"] = shape.degree();
  auto arr = nlohmann::json::array();
  for (int l = 0; l <= shape.degree(); ++l)
    for (int m = -l; m <= l; ++m) {
      Complex c = shape.r_coeffs.at(l, m);
      if (c != Complex{}) arr.push_back({l, m, std::real(c), std::imag(c)});
    }
  j["coeffs"] = arr;
  return j.dump(2);
}

StarShape star_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  StarShape s;
  int n = j.at("n_r").get<int>();
  if (n < 0) throw std::invalid_argument("star_from_json: n_r must be >= 0");
  s.r_coeffs = ScalarCoeffVector(n);
  for (const auto& e : j.at("coeffs")) {
    int l = e.at(0).get<int>(), m = e.at(1).get<int>();
    if (l < 0 || l > n || std::abs(m) > l)
      throw std::invalid_argument("star_from_json: index out of range");
    s.r_coeffs.at(l, m) = Complex(e.at(2).get<double>(), e.at(3).get<double>());
  }
  if (!is_real_symmetric(s.r_coeffs, 1e-10 * (1.0 + sobolev_norm(s.r_coeffs, 0))))
    throw std::invalid_argument("star_from_json: coefficients not real-symmetric");
  return s;
}

GridGeometry build_grid_geometry(const SurfaceParametrization& param, const QuadratureGrid& grid) {
  GridGeometry geo;
  geo.pts.resize(grid.size());
  geo.e_th.resize(grid.size());
  geo.e_ph.resize(grid.size());
  int nph = grid.n_phi(), nth = grid.n_theta();
#pragma omp parallel for schedule(static)
  for (int rho = 0; rho < nph; ++rho)
    for (int tau = 0; tau < nth; ++tau) {
      std::size_t i = grid.node_index(rho, tau);
      geo.pts[i] = param.at(grid.theta_nodes[tau], grid.phi_nodes[rho]);
      geo.e_th[i] = e_theta_at(grid.theta_nodes[tau], grid.phi_nodes[rho]);
      geo.e_ph[i] = e_phi_at(grid.phi_nodes[rho]);
    }
  return geo;
}

TangentialSamples piola_push(const GridGeometry& geo, const std::vector<CVec3>& on_surface) {
  if (on_surface.size() != geo.pts.size())
    throw std::invalid_argument("piola_push: sample count mismatch");
  TangentialSamples out;
  out.comp_theta.resize(on_surface.size());
  out.comp_phi.resize(on_surface.size());
  for (std::size_t i = 0; i < on_surface.size(); ++i) {
    out.comp_theta[i] = dot(on_surface[i], geo.pts[i].dual1);
    out.comp_phi[i] = dot(on_surface[i], geo.pts[i].dual2);
  }
  return out;
}

std::vector<CVec3> piola_pull(const GridGeometry& geo, const TangentialSamples& on_sphere) {
  if (on_sphere.comp_theta.size() != geo.pts.size())
    throw std::invalid_argument("piola_pull: sample count mismatch");
  std::vector<CVec3> out(geo.pts.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const SurfacePoint& p = geo.pts[i];
    out[i] = (CVec3(p.t1) * on_sphere.comp_theta[i] + CVec3(p.t2) * on_sphere.comp_phi[i]) *
             Complex(1.0 / p.jac);
  }
  return out;
}

SurfacePoint fd_surface_point(const SurfaceParametrization& param, Real theta, Real phi, Real h) {
  auto qp = [&](Real t, Real p) { return param.at(t, p).q; };
  auto d5 = [&](auto f) {
    return (f(-2.0) * 1.0 - f(-1.0) * 8.0 + f(1.0) * 8.0 - f(2.0) * 1.0) / (12.0 * h);
  };
  Vec3 t1 = d5([&](Real k) { return qp(theta + k * h, phi); });
  Vec3 t2 = d5([&](Real k) { return qp(theta, phi + k * h); }) / std::sin(theta);
  return finish_point(unit_from_angles(theta, phi), qp(theta, phi), t1, t2);
}

}  // namespace emscat
