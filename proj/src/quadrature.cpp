#include "emscat/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace emscat {

Real legendre_p(int l, Real x) {
  if (l == 0) return 1.0;
  Real pm1 = 1.0, p = x;
  for (int k = 2; k <= l; ++k) {
    Real pn = ((2 * k - 1) * x * p - (k - 1) * pm1) / k;
    pm1 = p;
    p = pn;
  }
  return p;
}

void legendre_all(int lmax, Real x, std::vector<Real>& out) {
  out.resize(lmax + 1);
  out[0] = 1.0;
  if (lmax == 0) return;
  out[1] = x;
  for (int k = 2; k <= lmax; ++k)
    out[k] = ((2 * k - 1) * x * out[k - 1] - (k - 1) * out[k - 2]) / k;
}

namespace {

// Zeros of P_m by Newton iteration on the three-term recurrence.
void gauss_legendre(int m, std::vector<Real>& x, std::vector<Real>& w) {
  x.resize(m);
  w.resize(m);
  for (int k = 0; k < m; ++k) {
    // Standard asymptotic initial guess, ordered decreasing in x.
    Real t = std::cos(pi * (k + 0.75) / (m + 0.5));
    Real dp = 0;
    for (int it = 0; it < 100; ++it) {
      Real pm1 = 1.0, p = t;
      for (int l = 2; l <= m; ++l) {
        Real pn = ((2 * l - 1) * t * p - (l - 1) * pm1) / l;
        pm1 = p;
        p = pn;
      }
      dp = m * (t * p - pm1) / (t * t - 1.0);
      Real dt = p / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    // One clean-up step so the residual is at rounding level.
    {
      Real pm1 = 1.0, p = t;
      for (int l = 2; l <= m; ++l) {
        Real pn = ((2 * l - 1) * t * p - (l - 1) * pm1) / l;
        pm1 = p;
        p = pn;
      }
      dp = m * (t * p - pm1) / (t * t - 1.0);
      t -= p / dp;
    }
    x[k] = t;
    w[k] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

QuadratureGrid build_gauss_grid(int n) {
  if (n < 1) throw std::invalid_argument("build_gauss_grid: order must be >= 1");
  QuadratureGrid g;
  g.n = n;
  std::vector<Real> x, w;
  gauss_legendre(n + 1, x, w);
  g.theta_nodes.resize(n + 1);
  g.nu_weights = w;
  for (int tau = 0; tau <= n; ++tau) g.theta_nodes[tau] = std::acos(x[tau]);
  g.mu_weight = pi / (n + 1);
  g.phi_nodes.resize(2 * n + 2);
  for (int rho = 0; rho <= 2 * n + 1; ++rho) g.phi_nodes[rho] = rho * pi / (n + 1);
  return g;
}

}  // namespace emscat
