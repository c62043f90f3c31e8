#include "emscat/rotation.hpp"

#include <cmath>

namespace emscat {

namespace {

Mat3 rot_z(Real a) {
  Mat3 m;
  m.a = {std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1};
  return m;
}

Mat3 rot_y(Real a) {
  Mat3 m;
  m.a = {std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a)};
  return m;
}

Real binom(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

Mat3 rotation_to_north(Real theta, Real phi) {
  return rot_z(phi) * rot_y(-theta) * rot_z(-phi);
}

Mat3 rotation_to_north(const Vec3& xhat) {
  SphCoord s = angles_from_unit(xhat);
  return rotation_to_north(s.theta, s.phi);
}

WignerHalfPi build_wigner_half_pi(int lmax) {
  WignerHalfPi w;
  w.lmax = lmax;
  w.offset.resize(lmax + 1);
  std::size_t total = 0;
  for (int l = 0; l <= lmax; ++l) {
    w.offset[l] = total;
    total += static_cast<std::size_t>(2 * l + 1) * (2 * l + 1);
  }
  w.d.assign(total, 0.0);
  auto ref = [&w](int l, int m, int n) -> Real& {
    return w.d[w.offset[l] + (m + l) * (2 * l + 1) + (n + l)];
  };

  ref(0, 0, 0) = 1.0;
  // d^{l0}_{m,l0}(pi/2) = sqrt(C(2 l0, l0 - m)) 2^{-l0}; other edges by the
  // symmetries d_{mn} = (-1)^{m-n} d_{nm} = d_{-n,-m}. Interior values by the
  // three-term recurrence in l at cos(beta) = 0.
  for (int l = 1; l <= lmax; ++l) {
    for (int m = -l; m <= l; ++m) {
      Real base = binom(2 * l, l - m) * std::pow(0.5, 2 * l);
      Real v = std::sqrt(base);
      ref(l, m, l) = v;
      ref(l, l, m) = ((l - m) % 2 == 0) ? v : -v;
      Real vneg = std::sqrt(binom(2 * l, l + m) * std::pow(0.5, 2 * l));
      ref(l, m, -l) = ((l + m) % 2 == 0) ? vneg : -vneg;
      ref(l, -l, m) = vneg;
    }
    if (l == 1) {
      ref(1, 0, 0) = 0.0;  // d^1_{00}(pi/2) = cos(pi/2)
      continue;
    }
    for (int m = -(l - 1); m <= l - 1; ++m)
      for (int n = -(l - 1); n <= l - 1; ++n) {
        int l0 = std::max(std::abs(m), std::abs(n));
        int lp = l - 1;
        Real dl = (lp >= l0) ? ref(lp, m, n) : 0.0;
        Real dlm1 = (lp - 1 >= l0) ? ref(lp - 1, m, n) : 0.0;
        Real num = -(2 * lp + 1) * Real(m) * n * dl -
                   (lp + 1.0) * std::sqrt(Real(lp * lp - m * m) * (lp * lp - n * n)) * dlm1;
        Real den = lp * std::sqrt(Real((lp + 1) * (lp + 1) - m * m) *
                                  Real((lp + 1) * (lp + 1) - n * n));
        ref(l, m, n) = num / den;
      }
  }
  return w;
}

RotationTable build_rotation_table(int n, const QuadratureGrid& grid) {
  RotationTable t;
  t.n = n;
  t.thetas = grid.theta_nodes;
  t.dhalf = build_wigner_half_pi(n);
  t.offset_l.resize(n + 1);
  std::size_t per = 0;
  for (int l = 0; l <= n; ++l) {
    t.offset_l[l] = per;
    per += static_cast<std::size_t>(2 * l + 1) * (2 * l + 1);
  }
  t.per_theta = per;
  int nth = static_cast<int>(t.thetas.size());
  t.F.assign(per * nth, Complex{});

#pragma omp parallel for schedule(static)
  for (int tau = 0; tau < nth; ++tau) {
    Real theta = t.thetas[tau];
    std::vector<Complex> ph(2 * n + 1);
    for (int lt = -n; lt <= n; ++lt) ph[lt + n] = std::exp(-iu * Real(lt) * theta);
    for (int l = 0; l <= n; ++l)
      for (int jt = -l; jt <= l; ++jt)
        for (int j = -l; j <= l; ++j) {
          Complex acc{};
          for (int lt = -l; lt <= l; ++lt)
            acc += t.dhalf.at(l, j, lt) * t.dhalf.at(l, jt, lt) * ph[lt + n];
          Complex phase = std::exp(iu * Real(jt - j) * (pi / 2));
          t.F[static_cast<std::size_t>(tau) * per + t.offset_l[l] + (jt + l) * (2 * l + 1) +
              (j + l)] = phase * acc;
        }
  }
  return t;
}

}  // namespace emscat
