#ifndef EMSCAT_TYPES_HPP
#define EMSCAT_TYPES_HPP

#include <array>
#include <cmath>
#include <complex>

namespace emscat {

using Real = double;
using Complex = std::complex<double>;

inline constexpr Real pi = 3.14159265358979323846;
inline constexpr Complex iu{0.0, 1.0};

struct Vec3 {
  Real x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(Real s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(Real s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
};

inline Vec3 operator*(Real s, const Vec3& v) { return v * s; }
inline Real dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Real norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }

// Complex-valued 3-vector (fields, traces, far-field samples).
struct CVec3 {
  Complex x{}, y{}, z{};

  CVec3() = default;
  CVec3(Complex a, Complex b, Complex c) : x(a), y(b), z(c) {}
  explicit CVec3(const Vec3& v) : x(v.x), y(v.y), z(v.z) {}

  CVec3 operator+(const CVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  CVec3 operator-(const CVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  CVec3 operator*(Complex s) const { return {x * s, y * s, z * s}; }
  CVec3 operator-() const { return {-x, -y, -z}; }
  CVec3& operator+=(const CVec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
};

inline CVec3 operator*(Complex s, const CVec3& v) { return v * s; }
inline Complex dot(const CVec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Complex dot(const Vec3& a, const CVec3& b) { return b.x * a.x + b.y * a.y + b.z * a.z; }
// Bilinear dot, no conjugation.
inline Complex bdot(const CVec3& a, const CVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
// Sesquilinear dot, conjugate on the second argument.
inline Complex hdot(const CVec3& a, const CVec3& b) {
  return a.x * std::conj(b.x) + a.y * std::conj(b.y) + a.z * std::conj(b.z);
}
inline CVec3 cross(const Vec3& a, const CVec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline CVec3 cross(const CVec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Real norm(const CVec3& v) { return std::sqrt(std::real(hdot(v, v))); }
inline CVec3 conj(const CVec3& v) { return {std::conj(v.x), std::conj(v.y), std::conj(v.z)}; }

// Row-major 3x3 real matrix, used for rotations.
struct Mat3 {
  std::array<Real, 9> a{};

  Real& operator()(int i, int j) { return a[3 * i + j]; }
  Real operator()(int i, int j) const { return a[3 * i + j]; }

  Vec3 apply(const Vec3& v) const {
    return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
            a[3] * v.x + a[4] * v.y + a[5] * v.z,
            a[6] * v.x + a[7] * v.y + a[8] * v.z};
  }
  // Transpose; for orthogonal matrices this is the inverse.
  Vec3 apply_t(const Vec3& v) const {
    return {a[0] * v.x + a[3] * v.y + a[6] * v.z,
            a[1] * v.x + a[4] * v.y + a[7] * v.z,
            a[2] * v.x + a[5] * v.y + a[8] * v.z};
  }
  static Mat3 identity() {
    Mat3 m;
    m.a = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return m;
  }
};

inline Mat3 operator*(const Mat3& A, const Mat3& B) {
  Mat3 C;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Real s = 0;
      for (int k = 0; k < 3; ++k) s += A(i, k) * B(k, j);
      C(i, j) = s;
    }
  return C;
}

// Spherical coordinates of a unit vector; theta in [0,pi], phi in [0,2pi).
struct SphCoord {
  Real theta, phi;
};

inline Vec3 unit_from_angles(Real theta, Real phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

inline SphCoord angles_from_unit(const Vec3& v) {
  Real theta = std::atan2(std::hypot(v.x, v.y), v.z);
  Real phi = std::atan2(v.y, v.x);
  if (phi < 0) phi += 2 * pi;
  return {theta, phi};
}

// Local orthonormal tangent frame; (e_theta, e_phi, x̂) is right-handed.
inline Vec3 e_theta_at(Real theta, Real phi) {
  return {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
}
inline Vec3 e_phi_at(Real phi) { return {-std::sin(phi), std::cos(phi), 0.0}; }

}  // namespace emscat

#endif
