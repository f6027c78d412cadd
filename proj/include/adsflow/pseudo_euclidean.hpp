#pragma once

#include "adsflow/types.hpp"

namespace adsflow {

// Ambient signatures: R42 is R^4 with ++--, R31 is R^3 with ++-.
enum class Signature { R42, R31 };

// Tagged ambient vector. R31 vectors use components 0..2; component 3 is zero.
struct AmbientVector {
  Vec4 c = Vec4::Zero();
  Signature sig = Signature::R42;

  static AmbientVector r42(double x, double y, double z, double w) {
    return {Vec4(x, y, z, w), Signature::R42};
  }
  static AmbientVector r42(const Vec4& v) { return {v, Signature::R42}; }
  static AmbientVector r31(double x, double y, double z) {
    return {Vec4(x, y, z, 0.0), Signature::R31};
  }
  static AmbientVector r31(const Vec3& v) {
    return {Vec4(v[0], v[1], v[2], 0.0), Signature::R31};
  }
};

// <u,v> = u1 v1 + u2 v2 - u3 v3 - u4 v4
inline double dot22(const Vec4& u, const Vec4& v) {
  return u[0] * v[0] + u[1] * v[1] - u[2] * v[2] - u[3] * v[3];
}

// <u,v> = u1 v1 + u2 v2 - u3 v3
inline double dot21(const Vec3& u, const Vec3& v) {
  return u[0] * v[0] + u[1] * v[1] - u[2] * v[2];
}

// Metric-lowered copy: Euclidean dot against it realizes the signed product.
inline Vec4 lower22(const Vec4& v) { return Vec4(v[0], v[1], -v[2], -v[3]); }

// Signed bilinear form of two equally tagged ambient vectors.
double inner(const AmbientVector& u, const AmbientVector& v);

// Tangent of the global time circle t = atan2(V4, V3) at F; declared future.
inline Vec4 time_circle_tangent(const Vec4& F) {
  return Vec4(0.0, 0.0, -F[3], F[2]);
}

// True when the timelike vector u points to the future at base point F.
inline bool is_future_directed(const Vec4& u, const Vec4& F) {
  return dot22(u, time_circle_tangent(F)) < 0.0;
}

// Unit timelike normal of span{F, T1, T2}, future directed. Solves the three
// orthogonality conditions on the best-pivoted 3x3 block and normalizes.
Vec4 normal_completion(const Vec4& F, const Vec4& T1, const Vec4& T2);

// Eigenvalues of g^{-1} h, ascending, for n in {1,2} and positive definite g.
VecN generalized_eigen(const MatN& g, const MatN& h);
VecN generalized_eigen(const SymTensor2& g, const SymTensor2& h);

inline Vec2 generalized_eigen2(const Mat2& g, const Mat2& h) {
  // roots of det(h - x g) = 0, stable quadratic formula
  const double a = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  const double b = -(g(0, 0) * h(1, 1) + g(1, 1) * h(0, 0) - 2.0 * g(0, 1) * h(0, 1));
  const double c = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) disc = 0.0;  // symmetric pencil with g > 0 has real roots
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  double r1 = q / a;
  double r2 = (q != 0.0) ? c / q : 0.0;
  if (r1 > r2) std::swap(r1, r2);
  return Vec2(r1, r2);
}

// Radial rescale of a timelike vector onto <V,V> = -1/kappa.
Vec4 quadric_project(const Vec4& V, double kappa);

}  // namespace adsflow
