#include "adsflow/pseudo_euclidean.hpp"

#include <cmath>
#include <limits>

namespace adsflow {

double inner(const AmbientVector& u, const AmbientVector& v) {
  if (u.sig != v.sig)
    throw ContractViolation("inner: mismatched signature tags");
  if (u.sig == Signature::R42) return dot22(u.c, v.c);
  return u.c[0] * v.c[0] + u.c[1] * v.c[1] - u.c[2] * v.c[2];
}

Vec4 normal_completion(const Vec4& F, const Vec4& T1, const Vec4& T2) {
  // Rows are the lowered frame vectors, so Euclidean orthogonality of nu to
  // the rows is metric orthogonality to F, T1, T2. Rows are normalized to
  // make the rank threshold scale-free.
  Eigen::Matrix<double, 3, 4> B;
  B.row(0) = lower22(F).transpose();
  B.row(1) = lower22(T1).transpose();
  B.row(2) = lower22(T2).transpose();
  for (int r = 0; r < 3; ++r) {
    const double nrm = B.row(r).norm();
    if (nrm <= 0.0) throw DegenerateFrame("normal_completion: zero frame vector");
    B.row(r) /= nrm;
  }

  // Pick the unknown column whose removal leaves the best conditioned block.
  int pivot = -1;
  double best = -1.0;
  Mat3 block, best_block;
  for (int j = 0; j < 4; ++j) {
    int cc = 0;
    for (int c = 0; c < 4; ++c) {
      if (c == j) continue;
      block.col(cc++) = B.col(c);
    }
    const double d = std::fabs(block.determinant());
    if (d > best) {
      best = d;
      pivot = j;
      best_block = block;
    }
  }
  if (best <= 1e-10)
    throw DegenerateFrame("normal_completion: frame spans less than rank 3");

  const Vec3 rhs = -B.col(pivot);
  const Vec3 sol = best_block.partialPivLu().solve(rhs);
  Vec4 nu;
  int cc = 0;
  for (int c = 0; c < 4; ++c) nu[c] = (c == pivot) ? 1.0 : sol[cc++];

  const double q = dot22(nu, nu);
  if (q >= 0.0)
    throw NoTimelikeCompletion("normal_completion: complement is not timelike");
  nu /= std::sqrt(-q);
  if (!is_future_directed(nu, F)) nu = -nu;
  return nu;
}

VecN generalized_eigen(const MatN& g, const MatN& h) {
  const int n = static_cast<int>(g.rows());
  require(n >= 1 && n <= 2, "generalized_eigen: n must be 1 or 2");
  require(h.rows() == n && h.cols() == n && g.cols() == n,
          "generalized_eigen: dimension mismatch");
  require(is_symmetric(g) && is_symmetric(h),
          "generalized_eigen: inputs must be symmetric");
  require(is_positive_definite(g), "generalized_eigen: g must be positive definite");

  VecN out(n);
  if (n == 1) {
    out[0] = h(0, 0) / g(0, 0);
    return out;
  }
  const Vec2 ev = generalized_eigen2(g.topLeftCorner<2, 2>(), h.topLeftCorner<2, 2>());
  out[0] = ev[0];
  out[1] = ev[1];
  return out;
}

VecN generalized_eigen(const SymTensor2& g, const SymTensor2& h) {
  require(g.var == Variance::Covariant && h.var == Variance::Covariant,
          "generalized_eigen: covariant tensors expected");
  return generalized_eigen(g.m, h.m);
}

Vec4 quadric_project(const Vec4& V, double kappa) {
  require(kappa > 0.0, "quadric_project: kappa must be positive");
  const double q = dot22(V, V);
  if (!(q < 0.0)) throw NotProjectable("quadric_project: <V,V> must be negative");
  const double r2 = -kappa * q;
  // within rounding of the constraint already; rescaling would only add noise
  if (std::fabs(r2 - 1.0) <= 8.0 * std::numeric_limits<double>::epsilon()) return V;
  return V / std::sqrt(r2);
}

}  // namespace adsflow
