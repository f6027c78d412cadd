#include "adsflow/kato.hpp"

#include <cmath>
#include <limits>

namespace adsflow {

namespace {

bool totally_symmetric(const Sym3& T, double tol) {
  double mx = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) mx = std::max(mx, std::fabs(T(i, j, k)));
  const double gate = tol * std::max(1.0, mx);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        if (std::fabs(T(i, j, k) - T(j, i, k)) > gate) return false;
        if (std::fabs(T(i, j, k) - T(i, k, j)) > gate) return false;
      }
  return true;
}

}  // namespace

KatoResult kato_check(const Mat2& g, const Mat2& h, const Sym3& T) {
  require(is_positive_definite(MatN(g)), "kato_check: g must be positive definite");
  require(is_symmetric(MatN(h)), "kato_check: h must be symmetric");
  require(totally_symmetric(T, 1e-12), "kato_check: T must be totally symmetric");

  const Mat2 gi = g.inverse();
  const double H = (gi * h).trace();
  const Mat2 h0 = h - 0.5 * H * g;
  const Mat2 h0_up = gi * h0 * gi;  // both indices raised
  const Mat2 h_up = gi * h * gi;

  // gradients from T
  Vec2 dH = Vec2::Zero();
  Vec2 dK = Vec2::Zero();
  Vec2 dh0sq = Vec2::Zero();
  Vec2 dhsq = Vec2::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        dH[i] += gi(j, k) * T(i, j, k);
        dK[i] += (H * gi(j, k) - h_up(j, k)) * T(i, j, k);
        dhsq[i] += 2.0 * h_up(j, k) * T(i, j, k);
      }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        dh0sq[i] += 2.0 * h0_up(j, k) * (T(i, j, k) - 0.5 * dH[i] * g(j, k));

  const double h0sq = (h0_up.cwiseProduct(h0)).sum();
  const double hsq = (h_up.cwiseProduct(h)).sum();

  // |grad h|^2 and |grad h0|^2 with all indices raised by g
  double grad_h_sq = 0.0;
  double grad_h0_sq = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
              const double up = gi(i, a) * gi(j, b) * gi(k, c);
              grad_h_sq += up * T(i, j, k) * T(a, b, c);
              grad_h0_sq += up * (T(i, j, k) - 0.5 * dH[i] * g(j, k)) *
                            (T(a, b, c) - 0.5 * dH[a] * g(b, c));
            }

  const double grad_H_sq = dH.dot(gi * dH);
  const double grad_K_sq = dK.dot(gi * dK);
  const double dHdK = dH.dot(gi * dK);
  const double grad_h0sq_sq = dh0sq.dot(gi * dh0sq);

  KatoResult out;
  out.grad_H_norm = std::sqrt(std::max(0.0, grad_H_sq));

  // main identity
  {
    const double lhs = 2.0 * h0sq * (grad_h_sq - grad_H_sq);
    double cross = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) cross += h0_up(i, j) * dh0sq[i] * dH[j];
    const double rhs = grad_h0sq_sq - 2.0 * cross;
    out.kato = std::fabs(lhs - rhs);
    out.scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs), grad_h0sq_sq,
                          2.0 * h0sq * grad_h_sq});
  }

  // Tracefree-gradient identity. In 2d, h0_ik h0^k_j = (|h0|^2/2) g_ij, so
  // the complete form is
  //   2|h0|^2 |grad h0|^2
  //     = |grad_i |h0|^2 - h0_ij grad^j H|^2 + (|h0|^2/2) |grad H|^2,
  // and dropping the last term leaves a defect equal to it identically.
  {
    const double lhs = 2.0 * h0sq * grad_h0_sq;
    Vec2 v;
    for (int i = 0; i < 2; ++i) {
      v[i] = dh0sq[i];
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) v[i] -= h0(i, j) * gi(j, k) * dH[k];
    }
    const double vsq = v.dot(gi * v);
    const double completion = 0.5 * h0sq * grad_H_sq;
    out.cor_i = std::fabs(lhs - vsq - completion);
    out.cor_i_truncated_gap = std::fabs(std::fabs(lhs - vsq) - completion);
    out.scale = std::max({out.scale, std::fabs(lhs), vsq});
  }

  // (H,K)-expanded variant
  {
    const double K = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)) / g.determinant();
    const double lhs = (H * H - 4.0 * K) * (grad_h_sq - grad_H_sq);
    double mixed = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        mixed += (H * gi(i, j) - h_up(i, j)) * (H * dH[i] * dH[j] - 2.0 * dH[i] * dK[j]);
    const double rhs = 2.0 * mixed - 2.0 * H * dHdK + 4.0 * grad_K_sq;
    out.kato2 = std::fabs(lhs - rhs);
    out.scale = std::max({out.scale, std::fabs(lhs), std::fabs(rhs)});
  }

  // optimal variant, meaningful only on grad H = 0 input
  if (out.grad_H_norm <= 1e-12 * std::max(1.0, std::sqrt(grad_h_sq))) {
    const double lhs = (2.0 * hsq - H * H) * grad_h_sq;
    const double rhs = dhsq.dot(gi * dhsq);
    out.cor_ii = std::fabs(lhs - rhs);
    out.scale = std::max({out.scale, std::fabs(lhs), std::fabs(rhs)});
  } else {
    out.cor_ii = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

Sym3 remove_trace(const Mat2& g, const Sym3& T) {
  const Mat2 gi = g.inverse();
  Vec2 tr = Vec2::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) tr[i] += gi(j, k) * T(i, j, k);
  // in 2d the pure-trace symmetric part A_i g_jk + A_j g_ik + A_k g_ij has
  // g-trace (n + 2) A_i = 4 A_i
  const Vec2 A = tr / 4.0;
  Sym3 out = T;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        out(i, j, k) -= A[i] * g(j, k) + A[j] * g(i, k) + A[k] * g(i, j);
  return out;
}

}  // namespace adsflow
