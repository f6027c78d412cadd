#pragma once

#include "adsflow/types.hpp"

namespace adsflow {

// Totally symmetric 3-tensor in two dimensions, standing in for the covariant
// derivative of a Codazzi tensor.
struct Sym3 {
  double t[2][2][2] = {};

  double& operator()(int i, int j, int k) { return t[i][j][k]; }
  double operator()(int i, int j, int k) const { return t[i][j][k]; }

  static Sym3 from_components(double t111, double t112, double t122, double t222) {
    Sym3 T;
    T(0, 0, 0) = t111;
    T(0, 0, 1) = T(0, 1, 0) = T(1, 0, 0) = t112;
    T(0, 1, 1) = T(1, 0, 1) = T(1, 1, 0) = t122;
    T(1, 1, 1) = t222;
    return T;
  }
};

// Residuals of the pointwise Kato-type identities for a 2d metric g,
// symmetric tensor h and its formal derivative T = "grad h":
//   kato:   2|h0|^2 (|grad h|^2 - |grad H|^2)
//             = |grad |h0|^2|^2 - 2 h0_ij grad^i|h0|^2 grad^j H
//   cor_i:  2|h0|^2 |grad h0|^2
//             = |grad_i |h0|^2 - h0_ij grad^j H|^2 + (|h0|^2/2)|grad H|^2
//   kato2:  the (H,K)-expanded variant via grad K = (H g^kl - h^kl) T_.kl
//   cor_ii: (2|h|^2 - H^2)|grad h|^2 = ||grad |h|^2||^2  (only when grad H = 0)
// where h0 is the tracefree part of h. cor_i_truncated_gap measures how far
// the truncated form (without the |grad H|^2 completion) differs from that
// completion term; the two coincide identically. `scale` is the magnitude the
// residuals should be compared against.
struct KatoResult {
  double kato = 0.0;
  double kato2 = 0.0;
  double cor_i = 0.0;
  double cor_i_truncated_gap = 0.0;
  double cor_ii = 0.0;  // NaN unless grad H vanishes
  double grad_H_norm = 0.0;
  double scale = 1.0;
};

KatoResult kato_check(const Mat2& g, const Mat2& h, const Sym3& T);

// Removes the trace: returns T' totally symmetric with g^{jk} T'_ijk = 0.
Sym3 remove_trace(const Mat2& g, const Sym3& T);

}  // namespace adsflow
