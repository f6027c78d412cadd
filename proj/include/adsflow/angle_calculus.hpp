#pragma once

#include "adsflow/types.hpp"

#include <cmath>
#include <functional>
#include <optional>

namespace adsflow {

// Lagrangian angle together with its symmetric-polynomial witnesses.
// With x_i = lambda_i / sqrt(kappa):
//   s[k]    elementary symmetric value s_k(x),
//   a       s1 - s3, b = s0 - s2 + s4  (truncated at k = n),
//   sqrt(kappa) * phi = atan2(a, b) + 2*pi*winding.
struct AngleEval {
  double phi = 0.0;
  double a = 0.0;
  double b = 1.0;
  int winding = 0;
  int n = 0;
  std::array<double, 5> s{1.0, 0.0, 0.0, 0.0, 0.0};
};

// Raised when n >= 3 and the atan2 branch is ambiguous without a prior value.
struct AnglePriorNeeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Winding selection. alpha = sqrt(kappa)*phi lies in (-n*pi/2, n*pi/2); the
// admissible branches differ from atan2 by 2*pi*k with k in {-1,0,1}.
inline AngleEval assemble_angle(int n, double kappa, double a, double b,
                                const std::array<double, 5>& s,
                                std::optional<double> prior_phi) {
  constexpr double kPi = 3.14159265358979323846;
  const double half_range = 0.5 * n * kPi + 1e-9;
  const double alpha0 = std::atan2(a, b);
  int candidates[3];
  int n_cand = 0;
  for (int k = -1; k <= 1; ++k) {
    if (std::fabs(alpha0 + 2.0 * kPi * k) < half_range) candidates[n_cand++] = k;
  }
  int chosen = 0;
  if (n <= 2) {
    chosen = 0;
  } else if (n_cand <= 1) {
    chosen = (n_cand == 1) ? candidates[0] : 0;
  } else if (prior_phi) {
    const double sk = std::sqrt(kappa);
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < n_cand; ++c) {
      const double phi_c = (alpha0 + 2.0 * kPi * candidates[c]) / sk;
      const double dist = std::fabs(phi_c - *prior_phi);
      if (dist < best) {
        best = dist;
        chosen = candidates[c];
      }
    }
  } else {
    throw AnglePriorNeeded(
        "smooth_angle: branch ambiguous for n >= 3, supply a prior angle");
  }

  AngleEval out;
  out.n = n;
  out.a = a;
  out.b = b;
  out.s = s;
  out.winding = chosen;
  out.phi = (alpha0 + 2.0 * kPi * chosen) / std::sqrt(kappa);
  return out;
}

}  // namespace detail

// Smooth evaluation of phi = kappa^{-1/2} sum_i arctan(lambda_i / kappa^{1/2})
// from the characteristic polynomial of the scaled Weingarten map. Eigenvalues
// are never extracted; a and b come from traces via Newton's identities, which
// keeps the value smooth across eigenvalue crossings.
template <class DG, class DH>
AngleEval smooth_angle(const Eigen::MatrixBase<DG>& g, const Eigen::MatrixBase<DH>& h,
                       double kappa, std::optional<double> prior_phi = {}) {
  require(kappa > 0.0, "smooth_angle: kappa must be positive");
  const int n = static_cast<int>(g.rows());
  require(n >= 1 && n <= 4, "smooth_angle: n must be in 1..4");
  require(h.rows() == n && h.cols() == n && g.cols() == n,
          "smooth_angle: dimension mismatch");
  {
    Eigen::LLT<typename DG::PlainObject> llt(g.derived());
    require(llt.info() == Eigen::Success, "smooth_angle: g must be positive definite");
  }

  const auto X = (g.inverse() * h / std::sqrt(kappa)).eval();

  double p[5] = {0, 0, 0, 0, 0};
  auto P = X;
  for (int k = 1; k <= n; ++k) {
    p[k] = P.trace();
    if (k < n) P = (P * X).eval();
  }
  std::array<double, 5> s{1.0, 0.0, 0.0, 0.0, 0.0};
  if (n >= 1) s[1] = p[1];
  if (n >= 2) s[2] = (s[1] * p[1] - p[2]) / 2.0;
  if (n >= 3) s[3] = (s[2] * p[1] - s[1] * p[2] + p[3]) / 3.0;
  if (n >= 4) s[4] = (s[3] * p[1] - s[2] * p[2] + s[1] * p[3] - p[4]) / 4.0;

  const double a = s[1] - (n >= 3 ? s[3] : 0.0);
  const double b = s[0] - (n >= 2 ? s[2] : 0.0) + (n >= 4 ? s[4] : 0.0);
  // a^2 + b^2 = prod(1 + x_i^2) >= 1 up to rounding
  if (a * a + b * b < 1.0 - 1e-10 * (1.0 + a * a + b * b))
    throw ContractViolation("smooth_angle: witness identity a^2+b^2 >= 1 violated");

  return detail::assemble_angle(n, kappa, a, b, s, prior_phi);
}

AngleEval smooth_angle(const SymTensor2& g, const SymTensor2& h, double kappa,
                       std::optional<double> prior_phi = {});

// sigma_ij = kappa g_ij + h_i^l h_lj and its inverse. For n = 2 the closed
// form ((kappa - K + H^2) g^ij - H h^ij) / (kappa H^2 + (kappa - K)^2) is
// evaluated as a structural self-check against the direct inversion.
struct SigmaForms {
  MatN sigma;
  MatN sigma_inv;
};
SigmaForms sigma_forms(const MatN& g, const MatN& h, double kappa);

inline void sigma_forms2(const Mat2& g, const Mat2& h, double kappa, Mat2& sigma,
                         Mat2& sigma_inv) {
  const Mat2 g_inv = g.inverse();
  sigma = kappa * g + h * g_inv * h;
  sigma = (0.5 * (sigma + sigma.transpose())).eval();
  sigma_inv = sigma.inverse();
}

// Rank-4 coefficient array in n <= 4 dimensions, indexed (p,q,k,l).
class Rank4 {
 public:
  explicit Rank4(int n = 2) : n_(n) { v_.fill(0.0); }
  double& operator()(int p, int q, int k, int l) {
    return v_[static_cast<std::size_t>(((p * n_ + q) * n_ + k) * n_ + l)];
  }
  double operator()(int p, int q, int k, int l) const {
    return v_[static_cast<std::size_t>(((p * n_ + q) * n_ + k) * n_ + l)];
  }
  int n() const { return n_; }

 private:
  int n_;
  std::array<double, 256> v_;
};

// phi^{pq,kl} = d sigma^{pq} / d h_kl = -(sigma^{pk} sigma^{qj} +
// sigma^{qk} sigma^{pj}) h^l_j, as displayed; symmetric content appears after
// symmetrizing in (k,l), which is what contraction against symmetric
// gradients uses.
Rank4 angle_hessian(const MatN& g, const MatN& h, double kappa);

// h^(0) = g, h^(1) = h, h^(r) = h^(r-1) g^{-1} h.
MatN weingarten_power(const MatN& g, const MatN& h, int r);

// sigma-relative trace of S_ij = kappa g_ij - h_i^l h_lj; equals
// 2 (kappa^2 - K^2) / ((kappa + lambda_1^2)(kappa + lambda_2^2)) for n = 2.
double two_positive_margin(const Mat2& g, const Mat2& h, double kappa);

// Scalar curvature functions G(H, K) of the two Weingarten invariants.
struct CurvatureFunctionSpec {
  enum class Id { H, K, Phi, Custom };
  Id id = Id::H;
  // Custom: value and partials as functions of (H, K).
  std::function<double(double, double)> G, G_H, G_K;

  static CurvatureFunctionSpec mean() { return {Id::H, {}, {}, {}}; }
  static CurvatureFunctionSpec gauss() { return {Id::K, {}, {}, {}}; }
  static CurvatureFunctionSpec angle() { return {Id::Phi, {}, {}, {}}; }
  static CurvatureFunctionSpec custom(std::function<double(double, double)> g,
                                      std::function<double(double, double)> gh,
                                      std::function<double(double, double)> gk) {
    return {Id::Custom, std::move(g), std::move(gh), std::move(gk)};
  }
};

struct CurvatureDerivs {
  double H = 0, K = 0;
  double G_H = 0, G_K = 0;
  Mat2 G_upper;    // dG/dh_ij = (G_H + H G_K) g^ij - G_K h^ij
  Mat2 dG_dg_inv;  // dG/dg^ij = K G_K g_ij + G_H h_ij
};
CurvatureDerivs curvature_function_derivs(const CurvatureFunctionSpec& spec,
                                          const Mat2& g, const Mat2& h, double kappa);

}  // namespace adsflow
