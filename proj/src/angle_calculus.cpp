#include "adsflow/angle_calculus.hpp"

#include "adsflow/pseudo_euclidean.hpp"

namespace adsflow {

AngleEval smooth_angle(const SymTensor2& g, const SymTensor2& h, double kappa,
                       std::optional<double> prior_phi) {
  require(g.var == Variance::Covariant && h.var == Variance::Covariant,
          "smooth_angle: covariant tensors expected");
  return smooth_angle(g.m, h.m, kappa, prior_phi);
}

SigmaForms sigma_forms(const MatN& g, const MatN& h, double kappa) {
  const int n = static_cast<int>(g.rows());
  require(is_positive_definite(g), "sigma_forms: g must be positive definite");
  const MatN g_inv = g.inverse();
  MatN sigma = kappa * g + h * g_inv * h;
  sigma = (0.5 * (sigma + sigma.transpose())).eval();
  MatN sigma_inv = sigma.inverse();

  if (n == 2) {
    const MatN W = g_inv * h;
    const double H = W.trace();
    const double K = W.determinant();
    const double denom = kappa * H * H + (kappa - K) * (kappa - K);
    const MatN h_up = g_inv * h * g_inv;
    const MatN closed = ((kappa - K + H * H) * g_inv - H * h_up) / denom;
    const double scale = std::max(1.0, sigma_inv.cwiseAbs().maxCoeff());
    if ((closed - sigma_inv).cwiseAbs().maxCoeff() > 1e-11 * scale)
      throw ContractViolation("sigma_forms: closed-form inverse check failed");
  }
  return {sigma, sigma_inv};
}

Rank4 angle_hessian(const MatN& g, const MatN& h, double kappa) {
  const int n = static_cast<int>(g.rows());
  const SigmaForms sf = sigma_forms(g, h, kappa);
  const MatN& si = sf.sigma_inv;
  const MatN W = (g.inverse() * h).eval();  // W(l,j) = h^l_j
  Rank4 out(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int j = 0; j < n; ++j)
            acc -= (si(p, k) * si(q, j) + si(q, k) * si(p, j)) * W(l, j);
          out(p, q, k, l) = acc;
        }
  return out;
}

MatN weingarten_power(const MatN& g, const MatN& h, int r) {
  require(r >= 0, "weingarten_power: r must be non-negative");
  require(is_positive_definite(g), "weingarten_power: g must be positive definite");
  if (r == 0) return g;
  if (r == 1) return h;
  const MatN step = (g.inverse() * h).eval();
  MatN out = h;
  for (int k = 2; k <= r; ++k) out = (out * step).eval();
  return out;
}

double two_positive_margin(const Mat2& g, const Mat2& h, double kappa) {
  require(is_positive_definite(MatN(g)), "two_positive_margin: g must be positive definite");
  const Mat2 g_inv = g.inverse();
  const Mat2 S = kappa * g - h * g_inv * h;
  Mat2 sigma, sigma_inv;
  sigma_forms2(g, h, kappa, sigma, sigma_inv);
  return (sigma_inv * S).trace();
}

CurvatureDerivs curvature_function_derivs(const CurvatureFunctionSpec& spec,
                                          const Mat2& g, const Mat2& h, double kappa) {
  const Mat2 g_inv = g.inverse();
  const Mat2 W = g_inv * h;
  CurvatureDerivs out;
  out.H = W.trace();
  out.K = W.determinant();

  switch (spec.id) {
    case CurvatureFunctionSpec::Id::H:
      out.G_H = 1.0;
      out.G_K = 0.0;
      break;
    case CurvatureFunctionSpec::Id::K:
      out.G_H = 0.0;
      out.G_K = 1.0;
      break;
    case CurvatureFunctionSpec::Id::Phi: {
      // phi = kappa^{-1/2} arctan(sqrt(kappa) H / (kappa - K)) wherever
      // kappa > K; its (H,K)-partials are smooth through that region.
      const double denom = kappa * out.H * out.H + (kappa - out.K) * (kappa - out.K);
      out.G_H = (kappa - out.K) / denom;
      out.G_K = out.H / denom;
      break;
    }
    case CurvatureFunctionSpec::Id::Custom:
      require(static_cast<bool>(spec.G_H) && static_cast<bool>(spec.G_K),
              "curvature_function_derivs: custom spec needs G_H and G_K");
      out.G_H = spec.G_H(out.H, out.K);
      out.G_K = spec.G_K(out.H, out.K);
      break;
  }

  const Mat2 h_up = g_inv * h * g_inv;
  out.G_upper = (out.G_H + out.H * out.G_K) * g_inv - out.G_K * h_up;
  out.dG_dg_inv = out.K * out.G_K * g + out.G_H * h;
  return out;
}

}  // namespace adsflow
