#include "adsflow/evolution_residual.hpp"

#include "adsflow/structure_residual.hpp"

#include <cmath>

namespace adsflow {

namespace {

double node_phi(const NodeGeometry& nd) { return nd.phi; }
double node_H(const NodeGeometry& nd) { return nd.H; }
double node_K(const NodeGeometry& nd) { return nd.K; }

double speed_value(const NodeGeometry& nd, SpeedKind speed) {
  switch (speed) {
    case SpeedKind::Phi: return nd.phi;
    case SpeedKind::One: return 1.0;
    case SpeedKind::MeanCurvature: return nd.H;
  }
  return 0.0;
}

Mat2 speed_hessian(const SurfaceMesh& mesh, const GeometryField& f, SpeedKind speed,
                   int i, int j) {
  switch (speed) {
    case SpeedKind::Phi: return covariant_hessian(mesh, f, &node_phi, i, j);
    case SpeedKind::One: return Mat2::Zero();
    case SpeedKind::MeanCurvature:
      return covariant_hessian(mesh, f, &node_H, i, j);
  }
  return Mat2::Zero();
}

}  // namespace

EvolResidual evolution_residual(const Snapshot& prev, const Snapshot& mid,
                                const Snapshot& next, EvolKind kind,
                                SpeedKind speed, double margin_frac) {
  const double da = mid.t - prev.t;
  const double db = next.t - mid.t;
  require(da > 0.0 && std::fabs(da - db) <= 1e-12 * da,
          "evolution_residual: three equally spaced snapshots required");
  const SurfaceMesh& mesh = mid.mesh;
  const double kappa = mesh.kappa;
  const double inv2d = 1.0 / (2.0 * da);
  require(kind == EvolKind::Metric || kind == EvolKind::Shape ||
              speed == SpeedKind::Phi,
          "evolution_residual: expanded kinds assume the angle speed");

  EvolResidual out;
  const auto [lo, hi] = interior_window(mesh, margin_frac);
  for (int i = lo; i < hi; ++i)
    for (int j = 0; j < mesh.n_theta; ++j) {
      const NodeGeometry& nd = mid.fields.at(i, j);
      const NodeGeometry& np = prev.fields.at(i, j);
      const NodeGeometry& nn = next.fields.at(i, j);
      const double f_val = speed_value(nd, speed);
      const Mat2 h2 = nd.h * nd.g_inv * nd.h;
      double r = 0.0;

      switch (kind) {
        case EvolKind::Metric: {
          const Mat2 dtg = (nn.g - np.g) * inv2d;
          r = (dtg - 2.0 * f_val * nd.h).cwiseAbs().maxCoeff();
          break;
        }
        case EvolKind::Shape: {
          const Mat2 dth = (nn.h - np.h) * inv2d;
          const Mat2 rhs =
              speed_hessian(mesh, mid.fields, speed, i, j) + f_val * h2 -
              kappa * f_val * nd.g;
          r = (dth - rhs).cwiseAbs().maxCoeff();
          break;
        }
        case EvolKind::ShapeFull: {
          const Mat2 dth = (nn.h - np.h) * inv2d;
          const Rank4 DDh = second_covariant_h(mesh, mid.fields, i, j);
          const Rank4 hess = angle_hessian(nd.g, nd.h, kappa);
          Mat2 rhs = f_val * h2 - kappa * f_val * nd.g;
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
              double acc = 0.0;
              for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                  acc += nd.sigma_inv(k, l) * DDh(k, l, a, b);
                  for (int p = 0; p < 2; ++p)
                    for (int q = 0; q < 2; ++q)
                      acc += hess(k, l, p, q) * nd.Dh[a][p][q] * nd.Dh[b][k][l];
                  acc -= kappa * nd.sigma_inv(k, l) *
                         (nd.h(b, k) * nd.g(a, l) - nd.h(a, b) * nd.g(k, l) +
                          nd.h(k, l) * nd.g(a, b) - nd.h(a, l) * nd.g(b, k));
                  acc += nd.sigma_inv(k, l) *
                         (-h2(b, k) * nd.h(a, l) + h2(a, b) * nd.h(k, l) -
                          h2(k, l) * nd.h(a, b) + h2(a, l) * nd.h(b, k));
                }
              rhs(a, b) += acc;
            }
          r = (dth - rhs).cwiseAbs().maxCoeff();
          break;
        }
        case EvolKind::Angle: {
          const double dtphi = (nn.phi - np.phi) * inv2d;
          const Mat2 hess = covariant_hessian(mesh, mid.fields, &node_phi, i, j);
          const double rhs = (nd.sigma_inv.cwiseProduct(hess)).sum() - 2.0 * nd.phi;
          r = std::fabs(dtphi - rhs);
          break;
        }
        case EvolKind::Scalar2D_H:
        case EvolKind::Scalar2D_K: {
          const bool isK = (kind == EvolKind::Scalar2D_K);
          const double dtG =
              ((isK ? nn.K : nn.H) - (isK ? np.K : np.H)) * inv2d;
          const Mat2 hessG = covariant_hessian(mesh, mid.fields,
                                               isK ? &node_K : &node_H, i, j);
          const auto cd = curvature_function_derivs(
              isK ? CurvatureFunctionSpec::gauss() : CurvatureFunctionSpec::mean(),
              nd.g, nd.h, kappa);
          const Rank4 sig_hess = angle_hessian(nd.g, nd.h, kappa);
          // G^{pq,kl}: zero for H, g^{kl} g^{pq} - g^{pk} g^{ql} for K
          double grad_term = 0.0;
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q)
                  for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) {
                      double Ghess = 0.0;
                      if (isK)
                        Ghess = nd.g_inv(k, l) * nd.g_inv(p, q) -
                                nd.g_inv(p, k) * nd.g_inv(q, l);
                      const double coeff = cd.G_upper(a, b) * sig_hess(p, q, k, l) -
                                           nd.sigma_inv(a, b) * Ghess;
                      grad_term += coeff * nd.Dh[a][k][l] * nd.Dh[b][p][q];
                    }
          const double H = nd.H, K = nd.K;
          const double denom = kappa * H * H + (kappa - K) * (kappa - K);
          const double reaction =
              (kappa + K) * (H * H - 4.0 * K) / denom *
                  (H * cd.G_H - (kappa - K) * cd.G_K) -
              nd.phi * ((H * H + 2.0 * (kappa - K)) * cd.G_H +
                        H * (kappa + K) * cd.G_K);
          const double rhs =
              (nd.sigma_inv.cwiseProduct(hessG)).sum() + grad_term + reaction;
          r = std::fabs(dtG - rhs);
          break;
        }
        case EvolKind::GaussCurv: {
          const double dtK = (nn.K - np.K) * inv2d;
          const Mat2 hessK = covariant_hessian(mesh, mid.fields, &node_K, i, j);
          const Vec2 dH = field_grad(mesh, mid.fields, &node_H, i, j);
          const Vec2 dK = field_grad(mesh, mid.fields, &node_K, i, j);
          const double H = nd.H, K = nd.K;
          const double denom = kappa * H * H + (kappa - K) * (kappa - K);

          // |grad h|^2, |grad H|^2 and the (H g^{ij} - h^{ij}) contractions
          double grad_h_sq = 0.0;
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              for (int c = 0; c < 2; ++c)
                for (int x = 0; x < 2; ++x)
                  for (int y = 0; y < 2; ++y)
                    for (int z = 0; z < 2; ++z)
                      grad_h_sq += nd.g_inv(a, x) * nd.g_inv(b, y) *
                                   nd.g_inv(c, z) * nd.Dh[a][b][c] * nd.Dh[x][y][z];
          const double grad_H_sq = dH.dot(nd.g_inv * dH);
          const double grad_K_sq = dK.dot(nd.g_inv * dK);
          const double dHdK = dH.dot(nd.g_inv * dK);
          const Mat2 M = H * nd.g_inv - nd.g_inv * nd.h * nd.g_inv;  // H g^ij - h^ij
          const double M_HH = dH.dot(M * dH);
          const double M_HK = dH.dot(M * dK);
          const double M_KK = dK.dot(M * dK);

          const double kk = kappa;
          const double expansion =
              ((kk * kk - K * K) * (H * H + 2.0 * (kk - K)) * (grad_h_sq - grad_H_sq) -
               (kk * kk - K * K) * H * M_HH - 2.0 * kk * H * H * M_HK +
               2.0 * H * (kk - K) * M_KK -
               (kk - K) * (kk - K) * (H * dHdK - 2.0 * grad_K_sq)) /
              (denom * denom);
          const double rhs = (nd.sigma_inv.cwiseProduct(hessK)).sum() + expansion -
                             (kk + K) * (kk - K) * (H * H - 4.0 * K) / denom -
                             nd.phi * H * (kk + K);
          r = std::fabs(dtK - rhs);
          break;
        }
      }
      out.sup = std::max(out.sup, r);
      ++out.count;
    }
  return out;
}

EvolResidual evolution_residual(const RunResult& run, std::size_t center_index,
                                EvolKind kind, SpeedKind speed, double margin_frac) {
  require(run.snapshots.size() >= 3 && center_index >= 1 &&
              center_index + 1 < run.snapshots.size(),
          "evolution_residual: need three stored consecutive snapshots");
  return evolution_residual(run.snapshots[center_index - 1],
                            run.snapshots[center_index],
                            run.snapshots[center_index + 1], kind, speed,
                            margin_frac);
}

}  // namespace adsflow
