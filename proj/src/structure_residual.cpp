#include "adsflow/structure_residual.hpp"

#include <cmath>

namespace adsflow {

std::pair<int, int> interior_window(const SurfaceMesh& mesh, double margin_frac) {
  if (mesh.chi_bc == ChiBoundary::Periodic) return {0, mesh.n_chi};
  int m = static_cast<int>(std::ceil(margin_frac * mesh.n_chi));
  m = std::max(m, 3);
  return {m, mesh.n_chi - m};
}

ResidualStats structure_residual(const SurfaceMesh& mesh, const GeometryField& f,
                                 StructureKind kind, double margin_frac) {
  require(mesh.n_chi >= 16 && mesh.n_theta >= 16,
          "structure_residual: mesh too coarse, need >= 16 nodes per direction");
  const auto [lo, hi] = interior_window(mesh, margin_frac);

  ResidualStats st;
  for (int i = lo; i < hi; ++i) {
    for (int j = 0; j < mesh.n_theta; ++j) {
      const NodeGeometry& nd = f.at(i, j);
      double r = 0.0;
      switch (kind) {
        case StructureKind::Codazzi: {
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              for (int c = 0; c < 2; ++c)
                r = std::max(r, std::fabs(nd.Dh[a][b][c] - nd.Dh[b][a][c]));
          break;
        }
        case StructureKind::Gauss: {
          const Rank4 R = curvature_from_metric(mesh, f, i, j);
          const Mat2& g = nd.g;
          const Mat2& h = nd.h;
          const double kp = mesh.kappa;
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) {
                  const double res =
                      R(a, b, c, d) +
                      kp * (g(a, c) * g(b, d) - g(a, d) * g(b, c)) +
                      h(a, c) * h(b, d) - h(a, d) * h(b, c);
                  r = std::max(r, std::fabs(res));
                }
          break;
        }
        case StructureKind::Simons: {
          const Rank4 DDh = second_covariant_h(mesh, f, i, j);
          const Rank4 R = curvature_from_metric(mesh, f, i, j);
          const Mat2& gi = nd.g_inv;
          const Mat2& h = nd.h;
          // raise the first curvature slot on demand
          const auto Rup = [&](int m, int jj, int k, int l) {
            double acc = 0.0;
            for (int a = 0; a < 2; ++a) acc += gi(m, a) * R(a, jj, k, l);
            return acc;
          };
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) {
                  double res = DDh(a, b, c, d) - DDh(c, d, a, b);
                  for (int m = 0; m < 2; ++m) {
                    res -= Rup(m, d, c, a) * h(m, b);
                    res -= Rup(m, b, c, a) * h(d, m);
                  }
                  r = std::max(r, std::fabs(res));
                }
          break;
        }
      }
      st.sup = std::max(st.sup, r);
      ++st.nodes;
    }
  }
  return st;
}

}  // namespace adsflow
