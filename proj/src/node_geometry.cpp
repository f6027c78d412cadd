#include "adsflow/node_geometry.hpp"

namespace adsflow {

namespace {

struct Partials {
  Vec4 d1[2];
  Vec4 d2[2][2];
};

Partials ambient_partials(const SurfaceMesh& m, int i, int j) {
  const auto F = [&m](int a, int b) { return m.at(a, b); };
  const double dc = m.dchi, dt = m.dtheta;
  const Vec4 fcp = stencil::sample(m, F, i + 1, j);
  const Vec4 fcm = stencil::sample(m, F, i - 1, j);
  const Vec4 ftp = stencil::sample(m, F, i, j + 1);
  const Vec4 ftm = stencil::sample(m, F, i, j - 1);
  const Vec4 f0 = m.at(i, j);
  Partials p;
  p.d1[0] = (fcp - fcm) / (2.0 * dc);
  p.d1[1] = (ftp - ftm) / (2.0 * dt);
  p.d2[0][0] = (fcp - 2.0 * f0 + fcm) / (dc * dc);
  p.d2[1][1] = (ftp - 2.0 * f0 + ftm) / (dt * dt);
  const Vec4 fpp = stencil::sample(m, F, i + 1, j + 1);
  const Vec4 fpm = stencil::sample(m, F, i + 1, j - 1);
  const Vec4 fmp = stencil::sample(m, F, i - 1, j + 1);
  const Vec4 fmm = stencil::sample(m, F, i - 1, j - 1);
  p.d2[0][1] = p.d2[1][0] = (fpp - fpm - fmp + fmm) / (4.0 * dc * dt);
  return p;
}

Mat2 induced_metric(const Partials& p, int i, int j) {
  Mat2 g;
  g(0, 0) = dot22(p.d1[0], p.d1[0]);
  g(0, 1) = g(1, 0) = dot22(p.d1[0], p.d1[1]);
  g(1, 1) = dot22(p.d1[1], p.d1[1]);
  if (!(g(0, 0) > 0.0) || !(g.determinant() > 0.0))
    throw MeshInvalid("assemble: induced metric not positive definite", i, j);
  return g;
}

}  // namespace

GeometryField assemble_node_geometry(const SurfaceMesh& mesh) {
  GeometryField out;
  out.n_chi = mesh.n_chi;
  out.n_theta = mesh.n_theta;
  out.node.resize(mesh.node.size());

  // pass 1: node-local quantities
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < mesh.n_chi; ++i) {
    for (int j = 0; j < mesh.n_theta; ++j) {
      NodeGeometry& nd = out.at(i, j);
      const Partials p = ambient_partials(mesh, i, j);
      nd.F = mesh.at(i, j);
      nd.F1 = p.d1[0];
      nd.F2 = p.d1[1];
      nd.F11 = p.d2[0][0];
      nd.F12 = p.d2[0][1];
      nd.F22 = p.d2[1][1];
      nd.g = induced_metric(p, i, j);
      nd.g_inv = nd.g.inverse();
      nd.nu = normal_completion(nd.F, nd.F1, nd.F2);
      nd.h(0, 0) = -dot22(nd.F11, nd.nu);
      nd.h(0, 1) = nd.h(1, 0) = -dot22(nd.F12, nd.nu);
      nd.h(1, 1) = -dot22(nd.F22, nd.nu);
      const Mat2 W = nd.g_inv * nd.h;
      nd.H = W.trace();
      nd.K = W.determinant();
      nd.lambda = generalized_eigen2(nd.g, nd.h);
      nd.phi = smooth_angle(nd.g, nd.h, mesh.kappa).phi;
      sigma_forms2(nd.g, nd.h, mesh.kappa, nd.sigma, nd.sigma_inv);
    }
  }

  // pass 2: Christoffel symbols from the metric field, then nabla h
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < mesh.n_chi; ++i) {
    for (int j = 0; j < mesh.n_theta; ++j) {
      NodeGeometry& nd = out.at(i, j);
      double dg[2][2][2];  // dg[l][a][b] = partial_l g_ab
      for (int a = 0; a < 2; ++a)
        for (int b = a; b < 2; ++b) {
          const auto gab = [&out, a, b](int ii, int jj) {
            return out.at(ii, jj).g(a, b);
          };
          dg[0][a][b] = dg[0][b][a] =
              (stencil::sample_s(mesh, gab, i + 1, j) -
               stencil::sample_s(mesh, gab, i - 1, j)) /
              (2.0 * mesh.dchi);
          dg[1][a][b] = dg[1][b][a] =
              (stencil::sample_s(mesh, gab, i, j + 1) -
               stencil::sample_s(mesh, gab, i, j - 1)) /
              (2.0 * mesh.dtheta);
        }
      for (int k = 0; k < 2; ++k)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            double acc = 0.0;
            for (int l = 0; l < 2; ++l)
              acc += nd.g_inv(k, l) * (dg[a][b][l] + dg[b][a][l] - dg[l][a][b]);
            nd.Gamma[k][a][b] = 0.5 * acc;
          }
    }
  }

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < mesh.n_chi; ++i) {
    for (int j = 0; j < mesh.n_theta; ++j) {
      NodeGeometry& nd = out.at(i, j);
      double dh[2][2][2];  // dh[l][a][b] = partial_l h_ab
      for (int a = 0; a < 2; ++a)
        for (int b = a; b < 2; ++b) {
          const auto hab = [&out, a, b](int ii, int jj) {
            return out.at(ii, jj).h(a, b);
          };
          dh[0][a][b] = dh[0][b][a] =
              (stencil::sample_s(mesh, hab, i + 1, j) -
               stencil::sample_s(mesh, hab, i - 1, j)) /
              (2.0 * mesh.dchi);
          dh[1][a][b] = dh[1][b][a] =
              (stencil::sample_s(mesh, hab, i, j + 1) -
               stencil::sample_s(mesh, hab, i, j - 1)) /
              (2.0 * mesh.dtheta);
        }
      for (int l = 0; l < 2; ++l)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            double acc = dh[l][a][b];
            for (int mdx = 0; mdx < 2; ++mdx) {
              acc -= nd.Gamma[mdx][l][a] * nd.h(mdx, b);
              acc -= nd.Gamma[mdx][l][b] * nd.h(a, mdx);
            }
            nd.Dh[l][a][b] = acc;
          }
    }
  }
  return out;
}

void assemble_speed(const SurfaceMesh& mesh, SpeedKind kind, SpeedField& out) {
  const std::size_t n = mesh.node.size();
  out.f.resize(n);
  out.nu.resize(n);
  bool failed = false;
  int fail_i = -1, fail_j = -1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < mesh.n_chi; ++i) {
    for (int j = 0; j < mesh.n_theta; ++j) {
      if (failed) continue;
      try {
        const Partials p = ambient_partials(mesh, i, j);
        const Mat2 g = induced_metric(p, i, j);
        const Vec4 nu = normal_completion(mesh.at(i, j), p.d1[0], p.d1[1]);
        Mat2 h;
        h(0, 0) = -dot22(p.d2[0][0], nu);
        h(0, 1) = h(1, 0) = -dot22(p.d2[0][1], nu);
        h(1, 1) = -dot22(p.d2[1][1], nu);
        double f = 0.0;
        switch (kind) {
          case SpeedKind::Phi:
            f = smooth_angle(g, h, mesh.kappa).phi;
            break;
          case SpeedKind::One:
            f = 1.0;
            break;
          case SpeedKind::MeanCurvature:
            f = (g.inverse() * h).trace();
            break;
        }
        out.f[static_cast<std::size_t>(mesh.idx(i, j))] = f;
        out.nu[static_cast<std::size_t>(mesh.idx(i, j))] = nu;
      } catch (const std::exception&) {
#ifdef _OPENMP
#pragma omp critical
#endif
        {
          if (!failed) {
            failed = true;
            fail_i = i;
            fail_j = j;
          }
        }
      }
    }
  }
  if (failed)
    throw MeshInvalid("assemble_speed: non-spacelike node", fail_i, fail_j);
}

Vec2 field_grad(const SurfaceMesh& mesh, const GeometryField& f, NodeScalar get,
                int i, int j) {
  const auto v = [&f, get](int ii, int jj) { return get(f.at(ii, jj)); };
  Vec2 out;
  out[0] = (stencil::sample_s(mesh, v, i + 1, j) -
            stencil::sample_s(mesh, v, i - 1, j)) /
           (2.0 * mesh.dchi);
  out[1] = (stencil::sample_s(mesh, v, i, j + 1) -
            stencil::sample_s(mesh, v, i, j - 1)) /
           (2.0 * mesh.dtheta);
  return out;
}

Mat2 field_hess(const SurfaceMesh& mesh, const GeometryField& f, NodeScalar get,
                int i, int j) {
  const auto v = [&f, get](int ii, int jj) { return get(f.at(ii, jj)); };
  const double dc = mesh.dchi, dt = mesh.dtheta;
  const double v0 = v(i, j);
  Mat2 out;
  out(0, 0) = (stencil::sample_s(mesh, v, i + 1, j) - 2.0 * v0 +
               stencil::sample_s(mesh, v, i - 1, j)) /
              (dc * dc);
  out(1, 1) = (stencil::sample_s(mesh, v, i, j + 1) - 2.0 * v0 +
               stencil::sample_s(mesh, v, i, j - 1)) /
              (dt * dt);
  out(0, 1) = out(1, 0) = (stencil::sample_s(mesh, v, i + 1, j + 1) -
                           stencil::sample_s(mesh, v, i + 1, j - 1) -
                           stencil::sample_s(mesh, v, i - 1, j + 1) +
                           stencil::sample_s(mesh, v, i - 1, j - 1)) /
                          (4.0 * dc * dt);
  return out;
}

Mat2 covariant_hessian(const SurfaceMesh& mesh, const GeometryField& f,
                       NodeScalar get, int i, int j) {
  const Vec2 grad = field_grad(mesh, f, get, i, j);
  Mat2 out = field_hess(mesh, f, get, i, j);
  const NodeGeometry& nd = f.at(i, j);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < 2; ++k) out(a, b) -= nd.Gamma[k][a][b] * grad[k];
  return out;
}

Rank4 second_covariant_h(const SurfaceMesh& mesh, const GeometryField& f, int i,
                         int j) {
  const NodeGeometry& nd = f.at(i, j);
  Rank4 out(2);
  double dT[2][2][2][2];  // dT[k][l][a][b] = partial_k Dh[l][a][b]
  for (int l = 0; l < 2; ++l)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const auto T = [&f, l, a, b](int ii, int jj) {
          return f.at(ii, jj).Dh[l][a][b];
        };
        dT[0][l][a][b] = (stencil::sample_s(mesh, T, i + 1, j) -
                          stencil::sample_s(mesh, T, i - 1, j)) /
                         (2.0 * mesh.dchi);
        dT[1][l][a][b] = (stencil::sample_s(mesh, T, i, j + 1) -
                          stencil::sample_s(mesh, T, i, j - 1)) /
                         (2.0 * mesh.dtheta);
      }
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double acc = dT[k][l][a][b];
          for (int mdx = 0; mdx < 2; ++mdx) {
            acc -= nd.Gamma[mdx][k][l] * nd.Dh[mdx][a][b];
            acc -= nd.Gamma[mdx][k][a] * nd.Dh[l][mdx][b];
            acc -= nd.Gamma[mdx][k][b] * nd.Dh[l][a][mdx];
          }
          out(k, l, a, b) = acc;
        }
  return out;
}

Rank4 curvature_from_metric(const SurfaceMesh& mesh, const GeometryField& f,
                            int i, int j) {
  const NodeGeometry& nd = f.at(i, j);
  double dG[2][2][2][2];  // dG[c][k][a][b] = partial_c Gamma^k_ab
  for (int k = 0; k < 2; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const auto G = [&f, k, a, b](int ii, int jj) {
          return f.at(ii, jj).Gamma[k][a][b];
        };
        dG[0][k][a][b] = (stencil::sample_s(mesh, G, i + 1, j) -
                          stencil::sample_s(mesh, G, i - 1, j)) /
                         (2.0 * mesh.dchi);
        dG[1][k][a][b] = (stencil::sample_s(mesh, G, i, j + 1) -
                          stencil::sample_s(mesh, G, i, j - 1)) /
                         (2.0 * mesh.dtheta);
      }
  // R^m_jkl = d_k Gamma^m_lj - d_l Gamma^m_kj + Gamma^m_kn Gamma^n_lj
  //           - Gamma^m_ln Gamma^n_kj,  then lower the first slot.
  Rank4 out(2);
  for (int m = 0; m < 2; ++m)
    for (int jj = 0; jj < 2; ++jj)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          double acc = dG[k][m][l][jj] - dG[l][m][k][jj];
          for (int n = 0; n < 2; ++n)
            acc += nd.Gamma[m][k][n] * nd.Gamma[n][l][jj] -
                   nd.Gamma[m][l][n] * nd.Gamma[n][k][jj];
          out(m, jj, k, l) = acc;
        }
  Rank4 lowered(2);
  for (int a = 0; a < 2; ++a)
    for (int jj = 0; jj < 2; ++jj)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          double acc = 0.0;
          for (int m = 0; m < 2; ++m) acc += nd.g(a, m) * out(m, jj, k, l);
          lowered(a, jj, k, l) = acc;
        }
  return lowered;
}

double scalar_curvature(const SurfaceMesh& mesh, const GeometryField& f, int i,
                        int j) {
  const Rank4 R = curvature_from_metric(mesh, f, i, j);
  const Mat2& gi = f.at(i, j).g_inv;
  double acc = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) acc += gi(a, c) * gi(b, d) * R(a, b, c, d);
  return acc;
}

}  // namespace adsflow
