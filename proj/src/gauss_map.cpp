#include "adsflow/gauss_map.hpp"

#include "adsflow/rng.hpp"
#include "adsflow/structure_residual.hpp"

#include <cmath>

namespace adsflow {

// Convention note. The time circle t = atan2(V4, V3) fixes the future; with
// that choice the frame (E1, E2) = (chi-hat, theta-hat) of the totally
// geodesic slice is positively oriented and satisfies det[E1, E2, nu, F] < 0,
// i.e. the outward co-orientation of the quadric enters with a minus sign.
// The product complex structure acts as (+J, -J) on the two factors; this is
// the unique sign pair (up to simultaneous flip) for which the pulled-back
// Kaehler form vanishes and the evolution relations close.

namespace {

Mat4 endo_from_columns(const Vec4& c1, const Vec4& c2, const Vec4& c3,
                       const Vec4& c4) {
  Mat4 m;
  m.col(0) = c1;
  m.col(1) = c2;
  m.col(2) = c3;
  m.col(3) = c4;
  return m;
}

const Vec4 e1(1, 0, 0, 0), e2(0, 1, 0, 0), e3(0, 0, 1, 0), e4(0, 0, 0, 1);

double wedge(const Vec4& u, const Vec4& v, int a, int b) {
  return u[a] * v[b] - u[b] * v[a];
}

}  // namespace

const Mat4& split_endomorphism(int A, int duality) {
  require(A >= 1 && A <= 3 && (duality == 1 || duality == -1),
          "split_endomorphism: A in 1..3, duality +-1");
  static const Mat4 Ep1 = endo_from_columns(e4, -e3, -e2, e1);
  static const Mat4 Em1 = endo_from_columns(-e4, -e3, -e2, -e1);
  static const Mat4 Ep2 = endo_from_columns(-e3, -e4, -e1, -e2);
  static const Mat4 Em2 = endo_from_columns(-e3, e4, -e1, e2);
  static const Mat4 Ep3 = endo_from_columns(e2, -e1, -e4, e3);
  static const Mat4 Em3 = endo_from_columns(e2, -e1, e4, -e3);
  static const Mat4* table[2][3] = {{&Ep1, &Ep2, &Ep3}, {&Em1, &Em2, &Em3}};
  return *table[duality == 1 ? 0 : 1][A - 1];
}

double symplectic_eval(const SymplecticFormId& id, const Vec4& u, const Vec4& v) {
  require(id.A >= 1 && id.A <= 3 && (id.duality == 1 || id.duality == -1),
          "symplectic_eval: A in 1..3, duality +-1");
  const double s = id.duality;
  switch (id.A) {
    case 1: return wedge(u, v, 1, 2) + s * wedge(u, v, 3, 0);  // e2^e3 + e4^e1
    case 2: return wedge(u, v, 0, 2) + s * wedge(u, v, 1, 3);  // e1^e3 + e2^e4
    default: return wedge(u, v, 0, 1) + s * wedge(u, v, 2, 3); // e1^e2 + e3^e4
  }
}

double symplectic_eval_endo(const SymplecticFormId& id, const Vec4& u,
                            const Vec4& v) {
  return dot22(split_endomorphism(id.A, id.duality) * u, v);
}

GaussMapPoint gauss_map_point(const NodeGeometry& nd) {
  // orthonormal frame from the coordinate tangents
  const double n1 = std::sqrt(nd.g(0, 0));
  require(n1 > 0.0, "gauss_map_point: degenerate tangent");
  const Vec4 E1 = nd.F1 / n1;
  Vec4 E2 = nd.F2 - dot22(nd.F2, E1) * E1;
  const double q = dot22(E2, E2);
  require(q > 0.0, "gauss_map_point: degenerate frame");
  E2 /= std::sqrt(q);

  // positively oriented frames satisfy det[E1, E2, nu, F] < 0
  Mat4 D;
  D.col(0) = E1;
  D.col(1) = E2;
  D.col(2) = nd.nu;
  D.col(3) = nd.F;
  if (D.determinant() > 0.0) E2 = -E2;

  GaussMapPoint p;
  const double inv_sqrt2 = 0.70710678118654752440;
  for (int A = 1; A <= 3; ++A) {
    p.plus[A - 1] = inv_sqrt2 * symplectic_eval({A, +1}, E1, E2);
    p.minus[A - 1] = inv_sqrt2 * symplectic_eval({A, -1}, E1, E2);
  }
  require(p.plus[2] > 0.0 && p.minus[2] > 0.0,
          "gauss_map_point: third component must be positive");
  return p;
}

void gauss_map_eval(const SurfaceMesh& mesh, const GeometryField& f,
                    std::vector<Vec3>& plus, std::vector<Vec3>& minus) {
  // The orthonormal frame and unit normal are invariant under the rescaling
  // F -> sqrt(kappa) F onto the unit quadric, so evaluation on the rescaled
  // immersion coincides with direct evaluation of the frame forms.
  plus.resize(mesh.node.size());
  minus.resize(mesh.node.size());
  for (int i = 0; i < mesh.n_chi; ++i)
    for (int j = 0; j < mesh.n_theta; ++j) {
      const GaussMapPoint p = gauss_map_point(f.at(i, j));
      plus[static_cast<std::size_t>(mesh.idx(i, j))] = p.plus;
      minus[static_cast<std::size_t>(mesh.idx(i, j))] = p.minus;
    }
}

Vec3 hyperbolic_J(const Vec3& p, const Vec3& X) {
  Vec3 c = p.cross(X);
  c[2] = -c[2];  // raise with diag(1,1,-1)
  return std::sqrt(2.0) * c;
}

namespace {

struct GaussDerivs {
  Vec3 d_plus[2], d_minus[2];
};

GaussDerivs gauss_partials(const SurfaceMesh& mesh, const std::vector<Vec3>& plus,
                           const std::vector<Vec3>& minus, int i, int j) {
  const auto gp = [&](int a, int b) {
    return plus[static_cast<std::size_t>(mesh.idx(a, b))];
  };
  const auto gm = [&](int a, int b) {
    return minus[static_cast<std::size_t>(mesh.idx(a, b))];
  };
  GaussDerivs d;
  d.d_plus[0] = (stencil::sample(mesh, gp, i + 1, j) -
                 stencil::sample(mesh, gp, i - 1, j)) / (2.0 * mesh.dchi);
  d.d_plus[1] = (stencil::sample(mesh, gp, i, j + 1) -
                 stencil::sample(mesh, gp, i, j - 1)) / (2.0 * mesh.dtheta);
  d.d_minus[0] = (stencil::sample(mesh, gm, i + 1, j) -
                  stencil::sample(mesh, gm, i - 1, j)) / (2.0 * mesh.dchi);
  d.d_minus[1] = (stencil::sample(mesh, gm, i, j + 1) -
                  stencil::sample(mesh, gm, i, j - 1)) / (2.0 * mesh.dtheta);
  return d;
}

double node_phi(const NodeGeometry& nd) { return nd.phi; }

}  // namespace

double endo_algebra_residual() {
  double worst = 0.0;
  for (int duality : {+1, -1}) {
    const Mat4& E1m = split_endomorphism(1, duality);
    const Mat4& E2m = split_endomorphism(2, duality);
    const Mat4& E3m = split_endomorphism(3, duality);
    const Mat4 I = Mat4::Identity();
    worst = std::max(worst, (E1m * E2m - E3m).cwiseAbs().maxCoeff());
    worst = std::max(worst, (E2m * E1m + E3m).cwiseAbs().maxCoeff());
    worst = std::max(worst, (E1m * E1m - I).cwiseAbs().maxCoeff());
    worst = std::max(worst, (E2m * E2m - I).cwiseAbs().maxCoeff());
    worst = std::max(worst, (E3m * E3m + I).cwiseAbs().maxCoeff());
    // the associated forms are antisymmetric and match the wedge expansion
    const Vec4 basis[4] = {e1, e2, e3, e4};
    for (int A = 1; A <= 3; ++A)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          const SymplecticFormId id{A, duality};
          const double w = symplectic_eval(id, basis[a], basis[b]);
          worst = std::max(worst,
                           std::fabs(w - symplectic_eval_endo(id, basis[a], basis[b])));
          worst = std::max(worst,
                           std::fabs(w + symplectic_eval(id, basis[b], basis[a])));
        }
  }
  return worst;
}

double decomp_residual(std::uint64_t seed, int cases) {
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    SplitMix64 rng = case_rng(seed, static_cast<std::uint64_t>(c));
    Vec4 e, V, W;
    double q = 0.0;
    do {
      for (int k = 0; k < 4; ++k) e[k] = rng.uniform(-2, 2);
      q = dot22(e, e);
    } while (q < 0.1);
    e /= std::sqrt(q);
    for (int k = 0; k < 4; ++k) {
      V[k] = rng.uniform(-3, 3);
      W[k] = rng.uniform(-3, 3);
    }
    for (int duality : {+1, -1}) {
      double acc = dot22(e, V) * dot22(e, W);
      const double signs[3] = {-1.0, -1.0, +1.0};
      for (int A = 1; A <= 3; ++A)
        acc += signs[A - 1] * symplectic_eval({A, duality}, e, V) *
               symplectic_eval({A, duality}, e, W);
      const double scale = std::max(1.0, V.norm() * W.norm());
      worst = std::max(worst, std::fabs(dot22(V, W) - acc) / scale);
    }
  }
  return worst;
}

GaussResidual gauss_residual(const SurfaceMesh& mesh, const GeometryField& f,
                             const std::vector<Vec3>& plus,
                             const std::vector<Vec3>& minus,
                             GaussResidualKind kind, double margin_frac) {
  GaussResidual out;
  if (kind == GaussResidualKind::EndoAlgebra) {
    out.sup = endo_algebra_residual();
    out.count = 1;
    return out;
  }
  if (kind == GaussResidualKind::Decomp) {
    out.sup = decomp_residual(7321, 10000);
    out.count = 10000;
    return out;
  }
  require(mesh.kappa == 1.0, "gauss_residual: mesh-level kinds assume kappa = 1");
  const auto [lo, hi] = interior_window(mesh, margin_frac);
  for (int i = lo; i < hi; ++i)
    for (int j = 0; j < mesh.n_theta; ++j) {
      const NodeGeometry& nd = f.at(i, j);
      double r = 0.0;
      switch (kind) {
        case GaussResidualKind::InducedMetric: {
          const GaussDerivs d = gauss_partials(mesh, plus, minus, i, j);
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
              const double pulled = dot21(d.d_plus[a], d.d_plus[b]) +
                                    dot21(d.d_minus[a], d.d_minus[b]);
              r = std::max(r, std::fabs(pulled - nd.sigma(a, b)));
            }
          break;
        }
        case GaussResidualKind::TauEqualsDphi: {
          const Vec2 dphi = field_grad(mesh, f, &node_phi, i, j);
          for (int k = 0; k < 2; ++k) {
            double tau = 0.0;
            for (int a = 0; a < 2; ++a)
              for (int b = 0; b < 2; ++b)
                tau += nd.sigma_inv(a, b) * nd.Dh[k][a][b];
            r = std::max(r, std::fabs(tau - dphi[k]));
          }
          break;
        }
        case GaussResidualKind::Lagrangian: {
          const GaussDerivs d = gauss_partials(mesh, plus, minus, i, j);
          const std::size_t k = static_cast<std::size_t>(mesh.idx(i, j));
          const double pulled =
              kJPlusSign * dot21(hyperbolic_J(plus[k], d.d_plus[0]), d.d_plus[1]) +
              kJMinusSign * dot21(hyperbolic_J(minus[k], d.d_minus[0]), d.d_minus[1]);
          r = std::fabs(pulled);
          break;
        }
        default:
          break;
      }
      out.sup = std::max(out.sup, r);
      ++out.count;
    }
  return out;
}

GaussFlowResidual gauss_flow_residual(const Snapshot& prev, const Snapshot& mid,
                                      const Snapshot& next, double margin_frac) {
  require(!prev.gauss_plus.empty() && !mid.gauss_plus.empty() &&
              !next.gauss_plus.empty(),
          "gauss_flow_residual: snapshots lack Gauss fields");
  const SurfaceMesh& mesh = mid.mesh;
  require(mesh.kappa == 1.0, "gauss_flow_residual: kappa = 1 expected");
  const double dt_a = mid.t - prev.t;
  const double dt_b = next.t - mid.t;
  require(dt_a > 0.0 && std::fabs(dt_a - dt_b) < 1e-12 * dt_a,
          "gauss_flow_residual: snapshots must be equally spaced");

  GaussFlowResidual out;
  const auto [lo, hi] = interior_window(mesh, margin_frac);
  for (int i = lo; i < hi; ++i)
    for (int j = 0; j < mesh.n_theta; ++j) {
      const std::size_t k = static_cast<std::size_t>(mesh.idx(i, j));
      const NodeGeometry& nd = mid.fields.at(i, j);
      const Vec3 dGdt_p = (next.gauss_plus[k] - prev.gauss_plus[k]) / (2.0 * dt_a);
      const Vec3 dGdt_m = (next.gauss_minus[k] - prev.gauss_minus[k]) / (2.0 * dt_a);
      out.sup_dGdt = std::max({out.sup_dGdt, dGdt_p.cwiseAbs().maxCoeff(),
                               dGdt_m.cwiseAbs().maxCoeff()});

      const GaussDerivs d =
          gauss_partials(mesh, mid.gauss_plus, mid.gauss_minus, i, j);
      const Vec2 dphi = field_grad(mesh, mid.fields, &node_phi, i, j);

      // sigma-gradient of the speed and its Weingarten image
      Vec2 v = Vec2::Zero(), wv = Vec2::Zero();
      for (int l = 0; l < 2; ++l)
        for (int kk = 0; kk < 2; ++kk) v[l] += nd.sigma_inv(l, kk) * dphi[kk];
      const Mat2 W = nd.g_inv * nd.h;
      for (int m = 0; m < 2; ++m)
        for (int l = 0; l < 2; ++l) wv[m] += W(m, l) * v[l];

      const Vec3 rhs_p =
          kJPlusSign * hyperbolic_J(mid.gauss_plus[k],
                                    v[0] * d.d_plus[0] + v[1] * d.d_plus[1]) +
          wv[0] * d.d_plus[0] + wv[1] * d.d_plus[1];
      const Vec3 rhs_m =
          kJMinusSign * hyperbolic_J(mid.gauss_minus[k],
                                     v[0] * d.d_minus[0] + v[1] * d.d_minus[1]) +
          wv[0] * d.d_minus[0] + wv[1] * d.d_minus[1];
      out.evolution = std::max({out.evolution,
                                (dGdt_p - rhs_p).cwiseAbs().maxCoeff(),
                                (dGdt_m - rhs_m).cwiseAbs().maxCoeff()});

      // scalar-product relations
      for (int kk = 0; kk < 2; ++kk) {
        const double lhs_t = dot21(dGdt_p, kk == 0 ? d.d_plus[0] : d.d_plus[1]) +
                             dot21(dGdt_m, kk == 0 ? d.d_minus[0] : d.d_minus[1]);
        double rhs_t = 0.0;
        for (int m = 0; m < 2; ++m)
          for (int l = 0; l < 2; ++l)
            rhs_t += nd.g_inv(m, l) * nd.h(l, kk) * dphi[m];
        out.relation_tangent = std::max(out.relation_tangent, std::fabs(lhs_t - rhs_t));

        const Vec3 JDk_p = kJPlusSign * hyperbolic_J(mid.gauss_plus[k],
                                                     kk == 0 ? d.d_plus[0] : d.d_plus[1]);
        const Vec3 JDk_m = kJMinusSign * hyperbolic_J(mid.gauss_minus[k],
                                                      kk == 0 ? d.d_minus[0] : d.d_minus[1]);
        const double lhs_n = dot21(dGdt_p, JDk_p) + dot21(dGdt_m, JDk_m);
        out.relation_normal =
            std::max(out.relation_normal, std::fabs(lhs_n - dphi[kk]));
      }
    }
  return out;
}

}  // namespace adsflow
