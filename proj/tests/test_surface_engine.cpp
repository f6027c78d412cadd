#include <doctest.h>

#include "adsflow/structure_residual.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace adsflow;

namespace {

SeedSpec grid(SeedSpec s, double lo, double hi, int nc, int nt) {
  s.chi_min = lo;
  s.chi_max = hi;
  s.n_chi = nc;
  s.n_theta = nt;
  return s;
}

double measured_order(double coarse, double fine) {
  return std::log2(coarse / fine);
}

}  // namespace

TEST_CASE("seed points and quadric constraint") {
  const Vec4 F = seed_point(SeedSpec::umbilic(0.6).base, 1.0, 0.0, 0.0);
  CHECK(F.isApprox(Vec4(0, 0, 0.8, 0.6), 1e-15));
  CHECK(dot22(F, F) == doctest::Approx(-1.0).epsilon(1e-15));

  SplitMix64 rng = case_rng(401, 0);
  for (int c = 0; c < 200; ++c) {
    const double kappa = rng.uniform(0.5, 2.0);
    const double chi = rng.uniform(-2.0, 2.0), th = rng.uniform(0.0, 6.28);
    for (const auto& base :
         {SeedSpec::geodesic().base, SeedSpec::umbilic(rng.uniform(-0.9, 0.9)).base,
          SeedSpec::graph({0.1, 1.0, 4.0}).base}) {
      const Vec4 p = seed_point(base, kappa, chi, th);
      CHECK(std::fabs(dot22(p, p) + 1.0 / kappa) <= 1e-12);
      // analytic normals are unit, orthogonal, future directed
      const Vec4 nu = seed_normal(base, kappa, chi, th);
      CHECK(std::fabs(dot22(nu, nu) + 1.0) <= 1e-12);
      CHECK(std::fabs(dot22(nu, p)) <= 1e-12);
      CHECK(is_future_directed(nu, p));
    }
  }
}

TEST_CASE("umbilic slice requires |s| < 1") {
  CHECK_THROWS_AS(seed_surface(grid(SeedSpec::umbilic(1.2), 0.5, 1.5, 16, 16), 1.0),
                  ContractViolation);
}

TEST_CASE("resolution must be a power of two") {
  CHECK_THROWS_AS(seed_surface(grid(SeedSpec::geodesic(), 0.5, 1.5, 17, 16), 1.0),
                  ContractViolation);
}

TEST_CASE("steep graph profile fails the spacelike check with a node index") {
  // cosh^2(chi) u'^2 reaches 1 inside the window for this profile
  try {
    seed_surface(grid(SeedSpec::graph({0.9, 1.5, 6.0}), 0.5, 2.5, 64, 4), 1.0);
    FAIL("expected MeshInvalid");
  } catch (const MeshInvalid& e) {
    CHECK(e.i >= 0);
  }
}

TEST_CASE("geodesic slice assembles to an exactly vanishing shape tensor") {
  for (const double kappa : {0.5, 1.0, 2.0}) {
    const SurfaceMesh mesh =
        seed_surface(grid(SeedSpec::geodesic(), 0.5, 1.5, 64, 16), kappa);
    const GeometryField f = assemble_node_geometry(mesh);
    double worst_h = 0.0, worst_phi = 0.0, worst_g = 0.0;
    for (int i = 0; i < mesh.n_chi; ++i)
      for (int j = 0; j < mesh.n_theta; ++j) {
        const NodeGeometry& nd = f.at(i, j);
        worst_h = std::max(worst_h, nd.h.cwiseAbs().maxCoeff());
        worst_phi = std::max({worst_phi, std::fabs(nd.phi), std::fabs(nd.H),
                              std::fabs(nd.K)});
        // analytic pullback metric diag(1, sinh^2 chi) / kappa
        Mat2 ref = Mat2::Zero();
        ref(0, 0) = 1.0 / kappa;
        ref(1, 1) = std::sinh(mesh.chi(i)) * std::sinh(mesh.chi(i)) / kappa;
        worst_g = std::max(worst_g, (nd.g - ref).cwiseAbs().maxCoeff());
      }
    CHECK(worst_h <= 1e-12);  // flat in the e4 direction, exactly
    CHECK(worst_phi <= 1e-12);
    CHECK(worst_g <= 0.25 / kappa);  // dtheta = 2 pi / 16 dominates here
  }
}

TEST_CASE("geodesic metric error refines at second order") {
  double err[2];
  int k = 0;
  for (const int N : {32, 64}) {
    const SurfaceMesh mesh =
        seed_surface(grid(SeedSpec::geodesic(), 0.5, 1.5, N, N), 1.0);
    const GeometryField f = assemble_node_geometry(mesh);
    double worst = 0.0;
    for (int i = 0; i < mesh.n_chi; ++i) {
      const double sh = std::sinh(mesh.chi(i));
      for (int j = 0; j < mesh.n_theta; ++j) {
        Mat2 ref;
        ref << 1.0, 0.0, 0.0, sh * sh;
        worst = std::max(worst, (f.at(i, j).g - ref).cwiseAbs().maxCoeff());
      }
    }
    err[k++] = worst;
  }
  CHECK(measured_order(err[0], err[1]) >= 1.8);
  CHECK(err[1] <= 0.03);
}

TEST_CASE("umbilic slices are umbilic with a constant principal curvature") {
  SplitMix64 rng = case_rng(402, 1);
  for (int rep = 0; rep < 3; ++rep) {
    const double s = rng.uniform(-0.7, 0.7);
    const double kappa = rng.uniform(0.5, 2.0);
    double lam[2], spread[2];
    int k = 0;
    for (const int N : {32, 64}) {
      const SurfaceMesh mesh =
          seed_surface(grid(SeedSpec::umbilic(s), 0.5, 1.5, N, N), kappa);
      const GeometryField f = assemble_node_geometry(mesh);
      double lo = 1e300, hi = -1e300, umb = 0.0;
      for (int i = 0; i < mesh.n_chi; ++i)
        for (int j = 0; j < mesh.n_theta; ++j) {
          const NodeGeometry& nd = f.at(i, j);
          lo = std::min(lo, nd.lambda[0]);
          hi = std::max(hi, nd.lambda[1]);
          umb = std::max(umb, std::fabs(nd.lambda[1] - nd.lambda[0]));
        }
      lam[k] = 0.5 * (lo + hi);
      spread[k] = std::max(hi - lo, umb);
      ++k;
    }
    // constancy and umbilicity tighten at second order
    CHECK(spread[1] <= 0.3 * spread[0] + 1e-12);
    // Richardson value agrees across resolutions and with the closed form
    const double extrap = lam[1] + (lam[1] - lam[0]) / 3.0;
    const double closed = -std::sqrt(kappa) * s / std::sqrt(1.0 - s * s);
    CHECK(extrap == doctest::Approx(closed).epsilon(1e-5));
  }
}

TEST_CASE("invariant consistency H = tr W, K = det W vs eigenvalues") {
  const SurfaceMesh mesh = seed_surface(
      grid(SeedSpec::perturbation_of(SeedSpec::geodesic().base, 0.05, 2, 7), 0.5,
           1.5, 32, 32),
      1.0);
  const GeometryField f = assemble_node_geometry(mesh);
  double worst = 0.0;
  for (int i = 0; i < mesh.n_chi; ++i)
    for (int j = 0; j < mesh.n_theta; ++j) {
      const NodeGeometry& nd = f.at(i, j);
      worst = std::max(worst, std::fabs(nd.lambda[0] + nd.lambda[1] - nd.H));
      worst = std::max(worst, std::fabs(nd.lambda[0] * nd.lambda[1] - nd.K));
    }
  CHECK(worst <= 1e-12);
}

TEST_CASE("structural identity residuals vanish on the geodesic slice") {
  const SurfaceMesh mesh =
      seed_surface(grid(SeedSpec::geodesic(), 0.5, 1.5, 32, 32), 1.0);
  const GeometryField f = assemble_node_geometry(mesh);
  CHECK(structure_residual(mesh, f, StructureKind::Codazzi).sup <= 1e-12);
}

TEST_CASE("mesh too coarse for structure residuals") {
  const SurfaceMesh mesh =
      seed_surface(grid(SeedSpec::geodesic(), 0.5, 1.5, 8, 8), 1.0);
  const GeometryField f = assemble_node_geometry(mesh);
  CHECK_THROWS_AS(structure_residual(mesh, f, StructureKind::Codazzi),
                  ContractViolation);
}

TEST_CASE("structural identities converge under refinement") {
  double codazzi[3], gauss[3], simons[3];
  int k = 0;
  for (const int N : {16, 32, 64}) {
    const SurfaceMesh mesh = seed_surface(
        grid(SeedSpec::perturbation_of(SeedSpec::geodesic().base, 0.05, 2, 3), 0.5,
             1.5, N, N),
        1.0);
    const GeometryField f = assemble_node_geometry(mesh);
    codazzi[k] = structure_residual(mesh, f, StructureKind::Codazzi).sup;
    gauss[k] = structure_residual(mesh, f, StructureKind::Gauss).sup;
    simons[k] = structure_residual(mesh, f, StructureKind::Simons).sup;
    ++k;
  }
  CHECK(measured_order(codazzi[1], codazzi[2]) >= 1.8);
  CHECK(measured_order(gauss[1], gauss[2]) >= 1.8);
  CHECK(measured_order(simons[1], simons[2]) >= 1.5);
}

TEST_CASE("intrinsic scalar curvature matches 2(-kappa - K)") {
  double err[2];
  int k = 0;
  const double kappa = 1.3;
  for (const int N : {32, 64}) {
    const SurfaceMesh mesh = seed_surface(
        grid(SeedSpec::perturbation_of(SeedSpec::umbilic(0.3).base, 0.04, 2, 5), 0.5,
             1.5, N, N),
        kappa);
    const GeometryField f = assemble_node_geometry(mesh);
    const auto [lo, hi] = interior_window(mesh, 0.12);
    double worst = 0.0;
    for (int i = lo; i < hi; ++i)
      for (int j = 0; j < mesh.n_theta; ++j) {
        const double sc = scalar_curvature(mesh, f, i, j);
        worst = std::max(worst, std::fabs(sc - 2.0 * (-kappa - f.at(i, j).K)));
      }
    err[k++] = worst;
  }
  CHECK(measured_order(err[0], err[1]) >= 1.8);
}

TEST_CASE("index rotation in theta permutes all derived fields bitwise") {
  const SeedSpec spec =
      grid(SeedSpec::perturbation_of(SeedSpec::umbilic(0.4).base, 0.03, 2, 9), 0.5,
           1.5, 16, 16);
  const SurfaceMesh mesh = seed_surface(spec, 1.0);
  SurfaceMesh rotated = mesh;
  for (int i = 0; i < mesh.n_chi; ++i)
    for (int j = 0; j < mesh.n_theta; ++j)
      rotated.at(i, j) = mesh.at(i, (j + 1) % mesh.n_theta);

  const GeometryField f = assemble_node_geometry(mesh);
  const GeometryField fr = assemble_node_geometry(rotated);
  for (int i = 0; i < mesh.n_chi; ++i)
    for (int j = 0; j < mesh.n_theta; ++j) {
      const NodeGeometry& a = fr.at(i, j);
      const NodeGeometry& b = f.at(i, (j + 1) % mesh.n_theta);
      CHECK(a.phi == b.phi);
      CHECK(a.H == b.H);
      CHECK(a.K == b.K);
      CHECK(a.h == b.h);
      CHECK(a.g == b.g);
    }
}

TEST_CASE("chi-periodic closure wraps indices") {
  SurfaceMesh m;
  m.n_chi = 4;
  m.n_theta = 4;
  m.dchi = 0.1;
  m.dtheta = 1.5707963267948966;
  m.chi_bc = ChiBoundary::Periodic;
  m.node.resize(16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m.at(i, j) = Vec4(i, j, 1, 0);
  const auto F = [&m](int i, int j) { return m.at(i, j); };
  CHECK(stencil::sample(m, F, -1, 0) == m.at(3, 0));
  CHECK(stencil::sample(m, F, 4, 2) == m.at(0, 2));
  CHECK(stencil::sample(m, F, 1, -1) == m.at(1, 3));
}
